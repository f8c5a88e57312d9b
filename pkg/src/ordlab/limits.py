"""Resource guards. Every recursion or scan in the library consults these."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass
class Limits:
    nat_guard: int = 2**32
    scan_steps: int = 10**6
    walk_depth: int = 10**5
    memo_entries: int = 10**7
    sublevel_size: int = 10**6
    residue_classes: int = 10**5
    tower_length: int = 10**3


LIMITS = Limits()
