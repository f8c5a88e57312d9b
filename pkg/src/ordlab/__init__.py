"""Walks on countable ordinals, the matrices they generate, and checks on the induced group topologies."""

from .ordinals import OMEGA, ONE, ZERO, Ordinal, add, fmt, fund_seq, nat, parse, w_pow
from .walks import rho, rho1, rho2, rho_bar, sublevel_rho, sublevel_rho1, walk_trace

__version__ = "0.1.0"

__all__ = [
    "Ordinal", "ZERO", "ONE", "OMEGA", "nat", "parse", "fmt", "add", "fund_seq", "w_pow",
    "rho", "rho1", "rho2", "rho_bar", "sublevel_rho", "sublevel_rho1", "walk_trace",
]
