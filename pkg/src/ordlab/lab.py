"""Config-driven suite runner.

A suite is a list of check ids.  Each check gets its own seed (derived from
the run seed and its id), so sharding across workers or running a single
check with ``--only`` reproduces the same records.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
import os
import random
import threading
import time
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

import yaml

from .errors import ConfigError, OrdlabError
from .groups import Basic, GroupElement, InclusionViolation, Subbase, restriction_cover, verify_group_axioms
from .matrix import FlippedProvider, MatrixProvider, rho1_provider, rho_provider, verify_axioms, verify_directed
from .omegasets import OMEGA_SET, EVENS, fin, residues, union
from .oracles import brute_sublevel
from .ordinals import Ordinal, OrdLike, add, as_ordinal, fmt, fund_seq, nat, parse
from .report import FAIL, PASS, SKIPPED, STATUSES, UNDECIDED, AxiomReport, AxiomResult, Tally, plain
from .towers import (
    Fails, GapMatrix, PreGap, Splits, build_tower, load_manifest, mod4_pregap, rho_TO,
    splitter_check, validate_pregap, validate_tower, Tower, TowerMatrix, hausdorff_check,
)
from .trees import (
    bundled_fragment, check_witness_inclusion, gen_rho2_node, linf_universe, load_tree,
    node, two_parent_mutant, verify_tree_matrix, TreeMatrix,
)
from .walks import WalkContext, rho, rho1, sublevel_rho

SCHEMA_VERSION = 1
EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


# -- sampling -----------------------------------------------------------------


def _below(rng: random.Random, bound: Ordinal, coefficient_bound: int) -> Ordinal:
    """A pseudo-random ordinal < bound; limits are cut down through their fundamental sequence."""
    while True:
        if bound.is_finite:
            return nat(rng.randrange(int(bound)))
        if bound.is_limit:
            bound = fund_seq(bound, rng.randint(1, coefficient_bound))
            continue
        p = bound.pred()
        if p == nat(0) or rng.random() < 0.5:
            return p
        bound = p


def random_ordinal(rng: random.Random, exponent_bound: OrdLike, coefficient_bound: int, max_terms: int = 3) -> Ordinal:
    """A nonzero CNF term sum below w^exponent_bound with coefficients in [1, coefficient_bound]."""
    e_bound = as_ordinal(exponent_bound)
    k = rng.randint(1, max_terms)
    exps = sorted({_below(rng, e_bound, coefficient_bound) for _ in range(k)}, reverse=True)
    return Ordinal(tuple((e, rng.randint(1, coefficient_bound)) for e in exps))


def sample_ordinals(seed: int, exponent_bound: OrdLike, coefficient_bound: int, count: int) -> list[Ordinal]:
    """Up to ``count`` distinct ordinals below w^exponent_bound, sorted.

    Drawing stops early (with fewer elements) once 20*count + 100 draws have
    been spent, which only happens when the bounds admit fewer than ``count``
    ordinals.
    """
    if as_ordinal(exponent_bound) == nat(0) or coefficient_bound < 1:
        raise ValueError("bounds must be positive")
    rng = random.Random(seed)
    out: set[Ordinal] = set()
    draws = 0
    while len(out) < count and draws < 20 * count + 100:
        out.add(random_ordinal(rng, exponent_bound, coefficient_bound))
        draws += 1
    return sorted(out)


def sample_triples(seed: int, exponent_bound: OrdLike, coefficient_bound: int, count: int) -> list[tuple[Ordinal, Ordinal, Ordinal]]:
    """``count`` independent draws of three distinct ordinals, each sorted ascending."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        a, b, c = sorted(random_ordinal(rng, exponent_bound, coefficient_bound) for _ in range(3))
        if a < b < c:
            out.append((a, b, c))
    return out


# -- configuration --------------------------------------------------------------


DEFAULT_SAMPLES = {
    "triples": 10_000,
    "group_elements": 120,
    "group_pairs": 2000,
    "restriction_triples": 50,
    "linf_nodes": 200,
    "directed": 200,
    "tower_length": 40,
    "pregap_length": 6,
}


@dataclass
class SuiteConfig:
    suite: str = "full"
    seed: int = 0
    checks: list[str] | None = None
    universe: dict = field(default_factory=lambda: {"explicit": None})
    xi_range: tuple[int, int] = (0, 8)
    samples: dict = field(default_factory=dict)
    provider: Any = "rho"
    tree: str | None = None
    tower: str | None = None
    gap: str | None = None
    output: dict = field(default_factory=dict)
    source: str = ""

    def sample(self, key: str) -> int:
        return int(self.samples.get(key, DEFAULT_SAMPLES[key]))

    def echo(self) -> dict:
        out = {
            "suite": self.suite,
            "seed": self.seed,
            "checks": self.checks,
            "universe": plain(self.universe),
            "xi_range": list(self.xi_range),
            "samples": {k: self.sample(k) for k in sorted(DEFAULT_SAMPLES)},
            "provider": self.provider,
            "tree": self.tree,
            "tower": self.tower,
            "gap": self.gap,
        }
        return out


_KEYS = {"suite", "seed", "checks", "universe", "xi_range", "samples", "provider", "tree", "tower", "gap", "output"}


def config_from_dict(data: dict, base_dir: Path | None = None, source: str = "") -> SuiteConfig:
    if not isinstance(data, dict):
        raise ConfigError("config must be a mapping")
    unknown = set(data) - _KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    cfg = SuiteConfig(source=source)
    cfg.suite = str(data.get("suite", cfg.suite))
    try:
        cfg.seed = int(data.get("seed", 0))
    except (TypeError, ValueError):
        raise ConfigError(f"seed must be an integer, got {data.get('seed')!r}") from None
    env_seed = os.environ.get("LAB_SEED")
    if env_seed is not None:
        try:
            cfg.seed = int(env_seed)
        except ValueError:
            raise ConfigError(f"LAB_SEED must be an integer, got {env_seed!r}") from None
    if "checks" in data and data["checks"] is not None:
        cfg.checks = [str(c) for c in data["checks"]]
    if "universe" in data:
        cfg.universe = data["universe"]
        if not isinstance(cfg.universe, dict) or not ({"explicit", "sampler"} & set(cfg.universe)):
            raise ConfigError("universe needs an 'explicit' list or a 'sampler' block")
    if "xi_range" in data:
        xr = data["xi_range"]
        if not (isinstance(xr, (list, tuple)) and len(xr) == 2 and all(isinstance(v, int) and v >= 0 for v in xr) and xr[0] <= xr[1]):
            raise ConfigError(f"xi_range must be [lo, hi] with 0 <= lo <= hi, got {xr!r}")
        cfg.xi_range = (xr[0], xr[1])
    cfg.samples = dict(data.get("samples") or {})
    bad = set(cfg.samples) - set(DEFAULT_SAMPLES)
    if bad:
        raise ConfigError(f"unknown sample keys: {sorted(bad)}")
    cfg.provider = data.get("provider", "rho")
    cfg.output = dict(data.get("output") or {})
    for key in ("tree", "tower", "gap"):
        ref = data.get(key)
        if ref is None or str(ref).startswith("builtin:"):
            setattr(cfg, key, ref)
            continue
        path = Path(ref)
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        if not path.is_file():
            raise ConfigError(f"{key} file not found: {ref}")
        setattr(cfg, key, str(path))
    if cfg.suite not in SUITES and cfg.suite != "custom":
        raise ConfigError(f"unknown suite {cfg.suite!r}; expected one of {sorted(SUITES)} or 'custom'")
    if cfg.suite == "custom" and not cfg.checks:
        raise ConfigError("a custom suite must list its checks")
    for cid in cfg.checks or []:
        if cid not in CHECKS:
            raise ConfigError(f"unknown check id {cid!r}")
    _validate_provider(cfg.provider)
    _validate_references(cfg)
    return cfg


def _validate_provider(desc):
    if desc in ("rho", "rho1"):
        return
    if isinstance(desc, dict) and set(desc) <= {"base", "flip"} and "flip" in desc:
        flip = desc["flip"]
        if not (isinstance(flip, dict) and set(flip) == {"gamma", "xi", "alpha"}):
            raise ConfigError("provider flip needs gamma, xi and alpha")
        try:
            parse(str(flip["gamma"]))
            parse(str(flip["alpha"]))
            int(flip["xi"])
        except (OrdlabError, ValueError) as exc:
            raise ConfigError(f"bad provider flip: {exc}") from None
        _validate_provider(desc.get("base", "rho"))
        return
    raise ConfigError(f"unknown provider {desc!r}")


def _validate_references(cfg: SuiteConfig):
    """Load every referenced structure once so broken files abort before any check."""
    try:
        if cfg.tree and not cfg.tree.startswith("builtin:"):
            load_tree(cfg.tree).validate()
        for key, kind in (("tower", Tower), ("gap", PreGap)):
            ref = getattr(cfg, key)
            if ref and not ref.startswith("builtin:"):
                fam = load_manifest(ref)
                if not isinstance(fam, kind):
                    raise ConfigError(f"{key} file {ref} does not describe a {kind.__name__}")
        universe(cfg)
    except ConfigError:
        raise
    except (OrdlabError, ValueError, OSError) as exc:
        raise ConfigError(f"invalid reference: {exc}") from None


def load_config(source: str) -> SuiteConfig:
    """A YAML file path, or ``builtin:<suite>``."""
    if source.startswith("builtin:"):
        name = source.split(":", 1)[1]
        if name not in SUITES:
            raise ConfigError(f"unknown builtin suite {name!r}")
        return config_from_dict({"suite": name}, source=source)
    path = Path(source)
    if not path.is_file():
        raise ConfigError(f"config file not found: {source}")
    try:
        data = yaml.safe_load(path.read_text())
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse {source}: {exc}") from None
    return config_from_dict(data or {}, path.parent, source)


def universe(cfg: SuiteConfig) -> list[Ordinal]:
    u = cfg.universe
    if u.get("explicit") is not None:
        try:
            return sorted({as_ordinal(parse(str(x)) if not isinstance(x, int) else x) for x in u["explicit"]})
        except OrdlabError as exc:
            raise ConfigError(f"bad universe entry: {exc}") from None
    if "sampler" in u:
        s = u["sampler"]
        try:
            return sample_ordinals(int(s.get("seed", cfg.seed)), parse(str(s["exponent_bound"])), int(s["coefficient_bound"]), int(s["count"]))
        except (KeyError, ValueError, OrdlabError) as exc:
            raise ConfigError(f"bad sampler block: {exc}") from None
    return DEFAULT_UNIVERSE


DEFAULT_UNIVERSE = sorted({nat(i) for i in range(30)} | {parse(s) for s in ("w", "w+1", "w*2", "w^2", "w^w")})


# -- run context ----------------------------------------------------------------


class RunContext:
    """Shared, lazily built structures for one run."""

    def __init__(self, cfg: SuiteConfig):
        self.cfg = cfg
        self.walks = WalkContext()
        self.universe = universe(cfg)
        self.xis = range(cfg.xi_range[0], cfg.xi_range[1] + 1)
        self._cache: dict[str, Any] = {}
        self._lock = threading.RLock()

    def _once(self, key, build):
        with self._lock:
            if key not in self._cache:
                self._cache[key] = build()
            return self._cache[key]

    def provider(self) -> MatrixProvider:
        return self._once("provider", lambda: make_provider(self.cfg.provider, self.walks))

    def tree(self):
        ref = self.cfg.tree
        return self._once("tree", lambda: bundled_fragment() if ref in (None, "builtin:fragment") else load_tree(ref))

    def tower(self) -> Tower:
        def build():
            if self.cfg.tower and not self.cfg.tower.startswith("builtin:"):
                return load_manifest(self.cfg.tower)
            n = self.cfg.sample("tower_length")
            finite = max(1, n * 3 // 4)
            idx = [nat(i) for i in range(finite)] + [add(parse("w"), nat(i)) for i in range(n - finite)]
            return build_tower(idx, EVENS, seed=self.cfg.seed)

        return self._once("tower", build)

    def pregap(self) -> PreGap:
        def build():
            if self.cfg.gap and not self.cfg.gap.startswith("builtin:"):
                return load_manifest(self.cfg.gap)
            return build_pregap(self.cfg.sample("pregap_length"))

        return self._once("pregap", build)


def make_provider(desc, ctx: WalkContext) -> MatrixProvider:
    if desc == "rho":
        return rho_provider(ctx)
    if desc == "rho1":
        return rho1_provider(ctx)
    flip = desc["flip"]
    base = make_provider(desc.get("base", "rho"), ctx)
    return FlippedProvider(base, parse(str(flip["gamma"])), int(flip["xi"]), parse(str(flip["alpha"])))


def build_pregap(n: int) -> PreGap:
    """Staircase pre-gap: a_k = {0 mod 4} ∪ {2 mod 4, >= 8k}, b_k = {3 mod 4} ∪ {2 mod 4, < 8k}.

    a_alpha ∩ b_beta is the part of the 2 mod 4 class in [8 alpha, 8 beta).
    """
    twos = residues(4, 2)
    pairs = {}
    for k in range(n):
        low = fin(*range(2, 8 * k, 4))
        high = _from(twos, 8 * k)
        pairs[k] = (union(residues(4, 0), high), union(residues(4, 3), low))
    return PreGap(list(range(n)), pairs)


def _from(e, m: int):
    from .omegasets import Diff

    return Diff(e, fin(*range(m))) if m else e


# -- checks -----------------------------------------------------------------------


@dataclass(frozen=True)
class Check:
    id: str
    anchor: str
    run: Callable[[RunContext, int], AxiomResult]


CHECKS: dict[str, Check] = {}


def check(cid: str, anchor: str):
    def deco(fn):
        CHECKS[cid] = Check(cid, anchor, fn)
        return fn

    return deco


def check_seed(seed: int, cid: str) -> int:
    return zlib.crc32(f"{seed}:{cid}".encode())


def _triples(rc: RunContext, seed: int):
    # the walk checks share one sample, drawn from the run seed
    return rc._once("triples", lambda: sample_triples(rc.cfg.seed, parse("w"), 5, rc.cfg.sample("triples")))


@check("walks.S1", "S1")
def _s1(rc, seed):
    t = Tally()
    for a, b, c in _triples(rc, seed):
        lhs, r1, r2 = rho(a, c, rc.walks), rho(a, b, rc.walks), rho(b, c, rc.walks)
        t.check(lhs <= max(r1, r2), alpha=a, beta=b, gamma=c, rho_ac=lhs, rho_ab=r1, rho_bc=r2)
    return t.result()


@check("walks.S2", "S2")
def _s2(rc, seed):
    t = Tally()
    for a, b, c in _triples(rc, seed):
        lhs, r1, r2 = rho(a, b, rc.walks), rho(a, c, rc.walks), rho(b, c, rc.walks)
        t.check(lhs <= max(r1, r2), alpha=a, beta=b, gamma=c, rho_ab=lhs, rho_ac=r1, rho_bc=r2)
    return t.result()


@check("walks.rho-dominates-rho1", "rho>=rho1")
def _rho_rho1(rc, seed):
    t = Tally()
    seen = set()
    for a, b, c in _triples(rc, seed):
        for x, y in ((a, b), (b, c), (a, c)):
            if (x, y) in seen:
                continue
            seen.add((x, y))
            r, r1 = rho(x, y, rc.walks), rho1(x, y, rc.walks)
            t.check(r >= r1, alpha=x, beta=y, rho=r, rho1=r1)
    return t.result()


SUBLEVEL_FINITE_PART = 12
SUBLEVEL_MAX_C = 5


@check("walks.sublevel-oracle", "condition-H")
def _sublevel(rc, seed):
    t = Tally()
    for i in range(3):
        base = Ordinal(((nat(1), i),)) if i else nat(0)
        for n in range(SUBLEVEL_FINITE_PART + 1):
            alpha = add(base, nat(n))
            for c in range(SUBLEVEL_MAX_C + 1):
                fast = sublevel_rho(alpha, c, rc.walks)
                slow = brute_sublevel(alpha, c, window=SUBLEVEL_MAX_C + 8)
                t.check(fast == slow, alpha=alpha, c=c, only_fast=fast - slow, only_oracle=slow - fast)
    return t.result()


def _matrix_report(rc: RunContext) -> AxiomReport:
    return rc._once("matrix", lambda: verify_axioms(rc.provider(), rc.universe, rc.xis, seed=rc.cfg.seed))


def _matrix_axiom(name):
    def run(rc, seed):
        return _matrix_report(rc)[name]

    return run


for _g in ("G1", "G2", "G3", "G4"):
    check(f"matrix.{_g}", _g)(_matrix_axiom(_g))


@check("matrix.directed", "matrix-directed")
def _directed(rc, seed):
    return verify_directed(rc.provider(), rc.universe, rc.xis, seed=seed, samples=rc.cfg.sample("directed"))


@check("matrix.mutation-detected", "matrix-mutation")
def _mutation(rc, seed):
    """Flip one membership bit of the provider; the axiom checker must report a fail."""
    base = rc.provider()
    if isinstance(base, FlippedProvider):
        return AxiomResult(SKIPPED, note="provider is already mutated")
    rng = random.Random(seed)
    targets = [(g, x, a) for a in rc.universe if not a.is_finite or int(a) > 2 for x in rc.xis for g in rc.universe if g < a and base.member(g, x, a)]
    if not targets:
        return AxiomResult(SKIPPED, note="no member to flip")
    # flipping a member out of the largest sublevel at the top breaks G2 or G3
    g, x, a = max(targets, key=lambda t: (t[1], t[2], rng.random()))
    flipped = FlippedProvider(base, g, x, a)
    rep = verify_axioms(flipped, rc.universe, rc.xis, seed=seed)
    failed = sorted(rep.failures())
    t = Tally()
    t.check(bool(failed), flip={"gamma": g, "xi": x, "alpha": a}, report=rep.to_plain()["axioms"])
    return t.result(f"flip gamma={fmt(g)} xi={x} alpha={fmt(a)} caught by {','.join(failed)}" if failed else "")


def _group_elements(rc: RunContext, seed: int) -> list[GroupElement]:
    rng = random.Random(seed)
    pool = rc.universe
    out = {GroupElement()}
    possible = 1 + sum(math.comb(len(pool), k) for k in range(1, 4))
    target = min(rc.cfg.sample("group_elements"), possible)
    while len(out) < target:
        k = rng.randint(1, 3)
        out.add(GroupElement.of(rng.sample(pool, min(k, len(pool)))))
    return sorted(out)


def _group_report(rc: RunContext) -> AxiomReport:
    def build():
        seed = check_seed(rc.cfg.seed, "group")
        p = rc.provider()
        alphas = [a for a in rc.universe if p.in_index(a)]
        rng = random.Random(seed)
        alphas = sorted(rng.sample(alphas, min(6, len(alphas))) + [alphas[-1]]) if alphas else []
        xi_vals = sorted({rc.xis[0], rc.xis[len(rc.xis) // 2], rc.xis[-1]})
        base = sorted({Basic(x, a, p) for a in alphas for x in xi_vals}, key=lambda U: (U.alpha, U.xi))
        return verify_group_axioms(base, _group_elements(rc, seed), seed=seed, pair_samples=rc.cfg.sample("group_pairs"), probe_universe=rc.universe)

    return rc._once("group", build)


def _group_condition(name):
    def run(rc, seed):
        return _group_report(rc)[name]

    return run


for _c in ("1", "2", "3", "4", "5", "6"):
    check(f"group.{_c}", f"nbhd-base-{_c}")(_group_condition(_c))
check("group.character-fragment", "character-fragment")(_group_condition("character-fragment"))

EXACT_ENUMERATION_BELOW = parse("w^3")


@check("group.restriction-cover", "local-base-at-identity")
def _restriction(rc, seed):
    rng = random.Random(seed)
    p = rc.provider()
    idx = [a for a in rc.universe if p.in_index(a)]
    t = Tally()
    for _ in range(rc.cfg.sample("restriction_triples")):
        delta, alpha = rng.choice(idx), rng.choice(idx)
        xi = rng.choice(list(rc.xis))
        probes = None if alpha < EXACT_ENUMERATION_BELOW else rc.universe
        try:
            restriction_cover(delta, xi, alpha, p, probes)
            t.check(True)
        except InclusionViolation as exc:
            t.check(False, delta=delta, xi=xi, alpha=alpha, violation=exc.witness)
        except OrdlabError as exc:
            t.undecided = f"delta={fmt(delta)} xi={xi} alpha={fmt(alpha)}: {exc}"
    return t.result()


def _tree_report(rc: RunContext) -> AxiomReport:
    def build():
        tr = rc.tree()
        return verify_tree_matrix(tr, tr.levels(), 3)

    return rc._once("tree", build)


def _tree_axiom(name):
    def run(rc, seed):
        return _tree_report(rc)[name]

    return run


for _g in ("tree-order", "G1", "G2", "G3", "G4"):
    check(f"tree.{_g}", f"tree-matrix-{_g}")(_tree_axiom(_g))


@check("tree.mutant-detected", "tree-uniqueness")
def _tree_mutant(rc, seed):
    m = two_parent_mutant()
    rep = verify_tree_matrix(m, m.levels(), 3)
    g4 = rep["G4"]
    t = Tally()
    ok = g4.status == FAIL and (g4.counterexample or {}).get("reason") == "predecessor not unique"
    t.check(ok, g4=g4.to_plain())
    return t.result()


@check("tree.gen-rho2", "rho2-nodes")
def _gen_rho2(rc, seed):
    t = Tally()
    for beta, alpha, want in ((3, 3, node(3, 2, 1)), (parse("w"), 3, node(1, 1, 1))):
        got = gen_rho2_node(beta, alpha, rc.walks)
        t.check(got.values == want.values, beta=as_ordinal(beta), alpha=alpha, got=list(got.values), want=list(want.values))
    return t.result()


LINF_BETAS = ("w", "w*2", "w*3", "w^2", "w^2*2+w*3", "w^3+w")


@check("tree.linf-witness", "linf-witness")
def _linf(rc, seed):
    betas = [add(parse(p), nat(b)) for p in LINF_BETAS for b in range(40)]
    uni = linf_universe(betas, 7, rc.cfg.sample("linf_nodes"), rc.walks)
    return check_witness_inclusion(uni, range(4), range(4))


def _tower_report(rc: RunContext) -> AxiomReport:
    return rc._once("tower-report", lambda: validate_tower(rc.tower()))


def _tower_axiom(name):
    def run(rc, seed):
        return _tower_report(rc)[name]

    return run


for _k in ("almost-increasing", "strictly-increasing", "certificates"):
    check(f"tower.{_k}", f"tower-{_k}")(_tower_axiom(_k))


@check("tower.rho-TO-transitive", "rho-TO-transitive")
def _rho_to(rc, seed):
    tw = rc.tower()
    val = {(a, b): rho_TO(tw, a, b) for a, b in itertools.combinations_with_replacement(tw.indices, 2)}
    t = Tally()
    for a, b, c in itertools.combinations(tw.indices, 3):
        t.check(val[a, c] <= max(val[a, b], val[b, c]), alpha=a, beta=b, gamma=c, ac=val[a, c], ab=val[a, b], bc=val[b, c])
    return t.result()


@check("tower.matrix-agrees", "tower-matrix")
def _tower_matrix(rc, seed):
    tw = rc.tower()
    p = TowerMatrix(tw)
    t = Tally()
    for beta in tw.indices:
        for n in rc.xis:
            direct = frozenset(a for a in tw.indices if p.member(a, n, beta))
            t.check(direct == hausdorff_check(tw, n, beta), beta=beta, n=n)
    return t.result()


def _pregap_axioms(rc: RunContext, which: str) -> AxiomReport:
    g = mod4_pregap() if which == "mod4" else rc.pregap()
    return rc._once(f"pregap-{which}", lambda: validate_pregap(g))


def _pregap_axiom(which, name):
    def run(rc, seed):
        return _pregap_axioms(rc, which)[name]

    return run


for _w in ("mod4", "staircase"):
    for _k in ("increasing", "disjoint", "cross-finite", "cross-containment"):
        check(f"gap.{_w}.{_k}", f"pregap-{_k}")(_pregap_axiom(_w, _k))


@check("gap.splitter", "splitter")
def _splitter(rc, seed):
    g = mod4_pregap()
    t = Tally()
    cases = (
        (residues(4, 0, 1), Splits),
        (OMEGA_SET, Fails(as_ordinal(0), "b")),
        (EVENS, Fails(as_ordinal(1), "a")),
    )
    for c, want in cases:
        got = splitter_check(c, g)
        ok = isinstance(got, Splits) if want is Splits else got == want
        t.check(ok, candidate=str(c), got=repr(got), want=repr(want))
    return t.result()


def _gap_group_report(rc: RunContext) -> AxiomReport:
    def build():
        g = rc.pregap()
        p = GapMatrix(g)
        idx = g.indices
        seed = check_seed(rc.cfg.seed, "gap-group")
        rng = random.Random(seed)
        Ks = [frozenset({(x, b)}) for b in idx[1:] for x in (0, 8 * len(idx))]
        Ks += [frozenset({(rng.choice(list(rc.xis)), rng.choice(idx[1:])) for _ in range(2)}) for _ in range(6)]
        base = [Subbase(K, p) for K in sorted(set(Ks), key=lambda K: sorted((fmt(b), x) for x, b in K))]
        # the top index has nothing above it to separate it from the identity
        lower = idx[:-1]
        elements = {GroupElement()}
        possible = 1 + sum(math.comb(len(lower), k) for k in range(1, 4))
        while len(elements) < min(possible, 40):
            elements.add(GroupElement.of(rng.sample(lower, rng.randint(1, min(3, len(lower))))))
        return verify_group_axioms(base, sorted(elements), seed=seed, probe_universe=idx)

    return rc._once("gap-group", build)


def _gap_group(name):
    def run(rc, seed):
        return _gap_group_report(rc)[name]

    return run


for _c in ("1", "2", "3", "4", "5", "6"):
    check(f"gap.subbase-group.{_c}", f"subbase-nbhd-{_c}")(_gap_group(_c))


SUITES: dict[str, list[str]] = {
    "rho-full": [c for c in CHECKS if c.startswith(("walks.", "matrix.", "group."))],
    "tree": [c for c in CHECKS if c.startswith("tree.")],
    "tower-gap": [c for c in CHECKS if c.startswith(("tower.", "gap."))],
}
SUITES["full"] = sorted(CHECKS)


# -- reports ----------------------------------------------------------------------


@dataclass
class Record:
    id: str
    anchor: str
    status: str
    checked: int = 0
    counterexample: Any = None
    note: str = ""
    replay: str = ""
    timing: float = 0.0

    def to_plain(self) -> dict:
        return {
            "id": self.id,
            "anchor": self.anchor,
            "status": self.status,
            "checked": self.checked,
            "counterexample": self.counterexample,
            "note": self.note,
            "replay": self.replay,
            "timing": self.timing,
        }


@dataclass
class Report:
    version: int = SCHEMA_VERSION
    config: dict = field(default_factory=dict)
    records: list[Record] = field(default_factory=list)

    @property
    def summary(self) -> dict:
        counts = {s: 0 for s in STATUSES}
        for r in self.records:
            counts[r.status] += 1
        counts["total"] = len(self.records)
        return counts

    @property
    def exit_code(self) -> int:
        return EXIT_FAIL if self.summary[FAIL] else EXIT_OK

    def to_plain(self) -> dict:
        return {
            "version": self.version,
            "config": self.config,
            "records": [r.to_plain() for r in self.records],
            "summary": self.summary,
        }


def strip_timing(doc: dict) -> dict:
    """Report dict without wall-clock fields, for determinism comparisons."""
    out = dict(doc)
    out["records"] = [{k: v for k, v in r.items() if k != "timing"} for r in doc.get("records", [])]
    return out


def replay_command(cfg: SuiteConfig, cid: str) -> str:
    src = cfg.source or "<config>"
    return f"ordlab lab run {src} --seed {cfg.seed} --only {cid}"


def _run_one(rc: RunContext, cid: str) -> Record:
    chk = CHECKS[cid]
    start = time.perf_counter()
    try:
        res = chk.run(rc, check_seed(rc.cfg.seed, cid))
    except OrdlabError as exc:
        res = AxiomResult(UNDECIDED, note=f"{type(exc).__name__}: {exc}")
    elapsed = time.perf_counter() - start
    return Record(
        id=cid,
        anchor=chk.anchor,
        status=res.status,
        checked=res.checked,
        counterexample=plain(res.counterexample) if res.counterexample is not None else None,
        note=res.note,
        replay=replay_command(rc.cfg, cid) if res.status == FAIL else "",
        timing=round(elapsed, 6),
    )


def selected_checks(cfg: SuiteConfig, only: list[str] | None = None) -> list[str]:
    ids = list(cfg.checks) if cfg.checks else list(SUITES.get(cfg.suite, []))
    if only:
        missing = [c for c in only if c not in CHECKS]
        if missing:
            raise ConfigError(f"unknown check ids: {missing}")
        ids = [c for c in ids if c in only] or list(only)
    return sorted(ids)


def run_suite(cfg: SuiteConfig, jobs: int = 1, only: list[str] | None = None) -> Report:
    """Run the configured checks and collect a report with records sorted by id."""
    ids = selected_checks(cfg, only)
    rc = RunContext(cfg)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(lambda c: _run_one(rc, c), ids))
    else:
        records = [_run_one(rc, c) for c in ids]
    records.sort(key=lambda r: r.id)
    return Report(SCHEMA_VERSION, cfg.echo(), records)


# -- emission ---------------------------------------------------------------------

CSV_FIELDS = ("id", "anchor", "status", "checked", "counterexample", "note", "replay", "timing")


def emit_report(r: Report, fmt_: str = "json") -> bytes:
    if fmt_ == "json":
        return (json.dumps(r.to_plain(), sort_keys=True, indent=2, ensure_ascii=False) + "\n").encode()
    if fmt_ == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
        w.writeheader()
        for rec in r.records:
            row = rec.to_plain()
            row["counterexample"] = "" if rec.counterexample is None else json.dumps(rec.counterexample, sort_keys=True, ensure_ascii=False)
            w.writerow(row)
        return buf.getvalue().encode()
    if fmt_ == "text":
        lines = []
        for rec in r.records:
            line = f"{rec.status.upper():9} {rec.id:32} [{rec.anchor}] checked={rec.checked}"
            if rec.note:
                line += f"  ({rec.note})"
            lines.append(line)
            if rec.status == FAIL:
                lines.append(f"          counterexample: {json.dumps(rec.counterexample, sort_keys=True, ensure_ascii=False)}")
                lines.append(f"          replay: {rec.replay}")
        s = r.summary
        lines.append(f"{s['total']} checks: {s[PASS]} pass, {s[FAIL]} fail, {s[SKIPPED]} skipped, {s[UNDECIDED]} undecided")
        return ("\n".join(lines) + "\n").encode()
    raise ValueError(f"unknown report format {fmt_!r}")


def parse_report(data: bytes | str) -> Report:
    doc = json.loads(data)
    recs = [Record(**r) for r in doc.get("records", [])]
    return Report(doc.get("version", SCHEMA_VERSION), doc.get("config", {}), recs)


def write_report(r: Report, out_dir: str | Path, formats=("json",)) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for f in formats:
        p = out / f"report.{'txt' if f == 'text' else f}"
        p.write_bytes(emit_report(r, f))
        paths.append(p)
    return paths
