"""One test per acceptance criterion, at the stated sizes and time budgets."""

import itertools
import json
import random
import time

from ordlab.groups import Basic, GroupElement, restriction_cover, verify_group_axioms
from ordlab.lab import DEFAULT_UNIVERSE, config_from_dict, emit_report, run_suite, sample_ordinals, sample_triples, strip_timing
from ordlab.matrix import FlippedProvider, rho_provider, verify_axioms
from ordlab.omegasets import OMEGA_SET, residues
from ordlab.oracles import brute_sublevel
from ordlab.ordinals import OMEGA, Ordinal, add, nat, parse
from ordlab.report import FAIL, PASS
from ordlab.towers import (
    Fails, Splits, build_tower, mod4_pregap, rho_TO, splitter_check, validate_pregap, validate_tower,
)
from ordlab.trees import (
    bundled_fragment, check_witness_inclusion, gen_rho2_node, linf_universe, node, two_parent_mutant,
    verify_tree_matrix,
)
from ordlab.walks import WalkContext, rho, rho1, sublevel_rho

W_W = parse("w^w")
TRIPLES = 10_000


def _triples():
    return sample_triples(2024, OMEGA, 5, TRIPLES)


def test_criterion_1_subadditivity():
    start = time.perf_counter()
    ctx = WalkContext()
    trips = _triples()
    assert len(trips) >= TRIPLES
    bad = []
    for a, b, c in trips:
        assert a < b < c < W_W
        ab, ac, bc = rho(a, b, ctx), rho(a, c, ctx), rho(b, c, ctx)
        if ac > max(ab, bc) or ab > max(ac, bc):
            bad.append((a, b, c))
    assert bad == []
    assert time.perf_counter() - start < 60


def test_criterion_2_rho_dominates_rho1():
    ctx = WalkContext()
    bad = [(x, y) for a, b, c in _triples() for x, y in ((a, b), (a, c), (b, c)) if rho(x, y, ctx) < rho1(x, y, ctx)]
    assert bad == []


def test_criterion_3_sublevel_oracle():
    # alpha = w*i + n for i < 3 and n <= 12; see brute_sublevel for the window
    start = time.perf_counter()
    ctx = WalkContext()
    for i in range(3):
        base = Ordinal(((nat(1), i),)) if i else nat(0)
        for n in range(13):
            alpha = add(base, nat(n))
            for c in range(6):
                assert sublevel_rho(alpha, c, ctx) == brute_sublevel(alpha, c, window=c + 8), (alpha, c)
    assert time.perf_counter() - start < 10


def test_criterion_4_matrix_axioms():
    ctx = WalkContext()
    p = rho_provider(ctx)
    uni = DEFAULT_UNIVERSE
    assert [nat(i) for i in range(30)] == uni[:30] and len(uni) == 35
    rep = verify_axioms(p, uni, range(9))
    assert all(rep.status(g) == PASS for g in ("G1", "G2", "G3", "G4")), rep.to_plain()
    # witnesses are max(xi, rho(alpha, beta)) on both sides
    for a, b in itertools.combinations(uni, 2):
        for x in (0, 4, 8):
            assert p.witness_g3(x, a, b) == p.witness_g4(x, a, b) == max(x, rho(a, b, ctx))
    flipped = FlippedProvider(p, 1, 3, OMEGA)
    assert p.member(nat(1), 3, OMEGA) != flipped.member(nat(1), 3, OMEGA)
    assert verify_axioms(flipped, uni, range(9)).failures()


def test_criterion_5_group_axioms():
    ctx = WalkContext()
    p = rho_provider(ctx)
    rng = random.Random(5)
    elements = {GroupElement()}
    while len(elements) < 120:
        elements.add(GroupElement.of(rng.sample(DEFAULT_UNIVERSE, rng.randint(1, 3))))
    alphas = [parse(s) for s in ("5", "29", "w", "w+1", "w*2", "w^2", "w^w")]
    base = [Basic(x, a, p) for a in alphas for x in (0, 4, 8)]
    rep = verify_group_axioms(base, sorted(elements), seed=5, probe_universe=DEFAULT_UNIVERSE)
    assert rep.stats["elements"] >= 100
    for c in ("1", "2", "3", "4", "5", "6"):
        assert rep.status(c) == PASS, (c, rep.to_plain())
    triples = [(rng.choice(DEFAULT_UNIVERSE), rng.randrange(9), rng.choice(DEFAULT_UNIVERSE)) for _ in range(50)]
    for delta, xi, alpha in triples:
        probes = None if alpha < parse("w^3") else DEFAULT_UNIVERSE
        eta = restriction_cover(delta, xi, alpha, p, probes)
        assert eta >= 0


def test_criterion_6_trees():
    t = bundled_fragment()
    assert verify_tree_matrix(t, t.levels(), 3).all_pass
    m = two_parent_mutant()
    rep = verify_tree_matrix(m, m.levels(), 3)
    assert rep.status("G4") == FAIL
    assert rep["G4"].counterexample["reason"] == "predecessor not unique"
    betas = [add(parse(b), nat(k)) for b in ("w", "w*2", "w*3", "w^2", "w^2*2+w*3", "w^3+w") for k in range(40)]
    uni = linf_universe(betas, 6, 200)
    assert len(uni) == 200
    assert check_witness_inclusion(uni, range(3), range(3)).status == PASS


def test_criterion_7_rho2_nodes():
    assert gen_rho2_node(3, 3) == node(3, 2, 1)
    assert gen_rho2_node(OMEGA, 3) == node(1, 1, 1)


def test_criterion_8_towers_and_gaps():
    finite = [nat(i) for i in range(30)]
    tower = build_tower(finite + [add(OMEGA, nat(k)) for k in range(10)], seed=8)
    assert len(tower.indices) == 40 and sum(a.is_limit for a in tower.indices) == 1
    assert validate_tower(tower).all_pass
    for n in (1, 2, 5, 12):
        short = build_tower(finite[:n - 1] + [OMEGA], seed=n)
        assert validate_tower(short).all_pass
    val = {(a, b): rho_TO(tower, a, b) for a, b in itertools.combinations_with_replacement(tower.indices, 2)}
    for a, b, c in itertools.combinations(tower.indices, 3):
        assert val[a, c] <= max(val[a, b], val[b, c])
    rep = validate_pregap(mod4_pregap())
    assert rep.all_pass and rep.status("cross-containment") == PASS
    g = mod4_pregap()
    assert isinstance(splitter_check(residues(4, 0, 1), g), Splits)
    assert splitter_check(OMEGA_SET, g) == Fails(nat(0), "b")
    assert splitter_check(residues(2, 0), g) == Fails(nat(1), "a")


def _canonical(rep) -> bytes:
    doc = strip_timing(json.loads(emit_report(rep, "json")))
    return json.dumps(doc, sort_keys=True, indent=2).encode()


def test_criterion_9_determinism():
    start = time.perf_counter()
    first = run_suite(config_from_dict({"suite": "full", "seed": 9}))
    second = run_suite(config_from_dict({"suite": "full", "seed": 9}))
    elapsed = time.perf_counter() - start
    assert first.summary["total"] == len(first.records) > 40
    assert first.exit_code == 0, [(r.id, r.status, r.note) for r in first.records if r.status != PASS]
    assert _canonical(first) == _canonical(second)
    assert elapsed / 2 < 300
