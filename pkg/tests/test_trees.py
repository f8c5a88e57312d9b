import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from ordlab.errors import IncompleteData
from ordlab.ordinals import OMEGA, add, nat, parse
from ordlab.report import FAIL, PASS
from ordlab.trees import (
    ExplicitTree, FinSeqNode, TreeMatrix, antichain_check, branch_check, bundled_fragment,
    check_witness_inclusion, coherence_check, dump_tree, gen_rho2_node, is_level_index,
    linf_F_member, linf_meet, linf_universe, linf_witness_k, node, norm_diff, parse_node,
    parse_tree, restriction_witness, sampled_norm_lower_bound, tree_F_member, tree_F_set,
    two_parent_mutant, verify_tree_matrix,
)
from ordlab.matrix import verify_axioms
from ordlab.walks import rho2

W = parse
MID, TOP = W("w^w"), W("w^w*2")
seqs = st.lists(st.integers(0, 9), max_size=6).map(lambda v: FinSeqNode(tuple(v)))


class TestFragment:
    def test_bundled_passes(self):
        t = bundled_fragment()
        rep = verify_tree_matrix(t, t.levels(), 2)
        assert rep.all_pass, rep.to_plain()

    def test_mutant_uniqueness_failure(self):
        t = two_parent_mutant()
        rep = verify_tree_matrix(t, t.levels(), 2)
        assert rep.status("G4") == FAIL
        assert rep["G4"].counterexample["reason"] == "predecessor not unique"
        assert rep.status("tree-order") == FAIL

    def test_single_level_vacuous(self):
        t = ExplicitTree()
        for i in range(3):
            t.add_node(i, 0, i)
        rep = verify_tree_matrix(t, t.levels(), 2)
        assert rep.status("G3") == PASS and rep.status("G4") == PASS

    def test_member_examples(self):
        t = bundled_fragment()
        # w^w+0 sits above node 1
        assert tree_F_member(t, nat(1), 0, MID)
        assert not tree_F_member(t, MID, 0, MID)
        assert not tree_F_member(t, TOP, 1, MID)

    def test_missing_offsets(self):
        t = ExplicitTree()
        t.add_node(0, 0, 0)
        t.add_node(1, 0, 1)
        t.add_node(MID, MID, 0, 0)
        t.add_node(add(MID, 1), MID, 1, 0)
        assert tree_F_member(t, nat(0), 3, MID)
        with pytest.raises(IncompleteData):
            tree_F_member(t, nat(1), 3, MID)

    def test_level_index_required(self):
        assert is_level_index(MID) and is_level_index(nat(0)) and not is_level_index(OMEGA)
        with pytest.raises(ValueError):
            tree_F_member(bundled_fragment(), nat(0), 0, OMEGA)

    def test_matrix_adapter(self):
        t = bundled_fragment()
        rep = verify_axioms(TreeMatrix(t), t.nodes, range(3))
        assert rep.all_pass, rep.to_plain()

    def test_F_sets_by_hand(self):
        t = bundled_fragment()
        assert tree_F_set(t, 0, MID) == {nat(1)}
        assert tree_F_set(t, 2, MID) == {nat(0), nat(1), nat(2)}
        # top+0 -> mid+2 -> 0
        assert tree_F_set(t, 0, TOP) == {nat(0), add(MID, 2)}

    def test_text_round_trip(self):
        t = bundled_fragment()
        back = parse_tree(dump_tree(t))
        assert back.level_of == t.level_of and back.parents == t.parents

    def test_virtual_root(self):
        t = parse_tree("node 0 level 0 offset 0 parent root\nnode 1 level 0 offset 1 parent root\n")
        assert t.validate() == []

    def test_bad_line(self):
        with pytest.raises(ValueError):
            parse_tree("node 0 level 0 parent root")


class TestDiagnostics:
    def test_path(self):
        t = ExplicitTree()
        t.add_node(0, 0, 0)
        t.add_node(MID, MID, 0, 0)
        t.add_node(TOP, TOP, 0, MID)
        rep = branch_check(t)
        assert rep["count"] == 1 and rep["longest"] == 3
        assert antichain_check(t)["width"] == 1

    def test_star(self):
        t = ExplicitTree()
        t.add_node(0, 0, 0)
        for i in range(4):
            t.add_node(add(MID, i), MID, i, 0)
        assert antichain_check(t)["width"] == 4
        assert branch_check(t)["count"] == 4

    def test_empty(self):
        t = ExplicitTree()
        assert branch_check(t)["count"] == 0
        assert antichain_check(t)["width"] == 0


class TestLinf:
    def test_norm_examples(self):
        assert norm_diff(node(1, 5), node(1, 5)) == 0
        assert norm_diff(node(1, 5), node(3, 1)) == 4
        assert norm_diff(node(2), node(2, 7)) == 0

    def test_member_examples(self):
        assert linf_F_member(node(3), node(3, 9), 0)
        assert not linf_F_member(node(3, 9), node(3, 9), 5)
        assert not linf_F_member(node(0), node(4, 4), 3)

    def test_witness_examples(self):
        s, t = node(1, 1), node(3, 1)
        assert linf_witness_k(s, t, 1, 3) == 5
        assert linf_witness_k(s, s, 0, 0) == 0
        assert linf_witness_k(s, node(1, 1, 7), 4, 1) == 4

    def test_gen_rho2(self):
        assert gen_rho2_node(3, 3) == node(3, 2, 1)
        assert gen_rho2_node(OMEGA, 3) == node(1, 1, 1)
        assert gen_rho2_node(W("w^2"), 0) == node()
        with pytest.raises(ValueError):
            gen_rho2_node(2, 3)

    def test_coherence_examples(self):
        assert coherence_check(node(1, 2), node(1, 2)) == frozenset()
        assert coherence_check(node(1, 2, 3), node(1, 5, 3)) == {1}
        assert coherence_check(node(), node(7)) == frozenset()

    def test_parse_node(self):
        assert parse_node("(1, 2,3)") == node(1, 2, 3)
        assert parse_node("()") == node()
        assert parse_node("rho2 beta=w alpha=3") == node(1, 1, 1)

    @given(seqs, seqs)
    def test_norm_symmetric(self, s, t):
        assert norm_diff(s, t) == norm_diff(t, s)

    @given(seqs, seqs, st.integers(0, 6))
    def test_restriction_monotone(self, u, t, n):
        for d in range(t.dom + 1):
            s = t.restrict(d)
            if linf_F_member(u, s, n):
                assert linf_F_member(u, t, n)

    @given(seqs, st.integers(0, 4), seqs, st.integers(0, 4))
    def test_meet_covers_both(self, s, m, t, n):
        w, k = linf_meet(s, m, t, n)
        pool = [s.restrict(d) for d in range(s.dom)] + [t.restrict(d) for d in range(t.dom)]
        for u in pool:
            if linf_F_member(u, s, m) and u.dom < w.dom:
                assert linf_F_member(u, w, k)
            if linf_F_member(u, t, n) and u.dom < w.dom:
                assert linf_F_member(u, w, k)

    def test_restriction_witness_cases(self):
        s = node(4, 1, 3)
        assert restriction_witness(s, 2, []) == node(4, 1)
        ext = node(4, 1, 3, 0, 2)
        assert restriction_witness(s, 5, [node(9), ext]) == ext
        with pytest.raises(IncompleteData):
            restriction_witness(s, 6, [ext])

    @settings(max_examples=50)
    @given(st.lists(st.lists(st.integers(0, 4), max_size=5), min_size=2, max_size=12), st.integers(0, 2))
    def test_restriction_witness_inclusion(self, raw, m):
        uni = [FinSeqNode(tuple(v)) for v in raw]
        s = max(uni, key=lambda u: u.dom)
        for delta in range(s.dom):
            t = restriction_witness(s, delta, uni)
            for u in uni:
                if linf_F_member(u, s, m) and u.dom < delta:
                    assert linf_F_member(u, t, m)

    def test_sampled_norm_is_lower_bound(self):
        b1, b2 = W("w*2"), W("w^2")
        probes = [nat(i) for i in range(12)] + [OMEGA]
        got = sampled_norm_lower_bound(b1, b2, probes)
        assert not got.exact
        assert got.lower_bound == max(abs(rho2(g, b1) - rho2(g, b2)) for g in probes)


def inclusion_loops(universe, ms, ns):
    """Plain nested loops over every (s, t, m, n, u)."""
    for s in universe:
        for t in universe:
            if s.dom > t.dom:
                continue
            for m in ms:
                for n in ns:
                    k = linf_witness_k(s, t, m, n)
                    for u in universe:
                        if linf_F_member(u, s, m) and not linf_F_member(u, t, k):
                            return (s, t, m, n, u)
    return None


def test_witness_inclusion_two_routes_agree():
    betas = [add(W(p), nat(b)) for p in ("w", "w*2", "w^2", "w^2+w*3") for b in range(12)]
    uni = linf_universe(betas, 5, 60)
    assert len(uni) == 60
    fast = check_witness_inclusion(uni, range(3), range(3))
    assert fast.status == PASS
    assert inclusion_loops(uni, range(3), range(3)) is None


def test_witness_inclusion_catches_a_bad_universe():
    # s shorter than t but far from it: a node near s is not near t when k is shrunk by hand
    s, t, u = node(0, 0), node(9, 9, 9), node(0)
    assert linf_F_member(u, s, 0)
    assert linf_F_member(u, t, linf_witness_k(s, t, 0, 0))
    assert not linf_F_member(u, t, 0)
