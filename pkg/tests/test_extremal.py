"""Extremal enumeration vs. the predicted families, plus the auxiliary checks."""

from __future__ import annotations

import math
from collections import Counter

import pytest

from zerosum.engine import is_product1_free
from zerosum.extremal import (
    VERDICT_DISCREPANCY,
    VERDICT_EXACT,
    check_cyclic_structure,
    check_minimal_zero_sum_order,
    check_weighted_lemma,
    enumerate_extremal,
    family_cyclic,
    family_dicyclic,
    family_dihedral,
    family_metacyclic,
    minimal_zero_sequences,
    signed_zero_subset_exists,
    verify_theorem,
)
from zerosum.groups import GroupError
from zerosum.sequences import GSequence

from conftest import grp


def test_enumerate_extremal_cyclic():
    g = grp("C:5")
    enum = enumerate_extremal(g)
    assert enum.davenport == 5
    assert {s.items for s in enum.sequences} == {(t,) * 4 for t in range(1, 5)}


def test_enumerate_extremal_klein_and_d8():
    d4 = grp("D:2")
    enum = enumerate_extremal(d4)
    assert {s.items for s in enum.sequences} == {(1, 2), (1, 3), (2, 3)}
    d8 = grp("D:4")
    enum8 = enumerate_extremal(d8)
    # (y^t)^3 (x y^s) with t in {1, 3}, s in Z_4: phi(4) * 4 = 8 sequences
    assert len(enum8.sequences) == 8
    expected = {tuple(sorted((t,) * 3 + (4 + s,))) for t in (1, 3) for s in range(4)}
    assert {s.items for s in enum8.sequences} == expected


def test_family_counts():
    assert len(family_cyclic(2).sequences) == 1
    assert len(family_cyclic(4).sequences) == 2
    assert len(family_dihedral(5).sequences) == 20
    assert len(family_dihedral(2).sequences) == 3
    assert len(family_dihedral(3).sequences) == 7
    assert len(family_dicyclic(2).sequences) == 24
    assert len(family_metacyclic(5, 4, 2).sequences) == 280
    assert len(family_metacyclic(3, 2, 2).sequences) == 7


def test_dihedral3_resolved_t_range():
    fam = family_dihedral(3)
    # the published clause says t in {2, 3}, but y^3 = 1 in D_6; the engine
    # resolves the intended range to {1, 2}
    assert "t in [1, 2]" in fam.parameter_note
    doubles = {s.items[0] for s in fam.sequences if s.items[0] == s.items[1]}
    assert doubles == {1, 2}


@pytest.mark.parametrize("maker,args", [
    (family_cyclic, (6,)),
    (family_dihedral, (2,)), (family_dihedral, (3,)), (family_dihedral, (6,)),
    (family_dicyclic, (2,)), (family_dicyclic, (3,)),
    (family_metacyclic, (3, 2, 2)), (family_metacyclic, (5, 2, 4)),
])
def test_family_soundness(maker, args):
    # every emitted sequence is free and has length D(G) - 1
    fam = maker(*args)
    g = fam.group
    enum = enumerate_extremal(g)
    for s in fam.sequences:
        assert s.length == enum.length
        assert is_product1_free(g, s)
    assert len(set(fam.sequences)) == len(fam.sequences)


@pytest.mark.parametrize("spec", ["C:7", "D:2", "D:3", "D:5", "D:6", "Q:2",
                                  "M:3,2,2", "M:5,2,4"])
def test_verify_theorem_exact(spec):
    rep = verify_theorem(grp(spec))
    assert rep.verdict == VERDICT_EXACT
    assert rep.missing == () and rep.extra == ()
    assert rep.enumerated_count == rep.predicted_count


def test_verify_theorem_dicyclic_inverse_parameter_extras():
    for n in (3, 4):
        g = grp(f"Q:{n}")
        rep = verify_theorem(g)
        assert rep.verdict == VERDICT_DISCREPANCY
        assert rep.missing == ()
        h = 2 * n
        mirrored = {
            GSequence(g.key, tuple(sorted((h - t,) * (h - 1) + (h + s,)))).format(g)
            for t in range(1, n) if math.gcd(t, h) == 1
            for s in range(h)
        }
        assert set(rep.extra) == mirrored


def test_verify_theorem_unsupported_group():
    with pytest.raises(GroupError, match="family"):
        verify_theorem(grp("CxC:2,4"))


def test_q8_extremal_in_quaternion_names():
    # in quaternion notation the 24 extremal multisets are exactly
    # (w, w, w, v) with w, v in {+-i, +-j, +-k} on different axes
    from zerosum.groups import quaternion_names
    g = grp("Q:2")
    names = quaternion_names(g)
    enum = enumerate_extremal(g)
    got = {tuple(sorted(names[a] for a in s.items)) for s in enum.sequences}
    units = ["i", "-i", "j", "-j", "k", "-k"]
    expected = set()
    for w in units:
        for v in units:
            if w.lstrip("-") != v.lstrip("-"):
                expected.add(tuple(sorted([w, w, w, v])))
    assert got == expected
    assert len(expected) == 24


def test_weighted_lemma():
    rep = check_weighted_lemma(8)
    assert rep.verdict == VERDICT_EXACT
    assert rep.details["s"] == 4
    assert rep.details["tightness_counterexample"] == "(1, 2, 4)"
    assert not signed_zero_subset_exists(8, (1, 2, 4))
    assert signed_zero_subset_exists(8, (1, 2, 4, 8))
    assert signed_zero_subset_exists(2, (1, 1))
    # n = 2: any pair already pairs up by parity
    rep2 = check_weighted_lemma(2)
    assert rep2.verdict == VERDICT_EXACT and rep2.details["s"] == 2


def test_cyclic_structure_n7_clause3_shapes():
    rep = check_cyclic_structure(7)
    assert rep.verdict == VERDICT_EXACT
    assert rep.details["shape_lengths_checked"] == [4, 5, 6]
    # all four published length-(n-3) shapes occur, and nothing else
    import zerosum.engine as engine
    g = grp("C:7")
    enum4 = {GSequence(g.key, items)
             for items in engine.enumerate_free(g, 4, budget=10 ** 6)["found"]}
    shapes = set()
    for ggen in range(1, 7):
        for shape in [(ggen,) * 4, (ggen,) * 3 + (2 * ggen % 7,),
                      (ggen,) * 3 + (3 * ggen % 7,),
                      (ggen,) * 2 + (2 * ggen % 7,) * 2]:
            s = GSequence(g.key, tuple(sorted(shape)))
            if is_product1_free(g, s):
                shapes.add(s)
    assert enum4 == shapes


def test_cyclic_structure_n10_top_lengths():
    rep = check_cyclic_structure(10)
    assert rep.verdict == VERDICT_EXACT
    import zerosum.engine as engine
    g = grp("C:10")
    # length n-1: only (g)^9 for generators g
    enum9 = {GSequence(g.key, items)
             for items in engine.enumerate_free(g, 9, budget=10 ** 6)["found"]}
    assert enum9 == {GSequence(g.key, (t,) * 9) for t in (1, 3, 7, 9)}
    # length n-2: (g)^8 or (g)^7 (g^2)
    enum8 = {GSequence(g.key, items)
             for items in engine.enumerate_free(g, 8, budget=10 ** 6)["found"]}
    for s in enum8:
        cnt = Counter(s.items)
        top, mult = cnt.most_common(1)[0]
        assert mult >= 7
        if mult == 7:
            (other,) = [e for e in cnt if e != top]
            assert other == 2 * top % 10


def test_minimal_zero_sequences_examples():
    g = grp("CxC:2,2")
    _, minimal = minimal_zero_sequences(g)
    assert [s.items for s in minimal] == [(1, 2, 3)]
    rep = check_minimal_zero_sum_order(g)
    assert rep.verdict == VERDICT_EXACT
    assert rep.details["minimal_zero_count"] == 1

    c6 = grp("C:6")
    rep6 = check_minimal_zero_sum_order(c6)
    assert rep6.verdict == VERDICT_EXACT
    assert rep6.details["exponent"] == 6

    c33 = grp("CxC:3,3")
    rep33 = check_minimal_zero_sum_order(c33)
    assert rep33.verdict == VERDICT_EXACT
    assert rep33.details["davenport"] == 5

    c24 = grp("CxC:2,4")
    assert check_minimal_zero_sum_order(c24).verdict == VERDICT_EXACT


def test_minimal_zero_scope_errors():
    with pytest.raises(GroupError):
        check_minimal_zero_sum_order(grp("D:3"))
    with pytest.raises(GroupError):
        check_minimal_zero_sum_order(grp("CxC:2,3,5"))  # rank 3, mixed primes


def test_report_payload_shape():
    rep = verify_theorem(grp("D:4"))
    payload = rep.to_payload()
    assert set(payload) == {"target", "group", "enumerated_count",
                            "predicted_count", "missing", "extra", "verdict",
                            "details", "nodes", "millis"}
