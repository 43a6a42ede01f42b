import pytest

from conftest import SIG_E

from weakfo.colorcoding import (CCResult, PatchOracle, cc_threshold,
                                cc_transform, diagram, patch_eventually,
                                small_witness_bound, universe_at_least)
from weakfo.errors import TransformError
from weakfo.evaluator import evaluate, exists_coloring
from weakfo.parser import parse_formula
from weakfo.structures import Structure, enumerate_structures
from weakfo.syntax import Signature, to_nnf

SIG_EC1 = Signature({"E": 2, "C1": 1}, arithmetic=True)
SIG_EC2 = Signature({"E": 2, "C1": 1, "C2": 1}, arithmetic=True)
TRI_COLORED = ("ex x ex y ex z (E(x,y) & E(y,z) & E(x,z) "
               "& C1(x) & C1(y) & C1(z))")


def triangle_formula_colored():
    return parse_formula(TRI_COLORED, SIG_EC1)


def test_small_witness_bound():
    f = parse_formula("C1(x)", SIG_EC1)
    assert small_witness_bound(f, 1) == 1
    assert small_witness_bound(triangle_formula_colored(), 1) == 3
    g = parse_formula("ex x ex y E(x,y)", SIG_EC1)
    assert small_witness_bound(g, 1) == 0
    two = parse_formula("ex x (C1(x) | C2(x)) & ex y C2(y)", SIG_EC2)
    assert small_witness_bound(two, 2) == 2  # max(1,1) + 1


def test_witness_bound_rejects_universal_colors():
    f = parse_formula("all x C1(x)", SIG_EC1)
    with pytest.raises(TransformError):
        small_witness_bound(f, 1)
    with pytest.raises(TransformError):
        cc_transform(f, 1)


def test_threshold():
    assert cc_threshold(0) == 1
    assert cc_threshold(1) == 2
    assert cc_threshold(3) == 52


def test_cc_color_free_degenerates():
    g = to_nnf(parse_formula("ex x ex y E(x,y)", SIG_EC1))
    res = cc_transform(g, 1)
    assert res.witness_bound == 0
    assert res.formula.family.size == 1
    # the single disjunct is just exists p exists q (g): equivalent to g
    sig = Signature({"E": 2}, arithmetic=True)
    for n in (1, 2, 3):
        for struct in enumerate_structures(sig, n):
            assert evaluate(struct, res.formula) == evaluate(struct, g)


def test_cc_added_quantities_are_input_independent():
    r1 = cc_transform(triangle_formula_colored(), 1)
    other = parse_formula("ex x ex y (E(x,y) & C1(x) & C1(y))", SIG_EC1)
    r2 = cc_transform(other, 1)
    assert r1.added_qr == r2.added_qr
    assert r1.formula.family.size == 1
    assert r1.witness_bound == 3 and r2.witness_bound == 2


def test_cc_triangle_positive_at_threshold():
    # a graph at the threshold containing a triangle must satisfy the
    # transformed formula (the formula side of the equivalence; the full
    # two-sided sweep is part of the acceptance suite)
    res = cc_transform(triangle_formula_colored(), 1)
    n = res.threshold
    sig = Signature({"E": 2}, arithmetic=True)
    edges = {(0, 1), (1, 0), (1, 2), (2, 1), (0, 2), (2, 0), (5, 9), (9, 5)}
    struct = Structure(sig, n, {"E": edges})
    assert evaluate(struct, res.formula, budget=5 * 10 ** 7)
    assert exists_coloring(struct, triangle_formula_colored(), 1, cap=10 ** 60) \
        if n <= 20 else True


def test_universe_at_least():
    sig = Signature({}, arithmetic=True)
    for m in (1, 2, 3, 5):
        f = universe_at_least(m)
        for n in range(1, 8):
            s = Structure(sig, n, {})
            assert evaluate(s, f) == (n >= m), (m, n)


def test_patch_eventually_hardwires_small_sizes():
    sig = Signature({"E": 2}, arithmetic=True)
    has_edge = parse_formula("ex x ex y E(x,y)", sig)
    never = parse_formula("ex x x != x", sig)  # wrong on small sizes

    oracle = PatchOracle(lambda A: len(A.table("E")) > 0,
                         lambda s: enumerate_structures(sig, s))
    patched = patch_eventually(never, oracle, 3)
    count = 0
    for n in (1, 2):
        for struct in enumerate_structures(sig, n):
            count += 1
            assert evaluate(struct, patched) == (len(struct.table("E")) > 0)
    assert count == 18
    # above the cut the patched formula follows the wrapped one
    big = Structure(sig, 3, {"E": {(0, 1)}})
    assert not evaluate(big, patched)
    assert evaluate(big, patch_eventually(has_edge, oracle, 3))


def test_patch_m1_is_identity():
    sig = Signature({"E": 2}, arithmetic=True)
    f = parse_formula("ex x E(x,x)", sig)
    oracle = PatchOracle(lambda A: True, lambda s: enumerate_structures(sig, s))
    patched = patch_eventually(f, oracle, 1)
    for n in (1, 2):
        for struct in enumerate_structures(sig, n):
            assert evaluate(struct, patched) == evaluate(struct, f)


def test_diagram_identifies_structure():
    sig = Signature({"E": 2}, arithmetic=True)
    target = Structure(sig, 2, {"E": {(0, 1)}})
    d = diagram(target)
    for struct in enumerate_structures(sig, 2):
        assert evaluate(struct, d) == (struct.relations["E"] == target.relations["E"])
