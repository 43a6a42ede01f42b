import pytest

from conftest import SIG_E, SIG_PQ, random_formula

from weakfo.errors import DuplicateBindersError, NotNNFError
from weakfo.parser import parse_formula
from weakfo.syntax import Signature, VarName, to_nnf, rename_bound_fresh
from weakfo.weakness import (STRONG, WEAK_EXISTENTIAL, WEAK_UNIVERSAL,
                             classify, depends_on, simple_weak_existentials,
                             verify_hints)

SIG_RPE = Signature({"R": 4, "P": 1, "E": 3})
PAPER_32 = "ex x ex y ex* z (R(x,x,z,z) & x != y & y != z & P(x) & all w E(w,y,y))"


def test_depends_on_paper_example():
    sig = Signature({"E": 2})
    f = parse_formula("E(x,y) & all b (E(x,b) & ex z E(y,z)) & ex b E(x,x)", sig)
    assert depends_on(f, (1,)) == {VarName("x"), VarName("y")}
    assert depends_on(f, (2,)) == {VarName("x")}
    g = parse_formula("all w E(w,y,y)", Signature({"E": 3}))
    assert depends_on(g, ()) == {VarName("y")}
    closed = parse_formula("ex x all y E(y, x)", sig)
    assert depends_on(closed, ()) == frozenset()


def test_classify_paper_32():
    from weakfo.syntax import quantifier_rank
    f = parse_formula(PAPER_32, SIG_RPE)
    c = classify(f)
    assert quantifier_rank(f) == 4
    assert c.strong_qr == 3
    assert c.strong_bound == {VarName("x"), VarName("y")}
    by_name = {q.name.base: q.classification for q in c.quantifiers}
    assert by_name["z"] == WEAK_EXISTENTIAL
    assert by_name["x"] == STRONG and by_name["y"] == STRONG
    assert by_name["w"] == WEAK_UNIVERSAL


def test_classify_simple():
    f = parse_formula("ex x P(x)", SIG_PQ)
    c = classify(f)
    assert c.quantifiers[0].classification == WEAK_EXISTENTIAL
    assert c.strong_qr == 0
    # both disjuncts use x: still weak (the or-form exception)
    g = parse_formula("ex x (P(x) | Q(x))", SIG_PQ)
    assert classify(g).quantifiers[0].classification == WEAK_EXISTENTIAL
    # two conjuncts use x in non-inequality literals: strong
    h = parse_formula("ex x (P(x) & Q(x))", SIG_PQ)
    assert classify(h).quantifiers[0].classification == STRONG


def test_self_inequality_is_exempt():
    f = parse_formula("ex x (P(x) & x != x)", SIG_PQ)
    assert classify(f).quantifiers[0].classification == WEAK_EXISTENTIAL


def test_succ_inequality_not_exempt():
    sig = Signature({"P": 1}, arithmetic=True)
    f = parse_formula("ex x (P(x) & s(x) != y)", sig)
    assert classify(f).quantifiers[0].classification == STRONG


def test_classify_preconditions():
    with pytest.raises(NotNNFError):
        classify(parse_formula("!(P(x) & Q(x))", SIG_PQ))
    with pytest.raises(DuplicateBindersError):
        classify(parse_formula("ex x P(x) & ex x Q(x)", SIG_PQ))


def test_classify_invariant_under_renaming(rng):
    for _ in range(40):
        f = to_nnf(random_formula(rng, SIG_E, 4, []))
        f = rename_bound_fresh(f)
        c1 = classify(f)
        c2 = classify(rename_bound_fresh(f))
        kinds1 = [q.classification for q in c1.quantifiers]
        kinds2 = [q.classification for q in c2.quantifiers]
        assert kinds1 == kinds2
        assert c1.strong_qr == c2.strong_qr


def test_verify_hints():
    f = parse_formula("ex* x (P(x) & Q(x))", SIG_PQ)  # hinted weak but strong
    assert len(verify_hints(f)) == 1
    g = parse_formula("ex x (P(x) & Q(x))", SIG_PQ)  # unhinted: no claim
    assert verify_hints(g) == []
    h = parse_formula(PAPER_32, SIG_RPE)
    assert verify_hints(h) == []


def test_simple_sufficient_condition():
    f = parse_formula(PAPER_32, SIG_RPE)
    simple = simple_weak_existentials(f)
    assert VarName("z") in simple
    # the or-exception is exactly what the fast path misses
    g = parse_formula("ex x (P(x) | Q(x))", SIG_PQ)
    assert VarName("x") not in simple_weak_existentials(g)
    assert classify(g).quantifiers[0].classification == WEAK_EXISTENTIAL
