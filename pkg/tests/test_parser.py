import random

import pytest

from conftest import SIG_E, SIG_PQ, random_formula

from weakfo.errors import ArityError, ParseError, RenderLimitError
from weakfo.parser import parse_formula, parse_varname, render_formula
from weakfo.syntax import (Atom, BigOr, Exists, IndexFamily, Neq, Or,
                           Signature, Var, VarName)


def test_parse_examples():
    f = parse_formula("ex x P(x)", SIG_PQ)
    assert f == Exists(VarName("x"), Atom("P", (Var(VarName("x")),)))
    g = parse_formula("ex* x x != y", SIG_PQ)
    assert isinstance(g, Exists) and g.weak_hint
    assert g.body == Neq(Var(VarName("x")), Var(VarName("y")))


def test_succ_requires_arithmetic():
    with pytest.raises(ParseError):
        parse_formula("E(s(x), 0)", SIG_E)
    arith = Signature({"E": 2}, arithmetic=True)
    parse_formula("E(s(x), 0)", arith)  # fine there


def test_errors():
    with pytest.raises(ParseError):
        parse_formula("ex x R(x)", SIG_PQ)  # unknown symbol
    with pytest.raises(ArityError):
        parse_formula("P(x, y)", SIG_PQ)
    with pytest.raises(ParseError):
        parse_formula("ex x P(x", SIG_PQ)
    err = None
    try:
        parse_formula("P(x) &", SIG_PQ)
    except ParseError as e:
        err = e
    assert err is not None and "position" in str(err)


def test_varname_serials():
    assert parse_varname("x") == VarName("x", 0)
    assert parse_varname("x_12") == VarName("x", 12)
    assert parse_varname("x1") == VarName("x1", 0)
    assert parse_varname("a_b_3") == VarName("a_b", 3)
    assert VarName("x", 12).render() == "x_12"


def test_roundtrip_random(rng):
    for _ in range(120):
        f = random_formula(rng, SIG_E, 4, [])
        text = render_formula(f)
        assert parse_formula(text, SIG_E) == f


def test_roundtrip_arith():
    sig = Signature({"E": 2}, arithmetic=True)
    for text in [
        "ex x (x < y & add(x, y, z))",
        "all x (mult(x, x, y) | !(s(0) < x))",
        "ex x (s(s(0)) = x & E(x, 0))",
    ]:
        f = parse_formula(text, sig)
        assert parse_formula(render_formula(f), sig) == f


def test_precedence():
    sig = Signature({"P": 1, "Q": 1, "R": 1})
    f = parse_formula("P(x) & Q(x) | R(x)", sig)
    assert isinstance(f, Or)
    g = parse_formula("ex x P(x) & Q(y)", sig)
    # quantifier body is the next unary only
    from weakfo.syntax import And
    assert isinstance(g, And) and isinstance(g.children[0], Exists)


def test_bigor_render_guard():
    fam = IndexFamily(10 ** 9, lambda: iter(range(10 ** 9)))
    b = BigOr(fam, lambda i: Atom("P", (Var(VarName("x")),)), frozenset({VarName("x")}))
    with pytest.raises(RenderLimitError):
        render_formula(b)
    small = BigOr(IndexFamily(2, lambda: iter(range(2))),
                  lambda i: Atom("P", (Var(VarName("x")),)), frozenset({VarName("x")}))
    assert render_formula(small) == "P(x) | P(x)"
