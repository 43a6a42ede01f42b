import itertools

import pytest

from conftest import SIG_E, SIG_P

from weakfo.evaluator import count_satisfying, evaluate
from weakfo.macros import (InducedOracle, exists_eq, exists_geq, exists_leq,
                           induced_eq, induced_leq, set_binding)
from weakfo.parser import parse_formula
from weakfo.structures import Structure, enumerate_structures, induced
from weakfo.syntax import Signature, Var, VarName, rename_bound_fresh, to_nnf
from weakfo.weakness import STRONG, classify

X = VarName("x")
SIG_P_AR = Signature({"P": 1}, arithmetic=True)
SIG_E_AR = Signature({"E": 2}, arithmetic=True)


def P_of_x(sig=SIG_P):
    return parse_formula("P(x)", sig)


def check_counting(make, predicate, sig, n_max=4, ks=(0, 1, 2, 3)):
    body = parse_formula("P(x)", sig)
    for k in ks:
        if k == 0 and make is exists_geq:
            continue
        f = make(k, X, body)
        for n in range(1, n_max + 1):
            for struct in enumerate_structures(sig, n):
                want = predicate(count_satisfying(struct, body), k)
                assert evaluate(struct, f) == want, (k, n, struct)


def test_exists_geq_counts():
    check_counting(exists_geq, lambda c, k: c >= k, SIG_P)


def test_exists_leq_counts():
    check_counting(exists_leq, lambda c, k: c <= k, SIG_P)


def test_exists_eq_counts():
    check_counting(exists_eq, lambda c, k: c == k, SIG_P)


def test_exists_geq_k1_is_plain_exists():
    body = P_of_x()
    f = exists_geq(1, X, body)
    g = parse_formula("ex x P(x)", SIG_P)
    for n in (1, 2, 3):
        for struct in enumerate_structures(SIG_P, n):
            assert evaluate(struct, f) == evaluate(struct, g)


def test_counting_over_edges():
    # body with another free variable: exists_geq(2, y, E(x,y))
    y = VarName("y")
    body = parse_formula("E(x, y)", SIG_E)
    f = exists_geq(2, y, body)
    star = Structure(SIG_E, 4, {"E": {(0, 1), (0, 2), (0, 3)}})
    assert evaluate(star, f, {X: 0})
    assert not evaluate(star, f, {X: 1})


def test_macro_classifications():
    body = P_of_x()
    geq = exists_geq(3, X, body)
    cls = classify(rename_bound_fresh(to_nnf(geq)))
    assert cls.strong_qr_mixed == 1  # 1 + strong-qr(P(x)) = 1
    leq = exists_leq(2, X, body)
    cls2 = classify(rename_bound_fresh(to_nnf(leq)))
    assert cls2.strong_qr_mixed == 1
    kinds = {q.name.base: q.classification for q in cls2.quantifiers
             if q.weak_hint}
    assert set(kinds.values()) == {"weak-universal"}


def test_set_binding_exact_semantics():
    sig = SIG_P
    body = P_of_x()
    for k in (1, 2, 3):
        names = [VarName("m", i + 1) for i in range(k)]
        f = set_binding(names, X, body)
        for n in (1, 2, 3):
            for struct in enumerate_structures(sig, n):
                witnesses = {a for a in range(n)
                             if evaluate(struct, body, {X: a})}
                for combo in itertools.product(range(n), repeat=k):
                    asg = dict(zip(names, combo))
                    want = set(combo) == witnesses
                    assert evaluate(struct, f, asg) == want, (k, struct, combo)


def test_induced_eq_edge_class():
    # Q = "has at least one (directed) edge pair", k = 2
    oracle = InducedOracle(lambda s: len(s.table("E")) > 0)
    body = parse_formula("E(x, x) | ex y E(x, y) | ex y E(y, x)", SIG_E_AR)
    f = induced_eq(2, X, body, oracle, SIG_E_AR)
    for n in (1, 2, 3):
        for struct in enumerate_structures(SIG_E_AR, n):
            touched = sorted(a for a in range(n)
                             if evaluate(struct, body, {X: a}))
            if len(touched) != 2:
                want = False
            else:
                want = len(induced(struct, touched).table("E")) > 0
            assert evaluate(struct, f) == want, struct


def test_induced_eq_accept_all_is_counting():
    oracle = InducedOracle(lambda s: True, accepts_empty=True)
    body = parse_formula("P(x)", SIG_P_AR)
    for k in (0, 1, 2):
        f = induced_eq(k, X, body, oracle, SIG_P_AR)
        g = exists_eq(k, X, body)
        for n in (1, 2, 3):
            for struct in enumerate_structures(SIG_P_AR, n):
                assert evaluate(struct, f) == evaluate(struct, g), (k, struct)


def test_induced_leq_monotone():
    oracle = InducedOracle(lambda s: True, accepts_empty=True)
    body = parse_formula("P(x)", SIG_P_AR)
    fs = [induced_leq(k, X, body, oracle, SIG_P_AR) for k in (0, 1, 2)]
    for n in (1, 2, 3):
        for struct in enumerate_structures(SIG_P_AR, n):
            vals = [evaluate(struct, f) for f in fs]
            for a, b in zip(vals, vals[1:]):
                assert (not a) or b
