import pytest

from conftest import SIG_E, SIG_P

from weakfo.errors import CapExceeded, StructureError
from weakfo.structures import (Structure, count_structures,
                               enumerate_structures, eval_term, induced,
                               json_decode, json_encode, validate)
from weakfo.syntax import Signature, Succ, Var, VarName, ZERO, num_term


def test_eval_term_clamps():
    sig = Signature({"E": 2}, arithmetic=True)
    s = Structure(sig, 5, {"E": set()})
    assert eval_term(s, ZERO, {}) == 0
    assert eval_term(s, num_term(2), {}) == 2
    assert eval_term(s, num_term(9), {}) == 4  # succ clamps at n-1
    x = VarName("x")
    assert eval_term(s, Succ(Var(x)), {x: 4}) == 4


def test_validate():
    sig = Signature({"E": 2})
    with pytest.raises(StructureError):
        Structure(sig, 2, {"E": {(0, 5)}})
    arith = Signature({"E": 2}, arithmetic=True)
    with pytest.raises(StructureError):
        Structure(arith, 2, {"add": {(0, 0, 0)}})
    ok = Structure(sig, 2, {"E": {(0, 1)}})
    assert validate(ok) == []


def test_arithmetic_tables_exhaustive():
    sig = Signature({}, arithmetic=True)
    for n in range(1, 9):
        s = Structure(sig, n, {})
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    assert s.has_tuple("add", (a, b, c)) == (a + b == c)
                    assert s.has_tuple("mult", (a, b, c)) == (a * b == c)
                assert s.has_tuple("<", (a, b)) == (a < b)


def test_enumeration_counts():
    assert count_structures(SIG_E, 2) == 16
    assert len(list(enumerate_structures(SIG_E, 2))) == 16
    assert len(list(enumerate_structures(SIG_P, 3))) == 8
    with pytest.raises(CapExceeded):
        list(enumerate_structures(SIG_E, 5, cap=10 ** 6))


def test_enumeration_no_duplicates():
    for n in (1, 2):
        seen = set()
        for s in enumerate_structures(SIG_E, n):
            key = (s.size, s.relations["E"])
            assert key not in seen
            seen.add(key)
        assert len(seen) == count_structures(SIG_E, n)


def test_induced():
    tri = Structure(SIG_E, 3, {"E": {(0, 1), (1, 0), (1, 2), (2, 1), (0, 2), (2, 0)}})
    sub = induced(tri, [0, 1])
    assert sub.size == 2 and sub.relations["E"] == frozenset({(0, 1), (1, 0)})
    full = induced(tri, [0, 1, 2])
    assert full.relations == tri.relations
    with pytest.raises(StructureError):
        induced(tri, [0, 0])
    with pytest.raises(StructureError):
        induced(tri, [0, 7])


def test_json_roundtrip(rng):
    import random
    for _ in range(100):
        n = rng.randrange(1, 5)
        sig = Signature({"E": 2}, frozenset({"c"}), arithmetic=rng.random() < 0.5)
        edges = {(rng.randrange(n), rng.randrange(n)) for _ in range(rng.randrange(0, 5))}
        s = Structure(sig, n, {"E": edges}, {"c": rng.randrange(n)})
        assert json_decode(json_encode(s)) == s


def test_json_errors():
    with pytest.raises(StructureError):
        json_decode("{not json")
    sig = Signature({"E": 2})
    with pytest.raises(StructureError):
        json_decode('{"signature": {"relations": {"E": 2}, "constants": [], "arithmetic": false}, "size": 2, "relations": {}}')
    arith = '{"signature": {"relations": {"E": 2}, "constants": [], "arithmetic": true}, "size": 2, "relations": {"E": [], "mult": [[0,0,0]]}}'
    with pytest.raises(StructureError):
        json_decode(arith)
