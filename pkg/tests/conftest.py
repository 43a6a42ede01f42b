import random

import pytest

from weakfo.syntax import (And, Atom, Eq, Exists, Forall, Neq, Not, Or,
                           Signature, Var, VarName)

SIG_E = Signature({"E": 2})
SIG_P = Signature({"P": 1})
SIG_PQ = Signature({"P": 1, "Q": 1})
SIG_EP = Signature({"E": 2, "P": 1})
SIG_E_ARITH = Signature({"E": 2}, arithmetic=True)


def random_formula(rng: random.Random, sig: Signature, depth: int, scope: list):
    """Small random formula over the signature; guaranteed to be a
    sentence when called with an empty scope (quantifies first)."""
    if not scope or (depth > 0 and rng.random() < 0.5):
        name = VarName(rng.choice("abcxyz"), rng.randrange(1, 50))
        body = random_formula(rng, sig, depth - 1, scope + [name])
        cls = Exists if rng.random() < 0.6 else Forall
        return cls(name, body, False)
    if depth > 0 and rng.random() < 0.55:
        op = rng.random()
        if op >= 0.9:
            return Not(random_formula(rng, sig, depth - 1, scope))
        left = random_formula(rng, sig, depth - 1, scope)
        right = random_formula(rng, sig, depth - 1, scope)
        return And((left, right)) if op < 0.45 else Or((left, right))
    # literal over in-scope variables
    choice = rng.random()
    v1 = Var(rng.choice(scope))
    v2 = Var(rng.choice(scope))
    if choice < 0.5:
        rel = rng.choice(sorted(sig.relations))
        arity = sig.relations[rel]
        args = tuple(Var(rng.choice(scope)) for _ in range(arity))
        atom = Atom(rel, args)
        return Not(atom) if rng.random() < 0.3 else atom
    if choice < 0.75:
        return Eq(v1, v2)
    return Neq(v1, v2)


@pytest.fixture
def rng():
    return random.Random(20240817)
