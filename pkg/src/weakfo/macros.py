"""Counting and induced-substructure shorthands, expanded into the core
syntax with weak-marked quantifiers.

The expansions keep the strong (mixed) quantifier rank at 1 plus that of
the body — the counting work is carried entirely by weak variables — and
the induced forms add one strong quantifier per relation argument.
"""

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

from .errors import CapExceeded, TransformError, structure_cap
from .structures import Structure, count_structures, enumerate_structures
from .syntax import (And, Atom, BigOr, Eq, Exists, Forall, Formula,
                     FreshNamer, IndexFamily, Neq, Not, Or, Signature, Var,
                     VarName, bound_vars, free_vars, mk_and, mk_or,
                     rename_bound_fresh, substitute, to_nnf)


def _pairwise_neq(names) -> list:
    return [Neq(Var(a), Var(b)) for a, b in itertools.combinations(names, 2)]


def exists_geq(k: int, x: VarName, body: Formula) -> Formula:
    """At least k distinct witnesses of body(x)."""
    if k < 1:
        raise TransformError("exists_geq needs k >= 1")
    namer = FreshNamer(body)
    weak = [namer.fresh(x) for _ in range(k)]
    uses = [Exists(x, And((Eq(Var(x), Var(w)), body))) for w in weak]
    matrix = mk_and(_pairwise_neq(weak) + uses)
    for w in reversed(weak):
        matrix = Exists(w, matrix, weak_hint=True)
    return matrix


def exists_leq(k: int, x: VarName, body: Formula) -> Formula:
    """At most k distinct witnesses of body(x)."""
    if k < 0:
        raise TransformError("exists_leq needs k >= 0")
    namer = FreshNamer(body)
    weak = [namer.fresh(x) for _ in range(k + 1)]
    eqs = [Eq(Var(a), Var(b)) for a, b in itertools.combinations(weak, 2)]
    negbody = to_nnf(Not(body))
    misses = [Forall(x, Or((Neq(Var(x), Var(w)), negbody))) for w in weak]
    matrix = mk_or(eqs + misses)
    for w in reversed(weak):
        matrix = Forall(w, matrix, weak_hint=True)
    return matrix


def exists_eq(k: int, x: VarName, body: Formula) -> Formula:
    """Exactly k distinct witnesses of body(x)."""
    if k == 0:
        return exists_leq(0, x, body)
    return And((exists_geq(k, x, body), exists_leq(k, x, body)))


def set_binding(names, x: VarName, body: Formula) -> Formula:
    """{names...} = {x | body(x)} — the names exhaust the witnesses of
    body but need not be pairwise distinct."""
    names = list(names)
    if not names:
        raise TransformError("set_binding needs at least one variable")
    k = len(names)
    subset = [Exists(x, And((Eq(Var(x), Var(nm)), body))) for nm in names]
    size_clauses = []
    for s in range(1, k + 1):
        count = exists_eq(s, x, body)
        if s == 1:
            size_clauses.append(count)
            continue
        spreads = []
        for subset_idx in itertools.combinations(range(k), s):
            chosen = [names[i] for i in subset_idx]
            spreads.append(mk_and(_pairwise_neq(chosen)))
        size_clauses.append(mk_and([count, mk_or(spreads)]))
    return mk_and(subset + [mk_or(size_clauses)])


# ---------------------------------------------------------------------------
# induced substructures
# ---------------------------------------------------------------------------

class InducedOracle:
    """Membership test for the hard-wired problem class Q.

    `accepts` judges structures with universe {0..s-1}; `accepts_empty`
    is the verdict on the empty structure, which finite structures cannot
    represent; `enumerate_size` yields the candidate structures of a
    given size (defaults to all structures over the signature)."""

    def __init__(self, accepts: Callable[[Structure], bool],
                 accepts_empty: bool = False,
                 enumerate_size: Optional[Callable[[int], Iterable[Structure]]] = None,
                 description: str = ""):
        self.accepts = accepts
        self.accepts_empty = accepts_empty
        self.enumerate_size = enumerate_size
        self.description = description


def position_formula(i: int, x: VarName, body: Formula, z: VarName) -> Formula:
    """body(x) and x is the i-th universe element (1-indexed) with the
    property: exactly i-1 smaller witnesses."""
    smaller = And((Atom("<", (Var(z), Var(x))), substitute(body, Var(x), Var(z))))
    if i == 1:
        return And((body, exists_leq(0, z, smaller)))
    return And((body, exists_eq(i - 1, z, smaller)))


def induced_eq(k: int, x: VarName, body: Formula, oracle: InducedOracle,
               sig: Signature, cap: Optional[int] = None,
               bigor_threshold: int = 4096) -> Formula:
    """The witnesses of body number exactly k and induce a structure in
    the oracle's class.  Requires an arithmetic signature (witnesses are
    indexed through the built-in order)."""
    if not sig.arithmetic:
        raise TransformError("induced macros need the built-in order")
    cap = cap if cap is not None else structure_cap()
    if k == 0:
        miss = exists_leq(0, x, body)
        if oracle.accepts_empty:
            return miss
        return And((miss, Exists(x, Neq(Var(x), Var(x)))))

    namer = FreshNamer(body)
    z = namer.fresh(VarName("z"))
    body = rename_bound_fresh(body, namer)
    pis = {}

    def pi(i: int, var: VarName) -> Formula:
        key = (i, var)
        if key not in pis:
            shifted = substitute(body, Var(x), Var(var)) if var != x else body
            zz = namer.fresh(z)
            smaller = And((Atom("<", (Var(zz), Var(var))),
                           substitute(body, Var(x), Var(zz))))
            count = exists_leq(0, zz, smaller) if i == 1 else exists_eq(i - 1, zz, smaller)
            pis[key] = And((shifted, count))
        return pis[key]

    arg_vars = [namer.fresh(VarName("w")) for _ in range(sig.max_arity())]

    def member_clause(struct: Structure) -> Formula:
        parts = []
        for name in sorted(sig.relations):
            arity = sig.relations[name]
            table = struct.table(name)
            for tup in itertools.product(range(1, k + 1), repeat=arity):
                args = arg_vars[:arity]
                atom = Atom(name, tuple(Var(a) for a in args))
                lit = atom if tuple(v - 1 for v in tup) in table else Not(atom)
                inner = mk_and([pi(tup[j], args[j]) for j in range(arity)] + [lit])
                for a in reversed(args):
                    inner = Exists(a, inner)
                parts.append(inner)
        if not parts:
            return Eq(Var(x), Var(x))
        return mk_and(parts)

    count_part = exists_eq(k, x, body)
    falsum = Exists(x, Neq(Var(x), Var(x)))
    if oracle.enumerate_size is not None:
        members = [member_clause(s) for s in oracle.enumerate_size(k)
                   if oracle.accepts(s)]
        if not members:
            return And((count_part, falsum))
        return mk_and([count_part, mk_or(members)])

    if sig.constants:
        raise TransformError("induced macros do not support constant symbols")
    total = count_structures(sig, k)
    if total <= min(bigor_threshold, cap):
        members = [member_clause(s) for s in enumerate_structures(sig, k, cap=cap)
                   if oracle.accepts(s)]
        if not members:
            return And((count_part, falsum))
        return mk_and([count_part, mk_or(members)])

    # lazily indexed disjunction, decoding the index into relation masks
    # exactly as enumerate_structures orders them
    from .structures import all_tuples
    rel_names = sorted(sig.relations)
    spaces = [all_tuples(k, sig.relations[nm]) for nm in rel_names]
    radices = [2 ** len(sp) for sp in spaces]

    def decode(idx: int) -> Structure:
        masks = []
        for r in reversed(radices):
            masks.append(idx % r)
            idx //= r
        masks.reverse()
        tables = {}
        for nm, sp, mask in zip(rel_names, spaces, masks):
            tables[nm] = frozenset(sp[i] for i in range(len(sp)) if mask >> i & 1)
        return Structure(sig, k, tables)

    family = IndexFamily(total, lambda: iter(range(total)),
                         f"size-{k} structures over the signature")

    def gen(idx):
        s = decode(idx)
        if oracle.accepts(s):
            return member_clause(s)
        return falsum

    big = BigOr(family, gen, free_vars(body) - {x}, None)
    return mk_and([count_part, big])


def induced_leq(k: int, x: VarName, body: Formula, oracle: InducedOracle,
                sig: Signature, cap: Optional[int] = None,
                bigor_threshold: int = 4096) -> Formula:
    """Disjunction of induced_eq over sizes 0..k."""
    return mk_or([induced_eq(s, x, body, oracle, sig, cap, bigor_threshold)
                  for s in range(k + 1)])
