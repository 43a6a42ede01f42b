"""Replacing color predicates by hash formulas, and the small-universe
patch that hard-wires a problem below a size threshold."""

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

from .errors import CapExceeded, NotNNFError, TransformError, WeakfoError, structure_cap
from .evaluator import color_names
from .rho import RHO_FREE, build_rho
from .structures import Structure
from .syntax import (And, Atom, BigOr, Eq, Exists, Forall, Formula,
                     IndexFamily, Neq, Not, Or, Signature, Var, VarName, ZERO,
                     bound_vars, children_of, free_vars, max_serial, mk_and,
                     mk_or, num_term, quantifier_rank, rename_bound_fresh,
                     replace_children, substitute)

DEFAULT_THRESHOLD_MARGIN = 0


@dataclass(frozen=True)
class CCResult:
    """Outcome of a color replacement: the τ-formula, the least universe
    size it is claimed for, and the measured growth of rank/variables."""

    formula: Formula
    threshold: int
    witness_bound: int
    added_qr: int
    added_vars: int


def _color_index(relation: str, k: int) -> Optional[int]:
    if relation.startswith("C") and relation[1:].isdigit():
        i = int(relation[1:])
        if 1 <= i <= k:
            return i
    return None


def check_no_color_under_universal(f: Formula, k: int):
    # Symbolic disjunctions are only ever produced by this module and are
    # color-free; small families are verified, huge ones trusted.
    def walk(g, under):
        if isinstance(g, Atom) and _color_index(g.relation, k) is not None:
            if under:
                raise TransformError(
                    f"color predicate {g.relation} occurs inside a universal scope")
            if len(g.terms) != 1:
                raise TransformError(f"color predicate {g.relation} must be unary")
        if isinstance(g, BigOr):
            if g.family.size <= 64:
                for i in g.family:
                    walk(g.gen(i), under)
            return
        for c in children_of(g):
            walk(c, under or isinstance(g, Forall))

    walk(f, False)


def eliminate_negated_colors(f: Formula, k: int) -> Formula:
    """Replace every literal !Ci(t) by the disjunction of the other
    colors (false when k = 1)."""
    if isinstance(f, Not) and isinstance(f.body, Atom):
        i = _color_index(f.body.relation, k)
        if i is not None:
            t = f.body.terms[0]
            others = [Atom(f"C{l}", (t,)) for l in range(1, k + 1) if l != i]
            if not others:
                return Neq(t, t)
            return mk_or(others)
        return f
    kids = children_of(f)
    if not kids or isinstance(f, BigOr):
        return f
    return replace_children(f, tuple(eliminate_negated_colors(c, k) for c in kids))


def small_witness_bound(f: Formula, k: int) -> int:
    """Recursive bound on the total size of color-class witnesses."""

    def color_free(g) -> bool:
        if isinstance(g, Atom):
            return _color_index(g.relation, k) is None
        if isinstance(g, BigOr):
            if g.family.size <= 64:
                return all(color_free(g.gen(i)) for i in g.family)
            return True  # produced color-free by this module
        return all(color_free(c) for c in children_of(g))

    def bound(g) -> int:
        if isinstance(g, Atom):
            return 1 if _color_index(g.relation, k) is not None else 0
        if isinstance(g, (Eq, Neq)):
            return 0
        if isinstance(g, Not):
            if not color_free(g.body):
                raise TransformError("color predicate under negation")
            return 0
        if isinstance(g, And):
            return sum(bound(c) for c in g.children)
        if isinstance(g, Or):
            return max(bound(c) for c in g.children)
        if isinstance(g, Exists):
            return bound(g.body)
        if isinstance(g, Forall):
            if not color_free(g.body):
                raise TransformError("color predicate inside a universal scope")
            return 0
        if isinstance(g, BigOr):
            if g.family.size <= 64:
                best = 0
                for i in g.family:
                    best = max(best, bound(g.gen(i)))
                return best
            return 0  # produced color-free by this module
        raise WeakfoError(f"unknown node {g!r}")

    return bound(f)


def cc_threshold(m: int, margin: int = DEFAULT_THRESHOLD_MARGIN) -> int:
    """Least n with m^2 * log2(n) < n (and n >= 2 so the degenerate hash
    parameters exist), plus a safety margin for the hash lemma's
    unquantified onset."""
    if m == 0:
        return 1 + margin
    n = 2
    while not (m * m * math.log2(n) < n):
        n += 1
    return n + margin


def strip_colors_signature(sig: Signature, k: int) -> Signature:
    kept = {name: arity for name, arity in sig.relations.items()
            if _color_index(name, k) is None}
    return Signature(kept, sig.constants, sig.arithmetic)


def cc_transform(f: Formula, k: int,
                 margin: int = DEFAULT_THRESHOLD_MARGIN) -> CCResult:
    """Replace the color predicates C1..Ck of an NNF formula (no color
    inside a universal scope) by hash formulas, quantifying the hash
    parameters existentially and disjoining over all bucket maps g.

    On structures of size >= the reported threshold the result is
    equivalent to "some k-coloring satisfies f"."""
    from .syntax import is_nnf
    if not is_nnf(f):
        raise NotNNFError("color replacement requires negation normal form")
    if k < 1:
        raise TransformError("need at least one color")
    check_no_color_under_universal(f, k)
    f = eliminate_negated_colors(f, k)
    m = small_witness_bound(f, k)

    base_qr = quantifier_rank(f)
    base_bound = bound_vars(f)

    f = rename_bound_fresh(f)
    floor = max(max_serial(f), 10_000)
    rho = build_rho(serial_floor=floor)
    rk, rp, rq, rx, ry = RHO_FREE
    pool_serial = 0
    taken = {(v.base, v.serial) for v in free_vars(f) | bound_vars(f)}
    while any((base, pool_serial) in taken for base in ("p", "q", "hk", "hy")):
        pool_serial += 1
    p_var = VarName("p", pool_serial)
    q_var = VarName("q", pool_serial)
    hk_var = VarName("hk", pool_serial)
    hy_var = VarName("hy", pool_serial)

    rho_pq = substitute(substitute(rho, Var(rp), Var(p_var)), Var(rq), Var(q_var))
    rho_pq = substitute(substitute(rho_pq, Var(rk), Var(hk_var)), Var(ry), Var(hy_var))

    mm = m * m

    def hash_clause(term, y: int) -> Formula:
        """exists hk, hy bound to the numerals m and y with rho holding."""
        inner = substitute(rho_pq, Var(rx), term)
        body = mk_and([Eq(num_term(m), Var(hk_var)),
                       Eq(num_term(y), Var(hy_var)),
                       inner])
        return Exists(hk_var, Exists(hy_var, body))

    # one shared clause per (color-atom occurrence, hash value)
    site_clauses = {}

    def clauses_for(atom: Atom):
        key = id(atom)
        entry = site_clauses.get(key)
        if entry is None:
            entry = (atom, [hash_clause(atom.terms[0], y) for y in range(mm)])
            site_clauses[key] = entry
        return entry[1]

    def replace_colors(g: Formula, pick) -> Formula:
        if isinstance(g, Atom):
            i = _color_index(g.relation, k)
            if i is None:
                return g
            chosen = [c for y, c in enumerate(clauses_for(g)) if pick(y) == i]
            if not chosen:
                t = g.terms[0]
                return Neq(t, t)
            return mk_or(chosen)
        kids = children_of(g)
        if not kids:
            return g
        if isinstance(g, BigOr):
            return BigOr(g.family, lambda i, _g=g: replace_colors(_g.gen(i), pick),
                         g.free, None)
        return replace_children(g, tuple(replace_colors(c, pick) for c in kids))

    def gen(index: int) -> Formula:
        digits = []
        v = index
        for _ in range(mm):
            digits.append(v % k + 1)
            v //= k
        phi_g = replace_colors(f, lambda y: digits[y])
        return Exists(p_var, Exists(q_var, phi_g))

    family_size = k ** mm
    family = IndexFamily(family_size, lambda: iter(range(family_size)),
                         f"bucket maps {{0..{mm - 1}}} -> {{1..{k}}}")

    # representative with every hash clause present bounds the rank and
    # variable growth of every disjunct
    representative = Exists(p_var, Exists(q_var, replace_colors(f, lambda y: 0)))
    rep_all = Exists(p_var, Exists(q_var,
                                   _replace_colors_full(f, clauses_for, k)))
    result_qr = max(quantifier_rank(rep_all), quantifier_rank(representative))
    result = BigOr(family, gen, free_vars(f), qr_bound=result_qr)

    added_qr = result_qr - base_qr
    added_vars = len(bound_vars(rep_all)) - len(base_bound)
    return CCResult(result, cc_threshold(m, margin), m, added_qr, added_vars)


def _replace_colors_full(g: Formula, clauses_for, k: int) -> Formula:
    """Variant where every color atom becomes the disjunction over all
    hash values; structurally dominates every actual disjunct."""
    if isinstance(g, Atom):
        if _color_index(g.relation, k) is not None:
            return mk_or(clauses_for(g))
        return g
    kids = children_of(g)
    if not kids or isinstance(g, BigOr):
        return g
    return replace_children(g, tuple(_replace_colors_full(c, clauses_for, k)
                                     for c in kids))


# ---------------------------------------------------------------------------
# The small-universe patch
# ---------------------------------------------------------------------------

class PatchOracle:
    """Decision procedure for the problem on small structures.

    `decide` judges a structure; `enumerate_size` yields every structure
    of the given size from the problem's domain (for instance all
    undirected graphs when the problem lives on graphs)."""

    def __init__(self, decide: Callable[[Structure], bool],
                 enumerate_size: Callable[[int], Iterable[Structure]],
                 description: str = ""):
        self.decide = decide
        self.enumerate_size = enumerate_size
        self.description = description


def universe_at_least(m: int) -> Formula:
    """True exactly on universes of size >= m (clamped successor terms)."""
    if m <= 1:
        return Eq(ZERO, ZERO)
    return Neq(num_term(m - 2), num_term(m - 1))


def _universe_exactly(s: int) -> Formula:
    # size >= s and not size >= s+1
    return mk_and([universe_at_least(s), Eq(num_term(s - 1), num_term(s))])


def diagram(struct: Structure) -> Formula:
    """Quantifier-free description of a structure via successor terms;
    covers every relation symbol, positives and negatives."""
    import itertools
    if struct.constants:
        raise TransformError("hard-wiring structures with constants is unsupported")
    parts = []
    for name in sorted(struct.sig.relations):
        arity = struct.sig.relations[name]
        table = struct.table(name)
        for tup in itertools.product(range(struct.size), repeat=arity):
            atom = Atom(name, tuple(num_term(v) for v in tup))
            parts.append(atom if tup in table else Not(atom))
    if not parts:
        return Eq(ZERO, ZERO)
    return mk_and(parts)


def patch_eventually(f: Formula, oracle: PatchOracle, m: int,
                     cap: Optional[int] = None) -> Formula:
    """(alpha and f) or beta: alpha restricts f to universes of size >= m
    and beta hard-wires the oracle's verdicts below m."""
    cap = cap if cap is not None else structure_cap()
    alpha = universe_at_least(m)
    clauses = []
    seen = 0
    for s in range(1, m):
        members = []
        for struct in oracle.enumerate_size(s):
            seen += 1
            if seen > cap:
                raise CapExceeded(f"more than {cap} structures below size {m}")
            if oracle.decide(struct):
                members.append(diagram(struct))
        if members:
            clauses.append(mk_and([_universe_exactly(s), mk_or(members)]))
    patched = And((alpha, f))
    if clauses:
        return mk_or([patched] + clauses)
    return patched
