"""Formula and signature representation plus the basic syntactic operations.

Formulas are immutable trees built from the node classes below.  All
transformations are pure functions returning new trees; sharing of
subtrees between formulas is allowed and encouraged (the builders for
large formula families rely on it).
"""

from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Optional, Union

from .errors import ArityError, NotNNFError, SignatureError, WeakfoError

ARITHMETIC_RELATIONS = {"<": 2, "add": 3, "mult": 3}
RESERVED_NAMES = {"<", "add", "mult", "succ", "s", "0"}


@dataclass(frozen=True)
class VarName:
    """A variable name: user-written base plus a freshness serial.

    Serial 0 is what users write directly; renaming machinery only ever
    assigns serials that do not occur anywhere in the input formula, so
    generated names never clash with existing ones.
    """

    base: str
    serial: int = 0

    def __post_init__(self):
        # names are hashed constantly by evaluator assignments
        object.__setattr__(self, "_hash", hash((self.base, self.serial)))

    def __hash__(self):
        return self._hash

    def render(self) -> str:
        if self.serial == 0:
            return self.base
        return f"{self.base}_{self.serial}"

    def __str__(self):
        return self.render()


@dataclass(frozen=True)
class Signature:
    """Relation/constant symbols; arithmetic signatures implicitly carry
    <, add, mult, succ and 0 with fixed meaning."""

    relations: dict
    constants: frozenset = frozenset()
    arithmetic: bool = False

    def __post_init__(self):
        for name, arity in self.relations.items():
            if arity < 1:
                raise SignatureError(f"relation {name!r} must have arity >= 1")
            if name in RESERVED_NAMES:
                raise SignatureError(f"{name!r} is reserved")
        for name in self.constants:
            if name in RESERVED_NAMES:
                raise SignatureError(f"{name!r} is reserved")
            if name in self.relations:
                raise SignatureError(f"{name!r} used as relation and constant")

    def arity(self, name: str) -> Optional[int]:
        if name in self.relations:
            return self.relations[name]
        if self.arithmetic and name in ARITHMETIC_RELATIONS:
            return ARITHMETIC_RELATIONS[name]
        return None

    def max_arity(self) -> int:
        arities = [a for a in self.relations.values()]
        if self.arithmetic:
            arities.append(3)
        return max(arities, default=1)

    def with_relations(self, extra: dict) -> "Signature":
        merged = dict(self.relations)
        for name, arity in extra.items():
            if name in merged:
                raise SignatureError(f"relation {name!r} already present")
            merged[name] = arity
        return Signature(merged, self.constants, self.arithmetic)


# ---------------------------------------------------------------------------
# Terms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: VarName


@dataclass(frozen=True)
class Zero:
    pass


@dataclass(frozen=True)
class Succ:
    inner: "Term"


Term = Union[Var, Zero, Succ]

ZERO = Zero()


def var(base: str, serial: int = 0) -> Var:
    return Var(VarName(base, serial))


def succ_chain(term: Term, k: int) -> Term:
    for _ in range(k):
        term = Succ(term)
    return term


def num_term(k: int) -> Term:
    """The numeral succ^k(0)."""
    return succ_chain(ZERO, k)


def term_vars(t: Term) -> frozenset:
    while isinstance(t, Succ):
        t = t.inner
    if isinstance(t, Var):
        return frozenset((t.name,))
    return frozenset()


def term_base(t: Term):
    """Innermost variable (or None for a numeral) and the succ depth."""
    k = 0
    while isinstance(t, Succ):
        t = t.inner
        k += 1
    if isinstance(t, Var):
        return t.name, k
    return None, k


# ---------------------------------------------------------------------------
# Formulas
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Atom:
    relation: str
    terms: tuple

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Neq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    children: tuple

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if len(self.children) < 2:
            raise WeakfoError("And needs at least two children")


@dataclass(frozen=True)
class Or:
    children: tuple

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if len(self.children) < 2:
            raise WeakfoError("Or needs at least two children")


@dataclass(frozen=True)
class Exists:
    name: VarName
    body: "Formula"
    weak_hint: bool = False


@dataclass(frozen=True)
class Forall:
    name: VarName
    body: "Formula"
    weak_hint: bool = False


class IndexFamily:
    """A finite, lazily iterable index set for a symbolic disjunction."""

    def __init__(self, size: int, iterate: Callable[[], Iterator], description: str = ""):
        self.size = size
        self._iterate = iterate
        self.description = description

    def __iter__(self):
        return self._iterate()

    def __len__(self):
        return self.size


@dataclass(frozen=True, eq=False)
class BigOr:
    """Symbolic disjunction over a finite index family.

    The i-th disjunct is produced on demand by ``gen(i)``; the family is
    never materialized.  ``free`` and ``qr_bound`` are supplied by the
    construction site (every disjunct has the given free variables; the
    quantifier rank of every disjunct is at most ``qr_bound``, attained
    by some disjunct).
    """

    family: IndexFamily
    gen: Callable
    free: frozenset = frozenset()
    qr_bound: Optional[int] = None


Formula = Union[Atom, Eq, Neq, Not, And, Or, Exists, Forall, BigOr]

QUANTIFIERS = (Exists, Forall)
LITERAL_TYPES = (Atom, Eq, Neq)


def mk_and(children: Iterable[Formula]) -> Formula:
    """N-ary conjunction, merging nested Ands and dropping nothing.

    A single child is returned as-is; the empty conjunction is an error
    (callers supply an explicit truth constant where it can arise).
    """
    flat = []
    for c in children:
        if isinstance(c, And):
            flat.extend(c.children)
        else:
            flat.append(c)
    if not flat:
        raise WeakfoError("empty conjunction")
    if len(flat) == 1:
        return flat[0]
    return And(tuple(flat))


def mk_or(children: Iterable[Formula]) -> Formula:
    flat = []
    for c in children:
        if isinstance(c, Or):
            flat.extend(c.children)
        else:
            flat.append(c)
    if not flat:
        raise WeakfoError("empty disjunction")
    if len(flat) == 1:
        return flat[0]
    return Or(tuple(flat))


def true_formula() -> Formula:
    """A closed tautology that needs no signature support."""
    return Forall(VarName("u"), Eq(Var(VarName("u")), Var(VarName("u"))))


def false_formula() -> Formula:
    return Exists(VarName("u"), Neq(Var(VarName("u")), Var(VarName("u"))))


def taut_eq(v: VarName) -> Formula:
    """The tautological literal v = v (used to pin down a variable
    occurrence count without changing semantics)."""
    return Eq(Var(v), Var(v))


# ---------------------------------------------------------------------------
# Traversal helpers
# ---------------------------------------------------------------------------

def children_of(f: Formula) -> tuple:
    if isinstance(f, (And, Or)):
        return f.children
    if isinstance(f, Not):
        return (f.body,)
    if isinstance(f, QUANTIFIERS):
        return (f.body,)
    return ()


def replace_children(f: Formula, new: tuple) -> Formula:
    if isinstance(f, And):
        return And(new)
    if isinstance(f, Or):
        return Or(new)
    if isinstance(f, Not):
        return Not(new[0])
    if isinstance(f, Exists):
        return Exists(f.name, new[0], f.weak_hint)
    if isinstance(f, Forall):
        return Forall(f.name, new[0], f.weak_hint)
    return f


def subformulas(f: Formula) -> Iterator[Formula]:
    """Preorder traversal.  BigOr nodes are yielded but not entered."""
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        if not isinstance(g, BigOr):
            stack.extend(reversed(children_of(g)))


def formula_size(f: Formula) -> int:
    return sum(1 for _ in subformulas(f))


# ---------------------------------------------------------------------------
# Variable accounting
# ---------------------------------------------------------------------------

def free_vars(f: Formula) -> frozenset:
    if isinstance(f, Atom):
        out = frozenset()
        for t in f.terms:
            out |= term_vars(t)
        return out
    if isinstance(f, (Eq, Neq)):
        return term_vars(f.left) | term_vars(f.right)
    if isinstance(f, Not):
        return free_vars(f.body)
    if isinstance(f, (And, Or)):
        out = frozenset()
        for c in f.children:
            out |= free_vars(c)
        return out
    if isinstance(f, QUANTIFIERS):
        return free_vars(f.body) - {f.name}
    if isinstance(f, BigOr):
        return f.free
    raise WeakfoError(f"unknown node {f!r}")


def bound_vars(f: Formula) -> frozenset:
    """Set of variable names bound anywhere in the formula."""
    out = set()
    for g in subformulas(f):
        if isinstance(g, QUANTIFIERS):
            out.add(g.name)
        elif isinstance(g, BigOr):
            # Disjuncts manage their own scopes; report the construction's
            # declared bound set via a probe of the first disjunct.
            for i in g.family:
                out |= bound_vars(g.gen(i))
                break
    return frozenset(out)


def all_vars(f: Formula) -> frozenset:
    return free_vars(f) | bound_vars(f)


def quantifier_rank(f: Formula) -> int:
    if isinstance(f, LITERAL_TYPES):
        return 0
    if isinstance(f, Not):
        return quantifier_rank(f.body)
    if isinstance(f, (And, Or)):
        return max(quantifier_rank(c) for c in f.children)
    if isinstance(f, QUANTIFIERS):
        return 1 + quantifier_rank(f.body)
    if isinstance(f, BigOr):
        if f.qr_bound is not None:
            return f.qr_bound
        best = 0
        count = 0
        for i in f.family:
            best = max(best, quantifier_rank(f.gen(i)))
            count += 1
            if count > 4096:
                raise WeakfoError("BigOr too large to rank without a qr_bound")
        return best
    raise WeakfoError(f"unknown node {f!r}")


# ---------------------------------------------------------------------------
# Substitution and renaming
# ---------------------------------------------------------------------------

def _term_substitute(t: Term, replace: Term, with_: Term) -> Term:
    if t == replace:
        return with_
    if isinstance(t, Succ):
        return Succ(_term_substitute(t.inner, replace, with_))
    return t


def substitute(f: Formula, replace: Term, with_: Term) -> Formula:
    """Replace free occurrences of the term `replace` by `with_`.

    Raises CaptureError if a binder of f binds a variable of `with_`
    while `replace` occurs free below it; callers rename first.
    """
    from .errors import CaptureError

    target_vars = term_vars(replace)
    new_vars = term_vars(with_)

    def go(g: Formula) -> Formula:
        if isinstance(g, Atom):
            return Atom(g.relation, tuple(_term_substitute(t, replace, with_) for t in g.terms))
        if isinstance(g, Eq):
            return Eq(_term_substitute(g.left, replace, with_), _term_substitute(g.right, replace, with_))
        if isinstance(g, Neq):
            return Neq(_term_substitute(g.left, replace, with_), _term_substitute(g.right, replace, with_))
        if isinstance(g, Not):
            return Not(go(g.body))
        if isinstance(g, (And, Or)):
            return replace_children(g, tuple(go(c) for c in g.children))
        if isinstance(g, QUANTIFIERS):
            if g.name in target_vars:
                return g  # occurrences below are bound, not ours
            if g.name in new_vars:
                if _occurs_free_term(g.body, replace):
                    raise CaptureError(
                        f"substitution would capture {g.name.render()}")
                return g
            return replace_children(g, (go(g.body),))
        if isinstance(g, BigOr):
            if isinstance(replace, Var):
                new_free = g.free - {replace.name}
            else:
                new_free = g.free
            if target_vars & g.free:
                new_free = new_free | new_vars
            return BigOr(g.family, lambda i, _g=g: substitute(_g.gen(i), replace, with_),
                         new_free, g.qr_bound)
        raise WeakfoError(f"unknown node {g!r}")

    return go(f)


def _occurs_free_term(f: Formula, t: Term) -> bool:
    tv = term_vars(t)

    def term_has(u: Term) -> bool:
        while True:
            if u == t:
                return True
            if isinstance(u, Succ):
                u = u.inner
            else:
                return False

    if isinstance(f, Atom):
        return any(term_has(u) for u in f.terms)
    if isinstance(f, (Eq, Neq)):
        return term_has(f.left) or term_has(f.right)
    if isinstance(f, Not):
        return _occurs_free_term(f.body, t)
    if isinstance(f, (And, Or)):
        return any(_occurs_free_term(c, t) for c in f.children)
    if isinstance(f, QUANTIFIERS):
        if f.name in tv:
            return False
        return _occurs_free_term(f.body, t)
    if isinstance(f, BigOr):
        return bool(tv & f.free)
    return False


def max_serial(f: Formula) -> int:
    """Largest serial used by any variable occurring in f."""
    best = 0
    for g in subformulas(f):
        if isinstance(g, QUANTIFIERS):
            best = max(best, g.name.serial)
        elif isinstance(g, Atom):
            for t in g.terms:
                for v in term_vars(t):
                    best = max(best, v.serial)
        elif isinstance(g, (Eq, Neq)):
            for v in term_vars(g.left) | term_vars(g.right):
                best = max(best, v.serial)
        elif isinstance(g, BigOr):
            for v in g.free:
                best = max(best, v.serial)
    return best


class FreshNamer:
    """Hands out variable names with serials above everything seen so far."""

    def __init__(self, *formulas: Formula, floor: int = 0):
        self._next = max([floor] + [max_serial(f) for f in formulas]) + 1

    def fresh(self, base_on: VarName) -> VarName:
        name = VarName(base_on.base, self._next)
        self._next += 1
        return name

    def fresh_base(self, base: str) -> VarName:
        name = VarName(base, self._next)
        self._next += 1
        return name


def rename_bound_fresh(f: Formula, namer: Optional[FreshNamer] = None) -> Formula:
    """Rename all binders so bound names are pairwise distinct and
    distinct from every free variable."""
    namer = namer or FreshNamer(f)

    def go(g: Formula, env: dict) -> Formula:
        if isinstance(g, Atom):
            return Atom(g.relation, tuple(_rename_term(t, env) for t in g.terms))
        if isinstance(g, Eq):
            return Eq(_rename_term(g.left, env), _rename_term(g.right, env))
        if isinstance(g, Neq):
            return Neq(_rename_term(g.left, env), _rename_term(g.right, env))
        if isinstance(g, Not):
            return Not(go(g.body, env))
        if isinstance(g, (And, Or)):
            return replace_children(g, tuple(go(c, env) for c in g.children))
        if isinstance(g, Exists):
            fresh = namer.fresh(g.name)
            inner = dict(env)
            inner[g.name] = fresh
            return Exists(fresh, go(g.body, inner), g.weak_hint)
        if isinstance(g, Forall):
            fresh = namer.fresh(g.name)
            inner = dict(env)
            inner[g.name] = fresh
            return Forall(fresh, go(g.body, inner), g.weak_hint)
        if isinstance(g, BigOr):
            # Disjunct scopes are independent; each is freshened on demand
            # with serials above everything the construction has seen.
            env_copy = dict(env)
            floor = namer._next

            def gen(i, _g=g, _e=env_copy, _fl=floor):
                inner = _apply_env(_g.gen(i), _e)
                return rename_bound_fresh(inner, FreshNamer(inner, floor=_fl))

            return BigOr(g.family, gen,
                         frozenset(env_copy.get(v, v) for v in g.free),
                         g.qr_bound)
        raise WeakfoError(f"unknown node {g!r}")

    return go(f, {})


def _apply_env(f: Formula, env: dict) -> Formula:
    out = f
    for old, new in env.items():
        if old != new:
            out = substitute(out, Var(old), Var(new))
    return out


def _rename_term(t: Term, env: dict) -> Term:
    if isinstance(t, Var):
        return Var(env.get(t.name, t.name))
    if isinstance(t, Succ):
        return Succ(_rename_term(t.inner, env))
    return t


def has_distinct_binders(f: Formula) -> bool:
    seen = set()
    free = free_vars(f)
    for g in subformulas(f):
        if isinstance(g, QUANTIFIERS):
            if g.name in seen or g.name in free:
                return False
            seen.add(g.name)
    return True


# ---------------------------------------------------------------------------
# Negation normal form and flattening
# ---------------------------------------------------------------------------

def to_nnf(f: Formula) -> Formula:
    if isinstance(f, (Atom, Eq, Neq)):
        return f
    if isinstance(f, Not):
        return _nnf_neg(f.body)
    if isinstance(f, (And, Or)):
        return replace_children(f, tuple(to_nnf(c) for c in f.children))
    if isinstance(f, QUANTIFIERS):
        return replace_children(f, (to_nnf(f.body),))
    if isinstance(f, BigOr):
        return BigOr(f.family, lambda i, _f=f: to_nnf(_f.gen(i)), f.free, f.qr_bound)
    raise WeakfoError(f"unknown node {f!r}")


def _nnf_neg(f: Formula) -> Formula:
    if isinstance(f, Atom):
        return Not(f)
    if isinstance(f, Eq):
        return Neq(f.left, f.right)
    if isinstance(f, Neq):
        return Eq(f.left, f.right)
    if isinstance(f, Not):
        return to_nnf(f.body)
    if isinstance(f, And):
        return Or(tuple(_nnf_neg(c) for c in f.children))
    if isinstance(f, Or):
        return And(tuple(_nnf_neg(c) for c in f.children))
    if isinstance(f, Exists):
        return Forall(f.name, _nnf_neg(f.body), f.weak_hint)
    if isinstance(f, Forall):
        return Exists(f.name, _nnf_neg(f.body), f.weak_hint)
    if isinstance(f, BigOr):
        raise WeakfoError("cannot negate a symbolic disjunction lazily")
    raise WeakfoError(f"unknown node {f!r}")


def is_nnf(f: Formula) -> bool:
    for g in subformulas(f):
        if isinstance(g, Not) and not isinstance(g.body, Atom):
            return False
    return True


def require_nnf(f: Formula):
    if not is_nnf(f):
        raise NotNNFError("formula is not in negation normal form")


def flatten(f: Formula) -> Formula:
    """Distribute conjunctions over disjunctions until no subformula has
    the shape (a | b) & c or a & (b | c).  Quantifier structure, rank and
    the set of bound variables are untouched."""
    if isinstance(f, LITERAL_TYPES):
        return f
    if isinstance(f, Not):
        return Not(flatten(f.body))
    if isinstance(f, QUANTIFIERS):
        return replace_children(f, (flatten(f.body),))
    if isinstance(f, Or):
        return mk_or(flatten(c) for c in f.children)
    if isinstance(f, BigOr):
        return BigOr(f.family, lambda i, _f=f: flatten(_f.gen(i)), f.free, f.qr_bound)
    if isinstance(f, And):
        kids = [flatten(c) for c in f.children]
        for idx, c in enumerate(kids):
            if isinstance(c, Or):
                rest = kids[:idx] + kids[idx + 1:]
                return mk_or(flatten(mk_and([alt] + rest)) for alt in c.children)
            if isinstance(c, BigOr):
                rest = kids[:idx] + kids[idx + 1:]
                free = c.free
                for r in rest:
                    free = free | free_vars(r)
                return BigOr(c.family,
                             lambda i, _c=c, _r=tuple(rest): flatten(mk_and([_c.gen(i)] + list(_r))),
                             free, None)
        return mk_and(kids)
    raise WeakfoError(f"unknown node {f!r}")


def alpha_equal(f: Formula, g: Formula, symmetric: frozenset = frozenset()) -> bool:
    """Structural equality modulo a bijective renaming of bound variables.
    Free variables must match exactly.  Relations listed in `symmetric`
    may have their two arguments swapped."""

    def terms_match(s, t, fwd, bwd):
        if isinstance(s, Zero) and isinstance(t, Zero):
            return True
        if isinstance(s, Succ) and isinstance(t, Succ):
            return terms_match(s.inner, t.inner, fwd, bwd)
        if isinstance(s, Var) and isinstance(t, Var):
            if s.name in fwd:
                return fwd[s.name] == t.name
            if t.name in bwd:
                return False
            return s.name == t.name
        return False

    def go(a, b, fwd, bwd):
        if type(a) is not type(b):
            return False
        if isinstance(a, Atom):
            if a.relation != b.relation or len(a.terms) != len(b.terms):
                return False
            if all(terms_match(s, t, fwd, bwd) for s, t in zip(a.terms, b.terms)):
                return True
            if a.relation in symmetric and len(a.terms) == 2:
                return all(terms_match(s, t, fwd, bwd)
                           for s, t in zip(a.terms, reversed(b.terms)))
            return False
        if isinstance(a, (Eq, Neq)):
            if terms_match(a.left, b.left, fwd, bwd) and terms_match(a.right, b.right, fwd, bwd):
                return True
            return terms_match(a.left, b.right, fwd, bwd) and \
                terms_match(a.right, b.left, fwd, bwd)
        if isinstance(a, Not):
            return go(a.body, b.body, fwd, bwd)
        if isinstance(a, (And, Or)):
            if len(a.children) != len(b.children):
                return False
            return all(go(x, y, fwd, bwd) for x, y in zip(a.children, b.children))
        if isinstance(a, QUANTIFIERS):
            fwd2 = dict(fwd)
            bwd2 = dict(bwd)
            fwd2[a.name] = b.name
            bwd2[b.name] = a.name
            return go(a.body, b.body, fwd2, bwd2)
        if isinstance(a, BigOr):
            return a is b
        return False

    return go(f, g, {}, {})
