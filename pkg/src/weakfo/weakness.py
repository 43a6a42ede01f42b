"""Classification of quantifiers as weak or strong.

An existential binder ex x (body) is strong when some universal binding
inside the body depends on x, or when some conjunction inside the body
uses x on two or more sides in literals other than plain inequalities
x != y.  Universal binders are classified dually (existential bindings,
disjunctions, plain equalities x = y).  Everything else is weak.

A self-inequality x != x counts as an inequality literal here (it is of
the shape "x != y" with y chosen as x), so it never makes a quantifier
strong; the dual convention applies to x = x.
"""

from dataclasses import dataclass, field

from .errors import DuplicateBindersError, NotNNFError, WeakfoError
from .syntax import (And, Atom, BigOr, Eq, Exists, Forall, Formula, Neq, Not,
                     Or, Var, VarName, children_of, free_vars,
                     has_distinct_binders, is_nnf, term_vars)

WEAK_EXISTENTIAL = "weak-existential"
WEAK_UNIVERSAL = "weak-universal"
STRONG = "strong"


@dataclass(frozen=True)
class QuantifierInfo:
    path: tuple
    name: VarName
    kind: str            # "exists" | "forall"
    classification: str  # WEAK_EXISTENTIAL | WEAK_UNIVERSAL | STRONG
    weak_hint: bool


@dataclass(frozen=True)
class QuantifierClassification:
    """Per-quantifier kinds plus the two rank notions.

    ``strong_qr`` ignores weak existentials only (universal binders
    always count), which is the notion the base elimination theorem is
    stated for; ``strong_qr_mixed`` ignores weak quantifiers of both
    polarities, the notion used by the macro expansion headers.
    ``strong_bound`` holds the variables of strong-classified binders.
    """

    quantifiers: tuple
    strong_qr: int
    strong_qr_mixed: int
    strong_bound: frozenset

    def kind_at(self, path: tuple) -> str:
        for q in self.quantifiers:
            if q.path == path:
                return q.classification
        raise WeakfoError(f"no quantifier at path {path}")

    @property
    def weak_names(self) -> frozenset:
        return frozenset(q.name for q in self.quantifiers
                         if q.classification != STRONG)

    @property
    def by_path(self) -> dict:
        return {q.path: q for q in self.quantifiers}


def _literal_vars_nonexempt_existential(f: Formula) -> frozenset:
    """Variables occurring in this literal unless it is a plain
    variable-variable inequality (the exempt shape for existentials)."""
    if isinstance(f, Neq) and isinstance(f.left, Var) and isinstance(f.right, Var):
        return frozenset()
    return free_vars(f)


def _literal_vars_nonexempt_universal(f: Formula) -> frozenset:
    if isinstance(f, Eq) and isinstance(f.left, Var) and isinstance(f.right, Var):
        return frozenset()
    return free_vars(f)


def _is_literal(f: Formula) -> bool:
    return isinstance(f, (Atom, Eq, Neq)) or (isinstance(f, Not) and isinstance(f.body, Atom))


@dataclass
class _Facts:
    # variables with a non-exempt literal occurrence in the subtree
    nonexempt_e: frozenset
    nonexempt_u: frozenset
    # variables strongified by a conjunction / disjunction in the subtree
    and_strong: frozenset
    or_strong: frozenset
    # variables some universal / existential binding below depends on
    forall_dep: frozenset
    exists_dep: frozenset


def _gather(f: Formula, facts: dict) -> _Facts:
    if isinstance(f, BigOr):
        raise WeakfoError(
            "classification does not traverse symbolic disjunctions; "
            "materialize or sample them first")
    if _is_literal(f):
        out = _Facts(_literal_vars_nonexempt_existential(f),
                     _literal_vars_nonexempt_universal(f),
                     frozenset(), frozenset(), frozenset(), frozenset())
        facts[id(f)] = (f, out)
        return out
    kids = [_gather(c, facts) for c in children_of(f)]
    ne = frozenset().union(*[k.nonexempt_e for k in kids]) if kids else frozenset()
    nu = frozenset().union(*[k.nonexempt_u for k in kids]) if kids else frozenset()
    a_s = frozenset().union(*[k.and_strong for k in kids]) if kids else frozenset()
    o_s = frozenset().union(*[k.or_strong for k in kids]) if kids else frozenset()
    fd = frozenset().union(*[k.forall_dep for k in kids]) if kids else frozenset()
    ed = frozenset().union(*[k.exists_dep for k in kids]) if kids else frozenset()
    if isinstance(f, And):
        counts = {}
        for k in kids:
            for v in k.nonexempt_e:
                counts[v] = counts.get(v, 0) + 1
        a_s = a_s | frozenset(v for v, c in counts.items() if c >= 2)
    if isinstance(f, Or):
        counts = {}
        for k in kids:
            for v in k.nonexempt_u:
                counts[v] = counts.get(v, 0) + 1
        o_s = o_s | frozenset(v for v, c in counts.items() if c >= 2)
    if isinstance(f, Forall):
        fd = fd | (free_vars(f.body) - {f.name})
    if isinstance(f, Exists):
        ed = ed | (free_vars(f.body) - {f.name})
    out = _Facts(ne, nu, a_s, o_s, fd, ed)
    facts[id(f)] = (f, out)
    return out


def depends_on(f: Formula, path: tuple) -> frozenset:
    """Variables the quantifier at `path` depends on: the free variables
    of its body other than the bound one."""
    node = node_at(f, path)
    if not isinstance(node, (Exists, Forall)):
        raise WeakfoError(f"no quantifier at path {path}")
    return free_vars(node.body) - {node.name}


def node_at(f: Formula, path: tuple) -> Formula:
    node = f
    for i in path:
        kids = children_of(node)
        if i >= len(kids):
            raise WeakfoError(f"path {path} leaves the formula")
        node = kids[i]
    return node


def classify(f: Formula) -> QuantifierClassification:
    if not is_nnf(f):
        raise NotNNFError("classification requires negation normal form")
    if not has_distinct_binders(f):
        raise DuplicateBindersError(
            "classification requires pairwise distinct bound variables")
    facts = {}
    _gather(f, facts)

    quantifiers = []

    def walk(g: Formula, path: tuple):
        if isinstance(g, (Exists, Forall)):
            body_facts = facts[id(g.body)][1]
            if isinstance(g, Exists):
                strong = (g.name in body_facts.forall_dep
                          or g.name in body_facts.and_strong)
                cls = STRONG if strong else WEAK_EXISTENTIAL
                kind = "exists"
            else:
                strong = (g.name in body_facts.exists_dep
                          or g.name in body_facts.or_strong)
                cls = STRONG if strong else WEAK_UNIVERSAL
                kind = "forall"
            quantifiers.append(QuantifierInfo(path, g.name, kind, cls, g.weak_hint))
        for i, c in enumerate(children_of(g)):
            walk(c, path + (i,))

    walk(f, ())
    by_path = {q.path: q for q in quantifiers}

    def rank(g: Formula, path: tuple, ignored: tuple) -> int:
        kids = children_of(g)
        sub = max((rank(c, path + (i,), ignored) for i, c in enumerate(kids)),
                  default=0)
        if isinstance(g, (Exists, Forall)) and by_path[path].classification not in ignored:
            return 1 + sub
        return sub

    strong_qr = rank(f, (), (WEAK_EXISTENTIAL,))
    strong_qr_mixed = rank(f, (), (WEAK_EXISTENTIAL, WEAK_UNIVERSAL))
    strong_bound = frozenset(q.name for q in quantifiers if q.classification == STRONG)
    return QuantifierClassification(tuple(quantifiers), strong_qr, strong_qr_mixed,
                                    strong_bound)


def verify_hints(f: Formula) -> list:
    """Quantifiers whose weak-hint marker disagrees with the analysis.
    Unhinted quantifiers make no claim and are never reported."""
    cls = classify(f)
    mismatches = []
    for q in cls.quantifiers:
        if q.weak_hint and q.classification == STRONG:
            mismatches.append(q)
    return mismatches


def simple_weak_existentials(f: Formula) -> frozenset:
    """Fast sufficient condition: existentially bound variables that no
    universal depends on and that occur in at most one literal which is
    not an inequality.  Diagnostic only; `classify` is authoritative."""
    if not has_distinct_binders(f):
        raise DuplicateBindersError("requires pairwise distinct bound variables")
    facts = {}
    _gather(f, facts)
    counts = {}

    def count_literals(g: Formula):
        if _is_literal(g):
            for v in _literal_vars_nonexempt_existential(g):
                counts[v] = counts.get(v, 0) + 1
            return
        for c in children_of(g):
            count_literals(c)

    count_literals(f)
    out = set()
    for g in _all_nodes(f):
        if isinstance(g, Exists):
            body_facts = facts[id(g.body)][1]
            if g.name not in body_facts.forall_dep and counts.get(g.name, 0) <= 1:
                out.add(g.name)
    return frozenset(out)


def _all_nodes(f: Formula):
    yield f
    if not isinstance(f, BigOr):
        for c in children_of(f):
            yield from _all_nodes(c)


def materialize_bigor(f: Formula, pick) -> Formula:
    """Replace every symbolic disjunction by its `pick(family)`-th
    disjunct; used for sampled classification of huge disjunctions."""
    if isinstance(f, BigOr):
        chosen = pick(f.family)
        return materialize_bigor(f.gen(chosen), pick)
    kids = children_of(f)
    if not kids:
        return f
    from .syntax import replace_children
    return replace_children(f, tuple(materialize_bigor(c, pick) for c in kids))


def strong_block_depth(f: Formula) -> int:
    """Nesting depth of maximal blocks of strong-classified quantifiers.

    A run of adjacent strong binders counts once; this is the "levels"
    reading used by the tree-decomposition embedding claim, where each
    bag contributes one block no matter how many fresh vertices it binds.
    """
    cls = classify(f)
    by_path = cls.by_path

    def go(g, path, parent_strong):
        kids = children_of(g)
        here = 0
        is_strong = (isinstance(g, (Exists, Forall))
                     and by_path[path].classification == STRONG)
        if is_strong and not parent_strong:
            here = 1
        sub = max((go(c, path + (i,), is_strong) for i, c in enumerate(kids)),
                  default=0)
        return here + sub

    return go(f, (), False)
