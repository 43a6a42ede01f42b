"""The staged elimination of weak existential quantifiers.

The pipeline rewrites marked weak quantifiers: hoisting them into blocks
behind universals, normalizing the literals they touch, accumulating
their inequalities, completing those to full distinctness via a
disjunction over allowed partitions, and finally replacing each block by
a hash-parameter formula through the color replacement.

Marks (the weak_hint flag) drive the pipeline; they are validated
against the classification first, so only genuinely weak quantifiers are
ever touched.  Quantifiers that are weak but unmarked simply stay — a
sound choice the source formulas exercise deliberately.
"""

import itertools
from dataclasses import dataclass, field
from typing import Optional

from .colorcoding import CCResult, cc_transform
from .errors import TransformError, WeakfoError
from .syntax import (And, Atom, BigOr, Eq, Exists, Forall, Formula,
                     FreshNamer, Neq, Not, Or, Signature, Succ, Var, VarName,
                     Zero, bound_vars, children_of, flatten, free_vars,
                     is_nnf, max_serial, mk_and, mk_or, num_term,
                     quantifier_rank, rename_bound_fresh, replace_children,
                     substitute, term_vars, true_formula)
from .weakness import STRONG, WEAK_EXISTENTIAL, classify


@dataclass(frozen=True)
class Partition:
    """Disjoint nonempty blocks covering a set of weak variables."""

    blocks: tuple

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(frozenset(b) for b in self.blocks))
        seen = set()
        for b in self.blocks:
            if not b:
                raise WeakfoError("empty partition block")
            if seen & b:
                raise WeakfoError("overlapping partition blocks")
            seen |= b

    def block_of(self, name: VarName) -> int:
        for i, b in enumerate(self.blocks):
            if name in b:
                return i
        raise WeakfoError(f"{name.render()} not in partition")


@dataclass
class StageRecord:
    name: str
    formula: Formula
    qr: int
    bound_count: int
    threshold: int = 1


@dataclass
class PipelineTrace:
    stages: list = field(default_factory=list)
    cc_results: list = field(default_factory=list)
    input_strong_qr: int = 0
    input_strong_bound: int = 0
    threshold: int = 1

    def record(self, name: str, formula: Formula, threshold: int = 1):
        self.stages.append(StageRecord(
            name, formula, quantifier_rank(formula),
            len(bound_vars(formula)), threshold))
        self.threshold = max(self.threshold, threshold)


def mark_weak(f: Formula) -> Formula:
    """Set weak hints from the classification (existential weakness
    only); the result is what the pipeline consumes for unhinted input.
    Renames binders first when they are not already distinct."""
    if not _has_distinct_binders(f):
        f = rename_bound_fresh(f)
    cls = classify(f)
    kinds = {q.path: q.classification for q in cls.quantifiers}

    def go(g, path):
        kids = tuple(go(c, path + (i,)) for i, c in enumerate(children_of(g)))
        if isinstance(g, Exists):
            return Exists(g.name, kids[0], kinds[path] == WEAK_EXISTENTIAL)
        if isinstance(g, Forall):
            return Forall(g.name, kids[0], False)
        if kids:
            return replace_children(g, kids)
        return g

    return go(f, ())


def check_marks(f: Formula):
    """Every marked quantifier must be genuinely weak."""
    cls = classify(f)
    for q in cls.quantifiers:
        if q.weak_hint and q.classification == STRONG:
            raise TransformError(
                f"marked quantifier {q.name.render()} is strong")
        if q.weak_hint and q.kind == "forall":
            raise TransformError(
                f"universal {q.name.render()} marked weak: separate polarities first")


def weak_names(f: Formula) -> frozenset:
    out = set()
    for g in _walk(f):
        if isinstance(g, Exists) and g.weak_hint:
            out.add(g.name)
    return frozenset(out)


def _walk(f):
    yield f
    if not isinstance(f, BigOr):
        for c in children_of(f):
            yield from _walk(c)


def _is_weak_exists(g) -> bool:
    return isinstance(g, Exists) and g.weak_hint


# ---------------------------------------------------------------------------
# Stage I: hoisting weak quantifiers into blocks
# ---------------------------------------------------------------------------

def preprocess(f: Formula, namer: Optional[FreshNamer] = None) -> Formula:
    """NNF, fresh binders, a leading universal, and flattening."""
    if not is_nnf(f):
        raise TransformError("pipeline input must be in negation normal form")
    namer = namer or FreshNamer(f)
    f = rename_bound_fresh(f, namer)
    v = namer.fresh_base("v")
    return flatten(Forall(v, f))


def hoist_weak(f: Formula) -> Formula:
    """Move marked quantifiers up until each directly follows a universal
    quantifier or another marked quantifier."""
    before = weak_names(f)

    def go(g):
        if isinstance(g, (And, Or)):
            kids = [go(c) for c in g.children]
            for idx, c in enumerate(kids):
                if _is_weak_exists(c):
                    inner = kids[:idx] + [c.body] + kids[idx + 1:]
                    combine = mk_and if isinstance(g, And) else mk_or
                    return go(Exists(c.name, combine(inner), True))
            return replace_children(g, tuple(kids))
        if isinstance(g, Exists) and not g.weak_hint:
            body = go(g.body)
            if _is_weak_exists(body):
                return go(Exists(body.name,
                                 Exists(g.name, body.body, False), True))
            return Exists(g.name, body, False)
        if isinstance(g, (Exists, Forall)):
            return replace_children(g, (go(g.body),))
        if isinstance(g, Not):
            return g
        return g

    out = go(f)
    if weak_names(out) != before:
        raise TransformError("hoisting changed the set of marked variables")
    return out


# ---------------------------------------------------------------------------
# Stage II: eliminating bad literals
# ---------------------------------------------------------------------------

def _succ_chain_over_var(t):
    """The outermost maximal succ-chain over a variable inside t, if any."""
    if isinstance(t, Succ):
        base = t
        depth = 0
        while isinstance(base, Succ):
            base = base.inner
            depth += 1
        if isinstance(base, Var):
            return t, base, depth
    return None


def _literal_terms(lit):
    if isinstance(lit, Atom):
        return lit.terms
    if isinstance(lit, (Eq, Neq)):
        return (lit.left, lit.right)
    if isinstance(lit, Not):
        return _literal_terms(lit.body)
    return ()


def _is_literal(g):
    return isinstance(g, (Atom, Eq, Neq)) or (
        isinstance(g, Not) and isinstance(g.body, Atom))


def _literal_verdict(lit, weak, binder_depth):
    """'good' for strong literals, weak equalities and weak inequalities;
    otherwise 'bad'."""
    terms = _literal_terms(lit)
    lit_weak = frozenset().union(*[term_vars(t) for t in terms]) & weak if terms else frozenset()
    if not lit_weak:
        return "good"
    for t in terms:
        if isinstance(t, Succ) and term_vars(t):
            return "bad"
    if isinstance(lit, Neq) and isinstance(lit.left, Var) and isinstance(lit.right, Var):
        a, b = lit.left.name, lit.right.name
        if a in weak and b in weak:
            return "good"
        return "bad"
    if isinstance(lit, Eq) and isinstance(lit.left, Var) and isinstance(lit.right, Var):
        a, b = lit.left.name, lit.right.name
        weak_side = [nm for nm in (a, b) if nm in weak]
        strong_side = [nm for nm in (a, b) if nm not in weak]
        if len(weak_side) == 1 and strong_side:
            y = strong_side[0]
            info = binder_depth.get(y)
            winfo = binder_depth.get(weak_side[0])
            if info is not None and info[0] == "exists-strong" and \
                    winfo is not None and info[1] > winfo[1]:
                return "good"
        return "bad"
    return "bad"


def eliminate_bad_literals(f: Formula) -> Formula:
    """Rewrite literals until marked variables occur only in weak
    equalities and weak inequalities.  Successor terms in bad literals
    are unfolded through the addition relation first; each rewrite binds
    a value to a pooled v-variable."""
    weak = weak_names(f)
    pool_base = max_serial(f) + 1

    def pool_name(i: int) -> VarName:
        return VarName("v", pool_base + i - 1)

    def rewrite_literal(lit):
        names_in_lit = frozenset().union(
            *[term_vars(t) for t in _literal_terms(lit)]) if _literal_terms(lit) else frozenset()

        def pick_pool(extra=0):
            i = 1
            while pool_name(i) in names_in_lit or pool_name(i + extra) in names_in_lit:
                i += 1
            return i

        for t in _literal_terms(lit):
            chain = _succ_chain_over_var(t)
            if chain is not None:
                full, base, depth = chain
                i = pick_pool(extra=1)
                vi, vj = pool_name(i), pool_name(i + 1)
                replaced = _substitute_literal(lit, full, Var(vj))
                body = mk_and([Eq(Var(vi), num_term(depth)),
                               Atom("add", (base, Var(vi), Var(vj))),
                               replaced])
                return Exists(vi, Exists(vj, body))
        lit_weak = sorted((nm for nm in names_in_lit if nm in weak),
                          key=lambda nm: (nm.base, nm.serial))
        target = lit_weak[0]
        i = pick_pool()
        vi = pool_name(i)
        replaced = _substitute_literal(lit, Var(target), Var(vi))
        return Exists(vi, And((Eq(Var(vi), Var(target)), replaced)))

    def go(g, depth_env, depth):
        if _is_literal(g):
            verdict = _literal_verdict(g, weak, depth_env)
            if verdict == "bad":
                rewritten, _ = go(rewrite_literal(g), depth_env, depth)
                return rewritten, True
            return g, False
        if isinstance(g, (Eq, Neq, Atom, Not)):
            return g, False
        if isinstance(g, BigOr):
            return g, False
        kids = []
        changed = False
        for c in children_of(g):
            env2 = depth_env
            if isinstance(g, Exists):
                kind = "exists-weak" if g.weak_hint else "exists-strong"
                env2 = dict(depth_env)
                env2[g.name] = (kind, depth)
            elif isinstance(g, Forall):
                env2 = dict(depth_env)
                env2[g.name] = ("forall", depth)
            new_c, ch = go(c, env2, depth + 1)
            kids.append(new_c)
            changed = changed or ch
        return replace_children(g, tuple(kids)), changed

    current = f
    for _ in range(10 * _formula_fuel(f)):
        current, changed = go(current, {}, 0)
        if not changed:
            return current
    raise TransformError("bad-literal elimination did not converge")


def _substitute_literal(lit, old, new):
    def term_sub(t):
        if t == old:
            return new
        if isinstance(t, Succ):
            return Succ(term_sub(t.inner))
        return t

    if isinstance(lit, Atom):
        return Atom(lit.relation, tuple(term_sub(t) for t in lit.terms))
    if isinstance(lit, Eq):
        return Eq(term_sub(lit.left), term_sub(lit.right))
    if isinstance(lit, Neq):
        return Neq(term_sub(lit.left), term_sub(lit.right))
    if isinstance(lit, Not):
        return Not(_substitute_literal(lit.body, old, new))
    raise WeakfoError("not a literal")


def _formula_fuel(f) -> int:
    return 100 + sum(1 for _ in _walk(f))


# ---------------------------------------------------------------------------
# Stage III: accumulating weak inequalities
# ---------------------------------------------------------------------------

def _is_weak_ineq(g, weak) -> bool:
    return (isinstance(g, Neq) and isinstance(g.left, Var)
            and isinstance(g.right, Var)
            and g.left.name in weak and g.right.name in weak)


def accumulate_inequalities(f: Formula, namer: Optional[FreshNamer] = None) -> Formula:
    """Float weak inequalities up to their blocks and split the blocks
    over the resulting disjunctions (with fresh weak copies)."""
    weak = weak_names(f)
    namer = namer or FreshNamer(f)

    def pull_step(g):
        # exists z (... weak-ineq ...) with z not in the inequality
        if isinstance(g, Exists):
            body = g.body
            if isinstance(body, And):
                outside = [c for c in body.children
                           if _is_weak_ineq(c, weak) and g.name not in free_vars(c)]
                if outside:
                    rest = [c for c in body.children if c not in outside]
                    if rest:
                        inner = Exists(g.name, mk_and(rest), g.weak_hint)
                    else:
                        inner = None  # the quantifier dangles
                    parts = outside + ([inner] if inner is not None else [])
                    return mk_and(parts), True
            if _is_weak_ineq(body, weak) and g.name not in free_vars(body):
                return body, True
            # exists x (a | b)  ->  exists x a | exists x b
            if isinstance(body, Or):
                copies = []
                for c in body.children:
                    if g.weak_hint:
                        fresh = namer.fresh(g.name)
                        copies.append(Exists(fresh,
                                             substitute(c, Var(g.name), Var(fresh)),
                                             True))
                    else:
                        copies.append(Exists(g.name, c, False))
                return mk_or(copies), True
        return g, False

    def go(g):
        changed = False
        kids = []
        for c in children_of(g):
            nc, ch = go(c)
            kids.append(nc)
            changed = changed or ch
        if kids:
            g = replace_children(g, tuple(kids))
        g2, ch2 = pull_step(g)
        return g2, changed or ch2

    current = f
    for _ in range(_formula_fuel(f)):
        current = flatten(current)
        current, changed = go(current)
        if not changed:
            return flatten(current)
    raise TransformError("inequality accumulation did not converge")


# ---------------------------------------------------------------------------
# Stage IV: completing inequalities over allowed partitions
# ---------------------------------------------------------------------------

def set_partitions(items):
    """All partitions of the item list, in restricted-growth order."""
    items = list(items)
    if not items:
        yield []
        return

    def grow(assignment, used):
        i = len(assignment)
        if i == len(items):
            blocks = [[] for _ in range(used)]
            for item, b in zip(items, assignment):
                blocks[b].append(item)
            yield blocks
            return
        for b in range(used + 1):
            yield from grow(assignment + [b], max(used, b + 1))

    yield from grow([], 0)


def allowed_partitions(names, inequalities) -> list:
    """Partitions of the variables where no block joins the endpoints of
    any inequality."""
    names = list(names)
    forbidden = [frozenset(pair) for pair in inequalities]
    out = []
    for blocks in set_partitions(names):
        ok = True
        for b in blocks:
            bs = frozenset(b)
            if any(pair <= bs for pair in forbidden if len(pair) == 2):
                ok = False
                break
        if ok:
            out.append(Partition(tuple(frozenset(b) for b in blocks)))
    return out


def distinct_formula(partition: Partition, order) -> list:
    """Pairwise inequalities across partition blocks, in sorted variable
    order."""
    pos = {nm: i for i, nm in enumerate(order)}
    pairs = []
    for i, bi in enumerate(partition.blocks):
        for j in range(i + 1, len(partition.blocks)):
            for p in bi:
                for q in partition.blocks[j]:
                    a, b = sorted((p, q), key=lambda nm: pos[nm])
                    pairs.append((pos[a], pos[b], a, b))
    pairs.sort()
    return [Neq(Var(a), Var(b)) for _, _, a, b in pairs]


def _split_block(g):
    """(vars, matrix) for a maximal marked block starting at g."""
    names = []
    body = g
    while _is_weak_exists(body):
        names.append(body.name)
        body = body.body
    return names, body


def complete_inequalities(f: Formula, namer: Optional[FreshNamer] = None) -> Formula:
    """Replace each weak block by the disjunction over its allowed
    partitions, each copy carrying the full distinctness conjunction."""
    weak = weak_names(f)
    namer = namer or FreshNamer(f)

    def go(g):
        if _is_weak_exists(g):
            names, body = _split_block(g)
            body = go(body)
            conjuncts = list(body.children) if isinstance(body, And) else [body]
            ineqs = [c for c in conjuncts if _is_weak_ineq(c, weak)
                     and free_vars(c) <= set(names)]
            rest = [c for c in conjuncts if c not in ineqs]
            pairs = [frozenset((c.left.name, c.right.name)) for c in ineqs]
            partitions = allowed_partitions(names, pairs)
            if len(partitions) == 1:
                parts = distinct_formula(partitions[0], names) + rest
                matrix = mk_and(parts) if parts else true_formula()
                out = matrix
                for nm in reversed(names):
                    out = Exists(nm, out, True)
                return out
            copies = []
            for part in partitions:
                mapping = {nm: namer.fresh(nm) for nm in names}
                renamed_blocks = tuple(frozenset(mapping[nm] for nm in b)
                                       for b in part.blocks)
                renamed_part = Partition(renamed_blocks)
                new_names = [mapping[nm] for nm in names]
                new_rest = [_rename_free(c, mapping) for c in rest]
                matrix_parts = distinct_formula(renamed_part, new_names) + new_rest
                matrix = mk_and(matrix_parts) if matrix_parts else true_formula()
                out = matrix
                for nm in reversed(new_names):
                    out = Exists(nm, out, True)
                copies.append(out)
            return mk_or(copies)
        kids = children_of(g)
        if not kids or isinstance(g, BigOr):
            return g
        return replace_children(g, tuple(go(c) for c in kids))

    return go(f)


def _rename_free(f, mapping):
    out = f
    for old, new in mapping.items():
        out = substitute(out, Var(old), Var(new))
    return out


# ---------------------------------------------------------------------------
# Stage V: eliminating completed blocks through color replacement
# ---------------------------------------------------------------------------

def _partition_from_ineqs(names, ineqs) -> Partition:
    """The partition whose distinctness set matches the inequalities:
    variables belong together exactly when no inequality separates them."""
    pairs = {frozenset((c.left.name, c.right.name)) for c in ineqs}
    blocks = []
    for nm in names:
        placed = False
        for b in blocks:
            if all(frozenset((nm, other)) not in pairs for other in b):
                b.append(nm)
                placed = True
                break
        if not placed:
            blocks.append([nm])
    part = Partition(tuple(frozenset(b) for b in blocks))
    want = {frozenset((a.left.name, a.right.name))
            for a in distinct_formula(part, names)}
    if want != pairs:
        raise TransformError("block inequalities do not describe a partition")
    return part


def block_color_form(block: Formula) -> tuple:
    """(alpha_prime, color_count) for a completed block — the matrix with
    weak equalities turned into color atoms; exposed for inspection."""
    names, body = _split_block(block)
    if not names:
        raise TransformError("not a weak block")
    weak = frozenset(names)
    conjuncts = list(body.children) if isinstance(body, And) else [body]
    ineqs = [c for c in conjuncts if _is_weak_ineq(c, weak)]
    rest = [c for c in conjuncts if c not in ineqs]
    part = _partition_from_ineqs(names, ineqs)
    alpha = mk_and(rest) if rest else true_formula()

    def to_colors(g):
        if isinstance(g, Eq) and isinstance(g.left, Var) and isinstance(g.right, Var):
            a, b = g.left.name, g.right.name
            if a in weak and b not in weak:
                return Atom(f"C{part.block_of(a) + 1}", (Var(b),))
            if b in weak and a not in weak:
                return Atom(f"C{part.block_of(b) + 1}", (Var(a),))
            return g
        kids = children_of(g)
        if not kids or isinstance(g, BigOr):
            return g
        return replace_children(g, tuple(to_colors(c) for c in kids))

    return to_colors(alpha), len(part.blocks)


def eliminate_block(block: Formula, margin: int = 0) -> tuple:
    """Replace one completed block by its hash-parameter formula.

    Returns (formula, CCResult, block_width).  The replacement is claimed
    for universes at least as large as max(threshold, number of block
    variables)."""
    names, body = _split_block(block)
    if not names:
        raise TransformError("not a weak block")
    weak = frozenset(names)
    conjuncts = list(body.children) if isinstance(body, And) else [body]
    ineqs = [c for c in conjuncts if _is_weak_ineq(c, weak)]
    rest = [c for c in conjuncts if c not in ineqs]
    alpha = mk_and(rest) if rest else true_formula()
    _check_block_shape(alpha, weak)
    alpha_prime, width = block_color_form(block)
    cc = cc_transform(alpha_prime, width, margin)
    return cc.formula, cc, len(names)


def _check_block_shape(alpha, weak):
    def walk(g, under_forall):
        if isinstance(g, Eq) and isinstance(g.left, Var) and isinstance(g.right, Var):
            touched = {g.left.name, g.right.name} & weak
            if len(touched) == 2:
                raise TransformError("weak-weak equality survived literal elimination")
            if touched and under_forall:
                raise TransformError("weak equality under a universal quantifier")
            return
        if _is_literal(g) or isinstance(g, (Eq, Neq)):
            terms = _literal_terms(g)
            touched = frozenset().union(*[term_vars(t) for t in terms]) & weak if terms else frozenset()
            if touched:
                raise TransformError(f"unexpected weak occurrence in {g!r}")
            return
        if isinstance(g, BigOr):
            if g.free & weak:
                raise TransformError("weak variable crosses a symbolic disjunction")
            return
        for c in children_of(g):
            walk(c, under_forall or isinstance(g, Forall))

    walk(alpha, False)


def _innermost_blocks(f):
    """Paths of maximal marked blocks, innermost first."""
    found = []

    def go(g, path, inside_block):
        if _is_weak_exists(g) and not inside_block:
            names, body = _split_block(g)
            found.append(path)
            go(body, path + tuple([0] * len(names)), False)
            return
        for i, c in enumerate(children_of(g)):
            go(c, path + (i,), False)

    go(f, (), False)
    found.sort(key=len, reverse=True)
    return found


def _node_at(f, path):
    node = f
    for i in path:
        node = children_of(node)[i]
    return node


def _replace_at(f, path, new):
    if not path:
        return new
    kids = list(children_of(f))
    kids[path[0]] = _replace_at(kids[path[0]], path[1:], new)
    return replace_children(f, tuple(kids))


def eliminate_all_blocks(f: Formula, margin: int = 0) -> tuple:
    """Innermost-first replacement of every completed block; returns the
    formula, the list of CCResults, and the overall validity threshold."""
    results = []
    threshold = 1
    while True:
        paths = _innermost_blocks(f)
        if not paths:
            return f, results, threshold
        path = paths[0]
        block = _node_at(f, path)
        replacement, cc, width = eliminate_block(block, margin)
        results.append(cc)
        threshold = max(threshold, cc.threshold, width)
        f = _replace_at(f, path, replacement)


# ---------------------------------------------------------------------------
# The full pipeline
# ---------------------------------------------------------------------------

def weak_eliminate(f: Formula, margin: int = 0,
                   premarked: bool = True) -> tuple:
    """Run every stage; returns (formula, PipelineTrace)."""
    if not premarked:
        f = mark_weak(to_nnf_checked(f))
    if not _has_distinct_binders(f):
        f = rename_bound_fresh(f)
    check_marks(f)
    cls = classify(f) if _has_distinct_binders(f) else classify(rename_bound_fresh(f))
    trace = PipelineTrace(input_strong_qr=cls.strong_qr,
                          input_strong_bound=len(cls.strong_bound))
    trace.record("input", f)
    namer = FreshNamer(f)

    g = preprocess(f, namer)
    trace.record("preprocessed", g)
    g = hoist_weak(g)
    trace.record("hoisted", g)
    g = eliminate_bad_literals(g)
    trace.record("literals", g)
    g = accumulate_inequalities(g, namer)
    trace.record("accumulated", g)
    g = complete_inequalities(g, FreshNamer(g, floor=namer._next))
    trace.record("completed", g)
    g, cc_results, threshold = eliminate_all_blocks(g, margin)
    trace.cc_results = cc_results
    trace.record("eliminated", g, threshold)
    return g, trace


def to_nnf_checked(f):
    from .syntax import to_nnf
    return to_nnf(f)


def _has_distinct_binders(f):
    from .syntax import has_distinct_binders
    return has_distinct_binders(f)


def residual_weak_quantifiers(f: Formula, sample_picks=(0,)) -> int:
    """Number of marked quantifiers left outside symbolic disjunctions,
    plus inside sampled disjuncts of each symbolic disjunction."""
    count = 0
    for g in _walk(f):
        if _is_weak_exists(g):
            count += 1
        if isinstance(g, BigOr):
            size = g.family.size
            picks = sorted({p for p in sample_picks if 0 <= p < size})
            if not picks and size > 0:
                picks = [0]
            top = max(picks) if picks else -1
            for j, i in zip(range(top + 1), g.family):
                if j in picks:
                    count += residual_weak_quantifiers(g.gen(i), sample_picks)
    return count


# ---------------------------------------------------------------------------
# Mixed polarities (the separation step)
# ---------------------------------------------------------------------------

def _has_marked(g, kind) -> bool:
    for h in _walk(g):
        if isinstance(h, kind) and h.weak_hint:
            return True
    return False


def separate_mixed(f: Formula, namer: Optional[FreshNamer] = None) -> Formula:
    """Push quantifiers down and sort connective operands so maximal
    regions of one weak polarity sit under strong quantifiers; prefixed
    with a vacuous strong exists/forall pair."""
    namer = namer or FreshNamer(f)

    def push(g):
        if isinstance(g, (Exists, Forall)):
            body, body_changed = go(g.body)
            cls = type(g)
            if isinstance(body, (And, Or)):
                with_x = [c for c in body.children if g.name in free_vars(c)]
                without = [c for c in body.children if g.name not in free_vars(c)]
                if without:
                    comb = mk_and if isinstance(body, And) else mk_or
                    if with_x:
                        inner = cls(g.name, comb(with_x) if len(with_x) > 1 else with_x[0],
                                    g.weak_hint)
                        return comb([inner] + without), True
                    return comb(without), True
            if isinstance(body, (And, Or)) and g.name not in free_vars(body):
                return body, True
            if not isinstance(body, (And, Or)) and g.name not in free_vars(body):
                return body, True
            # distribute inside, then split
            if isinstance(g, Exists) and isinstance(body, And):
                for idx, c in enumerate(body.children):
                    if isinstance(c, Or):
                        rest = list(body.children[:idx]) + list(body.children[idx + 1:])
                        branches = [mk_and([alt] + rest) for alt in c.children]
                        return Exists(g.name, mk_or(branches), g.weak_hint), True
            if isinstance(g, Forall) and isinstance(body, Or):
                for idx, c in enumerate(body.children):
                    if isinstance(c, And):
                        rest = list(body.children[:idx]) + list(body.children[idx + 1:])
                        branches = [mk_or([alt] + rest) for alt in c.children]
                        return Forall(g.name, mk_and(branches), g.weak_hint), True
            if isinstance(g, Exists) and isinstance(body, Or):
                copies = []
                for c in body.children:
                    fresh = namer.fresh(g.name)
                    copies.append(Exists(fresh, substitute(c, Var(g.name), Var(fresh)),
                                         g.weak_hint))
                return mk_or(copies), True
            if isinstance(g, Forall) and isinstance(body, And):
                copies = []
                for c in body.children:
                    fresh = namer.fresh(g.name)
                    copies.append(Forall(fresh, substitute(c, Var(g.name), Var(fresh)),
                                         g.weak_hint))
                return mk_and(copies), True
            return cls(g.name, body, g.weak_hint), body_changed
        kids = children_of(g)
        if not kids or isinstance(g, BigOr):
            return g, False
        changed = False
        new = []
        for c in kids:
            nc, ch = go(c)
            new.append(nc)
            changed = changed or ch
        if isinstance(g, And):
            flatter = mk_and(new)
            return flatter, changed or flatter != g
        if isinstance(g, Or):
            flatter = mk_or(new)
            return flatter, changed or flatter != g
        return replace_children(g, tuple(new)), changed

    def go(g):
        g2, ch = push(g)
        return g2, ch

    current = f
    for _ in range(_formula_fuel(f) * 4):
        current, changed = go(current)
        if not changed:
            break
    else:
        raise TransformError("separation did not converge")

    def sort_ops(g):
        kids = children_of(g)
        if not kids or isinstance(g, BigOr):
            return g
        g = replace_children(g, tuple(sort_ops(c) for c in kids))
        if isinstance(g, (And, Or)):
            keyed = [((int(_has_marked(c, Forall)), 1 - int(_has_marked(c, Exists))), i, c)
                     for i, c in enumerate(g.children)]
            keyed.sort(key=lambda t: (t[0], t[1]))
            return replace_children(g, tuple(c for _, _, c in keyed))
        return g

    current = sort_ops(current)
    v1 = namer.fresh_base("v")
    v2 = namer.fresh_base("v")
    return Exists(v1, Forall(v2, current))
