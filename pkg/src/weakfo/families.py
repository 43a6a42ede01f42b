"""Generators for the slicewise formula families: matchings, triangle
packings, cliques, long paths, the vertex-cover kernel, the hitting-set
kernel with (pseudo-)sunflower cores, and subgraph embeddings guided by
tree decompositions."""

import itertools
from typing import Optional

from .errors import StructureError, TransformError
from .graphs import (GRAPH_SIG, HYPER_SIG, Graph, TreeDecomposition,
                     all_graphs, decode_graph, encode_graph,
                     validate_decomposition)
from .macros import (InducedOracle, exists_eq, exists_geq, exists_leq,
                     induced_leq, set_binding)
from .oracles import has_vertex_cover
from .syntax import (And, Atom, Eq, Exists, Forall, Formula, FreshNamer, Neq,
                     Not, Or, Signature, Var, VarName, mk_and, mk_or,
                     rename_bound_fresh, substitute, to_nnf)


def _pairwise_distinct(names) -> list:
    return [Neq(Var(a), Var(b)) for a, b in itertools.combinations(names, 2)]


def _edge(a, b) -> Formula:
    return Atom("E", (Var(a), Var(b)))


def family_matching(k: int) -> Formula:
    """k vertex-disjoint edges, the plain slicewise form."""
    if k < 1:
        raise TransformError("k must be >= 1")
    names = [VarName("x", i) for i in range(1, 2 * k + 1)]
    edges = [_edge(names[2 * i], names[2 * i + 1]) for i in range(k)]
    matrix = mk_and(_pairwise_distinct(names) + edges)
    for nm in reversed(names):
        matrix = Exists(nm, matrix)
    return matrix


def family_clique(k: int) -> Formula:
    if k < 1:
        raise TransformError("k must be >= 1")
    names = [VarName("x", i) for i in range(1, k + 1)]
    edges = [_edge(a, b) for a, b in itertools.combinations(names, 2)]
    matrix = mk_and(_pairwise_distinct(names) + edges) if edges else \
        Eq(Var(names[0]), Var(names[0]))
    for nm in reversed(names):
        matrix = Exists(nm, matrix)
    return matrix


def family_triangle_packing(k: int, weak_form: bool = False) -> Formula:
    """k vertex-disjoint triangles: the direct form, or the rewritten one
    with marked weak variables and three strong vertex variables."""
    if k < 1:
        raise TransformError("k must be >= 1")
    names = [VarName("x", i) for i in range(1, 3 * k + 1)]
    if not weak_form:
        parts = _pairwise_distinct(names)
        for j in range(k):
            a, b, c = names[3 * j], names[3 * j + 1], names[3 * j + 2]
            parts += [_edge(a, b), _edge(a, c), _edge(b, c)]
        matrix = mk_and(parts)
        for nm in reversed(names):
            matrix = Exists(nm, matrix)
        return matrix
    x, y, z = VarName("x"), VarName("y"), VarName("z")
    groups = []
    for j in range(k):
        bind = mk_and([_edge(x, y), _edge(y, z), _edge(x, z),
                       Eq(Var(names[3 * j]), Var(x)),
                       Eq(Var(names[3 * j + 1]), Var(y)),
                       Eq(Var(names[3 * j + 2]), Var(z))])
        groups.append(Exists(x, Exists(y, Exists(z, bind))))
    matrix = mk_and(_pairwise_distinct(names) + groups)
    for nm in reversed(names):
        matrix = Exists(nm, matrix, weak_hint=True)
    return matrix


def family_long_path(k: int) -> Formula:
    """A simple path on k vertices, with the path vertices carried by
    marked weak variables and only four strong vertex variables."""
    if k < 1:
        raise TransformError("k must be >= 1")
    s, t = VarName("s"), VarName("t")
    x, y = VarName("x"), VarName("y")
    weak = [VarName("x", i) for i in range(1, k + 1)]
    ineqs = _pairwise_distinct(weak)
    if k == 1:
        inner = Exists(weak[0], Eq(Var(weak[0]), Var(x)), True)
        body = mk_and([Eq(Var(s), Var(x)), Eq(Var(x), Var(t)), inner])
        return Exists(s, Exists(t, Exists(x, body)))

    def level(i: int, prev: VarName) -> Formula:
        cur = x if i % 2 == 1 else y
        if i == k:
            tail = mk_and([Eq(Var(weak[i - 1]), Var(cur))] + ineqs)
            inner = Exists(weak[i - 1], tail, True)
            return Exists(cur, mk_and([_edge(prev, cur), Eq(Var(cur), Var(t)),
                                       inner]))
        inner = Exists(weak[i - 1], mk_and([Eq(Var(weak[i - 1]), Var(cur)),
                                            level(i + 1, cur)]), True)
        return Exists(cur, mk_and([_edge(prev, cur), inner]))

    return Exists(s, Exists(t, level(1, s)))


# ---------------------------------------------------------------------------
# Vertex cover (the degree-based kernel)
# ---------------------------------------------------------------------------

def vc_oracle(s: int) -> InducedOracle:
    return InducedOracle(
        lambda struct: has_vertex_cover(decode_graph(struct), s),
        accepts_empty=True,
        enumerate_size=lambda size: (encode_graph(g) for g in all_graphs(size)),
        description=f"graphs with a vertex cover of size {s}")


def family_vertex_cover(k: int, cap: Optional[int] = None) -> Formula:
    """The high-degree kernel: all high vertices join the cover, the rest
    is decided on the induced subgraph of interesting vertices."""
    if k < 0:
        raise TransformError("k must be >= 0")
    x, y, z = VarName("x"), VarName("y"), VarName("z")
    high_x = exists_geq(k + 1, y, _edge(x, y))
    nothigh_x = exists_leq(k, y, _edge(x, y))
    nothigh_y = exists_leq(k, z, _edge(y, z))
    interesting = mk_and([nothigh_x, Exists(y, And((_edge(x, y), nothigh_y)))])
    clauses = []
    for h in range(k + 1):
        count = exists_eq(h, x, high_x)
        ind = induced_leq(k * k + k, x, interesting, vc_oracle(k - h),
                          GRAPH_SIG, cap=cap)
        clauses.append(mk_and([count, ind]))
    return mk_or(clauses)


# ---------------------------------------------------------------------------
# Hitting set: sunflowers, pseudo-sunflowers, the kernel predicate
# ---------------------------------------------------------------------------

def subset_formula(c: VarName, e: VarName, namer: FreshNamer) -> Formula:
    x = namer.fresh_base("sx")
    return Forall(x, Or((Not(Atom("in", (Var(x), Var(c)))),
                         Atom("in", (Var(x), Var(e))))))


def _petal_binding(c: VarName, petal_vars, edge_pred, namer: FreshNamer) -> Formula:
    """exists e (edge_pred(e) and subset(c,e) and {petal_vars} = set(e)-set(c))."""
    e = namer.fresh_base("e")
    v = namer.fresh_base("pv")
    member = And((Atom("in", (Var(v), Var(e))),
                  Not(Atom("in", (Var(v), Var(c))))))
    binding = set_binding(petal_vars, v, member)
    return Exists(e, mk_and([edge_pred(e), subset_formula(c, e, namer), binding]))


def core_formula(k: int, d: int, level: int, c: Optional[VarName] = None,
                 namer: Optional[FreshNamer] = None) -> Formula:
    """The literal sunflower-core recursion: level i tests a core of
    level-(i-1) sets, so the strong rank grows with the level."""
    if k < 1 or d < 1 or level < 1:
        raise TransformError("k, d, level must be >= 1")
    c = c or VarName("c")
    namer = namer or FreshNamer()

    def edge_pred_for(lvl):
        if lvl == 0:
            return lambda e: Atom("hyperedge", (Var(e),))
        return lambda e: core_formula(k, d, lvl, e, namer)

    pred = edge_pred_for(level - 1)
    petals = [[namer.fresh_base("p") for _ in range(d)] for _ in range(k + 1)]
    ineqs = []
    for a, b in itertools.combinations(range(k + 1), 2):
        for pa in petals[a]:
            for pb in petals[b]:
                ineqs.append(Neq(Var(pa), Var(pb)))
    bindings = [_petal_binding(c, petals[a], pred, namer) for a in range(k + 1)]
    matrix = mk_and(ineqs + bindings)
    for nm in reversed([p for group in petals for p in group]):
        matrix = Exists(nm, matrix, weak_hint=True)
    return matrix


def _leaves(k: int, level: int) -> list:
    """Leaves of the (k+1)-ary tree of the given depth, as digit paths."""
    return list(itertools.product(range(k + 1), repeat=level))


def pseudocore_formula(k: int, d: int, level: int, c: Optional[VarName] = None,
                       namer: Optional[FreshNamer] = None) -> Formula:
    """Tree-indexed generalization: one block of weak variables per leaf
    and depth, with disjointness along first-divergence depths; the
    strong rank does not grow with the level."""
    if k < 1 or d < 1 or level < 1:
        raise TransformError("k, d, level must be >= 1")
    c = c or VarName("c")
    namer = namer or FreshNamer()
    leaves = _leaves(k, level)
    xs = {}
    for l, leaf in enumerate(leaves):
        for i in range(1, level + 1):
            for j in range(1, d + 1):
                xs[(l, i, j)] = namer.fresh_base("x")
    edge_pred = lambda e: Atom("hyperedge", (Var(e),))
    parts = []
    for l, leaf in enumerate(leaves):
        leaf_vars = [xs[(l, i, j)] for i in range(1, level + 1)
                     for j in range(1, d + 1)]
        parts.append(_petal_binding(c, leaf_vars, edge_pred, namer))
        for i, i2 in itertools.combinations(range(1, level + 1), 2):
            for p in range(1, d + 1):
                for q in range(1, d + 1):
                    parts.append(Neq(Var(xs[(l, i, p)]), Var(xs[(l, i2, q)])))
    for l, m in itertools.combinations(range(len(leaves)), 2):
        z = next(i for i in range(level) if leaves[l][i] != leaves[m][i]) + 1
        for p in range(1, d + 1):
            for q in range(1, d + 1):
                parts.append(Neq(Var(xs[(l, z, p)]), Var(xs[(m, z, q)])))
    matrix = mk_and(parts)
    for key in reversed(sorted(xs)):
        matrix = Exists(xs[key], matrix, weak_hint=True)
    return matrix


def kernel_formula(k: int, d: int, use_pseudocores: bool = True,
                   namer: Optional[FreshNamer] = None) -> Formula:
    """Predicate (free variable e): e survives the repeated collapse of
    (pseudo-)sunflowers to their cores."""
    e = VarName("e")
    namer = namer or FreshNamer()
    make = pseudocore_formula if use_pseudocores else core_formula

    def core_at(lvl, target: VarName) -> Formula:
        if lvl == 0:
            return Atom("hyperedge", (Var(target),))
        return make(k, d, lvl, target, namer)

    clauses = [core_at(d, e)]
    for i in range(1, d + 1):
        cprime = namer.fresh_base("c")
        superseded = Exists(cprime, mk_and([core_at(i, cprime),
                                            subset_formula(cprime, e, namer)]))
        clauses.append(mk_and([core_at(i - 1, e), to_nnf(Not(superseded))]))
    return mk_or(clauses)


def degree_check(d: int, namer: Optional[FreshNamer] = None) -> Formula:
    namer = namer or FreshNamer()
    e = namer.fresh_base("e")
    v = namer.fresh_base("dv")
    small = exists_leq(d, v, Atom("in", (Var(v), Var(e))))
    return Forall(e, Or((Not(Atom("hyperedge", (Var(e),))), small)))


def family_hitting_set(k: int, d: int, use_pseudocores: bool = True) -> Formula:
    """Hypergraphs of edge size <= d with a hitting set of size <= k:
    the degree check plus "some k vertices hit every kernel set"."""
    if k < 1 or d < 1:
        raise TransformError("k, d must be >= 1")
    namer = FreshNamer()
    kern = kernel_formula(k, d, use_pseudocores, namer)
    neg_kern = to_nnf(Not(kern))
    hitters = [namer.fresh_base("h") for _ in range(k)]
    e = VarName("e")
    hit = mk_or([Atom("in", (Var(h), Var(e))) for h in hitters])
    tail = Forall(e, mk_or([neg_kern, hit]))
    for h in reversed(hitters):
        tail = Exists(h, tail)
    return And((degree_check(d, namer), tail))


# ---------------------------------------------------------------------------
# Subgraph embedding along a tree decomposition
# ---------------------------------------------------------------------------

def consistent_numbering(td: TreeDecomposition) -> dict:
    """Bag positions: the root bag gets 1..|bag| (vertices ascending);
    each new vertex in a child bag takes the smallest index free among
    the positions of the vertices shared with the parent."""
    m = td.max_bag()
    numbering = {}

    def assign(node, parent_bag):
        bag = td.bags[node]
        shared = bag & parent_bag
        used = {numbering[v] for v in shared}
        free = [i for i in range(1, m + 1) if i not in used]
        for v in sorted(bag - parent_bag):
            numbering[v] = free.pop(0)
        for child in td.children(node):
            assign(child, bag)

    assign(td.root, frozenset())
    return numbering


def family_embedding(h: Graph, td: TreeDecomposition) -> Formula:
    """The H-embedding formula whose strong nesting mirrors the tree and
    whose strong variables mirror the bag positions."""
    problems = validate_decomposition(td, h)
    if problems:
        raise StructureError("; ".join(problems))
    numbering = consistent_numbering(td)
    weak = {v: VarName("x", v + 1) for v in range(h.n)}
    strong = {i: VarName("v", i) for i in set(numbering.values())}

    def psi(node, parent_bag, checked: frozenset) -> Formula:
        bag = td.bags[node]
        new = sorted(bag - parent_bag)
        eqs = [Eq(Var(strong[numbering[v]]), Var(weak[v])) for v in new]
        edges_here = sorted(
            ((min(numbering[a], numbering[b]), max(numbering[a], numbering[b])), (a, b))
            for a, b in (tuple(sorted(e)) for e in h.edges)
            if {a, b} <= bag and frozenset((a, b)) not in checked)
        atoms = [Atom("E", (Var(strong[p1]), Var(strong[p2])))
                 for (p1, p2), _ in edges_here]
        newly = checked | {frozenset(pair) for _, pair in edges_here}
        kids = [psi(child, bag, newly) for child in td.children(node)]
        parts = eqs + atoms + kids
        from .syntax import true_formula
        body = mk_and(parts) if parts else true_formula()
        for v in reversed(new):
            body = Exists(strong[numbering[v]], body)
        return body

    matrix_parts = _pairwise_distinct([weak[v] for v in range(h.n)])
    matrix = mk_and(matrix_parts + [psi(td.root, frozenset(), frozenset())]) \
        if matrix_parts else psi(td.root, frozenset(), frozenset())
    out = matrix
    for v in reversed(range(h.n)):
        out = Exists(weak[v], out, weak_hint=True)
    return out
