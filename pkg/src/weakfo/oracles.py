"""Exhaustive-search ground truth for every problem family.

These implement the problem definitions directly on the combinatorial
objects — no formulas, no shared code with the generators they check.
"""

import itertools

from .graphs import Graph, Hypergraph


def has_matching(g: Graph, k: int) -> bool:
    """k vertex-disjoint edges."""
    if k == 0:
        return True
    for combo in itertools.combinations(sorted(g.edges), k):
        used = set()
        ok = True
        for a, b in combo:
            if a in used or b in used:
                ok = False
                break
            used.update((a, b))
        if ok:
            return True
    return False


def has_triangle_packing(g: Graph, k: int) -> bool:
    """k vertex-disjoint triangles."""
    if k == 0:
        return True
    triangles = [t for t in itertools.combinations(range(g.n), 3)
                 if g.has_edge(t[0], t[1]) and g.has_edge(t[1], t[2])
                 and g.has_edge(t[0], t[2])]
    for combo in itertools.combinations(triangles, k):
        used = set()
        ok = True
        for t in combo:
            if used & set(t):
                ok = False
                break
            used.update(t)
        if ok:
            return True
    return False


def has_clique(g: Graph, k: int) -> bool:
    if k <= 1:
        return k == 0 or g.n >= 1
    for combo in itertools.combinations(range(g.n), k):
        if all(g.has_edge(a, b) for a, b in itertools.combinations(combo, 2)):
            return True
    return False


def has_path(g: Graph, k: int) -> bool:
    """A simple path on k vertices (k-1 edges)."""
    if k <= 0:
        return True
    if k == 1:
        return g.n >= 1
    for vs in itertools.permutations(range(g.n), k):
        if vs[0] > vs[-1]:
            continue  # paths are undirected
        if all(g.has_edge(a, b) for a, b in zip(vs, vs[1:])):
            return True
    return False


def has_vertex_cover(g: Graph, k: int) -> bool:
    if not g.edges:
        return True
    if k <= 0:
        return False
    for combo in itertools.combinations(range(g.n), min(k, g.n)):
        cover = set(combo)
        if all(a in cover or b in cover for a, b in g.edges):
            return True
    return False


def has_hitting_set(h: Hypergraph, k: int) -> bool:
    edges = h.distinct_edges()
    if not edges:
        return True
    if any(not e for e in edges):
        return False  # the empty hyperedge cannot be hit
    if k <= 0:
        return False
    for size in range(1, min(k, h.n) + 1):
        for combo in itertools.combinations(range(h.n), size):
            chosen = set(combo)
            if all(chosen & e for e in edges):
                return True
    return False


def has_dominating_set(g: Graph, k: int) -> bool:
    if g.n == 0:
        return True
    if k <= 0:
        return False
    for size in range(1, min(k, g.n) + 1):
        for combo in itertools.combinations(range(g.n), size):
            dom = set(combo)
            for c in combo:
                dom.update(g.neighbors(c))
            if len(dom) == g.n:
                return True
    return False


def has_embedding(h: Graph, g: Graph) -> bool:
    """Injective mapping of h into g preserving edges."""
    if h.n > g.n:
        return False
    for images in itertools.permutations(range(g.n), h.n):
        if all(g.has_edge(images[a], images[b]) for a, b in h.edges):
            return True
    return False


def sunflower_cores(h: Hypergraph, k: int) -> set:
    """All sets c such that some k+1 distinct hyperedges are pairwise
    intersecting exactly in c and each properly contains it."""
    edges = h.distinct_edges()
    out = set()
    for combo in itertools.combinations(edges, k + 1):
        inter = frozenset.intersection(*combo)
        if any(e == inter for e in combo):
            continue  # petals must properly contain the core
        if all(a & b == inter for a, b in itertools.combinations(combo, 2)):
            out.add(inter)
    return out


def is_sunflower_core(h: Hypergraph, c: frozenset, k: int) -> bool:
    edges = [e for e in h.distinct_edges() if c < e]
    for combo in itertools.combinations(edges, k + 1):
        if all(a & b == c for a, b in itertools.combinations(combo, 2)):
            return True
    return False
