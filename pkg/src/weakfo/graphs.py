"""Graphs, hypergraphs and tree decompositions: data types, JSON forms,
structure encodings and small-scale enumeration."""

import itertools
import json
from dataclasses import dataclass, field
from typing import Optional

from .errors import StructureError, WeakfoError
from .structures import Structure
from .syntax import Signature

GRAPH_SIG = Signature({"E": 2}, arithmetic=True)
HYPER_SIG = Signature({"vertex": 1, "hyperedge": 1, "in": 2}, arithmetic=True)


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on vertices {0..n-1}."""

    n: int
    edges: frozenset

    def __post_init__(self):
        norm = set()
        for a, b in self.edges:
            if a == b:
                raise WeakfoError("self-loops are not allowed")
            if not (0 <= a < self.n and 0 <= b < self.n):
                raise WeakfoError("edge endpoint out of range")
            norm.add((min(a, b), max(a, b)))
        object.__setattr__(self, "edges", frozenset(norm))

    def has_edge(self, a, b) -> bool:
        return (min(a, b), max(a, b)) in self.edges

    def neighbors(self, v) -> list:
        return sorted({b if a == v else a for (a, b) in self.edges if v in (a, b)})

    def degree(self, v) -> int:
        return len(self.neighbors(v))

    def max_degree(self) -> int:
        return max((self.degree(v) for v in range(self.n)), default=0)


def complete_graph(n: int) -> Graph:
    return Graph(n, frozenset(itertools.combinations(range(n), 2)))


def path_graph(n: int) -> Graph:
    return Graph(n, frozenset((i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int) -> Graph:
    edges = {(i, (i + 1) % n) for i in range(n)}
    return Graph(n, frozenset(edges))


def star_graph(leaves: int) -> Graph:
    return Graph(leaves + 1, frozenset((0, i) for i in range(1, leaves + 1)))


def encode_graph(g: Graph, arithmetic: bool = True) -> Structure:
    sig = GRAPH_SIG if arithmetic else Signature({"E": 2})
    table = set()
    for a, b in g.edges:
        table.add((a, b))
        table.add((b, a))
    return Structure(sig, g.n, {"E": table})


def decode_graph(struct: Structure) -> Graph:
    edges = set()
    for a, b in struct.table("E"):
        if a != b:
            edges.add((min(a, b), max(a, b)))
    return Graph(struct.size, frozenset(edges))


def all_graphs(n: int):
    """Every undirected simple graph on {0..n-1}."""
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(2 ** len(pairs)):
        yield Graph(n, frozenset(p for i, p in enumerate(pairs) if mask >> i & 1))


def random_graph(rng, n: int, density: float = 0.5) -> Graph:
    edges = {p for p in itertools.combinations(range(n), 2)
             if rng.random() < density}
    return Graph(n, frozenset(edges))


def canonical_graph(g: Graph) -> frozenset:
    """Lexicographically least edge set over all vertex relabelings;
    usable as an isomorphism-class key at small n."""
    best = None
    for perm in itertools.permutations(range(g.n)):
        relabeled = frozenset((min(perm[a], perm[b]), max(perm[a], perm[b]))
                              for a, b in g.edges)
        key = tuple(sorted(relabeled))
        if best is None or key < best:
            best = key
    return frozenset(best if best else ())


def graph_to_json(g: Graph) -> str:
    return json.dumps({"n": g.n, "edges": sorted([list(e) for e in g.edges])},
                      sort_keys=True)


def graph_from_json(text: str) -> Graph:
    obj = json.loads(text)
    return Graph(obj["n"], frozenset(tuple(e) for e in obj["edges"]))


# ---------------------------------------------------------------------------
# Hypergraphs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Hypergraph:
    n: int
    hyperedges: tuple  # of frozensets

    def __post_init__(self):
        norm = []
        for e in self.hyperedges:
            fe = frozenset(e)
            if any(not (0 <= v < self.n) for v in fe):
                raise WeakfoError("hyperedge vertex out of range")
            norm.append(fe)
        object.__setattr__(self, "hyperedges", tuple(norm))

    def distinct_edges(self) -> list:
        seen = []
        for e in self.hyperedges:
            if e not in seen:
                seen.append(e)
        return seen

    def max_edge_size(self) -> int:
        return max((len(e) for e in self.hyperedges), default=0)


def hypergraph_to_json(h: Hypergraph) -> str:
    return json.dumps({"n": h.n,
                       "hyperedges": [sorted(e) for e in h.hyperedges]},
                      sort_keys=True)


def hypergraph_from_json(text: str) -> Hypergraph:
    obj = json.loads(text)
    return Hypergraph(obj["n"], tuple(frozenset(e) for e in obj["hyperedges"]))


def encode_hypergraph(h: Hypergraph) -> Structure:
    """Universe: the vertices, then one representative per distinct
    hyperedge set (first occurrence order)."""
    edges = h.distinct_edges()
    size = h.n + len(edges)
    vertex = {(v,) for v in range(h.n)}
    hyperedge = {(h.n + i,) for i in range(len(edges))}
    contains = {(v, h.n + i) for i, e in enumerate(edges) for v in sorted(e)}
    return Structure(HYPER_SIG, size,
                     {"vertex": vertex, "hyperedge": hyperedge, "in": contains})


def encode_hypergraph_closed(h: Hypergraph) -> Structure:
    """As encode_hypergraph, plus one representative element for every
    nonempty proper subset of each hyperedge (the subset-closed form the
    kernel constructions assume)."""
    edges = h.distinct_edges()
    subsets = []
    seen = set(edges)
    for e in edges:
        for r in range(1, len(e)):
            for sub in itertools.combinations(sorted(e), r):
                fs = frozenset(sub)
                if fs not in seen:
                    seen.add(fs)
                    subsets.append(fs)
    size = h.n + len(edges) + len(subsets)
    vertex = {(v,) for v in range(h.n)}
    hyperedge = {(h.n + i,) for i in range(len(edges))}
    contains = {(v, h.n + i) for i, e in enumerate(edges) for v in sorted(e)}
    base = h.n + len(edges)
    for i, s in enumerate(subsets):
        contains |= {(v, base + i) for v in sorted(s)}
    return Structure(HYPER_SIG, size,
                     {"vertex": vertex, "hyperedge": hyperedge, "in": contains})


def element_set(struct: Structure, e: int) -> frozenset:
    return frozenset(v for (v, f) in struct.table("in") if f == e)


def all_hypergraphs(n: int, max_edges: int, max_size: int):
    """Every hypergraph on {0..n-1} with up to max_edges distinct
    nonempty hyperedges of size <= max_size."""
    candidates = []
    for r in range(1, max_size + 1):
        candidates.extend(frozenset(c) for c in itertools.combinations(range(n), r))
    for count in range(0, max_edges + 1):
        for combo in itertools.combinations(candidates, count):
            yield Hypergraph(n, tuple(combo))


def canonical_hypergraph(h: Hypergraph, pointed: Optional[frozenset] = None):
    """Isomorphism-class key (optionally for a pointed hypergraph)."""
    best = None
    for perm in itertools.permutations(range(h.n)):
        edges = tuple(sorted(tuple(sorted(perm[v] for v in e))
                             for e in h.distinct_edges()))
        point = tuple(sorted(perm[v] for v in pointed)) if pointed is not None else None
        key = (edges, point)
        if best is None or key < best:
            best = key
    return best


# ---------------------------------------------------------------------------
# Tree decompositions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TreeDecomposition:
    """Rooted tree with bags; kind 'tree-depth' additionally requires
    bags to grow strictly along root-to-leaf paths."""

    nodes: tuple
    parent: dict           # node -> parent node (root absent)
    bags: dict             # node -> frozenset of vertices
    kind: str = "tree-width"

    def __post_init__(self):
        object.__setattr__(self, "bags",
                           {n: frozenset(b) for n, b in self.bags.items()})

    @property
    def root(self):
        roots = [n for n in self.nodes if n not in self.parent]
        if len(roots) != 1:
            raise StructureError("decomposition must have exactly one root")
        return roots[0]

    def children(self, node) -> list:
        return [n for n in self.nodes if self.parent.get(n) == node]

    def depth(self) -> int:
        """Number of levels (a single root is depth 1)."""
        def go(n):
            kids = self.children(n)
            return 1 + max((go(c) for c in kids), default=0)
        return go(self.root)

    def width(self) -> int:
        return max(len(b) for b in self.bags.values()) - 1

    def max_bag(self) -> int:
        return max(len(b) for b in self.bags.values())


def validate_decomposition(td: TreeDecomposition, g: Graph) -> list:
    problems = []
    root = td.root
    for node in td.nodes:
        if node != root:
            hops = 0
            cur = node
            while cur in td.parent:
                cur = td.parent[cur]
                hops += 1
                if hops > len(td.nodes):
                    problems.append("parent map has a cycle")
                    return problems
            if cur != root:
                problems.append(f"node {node} not connected to the root")
    for a, b in g.edges:
        if not any({a, b} <= bag for bag in td.bags.values()):
            problems.append(f"edge {(a, b)} not covered by any bag")
    for v in range(g.n):
        touching = {n for n in td.nodes if v in td.bags[n]}
        if not touching:
            problems.append(f"vertex {v} in no bag")
            continue
        # a node set is a connected subtree exactly when one member's
        # parent lies outside the set
        tops = [n for n in touching if td.parent.get(n) not in touching]
        if len(tops) != 1:
            problems.append(f"bag trace of vertex {v} is disconnected")
    if td.kind == "tree-depth":
        for node in td.nodes:
            p = td.parent.get(node)
            if p is not None and not (td.bags[p] < td.bags[node]):
                problems.append(
                    f"tree-depth bags must grow strictly: {p} -> {node}")
    return problems


def td_to_json(td: TreeDecomposition) -> str:
    return json.dumps({
        "nodes": list(td.nodes),
        "parent": dict(td.parent),
        "bags": {n: sorted(td.bags[n]) for n in td.nodes},
        "kind": td.kind,
    }, sort_keys=True)


def td_from_json(text: str) -> TreeDecomposition:
    obj = json.loads(text)
    return TreeDecomposition(tuple(obj["nodes"]), dict(obj["parent"]),
                             {n: frozenset(v) for n, v in obj["bags"].items()},
                             obj.get("kind", "tree-width"))


def single_bag_decomposition(g: Graph) -> TreeDecomposition:
    return TreeDecomposition(("r",), {}, {"r": frozenset(range(g.n))},
                             "tree-depth" if g.n else "tree-width")


def figure_example() -> tuple:
    """The worked seven-vertex example: the graph, its tree-depth
    decomposition and the expected consistent numbering.  Vertices are
    0-indexed here; the classical presentation numbers them 1..7."""
    g = Graph(7, frozenset({(0, 1), (0, 3), (1, 2), (3, 2), (2, 4), (4, 5),
                            (5, 6), (4, 6)}))
    td = TreeDecomposition(
        ("r", "a", "b", "c", "d", "e"),
        {"a": "r", "b": "r", "c": "a", "d": "a", "e": "b"},
        {"r": {2}, "a": {0, 2}, "b": {2, 4}, "c": {0, 1, 2}, "d": {0, 3, 2},
         "e": {4, 5, 6}},
        "tree-width")
    numbering = {2: 1, 0: 2, 1: 3, 3: 3, 4: 2, 5: 1, 6: 3}
    return g, td, numbering
