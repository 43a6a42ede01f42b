import itertools
import random

import pytest

from weakfo.evaluator import evaluate
from weakfo.families import (consistent_numbering, core_formula, degree_check,
                             family_clique, family_embedding,
                             family_hitting_set, family_long_path,
                             family_matching, family_triangle_packing,
                             family_vertex_cover, kernel_formula,
                             pseudocore_formula)
from weakfo.graphs import (Graph, Hypergraph, TreeDecomposition, all_graphs,
                           canonical_graph, complete_graph, cycle_graph,
                           encode_graph, encode_hypergraph,
                           encode_hypergraph_closed, element_set,
                           figure_example, graph_from_json, graph_to_json,
                           path_graph, single_bag_decomposition, star_graph,
                           td_from_json, td_to_json, validate_decomposition)
from weakfo.oracles import (has_clique, has_dominating_set, has_embedding,
                            has_hitting_set, has_matching, has_path,
                            has_triangle_packing, has_vertex_cover,
                            is_sunflower_core)
from weakfo.parser import render_formula
from weakfo.syntax import VarName, alpha_equal, rename_bound_fresh, to_nnf
from weakfo.weakness import classify


def iso_representatives(n):
    seen = {}
    for g in all_graphs(n):
        key = canonical_graph(g)
        if key not in seen:
            seen[key] = g
    return list(seen.values())


REPS = {n: iso_representatives(n) for n in (1, 2, 3, 4)}


def sweep(formula, oracle_fn, sizes=(1, 2, 3, 4)):
    for n in sizes:
        for g in REPS[n]:
            got = evaluate(encode_graph(g), formula)
            want = oracle_fn(g)
            assert got == want, (n, sorted(g.edges), got, want)


def test_matching_family():
    for k in (1, 2):
        sweep(family_matching(k), lambda g, k=k: has_matching(g, k))


def test_triangle_packing_both_forms():
    for k in (1, 2):
        direct = family_triangle_packing(k)
        weak = family_triangle_packing(k, weak_form=True)
        sweep(direct, lambda g, k=k: has_triangle_packing(g, k))
        sweep(weak, lambda g, k=k: has_triangle_packing(g, k))


def test_clique_family():
    for k in (1, 2, 3):
        sweep(family_clique(k), lambda g, k=k: has_clique(g, k))
    assert evaluate(encode_graph(complete_graph(4)), family_clique(4))


def test_weak_triangle_form_strong_rank():
    for k in (1, 2, 3):
        f = rename_bound_fresh(to_nnf(family_triangle_packing(k, weak_form=True)))
        cls = classify(f)
        assert cls.strong_qr == 3
        weak_count = sum(q.classification != "strong" for q in cls.quantifiers)
        assert weak_count == 3 * k


def test_long_path_family():
    for k in (1, 2, 3):
        sweep(family_long_path(k), lambda g, k=k: has_path(g, k))
    assert evaluate(encode_graph(cycle_graph(4)), family_long_path(3))
    assert not evaluate(encode_graph(path_graph(2)), family_long_path(3))
    assert evaluate(encode_graph(cycle_graph(4)), family_long_path(4))


def test_long_path_strong_variables():
    f = family_long_path(3)
    cls = classify(rename_bound_fresh(to_nnf(f)))
    hinted = {q.name for q in cls.quantifiers if q.weak_hint}
    unhinted_bases = {q.name.base for q in cls.quantifiers if not q.weak_hint}
    assert len(hinted) == 3
    assert unhinted_bases == {"s", "t", "x", "y"}
    assert all(q.classification != "strong" for q in cls.quantifiers
               if q.weak_hint)  # the marks are honest


def test_vertex_cover_family():
    for k in (0, 1, 2):
        f = family_vertex_cover(k)
        sweep(f, lambda g, k=k: has_vertex_cover(g, k), sizes=(1, 2, 3, 4))
    assert not evaluate(encode_graph(complete_graph(3)), family_vertex_cover(1))
    assert evaluate(encode_graph(complete_graph(3)), family_vertex_cover(2))
    assert evaluate(encode_graph(star_graph(5)), family_vertex_cover(1))


def test_oracles_trivia():
    assert not has_vertex_cover(complete_graph(3), 1)
    assert has_clique(complete_graph(4), 4)
    assert has_path(cycle_graph(4), 4)
    assert has_dominating_set(star_graph(3), 1)
    assert not has_hitting_set(Hypergraph(2, (frozenset(),)), 5)


def test_graph_json_roundtrip():
    g = Graph(4, frozenset({(0, 1), (1, 2)}))
    assert graph_from_json(graph_to_json(g)) == g
    _, td, _ = figure_example()
    assert td_from_json(td_to_json(td)) == td


def test_hypergraph_encoding():
    h = Hypergraph(2, (frozenset({0, 1}),))
    s = encode_hypergraph(h)
    assert s.size == 3
    assert s.table("in") == frozenset({(0, 2), (1, 2)})
    dup = Hypergraph(2, (frozenset({0, 1}), frozenset({1, 0})))
    assert encode_hypergraph(dup).size == 3
    empty = Hypergraph(3, ())
    assert encode_hypergraph(empty).size == 3
    closed = encode_hypergraph_closed(h)
    assert closed.size == 5  # 2 vertices, the edge, subsets {0} and {1}
    sets = {element_set(closed, e) for e in range(2, 5)}
    assert sets == {frozenset({0, 1}), frozenset({0}), frozenset({1})}


def test_consistent_numbering_figure():
    g, td, expected = figure_example()
    assert validate_decomposition(td, g) == []
    assert consistent_numbering(td) == expected
    assert td.depth() == 3
    assert td.max_bag() == 3


def test_single_bag_numbering():
    g = Graph(3, frozenset({(0, 1)}))
    td = single_bag_decomposition(g)
    assert consistent_numbering(td) == {0: 1, 1: 2, 2: 3}


def test_embedding_one_bag():
    h = Graph(2, frozenset({(0, 1)}))
    td = single_bag_decomposition(h)
    f = family_embedding(h, td)
    for n in (1, 2, 3):
        for g in REPS[n]:
            assert evaluate(encode_graph(g), f) == has_embedding(h, g)


def test_embedding_figure_matches_oracle_random():
    from weakfo.weakness import strong_block_depth
    from weakfo.weakelim import weak_names
    from weakfo.syntax import bound_vars
    h, td, _ = figure_example()
    f = family_embedding(h, td)
    fresh = rename_bound_fresh(to_nnf(f))
    # one strong block per bag: block depth equals the tree depth
    assert strong_block_depth(fresh) == 3 == td.depth()
    # the generated formula reuses the bag-position variables, so the
    # unmarked bound-name count is width+1 (renaming would undo the reuse)
    strong_names = bound_vars(f) - weak_names(f)
    assert len(strong_names) == 3 == td.width() + 1
    cls = classify(fresh)
    assert all(q.classification != "strong" for q in cls.quantifiers if q.weak_hint)
    rng = random.Random(11)
    from weakfo.graphs import random_graph
    for _ in range(12):
        g = random_graph(rng, 7, 0.6)
        assert evaluate(encode_graph(g), f) == has_embedding(h, g)


def test_embedding_small_h_all_g():
    hs = [Graph(3, frozenset({(0, 1), (1, 2)})),
          Graph(3, frozenset({(0, 1), (1, 2), (0, 2)})),
          Graph(4, frozenset({(0, 1), (1, 2), (2, 3)}))]
    for h in hs:
        f = family_embedding(h, single_bag_decomposition(h))
        for n in (2, 3, 4):
            for g in REPS[n]:
                assert evaluate(encode_graph(g), f) == has_embedding(h, g), \
                    (h.edges, g.edges)


def test_core_formula_sunflower():
    # hyperedges {0,1},{0,2},{0,3}: {0} is the core of a 3-petal sunflower
    h = Hypergraph(4, (frozenset({0, 1}), frozenset({0, 2}), frozenset({0, 3})))
    struct = encode_hypergraph_closed(h)
    f = core_formula(2, 3, 1)
    c = VarName("c")
    target = next(e for e in range(struct.size)
                  if element_set(struct, e) == frozenset({0})
                  and (e,) not in struct.table("hyperedge") or
                  element_set(struct, e) == frozenset({0}))
    assert evaluate(struct, f, {c: target})
    assert is_sunflower_core(h, frozenset({0}), 2)
    # a vertex element represents the empty set; no empty-core sunflower here
    assert not evaluate(struct, f, {c: 1})


def test_pseudocore_level1_equals_core():
    h = Hypergraph(4, (frozenset({0, 1}), frozenset({0, 2}), frozenset({0, 3})))
    struct = encode_hypergraph_closed(h)
    c = VarName("c")
    for k in (1, 2):
        cf = core_formula(k, 2, 1)
        pf = pseudocore_formula(k, 2, 1)
        for e in range(struct.size):
            assert evaluate(struct, cf, {c: e}) == evaluate(struct, pf, {c: e}), (k, e)


def test_core_rank_grows_pseudocore_does_not():
    ranks_core = []
    ranks_pseudo = []
    for level in (1, 2, 3):
        cf = rename_bound_fresh(to_nnf(core_formula(1, 2, level)))
        pf = rename_bound_fresh(to_nnf(pseudocore_formula(1, 2, level)))
        ranks_core.append(classify(cf).strong_qr_mixed)
        ranks_pseudo.append(classify(pf).strong_qr_mixed)
    assert ranks_pseudo[0] == ranks_pseudo[1] == ranks_pseudo[2]
    assert ranks_core[0] < ranks_core[1] < ranks_core[2]
    diffs = {b - a for a, b in zip(ranks_core, ranks_core[1:])}
    assert len(diffs) == 1  # linear growth


def test_hitting_set_family_small():
    f = family_hitting_set(1, 2)
    cases = [
        (Hypergraph(2, (frozenset({0}),)), True),
        (Hypergraph(3, (frozenset({0, 1}), frozenset({1, 2}))), True),
        (Hypergraph(3, (frozenset({0}), frozenset({1}))), False),
        (Hypergraph(2, ()), True),
    ]
    for h, want in cases:
        struct = encode_hypergraph(h)
        assert evaluate(struct, f, budget=10 ** 8) == want, h
        assert has_hitting_set(h, 1) == want


def test_degree_check():
    f = degree_check(2)
    ok = encode_hypergraph(Hypergraph(3, (frozenset({0, 1}),)))
    too_big = encode_hypergraph(Hypergraph(3, (frozenset({0, 1, 2}),)))
    assert evaluate(ok, f)
    assert not evaluate(too_big, f)
