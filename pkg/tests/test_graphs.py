import pytest

from arrows.corpus import corpus_graphs, glued_triangles_graph
from arrows.errors import FormatError, InvalidGraphError, InvalidParameterError
from arrows.graphs import (
    Graph,
    disjoint_union,
    forest_canonical_code,
    forest_isomorphic,
    format_graph,
    inverse_trimming,
    parse_graph,
    path_graph,
    ramification,
    spider_graph,
    trimming,
)


class TestConstructors:
    def test_path_smallest(self):
        g = path_graph(2)
        assert g.vertex_count == 2 and g.edge_count == 1

    def test_path_five_layout(self):
        g = path_graph(5)
        assert g.edges == ((0, 1), (1, 2), (2, 3), (3, 4))

    def test_path_degenerate(self):
        g = path_graph(1)
        assert g.vertex_count == 1 and g.edge_count == 0

    def test_path_rejects_zero(self):
        with pytest.raises(InvalidParameterError):
            path_graph(0)

    def test_spider_234(self):
        g = spider_graph(2, 3, 4)
        assert g.vertex_count == 10 and g.edge_count == 9
        assert g.degree(0) == 3

    def test_spider_star(self):
        g = spider_graph(1, 1, 1)
        assert g.vertex_count == 4 and g.degree(0) == 3

    def test_spider_two_zero_legs(self):
        g = spider_graph(0, 0, 1)
        assert forest_isomorphic(g, path_graph(2))

    def test_spider_all_zero_rejected(self):
        with pytest.raises(InvalidParameterError):
            spider_graph(0, 0, 0)

    def test_hub_degree_counts_nonzero_legs(self):
        assert spider_graph(0, 2, 3).degree(0) == 2

    def test_duplicate_edge_rejected(self):
        with pytest.raises(InvalidGraphError):
            Graph(3, ((0, 1), (1, 0)))

    def test_self_loop_rejected(self):
        with pytest.raises(InvalidGraphError):
            Graph(2, ((1, 1),))


class TestDisjointUnion:
    def test_counts_add(self):
        g = disjoint_union(path_graph(2), path_graph(3))
        assert g.vertex_count == 5 and g.edge_count == 3

    def test_matches_trimmed_spider(self):
        expected = disjoint_union(path_graph(3), path_graph(3))
        assert forest_isomorphic(trimming(spider_graph(1, 3, 3)).graph, expected)

    def test_empty_identity(self):
        g = path_graph(4)
        assert forest_isomorphic(disjoint_union(Graph(0, ()), g), g)


class TestRamification:
    def test_figure_example(self):
        g = glued_triangles_graph()
        r = ramification(g, [3, 4])
        assert r.vertex_count == 9 and r.edge_count == 7
        names = {frozenset((r.name(u), r.name(w))) for u, w in r.edges}
        assert names == {
            frozenset(p)
            for p in [("x", "y"), ("y", "z"), ("a_x", "x"), ("a_y", "y"),
                      ("b_y", "y"), ("b_z", "z"), ("a_b", "b_a")]
        }

    def test_empty_split_set(self):
        g = path_graph(4)
        assert ramification(g, []) == g

    def test_path_middle_vertex(self):
        r = ramification(path_graph(3), [1])
        assert forest_isomorphic(r, disjoint_union(path_graph(2), path_graph(2)))

    def test_out_of_range_vertex(self):
        with pytest.raises(InvalidParameterError):
            ramification(path_graph(3), [7])

    def test_edge_count_preserved(self):
        for _, g in corpus_graphs()[:40]:
            k = [v for v in range(g.vertex_count) if v % 3 == 0]
            assert ramification(g, k).edge_count == g.edge_count

    def test_disconnected_input(self):
        g = disjoint_union(path_graph(3), path_graph(3))
        r = ramification(g, [1, 4])
        assert r.edge_count == g.edge_count
        assert forest_isomorphic(
            r, disjoint_union(disjoint_union(path_graph(2), path_graph(2)),
                              disjoint_union(path_graph(2), path_graph(2)))
        )


class TestTrimming:
    def test_spider_long_legs(self):
        assert forest_isomorphic(trimming(spider_graph(3, 5, 7)).graph, spider_graph(2, 4, 6))

    def test_spider_all_ones(self):
        assert trimming(spider_graph(1, 1, 1)).graph.vertex_count == 0

    def test_spider_one_short_leg(self):
        t = trimming(spider_graph(1, 3, 3)).graph
        assert forest_isomorphic(t, disjoint_union(path_graph(3), path_graph(3)))

    def test_path_three(self):
        assert trimming(path_graph(3)).graph.vertex_count == 0

    def test_leafless_identity(self):
        cycle = Graph(5, tuple((i, (i + 1) % 5) for i in range(5)))
        assert trimming(cycle).graph == cycle

    def test_never_isolated(self):
        for _, g in corpus_graphs():
            if g.isolated_vertices():
                continue
            assert not trimming(g).graph.isolated_vertices()

    def test_arrow_bijection_data(self):
        t = trimming(spider_graph(2, 2, 2))
        assert len(t.edge_map) == t.graph.edge_count
        assert len(set(t.edge_map)) == len(t.edge_map)
        for j, (p, q) in enumerate(t.graph.edges):
            u, w = t.original.edges[t.edge_map[j]]
            assert {t.vertex_map[p], t.vertex_map[q]} == {u, w}


class TestInverseTrimming:
    def test_path(self):
        assert forest_isomorphic(inverse_trimming(path_graph(3)), path_graph(5))

    def test_spider(self):
        assert forest_isomorphic(inverse_trimming(spider_graph(2, 2, 2)), spider_graph(3, 3, 3))

    def test_pendant_construction(self):
        h = Graph(
            8,
            ((0, 1), (1, 2), (2, 3), (3, 4), (0, 5), (5, 6), (1, 6), (2, 7)),
            labels=("0", "1", "2", "3", "y", "5", "6", "x"),
        )
        g = inverse_trimming(h)
        assert g.vertex_count == h.vertex_count + 2
        new_names = {g.name(v) for v in range(h.vertex_count, g.vertex_count)}
        assert new_names == {"y'", "x'"}

    def test_rejects_isolated(self):
        with pytest.raises(InvalidParameterError):
            inverse_trimming(Graph(1, ()))

    def test_round_trip_over_corpus(self):
        for name, h in corpus_graphs():
            if h.isolated_vertices():
                continue
            t = trimming(inverse_trimming(h))
            mapped = {
                tuple(sorted((t.vertex_map[p], t.vertex_map[q])))
                for p, q in t.graph.edges
            }
            assert mapped == set(h.edges), name
            if h.is_forest():
                assert forest_isomorphic(t.graph, h), name


class TestPartsAndComponents:
    def test_leaves_path(self):
        assert path_graph(5).leaves() == {0, 4}

    def test_internal_star(self):
        assert spider_graph(1, 1, 1).internal_vertices() == {0}

    def test_components(self):
        comps = disjoint_union(path_graph(3), path_graph(3)).connected_components()
        assert len(comps) == 2
        for comp, members in comps:
            assert forest_isomorphic(comp, path_graph(3))
            assert len(members) == 3


class TestForestCodes:
    def test_relabeling_invariance(self):
        g = spider_graph(1, 2, 3)
        # reversed vertex numbering of the same tree
        n = g.vertex_count
        relabeled = Graph(n, tuple((n - 1 - u, n - 1 - w) for u, w in g.edges))
        assert forest_canonical_code(g) == forest_canonical_code(relabeled)

    def test_distinguishes(self):
        assert not forest_isomorphic(spider_graph(1, 1, 2), path_graph(5))

    def test_non_forest_rejected(self):
        with pytest.raises(InvalidParameterError):
            forest_canonical_code(glued_triangles_graph())


class TestTextFormat:
    def test_round_trip(self):
        g = spider_graph(2, 3, 4)
        assert parse_graph(format_graph(g)) == g

    def test_shorthand(self):
        assert parse_graph("path 5\n") == path_graph(5)
        assert parse_graph("# a comment\nspider 2 3 4\n") == spider_graph(2, 3, 4)

    def test_long_form(self):
        g = parse_graph("v 3\ne 0 1\ne 1 2\n")
        assert g == path_graph(3)

    def test_serializer_sorted(self):
        g = Graph(4, ((2, 3), (0, 1), (1, 2)))
        assert format_graph(g) == "v 4\ne 0 1\ne 1 2\ne 2 3\n"

    def test_parse_error_carries_line(self):
        with pytest.raises(FormatError) as exc:
            parse_graph("v 3\ne 0 7\n")
        assert exc.value.line_no == 2

    def test_unknown_directive(self):
        with pytest.raises(FormatError):
            parse_graph("w 3\n")
