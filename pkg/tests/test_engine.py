import random

import pytest
from hypothesis import given, settings, strategies as st

from arrows.catalog import crash_state, flow_state, rod_state, twig_state
from arrows.corpus import corpus_graphs, enumerate_states, random_state
from arrows.engine import (
    GrundyCache,
    GrundyEngine,
    Mode,
    ParityClass,
    Player,
    best_dormant_move_via_trimming,
    canonical_key,
    mex,
    nim_sum,
    reduce_state,
)
from arrows.errors import InvalidGraphError, ResourceLimitError
from arrows.graphs import Graph, disjoint_union, path_graph, spider_graph, trimming
from arrows.states import Arrow, DormantState, LegSpec, Mark, State, spider_state
from conftest import brute_grundy

IN, OUT = Mark.IN, Mark.OUT


class TestPrimitives:
    def test_mex(self):
        assert mex(set()) == 0
        assert mex({0, 1, 2, 4}) == 3
        assert mex({1, 2, 3}) == 0

    def test_nim_sum(self):
        assert nim_sum(3, 5) == 6
        assert nim_sum(11, 11) == 0

    def test_nim_sum_matches_disjoint_union(self, engine):
        t2, t1 = twig_state(2), twig_state(1)
        union = State.from_arrows(
            disjoint_union(t2.graph, t1.graph),
            list(t2.arrows) + [Arrow(a.tail + 4, a.head + 4) for a in t1.arrows],
        )
        assert engine.grundy_naive(union) == 3 == nim_sum(
            engine.grundy_naive(t2), engine.grundy_naive(t1)
        )

    def test_cache_remap_refused(self):
        cache = GrundyCache()
        cache.put(b"k", 1)
        cache.put(b"k", 1)
        with pytest.raises(RuntimeError):
            cache.put(b"k", 2)


class TestReduce:
    def test_empty_path_double_watched(self):
        (r,) = reduce_state(State.empty(path_graph(4)))
        assert r.graph.edge_count == 3
        internal = [v for v in range(4) if r.graph.degrees[v] == 2]
        for v in internal:
            assert r.sink_watch[v] and r.source_watch[v]
        for v in (0, 3):
            assert not r.sink_watch[v] and not r.source_watch[v]

    def test_three_outward_marks_flags(self):
        x = spider_state(LegSpec(2, OUT), LegSpec(2, OUT), LegSpec(2, OUT))
        (r,) = reduce_state(x)
        # the vertices that emitted a mark keep only their source watch
        emitters = [v for v in range(r.graph.vertex_count)
                    if r.source_watch[v] and not r.sink_watch[v]]
        assert len(emitters) == 3

    def test_components_match_unmarked_subgraph(self):
        x = spider_state(LegSpec(2), LegSpec(1, IN), LegSpec(2, IN))
        comps = reduce_state(x)
        u, _ = x.unmarked_subgraph()
        assert len(comps) == len([c for c, _ in u.connected_components() if c.edge_count])

    def test_moves_round_trip_through_reduction(self):
        # the reduced view must reproduce exactly the original legal moves
        for _, g in corpus_graphs():
            if not 0 < g.edge_count <= 6:
                continue
            for dormant in (False, True):
                for x in enumerate_states(g, dormant):
                    from_reduction = set()
                    for rc in reduce_state(x):
                        for i, d in rc.legal_moves():
                            u, w = rc.graph.edges[i]
                            t, h = (u, w) if d == 1 else (w, u)
                            from_reduction.add(Arrow(rc.origin[t], rc.origin[h]))
                    assert from_reduction == set(x.legal_moves())


class TestCanonicalKeys:
    def test_flip_symmetric_flow(self, engine):
        x = flow_state(5)
        kx = sorted(canonical_key(r) for r in reduce_state(x))
        ky = sorted(canonical_key(r) for r in reduce_state(x.flip()))
        assert kx == ky

    def test_spider_collapses_to_crash(self):
        n = 5
        x = spider_state(LegSpec(0, IN), LegSpec(0, IN), LegSpec(n, IN))
        assert [canonical_key(r) for r in reduce_state(x)] == [
            canonical_key(r) for r in reduce_state(crash_state(n))
        ]

    def test_relabeling_invariance(self):
        g = spider_graph(2, 1, 2)
        x = State.empty(g)
        n = g.vertex_count
        perm = list(reversed(range(n)))
        relabeled = Graph(n, tuple((perm[u], perm[w]) for u, w in g.edges))
        y = State.empty(relabeled)
        assert {canonical_key(r) for r in reduce_state(x)} == {
            canonical_key(r) for r in reduce_state(y)
        }

    def test_non_tree_component_exact_key(self):
        cycle = Graph(4, ((0, 1), (1, 2), (2, 3), (0, 3)))
        x = State.empty(cycle)
        (r,) = reduce_state(x)
        assert canonical_key(r).startswith(b"X")


class TestGrundy:
    def test_paper_values(self, engine):
        assert engine.grundy(State.empty(spider_graph(2, 2, 2))) == 0
        x = spider_state(LegSpec(2, OUT), LegSpec(3, OUT), LegSpec(4, OUT))
        assert engine.grundy(x) == 5
        assert engine.grundy(twig_state(5)) == 5
        assert engine.grundy(State.empty(Graph(0, ()))) == 0

    def test_naive_values(self, engine):
        assert engine.grundy_naive(crash_state(4)) == 1
        assert engine.grundy_naive(rod_state(4)) == 0
        assert engine.grundy_naive(State.empty(spider_graph(1, 1, 1))) == 1

    def test_matches_brute_force(self, engine):
        for g in (path_graph(5), spider_graph(1, 2, 2), spider_graph(2, 2, 2)):
            for x in enumerate_states(g):
                assert engine.grundy(x) == brute_grundy(x)

    def test_resource_limits(self):
        eng = GrundyEngine(max_edges=5, naive_max_edges=4)
        with pytest.raises(ResourceLimitError):
            eng.grundy(State.empty(path_graph(8)))
        with pytest.raises(ResourceLimitError):
            eng.grundy_naive(State.empty(path_graph(8)))

    def test_env_bound(self, monkeypatch):
        monkeypatch.setenv("ARROWS_MAX_EDGES", "3")
        assert GrundyEngine().max_edges == 3


class TestDormant:
    def test_p3_terminal(self, engine):
        assert engine.grundy_dormant(DormantState.empty(path_graph(3))) == 0

    def test_odd_spider(self, engine):
        value = engine.grundy_dormant(DormantState.empty(spider_graph(3, 3, 3)))
        assert value == 0 == engine.grundy(State.empty(spider_graph(2, 2, 2)))

    def test_equivalence_small_corpus(self, engine):
        for _, g in corpus_graphs():
            if not g.is_forest() or not 0 < g.edge_count <= 8 or g.isolated_vertices():
                continue
            dormant = engine.grundy_dormant(DormantState.empty(g))
            trimmed = engine.grundy(State.empty(trimming(g).graph))
            assert dormant == trimmed

    def test_rejects_plain_state(self, engine):
        from arrows.errors import InvalidParameterError

        with pytest.raises(InvalidParameterError):
            engine.grundy_dormant(State.empty(path_graph(3)))


class TestWinner:
    def test_odd_spider_second_player(self, engine):
        assert engine.winner(spider_graph(3, 5, 7), Mode.ARROWS) is Player.TWO

    def test_paths(self, engine):
        assert engine.winner(path_graph(5), Mode.ARROWS) is Player.TWO
        assert engine.winner(path_graph(4), Mode.ARROWS) is Player.ONE

    def test_p2_degenerate(self, engine):
        # one edge and no legal first move: second player wins despite the
        # odd edge count, the boundary case of the even-edge-count rule
        assert engine.winner(path_graph(2), Mode.ARROWS) is Player.TWO

    def test_trimmed_mode(self, engine):
        assert engine.winner(spider_graph(2, 2, 2), Mode.TRIMMED) is Player.TWO
        assert engine.winner(path_graph(2), Mode.TRIMMED) is Player.ONE

    def test_isolated_rejected(self, engine):
        with pytest.raises(InvalidGraphError):
            engine.winner(Graph(1, ()), Mode.ARROWS)


class TestBestMove:
    def test_terminal_none(self, engine):
        f0 = State.from_arrows(path_graph(3), [Arrow(0, 1), Arrow(1, 2)])
        assert engine.best_move(f0) is None

    def test_winning_move_has_zero_follower(self, engine):
        for x in (twig_state(3), rod_state(3), State.empty(spider_graph(2, 3, 4))):
            if engine.grundy(x) == 0:
                continue
            move = engine.best_move(x)
            assert engine.grundy(x.apply_move(move)) == 0

    def test_self_consistency_on_marked_spider(self, engine):
        x = State.empty(spider_graph(2, 3, 4))
        has_zero_follower = any(
            engine.grundy(x.apply_move(m)) == 0 for m in engine.ordered_moves(x)
        )
        assert has_zero_follower == (engine.grundy(x) != 0)

    def test_losing_policy_deterministic(self, engine):
        x = State.empty(spider_graph(2, 2, 2))
        assert engine.grundy(x) == 0
        move = engine.best_move(x)
        children = [(m, engine.grundy(x.apply_move(m))) for m in engine.ordered_moves(x)]
        best_value = max(v for _, v in children)
        assert engine.grundy(x.apply_move(move)) == best_value
        assert move == next(m for m, v in children if v == best_value)

    def test_dormant_route_via_trimming(self, engine):
        g = spider_graph(3, 3, 3)
        trim = trimming(g)
        x = DormantState.empty(g)
        move = best_dormant_move_via_trimming(engine, trim, x)
        assert move in x.legal_moves()


class TestParity:
    def test_flow_parities(self, engine):
        for n in range(0, 9):
            expected = ParityClass.EVEN if n % 2 == 0 else ParityClass.ODD
            assert engine.parity_moves_class(flow_state(n)) is expected

    def test_spider_parities(self, engine):
        for n in range(0, 7):
            x = spider_state(LegSpec(1, IN), LegSpec(1, IN), LegSpec(n, IN))
            expected = ParityClass.EVEN if (n + 1) % 2 == 0 else ParityClass.ODD
            assert engine.parity_moves_class(x) is expected

    def test_star_is_odd(self, engine):
        assert engine.parity_moves_class(State.empty(spider_graph(1, 1, 1))) is ParityClass.ODD

    def test_mixed_exists(self, engine):
        # value 2 rules out both fixed-parity classes
        assert engine.parity_moves_class(twig_state(2)) is ParityClass.MIXED

    def test_even_rod(self, engine):
        assert engine.parity_moves_class(rod_state(2)) is ParityClass.EVEN


# -- property tests ----------------------------------------------------------

_small_graphs = [g for _, g in corpus_graphs() if 0 < g.edge_count <= 7][:40]


@st.composite
def corpus_state(draw):
    g = draw(st.sampled_from(_small_graphs))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_state(random.Random(seed), g)


class TestProperties:
    @given(corpus_state())
    @settings(max_examples=120, deadline=None)
    def test_flip_invariance(self, x):
        eng = GrundyEngine()
        assert eng.grundy(x) == eng.grundy(x.flip())

    @given(corpus_state())
    @settings(max_examples=120, deadline=None)
    def test_mex_law(self, x):
        eng = GrundyEngine()
        value = eng.grundy(x)
        follower_values = {eng.grundy(x.apply_move(m)) for m in x.legal_moves()}
        assert value not in follower_values
        assert all(v in follower_values for v in range(value))

    @given(corpus_state(), corpus_state())
    @settings(max_examples=80, deadline=None)
    def test_disjoint_union_law(self, x, y):
        eng = GrundyEngine()
        shift = x.graph.vertex_count
        union = State.from_arrows(
            disjoint_union(x.graph, y.graph),
            list(x.arrows) + [Arrow(a.tail + shift, a.head + shift) for a in y.arrows],
        )
        assert eng.grundy(union) == nim_sum(eng.grundy(x), eng.grundy(y))

    @given(corpus_state())
    @settings(max_examples=60, deadline=None)
    def test_parity_law(self, x):
        eng = GrundyEngine()
        cls = eng.parity_moves_class(x)
        if cls is ParityClass.EVEN:
            assert eng.grundy(x) == 0
        elif cls is ParityClass.ODD:
            assert eng.grundy(x) == 1
