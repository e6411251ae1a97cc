"""The deterministic graph corpus used by self-checks and the test suite.

Covers paths, all small three-legged spiders, every non-isomorphic tree up to
nine vertices (generated by leaf extension with canonical-code deduplication),
and two fixed non-forest sample graphs so the exact-key code path is also
exercised.  Also provides seeded random-position sampling and exhaustive
position enumeration.
"""

from __future__ import annotations

import random
from typing import Iterator

from .errors import InvalidGraphError, InvalidStateError
from .graphs import Graph, forest_canonical_code, path_graph, spider_graph
from .states import Arrow, DormantState, State, UNMARKED


def glued_triangles_graph() -> Graph:
    """Five vertices, seven edges: three triangles sharing edges (not a forest)."""
    edges = ((0, 1), (1, 2), (0, 3), (1, 3), (1, 4), (2, 4), (3, 4))
    return Graph(5, edges, labels=("x", "y", "z", "a", "b"))


def cycle_with_tails_graph() -> Graph:
    """Eight vertices, eight edges: a four-cycle with a path and a pendant."""
    edges = ((0, 1), (1, 2), (2, 3), (3, 4), (0, 5), (5, 6), (1, 6), (2, 7))
    return Graph(8, edges)


def _trees_exactly(prev: list[Graph]) -> list[Graph]:
    seen: dict[bytes, Graph] = {}
    for t in prev:
        for v in range(t.vertex_count):
            g = Graph(t.vertex_count + 1, t.edges + ((v, t.vertex_count),))
            seen.setdefault(forest_canonical_code(g), g)
    return [seen[code] for code in sorted(seen)]


def all_trees(max_vertices: int) -> list[Graph]:
    """Every non-isomorphic tree with up to ``max_vertices`` vertices."""
    level = [Graph(1, ())]
    out = list(level)
    for _ in range(2, max_vertices + 1):
        level = _trees_exactly(level)
        out.extend(level)
    return out


def spider_triples(max_leg: int) -> list[tuple[int, int, int]]:
    return [
        (a, b, c)
        for a in range(max_leg + 1)
        for b in range(a, max_leg + 1)
        for c in range(b, max_leg + 1)
        if c > 0
    ]


def corpus_graphs() -> list[tuple[str, Graph]]:
    """Named corpus, deduplicated across the overlapping families."""
    out: list[tuple[str, Graph]] = []
    seen: set[bytes] = set()

    def add(name: str, g: Graph) -> None:
        if g.is_forest():
            code = forest_canonical_code(g)
            if code in seen:
                return
            seen.add(code)
        out.append((name, g))

    for n in range(1, 11):
        add(f"path-{n}", path_graph(n))
    for a, b, c in spider_triples(4):
        add(f"spider-{a}-{b}-{c}", spider_graph(a, b, c))
    for t in all_trees(9):
        add(f"tree-{t.vertex_count}v-{t.edge_count}e-{hash(t.edges) & 0xFFFF:04x}", t)
    add("glued-triangles", glued_triangles_graph())
    add("cycle-with-tails", cycle_with_tails_graph())
    return out


def large_sweep_graphs() -> list[tuple[str, Graph]]:
    """Graphs with 9..14 edges for the randomized oracle sweep."""
    out: list[tuple[str, Graph]] = []
    for n in range(10, 16):
        out.append((f"path-{n}", path_graph(n)))
    for a, b, c in [(1, 4, 4), (2, 3, 4), (3, 3, 3), (2, 4, 4), (3, 3, 5),
                    (3, 4, 4), (3, 4, 5), (4, 4, 4), (4, 4, 5), (4, 5, 5)]:
        out.append((f"spider-{a}-{b}-{c}", spider_graph(a, b, c)))
    return [(name, g) for name, g in out if 9 <= g.edge_count <= 14]


def enumerate_states(graph: Graph, dormant: bool = False) -> Iterator[State]:
    """All positions of the graph under the chosen rule set, each exactly once.

    Positions are generated by adding arrows in increasing edge-index order;
    every sub-decoration of a position is itself a position, so this walks
    the whole space without revisits.
    """
    cls = DormantState if dormant else State
    base = cls.empty(graph)
    yield base
    stack: list[tuple[State, int]] = [(base, -1)]
    while stack:
        state, last = stack.pop()
        for i in range(last + 1, graph.edge_count):
            u, w = graph.edges[i]
            for arrow in (Arrow(u, w), Arrow(w, u)):
                if state.violation(arrow) is None:
                    child = state.apply_move(arrow)
                    yield child
                    stack.append((child, i))


def count_states(graph: Graph, dormant: bool = False) -> int:
    return sum(1 for _ in enumerate_states(graph, dormant))


def random_state(rng: random.Random, graph: Graph, dormant: bool = False) -> State:
    """A pseudo-random position: uniform slot sampling with rejection."""
    cls = DormantState if dormant else State
    for _ in range(300):
        slots = tuple(rng.randrange(3) for _ in range(graph.edge_count))
        try:
            return cls(graph, slots)
        except (InvalidStateError, InvalidGraphError):
            continue
    # dense graphs under the strict rule set may reject a lot; walk instead
    state = cls.empty(graph)
    for _ in range(rng.randrange(graph.edge_count + 1)):
        moves = sorted(state.legal_moves())
        if not moves:
            break
        state = state.apply_move(moves[rng.randrange(len(moves))])
    return state
