"""Exact Grundy evaluation.

Two independent routes compute the same values:

* ``GrundyEngine.grundy`` reduces a position to flagged unmarked subgraphs,
  splits them into connected components, evaluates each component with a
  memoized mex recursion keyed on a canonical code, and recombines with the
  nim-sum (xor) rule for disjoint unions.
* ``GrundyEngine.grundy_naive`` runs the definitional recursion over exact
  edge codes with no reduction or splitting; it is the reference oracle and
  is deliberately kept structurally separate.

The reduction stores, per vertex of the unmarked subgraph, whether a sink or
a source still has to be prevented there.  Two positions whose flagged
unmarked subgraphs are isomorphic have isomorphic game trees, because move
legality and flag updates are functions of the flagged graph alone; this is
what makes the canonical-key memoization sound.  The flags bake in the rule
set, so positions of both games share one cache safely.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Iterable

from .errors import InvalidGraphError, InvalidParameterError, ResourceLimitError
from .graphs import Graph, Trimming, tree_component_code, trimming
from .kernel import NaiveKernel
from .states import Arrow, BACKWARD, DormantState, FORWARD, State, UNMARKED

DEFAULT_MAX_EDGES = 24
DEFAULT_NAIVE_MAX_EDGES = 14


def mex(values: Iterable[int]) -> int:
    """Least nonnegative integer missing from ``values``."""
    present = set(values)
    g = 0
    while g in present:
        g += 1
    return g


def nim_sum(a: int, b: int) -> int:
    """Binary addition without carrying."""
    return a ^ b


class ParityClass(Enum):
    EVEN = "even"  # every completion adds an even number of arrows
    ODD = "odd"
    MIXED = "mixed"


class Mode(Enum):
    TRIMMED = "trimmed"  # sinks/sources allowed at leaves
    ARROWS = "arrows"  # sinks/sources forbidden everywhere


class Player(Enum):
    ONE = "player1"
    TWO = "player2"

    @property
    def other(self) -> "Player":
        return Player.TWO if self is Player.ONE else Player.ONE


class GrundyCache:
    """Canonical-key value store with hit/miss accounting.

    Values are deterministic, so concurrent duplicate inserts are benign;
    remapping a key to a different value is a bug and raises.
    """

    def __init__(self):
        self._table: dict[bytes, int] = {}
        self.hits = 0
        self.misses = 0

    def get(self, key: bytes) -> int | None:
        value = self._table.get(key)
        if value is None:
            self.misses += 1
        else:
            self.hits += 1
        return value

    def put(self, key: bytes, value: int) -> None:
        old = self._table.setdefault(key, value)
        if old != value:
            raise RuntimeError(f"cache key remapped: {old} -> {value}")

    def __len__(self) -> int:
        return len(self._table)


@dataclass(frozen=True)
class ReducedState:
    """One connected component of a position's flagged unmarked subgraph.

    ``sink_watch[v]`` / ``source_watch[v]`` say whether completing the last
    edge at ``v`` pointing in / out would end the game illegally there.
    Vertices with no unmarked edges never appear.  ``origin`` traces each
    vertex back to the originating state's ids (diagnostics only; it takes
    no part in equality or canonical keys).
    """

    graph: Graph
    sink_watch: tuple[bool, ...]
    source_watch: tuple[bool, ...]
    origin: tuple[int, ...] = field(default=(), compare=False)

    def origin_of(self, v: int) -> int:
        return self.origin[v] if self.origin else v

    def legal_moves(self) -> list[tuple[int, int]]:
        """Moves as (edge index, slot direction) pairs, in deterministic order."""
        deg = self.graph.degrees
        out = []
        for i, (u, w) in enumerate(self.graph.edges):
            if not (
                (self.sink_watch[w] and deg[w] == 1)
                or (self.source_watch[u] and deg[u] == 1)
            ):
                out.append((i, FORWARD))
            if not (
                (self.sink_watch[u] and deg[u] == 1)
                or (self.source_watch[w] and deg[w] == 1)
            ):
                out.append((i, BACKWARD))
        return out

    def apply(self, move: tuple[int, int]) -> list["ReducedState"]:
        """Mark one edge; returns the surviving components."""
        i, direction = move
        u, w = self.graph.edges[i]
        tail, head = (u, w) if direction == FORWARD else (w, u)
        sink = list(self.sink_watch)
        source = list(self.source_watch)
        sink[tail] = False
        source[head] = False
        rest = Graph(self.graph.vertex_count, self.graph.edges[:i] + self.graph.edges[i + 1 :])
        out = []
        for comp, members in rest.connected_components():
            if comp.edge_count == 0:
                continue
            out.append(
                ReducedState(
                    comp,
                    tuple(sink[v] for v in members),
                    tuple(source[v] for v in members),
                    tuple(self.origin_of(v) for v in members),
                )
            )
        return out


def reduce_state(x: State) -> list[ReducedState]:
    """Decompose a position into flagged unmarked-subgraph components.

    Flags follow the rule set of ``x``: in the leaf-tolerant game, leaves are
    never watched; in the original game every vertex is.
    """
    unmarked, ins, outs = x._degrees
    keep = [v for v in range(x.graph.vertex_count) if unmarked[v] > 0]
    if not keep:
        return []
    back = {old: new for new, old in enumerate(keep)}
    edges = tuple(
        (back[u], back[w])
        for i, (u, w) in enumerate(x.graph.edges)
        if x.slots[i] == UNMARKED
    )
    u_graph = Graph(len(keep), edges)
    sink = tuple(x._guarded(v) and outs[v] == 0 for v in keep)
    source = tuple(x._guarded(v) and ins[v] == 0 for v in keep)
    out = []
    for comp, members in u_graph.connected_components():
        if comp.edge_count == 0:
            continue
        out.append(
            ReducedState(
                comp,
                tuple(sink[v] for v in members),
                tuple(source[v] for v in members),
                tuple(keep[v] for v in members),
            )
        )
    return out


def canonical_key(r: ReducedState) -> bytes:
    """Memo key for a component.

    Tree components get a canonical rooted code over the per-vertex labels
    (sink watch, source watch, degree-one), so any two flag-isomorphic trees
    collide.  Other components get an exact deterministic encoding: correct,
    but only equal codes are recognized as equal positions.
    """
    g = r.graph

    def label(v: int) -> bytes:
        bits = (
            (1 if r.sink_watch[v] else 0)
            | (2 if r.source_watch[v] else 0)
            | (4 if g.degrees[v] == 1 else 0)
        )
        return bytes((97 + bits,))

    if g.edge_count == g.vertex_count - 1:
        return b"T" + tree_component_code(g, list(range(g.vertex_count)), label)
    flat = b"".join(label(v) for v in range(g.vertex_count))
    edges = b",".join(b"%d-%d" % e for e in g.edges)
    return b"X%d|" % g.vertex_count + flat + b"|" + edges


class GrundyEngine:
    """Shared-cache evaluator for both games on graphs within the size bounds.

    ``max_edges`` bounds the unmarked edges of positions given to the
    decomposed evaluator (env ``ARROWS_MAX_EDGES`` overrides the default of
    24); ``naive_max_edges`` bounds the exhaustive routes.
    """

    def __init__(
        self,
        cache: GrundyCache | None = None,
        max_edges: int | None = None,
        naive_max_edges: int = DEFAULT_NAIVE_MAX_EDGES,
    ):
        if max_edges is None:
            max_edges = int(os.environ.get("ARROWS_MAX_EDGES", DEFAULT_MAX_EDGES))
        self.cache = cache if cache is not None else GrundyCache()
        self.max_edges = max_edges
        self.naive_max_edges = naive_max_edges
        self.nodes_expanded = 0
        self._kernels: dict[tuple[Graph, bool], NaiveKernel] = {}

    # -- decomposed route

    def grundy(self, x: State) -> int:
        """Grundy value via reduction, decomposition and the shared cache."""
        if x.unmarked_edge_count > self.max_edges:
            raise ResourceLimitError(
                f"{x.unmarked_edge_count} unmarked edges exceed the bound {self.max_edges}"
            )
        value = 0
        for component in reduce_state(x):
            value ^= self._component_value(component)
        return value

    def _component_value(self, root: ReducedState) -> int:
        cache = self.cache
        root_key = canonical_key(root)
        cached = cache.get(root_key)
        if cached is not None:
            return cached
        reps: dict[bytes, ReducedState] = {root_key: root}
        expansions: dict[bytes, list[list[bytes]]] = {}
        stack = [root_key]
        while stack:
            key = stack[-1]
            if key in cache._table:
                stack.pop()
                continue
            expansion = expansions.get(key)
            if expansion is None:
                rc = reps[key]
                expansion = []
                todo = []
                for move in rc.legal_moves():
                    child_keys = []
                    for sub in rc.apply(move):
                        child_key = canonical_key(sub)
                        child_keys.append(child_key)
                        if child_key not in cache._table and child_key not in reps:
                            reps[child_key] = sub
                            todo.append(child_key)
                    expansion.append(child_keys)
                expansions[key] = expansion
                if todo:
                    stack.extend(todo)
                    continue
            values = set()
            blocked = []
            for child_keys in expansion:
                acc = 0
                for child_key in child_keys:
                    child_value = cache._table.get(child_key)
                    if child_value is None:
                        blocked.append(child_key)
                    else:
                        acc ^= child_value
                if not blocked:
                    values.add(acc)
            if blocked:
                # a shared child resolved under a different parent got popped
                # before this frame; re-queue it above us
                stack.extend(blocked)
                continue
            cache.put(key, mex(values))
            self.nodes_expanded += 1
            stack.pop()
        return cache.get(root_key)

    # -- exhaustive routes

    def _kernel_for(self, x: State) -> NaiveKernel:
        g = x.graph
        dormant = isinstance(x, DormantState)
        key = (g, dormant)
        kernel = self._kernels.get(key)
        if kernel is None:
            guarded = [x._guarded(v) for v in range(g.vertex_count)]
            kernel = self._kernels.setdefault(
                key,
                NaiveKernel(
                    g.vertex_count,
                    [u for u, _ in g.edges],
                    [w for _, w in g.edges],
                    guarded,
                ),
            )
        return kernel

    def _check_naive_bound(self, x: State) -> None:
        if x.unmarked_edge_count > self.naive_max_edges:
            raise ResourceLimitError(
                f"{x.unmarked_edge_count} unmarked edges exceed the exhaustive "
                f"bound {self.naive_max_edges}"
            )

    @staticmethod
    def _code(x: State) -> int:
        code = 0
        for i in reversed(range(len(x.slots))):
            code = code * 3 + x.slots[i]
        return code

    def grundy_naive(self, x: State) -> int:
        """Reference oracle: definitional recursion under x's own rule set."""
        self._check_naive_bound(x)
        return self._kernel_for(x).grundy(self._code(x))

    def grundy_dormant(self, x: DormantState) -> int:
        """Exhaustive value of a position of the original (leaf-guarded) game."""
        if not isinstance(x, DormantState):
            raise InvalidParameterError("grundy_dormant expects a dormant state")
        return self.grundy_naive(x)

    def parity_moves_class(self, x: State) -> ParityClass:
        """Whether every completion of ``x`` adds evenly/oddly many arrows."""
        self._check_naive_bound(x)
        mask = self._kernel_for(x).move_parity(self._code(x))
        return {1: ParityClass.EVEN, 2: ParityClass.ODD, 3: ParityClass.MIXED}[mask]

    # -- game-level operations

    def winner(self, g: Graph, mode: Mode) -> Player:
        """Perfect-play winner of the chosen game on an unmarked graph."""
        if g.isolated_vertices():
            raise InvalidGraphError("game graphs may not have isolated vertices")
        if mode is Mode.ARROWS:
            start = State.empty(trimming(g).graph)
        else:
            start = State.empty(g)
        return Player.ONE if self.grundy(start) != 0 else Player.TWO

    def ordered_moves(self, x: State) -> list[Arrow]:
        """Legal moves sorted by (edge index, direction); the play order."""
        out = []
        for i, s in enumerate(x.slots):
            if s != UNMARKED:
                continue
            u, w = x.graph.edges[i]
            for arrow in (Arrow(u, w), Arrow(w, u)):
                if x.violation(arrow) is None:
                    out.append(arrow)
        return out

    def best_move(self, x: State) -> Arrow | None:
        """A perfect-play move, or None on a terminal position.

        From a winning position, returns the first move (in ``ordered_moves``
        order) whose follower has value zero.  From a lost position, returns
        the move maximizing the follower's value, ties broken by move order.
        """
        moves = self.ordered_moves(x)
        if not moves:
            return None
        value = self.grundy(x)
        best = None
        best_value = -1
        for move in moves:
            child_value = self.grundy(x.apply_move(move))
            if value != 0 and child_value == 0:
                return move
            if child_value > best_value:
                best, best_value = move, child_value
        return best

    def stats(self) -> dict[str, int]:
        naive_nodes = sum(k.nodes for k in self._kernels.values())
        return {
            "nodes": self.nodes_expanded,
            "naive_nodes": naive_nodes,
            "cache_size": len(self.cache),
            "hits": self.cache.hits,
            "misses": self.cache.misses,
        }


def best_dormant_move_via_trimming(
    engine: GrundyEngine, trim: Trimming, x: DormantState
) -> Arrow | None:
    """Perfect-play move for the original game, computed on the trimmed graph."""
    from .states import state_trim, trim_arrow_to_original

    move = engine.best_move(state_trim(trim, x))
    return None if move is None else trim_arrow_to_original(trim, move)
