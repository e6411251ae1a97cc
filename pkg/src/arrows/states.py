"""Positions of the two rule sets played on a graph.

A decoration places at most one arrow per edge.  A ``State`` is a decoration
with no internal sinks or sources (one move per turn, sinks/sources allowed at
leaves).  A ``DormantState`` additionally forbids sinks and sources at leaves,
which is the original rule set; leaf edges are then never markable.

Arrows are stored as a fixed-width ternary code, one slot per edge in edge
index order: 0 unmarked, 1 pointing low->high endpoint, 2 the reverse.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple

from .errors import (
    FormatError,
    IllegalMoveError,
    InvalidGraphError,
    InvalidParameterError,
    InvalidStateError,
    OccupiedEdgeError,
)
from .graphs import Graph, Trimming, _parse_graph_section, format_graph, spider_graph

UNMARKED, FORWARD, BACKWARD = 0, 1, 2


class Arrow(NamedTuple):
    tail: int
    head: int

    def flipped(self) -> "Arrow":
        return Arrow(self.head, self.tail)


@dataclass(frozen=True)
class Violation:
    """Why a prospective arrow is not a legal move."""

    kind: str  # "occupied" | "sink" | "source"
    vertex: int | None = None


@dataclass(frozen=True)
class Decoration:
    """A graph with at most one arrow per edge; no legality promised."""

    graph: Graph
    slots: tuple[int, ...]

    def __post_init__(self):
        if len(self.slots) != self.graph.edge_count:
            raise InvalidStateError("slot count must equal edge count")
        if any(s not in (UNMARKED, FORWARD, BACKWARD) for s in self.slots):
            raise InvalidStateError("slot values must be 0, 1 or 2")

    @cached_property
    def arrows(self) -> frozenset[Arrow]:
        out = set()
        for i, s in enumerate(self.slots):
            if s:
                u, w = self.graph.edges[i]
                out.add(Arrow(u, w) if s == FORWARD else Arrow(w, u))
        return frozenset(out)

    @cached_property
    def _degrees(self) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
        """(unmarked, incoming, outgoing) arrow/edge counts per vertex."""
        n = self.graph.vertex_count
        unmarked = [0] * n
        ins = [0] * n
        outs = [0] * n
        for i, (u, w) in enumerate(self.graph.edges):
            s = self.slots[i]
            if s == UNMARKED:
                unmarked[u] += 1
                unmarked[w] += 1
            elif s == FORWARD:
                outs[u] += 1
                ins[w] += 1
            else:
                outs[w] += 1
                ins[u] += 1
        return tuple(unmarked), tuple(ins), tuple(outs)

    def sinks(self) -> frozenset[int]:
        unmarked, ins, outs = self._degrees
        return frozenset(
            v
            for v in range(self.graph.vertex_count)
            if self.graph.degrees[v] > 0 and unmarked[v] == 0 and outs[v] == 0
        )

    def sources(self) -> frozenset[int]:
        unmarked, ins, outs = self._degrees
        return frozenset(
            v
            for v in range(self.graph.vertex_count)
            if self.graph.degrees[v] > 0 and unmarked[v] == 0 and ins[v] == 0
        )

    @property
    def is_state(self) -> bool:
        """True when no internal vertex is a sink or source."""
        leaves = self.graph.leaves()
        return all(v in leaves for v in self.sinks() | self.sources())

    @property
    def is_dormant_state(self) -> bool:
        """True when no vertex at all is a sink or source."""
        return not self.sinks() and not self.sources()


def _slots_from_arrows(graph: Graph, arrows: Iterable[Arrow]) -> tuple[int, ...]:
    slots = [UNMARKED] * graph.edge_count
    for a in arrows:
        t, h = a
        key = (t, h) if t < h else (h, t)
        i = graph.edge_index.get(key)
        if i is None:
            raise InvalidParameterError(f"arrow {a} is not on an edge")
        if slots[i] != UNMARKED:
            raise InvalidStateError(f"edge {key} carries two arrows")
        slots[i] = FORWARD if t < h else BACKWARD
    return tuple(slots)


@dataclass(frozen=True)
class State(Decoration):
    """A position of the game where sinks/sources are allowed at leaves."""

    def __post_init__(self):
        super().__post_init__()
        if self.graph.vertex_count and self.graph.isolated_vertices():
            raise InvalidGraphError("game graphs may not have isolated vertices")
        bad = [v for v in self.sinks() | self.sources() if v not in self.graph.leaves()]
        if bad:
            raise InvalidStateError(f"internal sink/source at vertex {min(bad)}")

    @classmethod
    def empty(cls, graph: Graph) -> "State":
        return cls(graph, (UNMARKED,) * graph.edge_count)

    @classmethod
    def from_arrows(cls, graph: Graph, arrows: Iterable[Arrow]) -> "State":
        return cls(graph, _slots_from_arrows(graph, arrows))

    def _guarded(self, v: int) -> bool:
        """Vertices where a sink/source must never be completed."""
        return self.graph.degrees[v] != 1

    @property
    def unmarked_edge_count(self) -> int:
        return sum(1 for s in self.slots if s == UNMARKED)

    def violation(self, arrow: Arrow) -> Violation | None:
        """The reason ``arrow`` is not a legal move, or None if it is legal."""
        t, h = arrow
        key = (t, h) if t < h else (h, t)
        i = self.graph.edge_index.get(key)
        if i is None:
            raise InvalidParameterError(f"arrow {arrow} is not on an edge")
        if self.slots[i] != UNMARKED:
            return Violation("occupied")
        unmarked, ins, outs = self._degrees
        if self._guarded(h) and unmarked[h] == 1 and outs[h] == 0:
            return Violation("sink", h)
        if self._guarded(t) and unmarked[t] == 1 and ins[t] == 0:
            return Violation("source", t)
        return None

    def legal_moves(self) -> frozenset[Arrow]:
        out = set()
        for i, s in enumerate(self.slots):
            if s != UNMARKED:
                continue
            u, w = self.graph.edges[i]
            for a in (Arrow(u, w), Arrow(w, u)):
                if self.violation(a) is None:
                    out.add(a)
        return frozenset(out)

    @property
    def is_terminal(self) -> bool:
        return not self.legal_moves()

    def apply_move(self, arrow: Arrow) -> "State":
        v = self.violation(arrow)
        if v is not None:
            if v.kind == "occupied":
                raise OccupiedEdgeError(f"edge under {arrow} already marked")
            raise IllegalMoveError(
                f"{arrow} creates a {v.kind} at vertex {v.vertex}",
                vertex=v.vertex,
                kind=v.kind,
            )
        t, h = arrow
        key = (t, h) if t < h else (h, t)
        i = self.graph.edge_index[key]
        slots = list(self.slots)
        slots[i] = FORWARD if t < h else BACKWARD
        return type(self)(self.graph, tuple(slots))

    def flip(self) -> "State":
        return type(self)(self.graph, tuple(3 - s if s else 0 for s in self.slots))

    # -- flowers and the head/tail bookkeeping used by the isomorphism checks

    def _flower(self, v: int, outward: bool) -> Decoration:
        unmarked, _, _ = self._degrees
        if unmarked[v] == 0:
            raise InvalidParameterError(f"vertex {v} has no unmarked edges")
        slots = list(self.slots)
        for i in self.graph.incident[v]:
            if slots[i] != UNMARKED:
                continue
            u, w = self.graph.edges[i]
            tail_is_low = (u == v) == outward
            slots[i] = FORWARD if tail_is_low else BACKWARD
        return Decoration(self.graph, tuple(slots))

    def tail_flower(self, v: int) -> Decoration:
        """All unmarked edges at ``v`` oriented out of ``v`` (may not be a state)."""
        return self._flower(v, outward=True)

    def head_flower(self, v: int) -> Decoration:
        """All unmarked edges at ``v`` oriented into ``v`` (may not be a state)."""
        return self._flower(v, outward=False)

    def unmarked_vertices(self) -> frozenset[int]:
        unmarked, _, _ = self._degrees
        return frozenset(v for v in range(self.graph.vertex_count) if unmarked[v] > 0)

    def heads(self) -> frozenset[int]:
        """Vertices of the unmarked subgraph that already receive an arrow."""
        unmarked, ins, _ = self._degrees
        return frozenset(v for v in self.unmarked_vertices() if ins[v] > 0)

    def tails(self) -> frozenset[int]:
        """Vertices of the unmarked subgraph that already emit an arrow."""
        unmarked, _, outs = self._degrees
        return frozenset(v for v in self.unmarked_vertices() if outs[v] > 0)

    def unmarked_subgraph(self) -> tuple[Graph, tuple[int, ...]]:
        """Subgraph induced by the unmarked edges, with its new->old map."""
        members = sorted(self.unmarked_vertices())
        back = {old: new for new, old in enumerate(members)}
        edges = tuple(
            (back[u], back[w])
            for i, (u, w) in enumerate(self.graph.edges)
            if self.slots[i] == UNMARKED
        )
        return Graph(len(members), edges), tuple(members)


@dataclass(frozen=True)
class DormantState(State):
    """A position of the original rule set: no sinks/sources anywhere."""

    def __post_init__(self):
        super().__post_init__()
        if self.sinks() or self.sources():
            bad = min(self.sinks() | self.sources())
            raise InvalidStateError(f"sink/source at leaf vertex {bad}")

    def _guarded(self, v: int) -> bool:
        return True


# ---------------------------------------------------------------------------
# Spider positions.  Legs are described by their number of unmarked edges and
# an optional arrow on one extra edge at the far end.


class Mark(Enum):
    OUT = "out"  # away from the hub
    IN = "in"  # toward the hub


@dataclass(frozen=True)
class LegSpec:
    """One spider leg: ``unmarked`` clean edges, plus an end arrow if marked."""

    unmarked: int
    mark: Mark | None = None

    def __post_init__(self):
        if self.unmarked < 0:
            raise InvalidParameterError("unmarked length must be nonnegative")

    @property
    def length(self) -> int:
        return self.unmarked + (1 if self.mark else 0)


@dataclass(frozen=True)
class Spider:
    """Vertex layout of a three-legged spider: hub 0, then legs consecutively."""

    a: int
    b: int
    c: int

    @cached_property
    def graph(self) -> Graph:
        return spider_graph(self.a, self.b, self.c)

    @property
    def legs(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)

    def vertex(self, leg: int, i: int) -> int:
        """Leg-local vertex ``i`` (0 is the hub on every leg)."""
        lengths = self.legs
        if not 0 <= leg <= 2:
            raise InvalidParameterError("leg must be 0, 1 or 2")
        if not 0 <= i <= lengths[leg]:
            raise InvalidParameterError(f"index {i} beyond leg of length {lengths[leg]}")
        if i == 0:
            return 0
        return sum(lengths[:leg]) + i

    def arrow(self, leg: int, i: int, direction: Mark) -> Arrow:
        """Arrow on the leg edge between indices ``i-1`` and ``i``."""
        if i < 1:
            raise InvalidParameterError("arrow index starts at 1")
        lo, hi = self.vertex(leg, i - 1), self.vertex(leg, i)
        return Arrow(lo, hi) if direction is Mark.OUT else Arrow(hi, lo)


def leg_arrow(spider: Spider, leg: int, i: int, direction: Mark) -> Arrow:
    return spider.arrow(leg, i, direction)


def spider_state(u: LegSpec, v: LegSpec, w: LegSpec) -> State:
    """State of the spider whose legs have the given unmarked lengths and marks."""
    spider = Spider(u.length, v.length, w.length)
    arrows = []
    for leg, spec in enumerate((u, v, w)):
        if spec.mark is not None:
            arrows.append(spider.arrow(leg, spec.unmarked + 1, spec.mark))
    return State.from_arrows(spider.graph, arrows)


def spider_of(state: State) -> Spider:
    """Recover the layout of a state built on a standard spider graph."""
    g = state.graph
    lengths = []
    nxt = 1
    for _ in range(3):
        length = 0
        prev = 0
        while nxt < g.vertex_count and g.has_edge(prev, nxt):
            prev = nxt
            nxt += 1
            length += 1
        lengths.append(length)
    spider = Spider(*lengths)
    if spider.graph != g:
        raise InvalidParameterError("graph is not a standard spider layout")
    return spider


# ---------------------------------------------------------------------------
# State isomorphism verification.


def _graph_iso_on_unmarked(f: Mapping[int, int], x: State, y: State) -> None:
    """Validate that ``f`` is a graph isomorphism U(x) -> U(y) (original ids)."""
    ux = x.unmarked_vertices()
    uy = y.unmarked_vertices()
    if set(f.keys()) != set(ux):
        raise InvalidParameterError("map must be defined exactly on the unmarked subgraph")
    if set(f.values()) != set(uy) or len(set(f.values())) != len(f):
        raise InvalidParameterError("map must be a bijection onto the other unmarked subgraph")
    x_edges = {
        (u, w)
        for i, (u, w) in enumerate(x.graph.edges)
        if x.slots[i] == UNMARKED
    }
    y_edges = {
        (u, w)
        for i, (u, w) in enumerate(y.graph.edges)
        if y.slots[i] == UNMARKED
    }
    mapped = {tuple(sorted((f[u], f[w]))) for u, w in x_edges}
    if mapped != y_edges:
        raise InvalidParameterError("map is not a graph isomorphism of the unmarked subgraphs")


def check_iso_sufficient(f: Mapping[int, int], x: State, y: State) -> bool:
    """Head/tail criterion: a quick sufficient condition for state isomorphism.

    ``f`` must be a graph isomorphism between the unmarked subgraphs, given in
    original vertex ids.  Returns True when the heads and the tails, each
    taken together with the ambient leaves, correspond under ``f``.  A True
    answer proves the states isomorphic; False proves nothing.
    """
    _graph_iso_on_unmarked(f, x, y)
    lx = x.graph.leaves()
    ly = y.graph.leaves()
    ux = x.unmarked_vertices()
    uy = y.unmarked_vertices()
    hx = {f[v] for v in (x.heads() | lx) & ux}
    tx = {f[v] for v in (x.tails() | lx) & ux}
    return hx == (y.heads() | ly) & uy and tx == (y.tails() | ly) & uy


def arrow_map_from_vertex_map(
    f: Mapping[int, int], x: State, y: State
) -> dict[Arrow, Arrow]:
    """The arrow map induced by a vertex map on the unmarked subgraphs."""
    out: dict[Arrow, Arrow] = {}
    for i, (u, w) in enumerate(x.graph.edges):
        if x.slots[i] != UNMARKED:
            continue
        if u not in f or w not in f:
            raise InvalidParameterError("vertex map does not cover the unmarked subgraph")
        out[Arrow(u, w)] = Arrow(f[u], f[w])
        out[Arrow(w, u)] = Arrow(f[w], f[u])
    return out


def _decorate_with(base: State, extra: Iterable[Arrow]) -> Decoration:
    slots = list(base.slots)
    for t, h in extra:
        key = (t, h) if t < h else (h, t)
        i = base.graph.edge_index.get(key)
        if i is None or slots[i] != UNMARKED:
            raise InvalidParameterError(f"mapped arrow {(t, h)} collides")
        slots[i] = FORWARD if t < h else BACKWARD
    return Decoration(base.graph, tuple(slots))


def check_iso_local(a: Mapping[Arrow, Arrow], x: State, y: State) -> bool:
    """Flower-by-flower criterion, equivalent to state isomorphism.

    ``a`` must be a bijection between the arrows of the two unmarked subgraphs
    that commutes with arrow reversal.  Returns True exactly when, at every
    vertex of either unmarked subgraph, each flower that fails to be a state
    maps to a decoration that also fails to be a state.
    """
    a = {Arrow(*k): Arrow(*v) for k, v in a.items()}
    x_arrows = set()
    for i, (u, w) in enumerate(x.graph.edges):
        if x.slots[i] == UNMARKED:
            x_arrows.update((Arrow(u, w), Arrow(w, u)))
    y_arrows = set()
    for i, (u, w) in enumerate(y.graph.edges):
        if y.slots[i] == UNMARKED:
            y_arrows.update((Arrow(u, w), Arrow(w, u)))
    if set(a.keys()) != x_arrows:
        raise InvalidParameterError("arrow map must be defined exactly on the unmarked arrows")
    if set(a.values()) != y_arrows or len(set(a.values())) != len(a):
        raise InvalidParameterError("arrow map must be a bijection onto the other side")
    for arrow, image in a.items():
        if a[arrow.flipped()] != image.flipped():
            raise InvalidParameterError("arrow map must commute with arrow reversal")
    inverse = {v: k for k, v in a.items()}

    def preventing(src: State, dst: State, amap: Mapping[Arrow, Arrow]) -> bool:
        for v in sorted(src.unmarked_vertices()):
            for outward in (True, False):
                flower = src._flower(v, outward)
                if flower.is_state:
                    continue
                added = flower.arrows - src.arrows
                image = _decorate_with(dst, (amap[arr] for arr in added))
                if image.is_state:
                    return False
        return True

    return preventing(x, y, a) and preventing(y, x, inverse)


# ---------------------------------------------------------------------------
# The state correspondence realized by graph trimming.


def _transfer_slot(trim: Trimming, j: int, slot: int, to_trimmed: bool) -> int:
    """Translate a slot across trimmed edge ``j``, fixing orientation."""
    p, q = trim.graph.edges[j]
    u, w = trim.original.edges[trim.edge_map[j]]
    same_order = (trim.vertex_map[p], trim.vertex_map[q]) == (u, w)
    if slot == UNMARKED or same_order:
        return slot
    return 3 - slot


def state_trim(trim: Trimming, x: DormantState) -> State:
    """The state of the trimmed graph corresponding to a dormant state."""
    if x.graph != trim.original:
        raise InvalidParameterError("state does not live on the trimming's original graph")
    if not isinstance(x, DormantState):
        raise InvalidStateError("state_trim expects a dormant state")
    image = set(trim.edge_map)
    for i, s in enumerate(x.slots):
        if s != UNMARKED and i not in image:
            raise InvalidStateError("dormant state marks an edge wiped out by trimming")
    slots = tuple(
        _transfer_slot(trim, j, x.slots[trim.edge_map[j]], to_trimmed=True)
        for j in range(trim.graph.edge_count)
    )
    return State(trim.graph, slots)


def state_untrim(trim: Trimming, y: State) -> DormantState:
    """The dormant state of the original graph corresponding to ``y``."""
    if y.graph != trim.graph:
        raise InvalidParameterError("state does not live on the trimmed graph")
    slots = [UNMARKED] * trim.original.edge_count
    for j, s in enumerate(y.slots):
        slots[trim.edge_map[j]] = _transfer_slot(trim, j, s, to_trimmed=False)
    return DormantState(trim.original, tuple(slots))


def trim_arrow_to_original(trim: Trimming, arrow: Arrow) -> Arrow:
    """Map an arrow of the trimmed graph back onto the original graph."""
    return Arrow(trim.vertex_map[arrow.tail], trim.vertex_map[arrow.head])


def original_arrow_to_trim(trim: Trimming, arrow: Arrow) -> Arrow:
    """Map an arrow of the original graph onto the trimmed graph."""
    t, h = arrow
    key = (t, h) if t < h else (h, t)
    i = trim.original.edge_index.get(key)
    if i is None:
        raise InvalidParameterError(f"arrow {arrow} is not on an edge")
    j = trim.inverse_edge_map.get(i)
    if j is None:
        raise InvalidParameterError(f"edge under {arrow} does not survive trimming")
    p, q = trim.graph.edges[j]
    if (trim.vertex_map[p], trim.vertex_map[q]) == (t, h):
        return Arrow(p, q)
    return Arrow(q, p)


# ---------------------------------------------------------------------------
# Position text format: graph lines followed by "a <tail> <head>" lines, or
# the one-line spider shorthand
# "sstate <mu> <mv> <mw> / <marku> <markv> <markw>"  with marks -, out or in.

_MARKS = {"-": None, "out": Mark.OUT, "in": Mark.IN}


def parse_position(text: str) -> tuple[Graph, tuple[Arrow, ...]]:
    """Parse a graph-plus-arrows file; returns the graph and its arrow list."""
    graph, rest = _parse_graph_section(text)
    arrows: list[Arrow] = []
    if graph is None:  # sstate shorthand owns the first line
        line_no, fields = rest[0]
        if len(fields) != 8 or fields[4] != "/":
            raise FormatError(line_no, "expected 'sstate <mu> <mv> <mw> / <mu> <mv> <mw>'")
        try:
            lengths = [int(f) for f in fields[1:4]]
        except ValueError:
            raise FormatError(line_no, "non-integer leg length") from None
        marks = []
        for f in fields[5:8]:
            if f not in _MARKS:
                raise FormatError(line_no, f"mark must be -, out or in, got '{f}'")
            marks.append(_MARKS[f])
        try:
            state = spider_state(*(LegSpec(n, m) for n, m in zip(lengths, marks)))
        except (InvalidParameterError, InvalidStateError) as exc:
            raise FormatError(line_no, str(exc)) from None
        graph = state.graph
        arrows.extend(sorted(state.arrows))
        rest = rest[1:]
    for line_no, fields in rest:
        if fields[0] != "a":
            raise FormatError(line_no, f"unexpected directive '{fields[0]}'")
        if len(fields) != 3:
            raise FormatError(line_no, "'a' takes two arguments")
        try:
            t, h = int(fields[1]), int(fields[2])
        except ValueError:
            raise FormatError(line_no, "non-integer arrow endpoint") from None
        if not graph.has_edge(t, h):
            raise FormatError(line_no, f"arrow {t} {h} is not on an edge")
        arrows.append(Arrow(t, h))
    return graph, tuple(arrows)


def format_position(state: State) -> str:
    """Serialize a position: graph long form plus arrows in edge-index order."""
    out = format_graph(state.graph)
    lines = []
    for i, s in enumerate(state.slots):
        if s == UNMARKED:
            continue
        u, w = state.graph.edges[i]
        t, h = (u, w) if s == FORWARD else (w, u)
        lines.append(f"a {t} {h}")
    return out + ("\n".join(lines) + "\n" if lines else "")
