"""Simple undirected graphs and the transformations the games are played on.

Vertices are dense integer ids.  Ramification gives split vertices provenance
labels like ``"a_x"`` so that transformed graphs remain readable; labels never
participate in identity or hashing decisions made by the solver, which works
on canonical codes instead.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Iterator

from .errors import FormatError, InvalidGraphError, InvalidParameterError

Edge = tuple[int, int]


@dataclass(frozen=True)
class Graph:
    """An immutable simple graph on vertices ``0..vertex_count-1``.

    Edges are normalized to sorted ``(u, w)`` pairs and stored sorted
    lexicographically; the position of an edge in ``edges`` is its edge index,
    which game states use as the slot index for arrows.
    """

    vertex_count: int
    edges: tuple[Edge, ...]
    labels: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.vertex_count < 0:
            raise InvalidParameterError("vertex_count must be nonnegative")
        normalized = []
        for e in self.edges:
            u, w = e
            if u == w:
                raise InvalidGraphError(f"self-loop at vertex {u}")
            if not (0 <= u < self.vertex_count and 0 <= w < self.vertex_count):
                raise InvalidGraphError(f"edge {e} endpoint out of range")
            normalized.append((u, w) if u < w else (w, u))
        normalized.sort()
        for a, b in itertools.pairwise(normalized):
            if a == b:
                raise InvalidGraphError(f"duplicate edge {a}")
        object.__setattr__(self, "edges", tuple(normalized))
        if self.labels is not None and len(self.labels) != self.vertex_count:
            raise InvalidParameterError("labels length must equal vertex_count")

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        deg = [0] * self.vertex_count
        for u, w in self.edges:
            deg[u] += 1
            deg[w] += 1
        return tuple(deg)

    @cached_property
    def edge_index(self) -> dict[Edge, int]:
        return {e: i for i, e in enumerate(self.edges)}

    @cached_property
    def incident(self) -> tuple[tuple[int, ...], ...]:
        """Per-vertex tuple of incident edge indices."""
        inc: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for i, (u, w) in enumerate(self.edges):
            inc[u].append(i)
            inc[w].append(i)
        return tuple(tuple(x) for x in inc)

    @cached_property
    def neighbors(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for u, w in self.edges:
            adj[u].append(w)
            adj[w].append(u)
        return tuple(tuple(sorted(x)) for x in adj)

    def degree(self, v: int) -> int:
        return self.degrees[v]

    def leaves(self) -> frozenset[int]:
        """Vertices of degree exactly one."""
        return frozenset(v for v in range(self.vertex_count) if self.degrees[v] == 1)

    def internal_vertices(self) -> frozenset[int]:
        """Vertices that are not leaves (degree-zero vertices included)."""
        return frozenset(v for v in range(self.vertex_count) if self.degrees[v] != 1)

    def isolated_vertices(self) -> frozenset[int]:
        return frozenset(v for v in range(self.vertex_count) if self.degrees[v] == 0)

    def name(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v)

    def has_edge(self, u: int, w: int) -> bool:
        return ((u, w) if u < w else (w, u)) in self.edge_index

    def connected_components(self) -> list[tuple["Graph", tuple[int, ...]]]:
        """Components as relabeled graphs, each with its new->old vertex map."""
        seen = [False] * self.vertex_count
        out: list[tuple[Graph, tuple[int, ...]]] = []
        for start in range(self.vertex_count):
            if seen[start]:
                continue
            stack, members = [start], []
            seen[start] = True
            while stack:
                v = stack.pop()
                members.append(v)
                for w in self.neighbors[v]:
                    if not seen[w]:
                        seen[w] = True
                        stack.append(w)
            members.sort()
            back = {old: new for new, old in enumerate(members)}
            edges = tuple(
                (back[u], back[w]) for u, w in self.edges if u in back and w in back
            )
            labels = tuple(self.name(v) for v in members) if self.labels else None
            out.append((Graph(len(members), edges, labels), tuple(members)))
        return out

    def is_tree(self) -> bool:
        return (
            self.vertex_count >= 1
            and self.edge_count == self.vertex_count - 1
            and len(self.connected_components()) == 1
        )

    def is_forest(self) -> bool:
        return all(g.is_tree() for g, _ in self.connected_components())


EMPTY_GRAPH = Graph(0, ())


def path_graph(n: int) -> Graph:
    """The path on vertices ``0..n-1``; a single vertex when ``n == 1``."""
    if n < 1:
        raise InvalidParameterError("path needs at least one vertex")
    return Graph(n, tuple((i, i + 1) for i in range(n - 1)))


def spider_graph(a: int, b: int, c: int) -> Graph:
    """Three-legged spider with leg lengths ``a``, ``b``, ``c`` in edges.

    The hub is vertex 0 and the legs are numbered consecutively: leg one gets
    ``1..a``, leg two ``a+1..a+b``, leg three ``a+b+1..a+b+c``.  Single legs
    may be empty, but not all three (the hub would be isolated).
    """
    if min(a, b, c) < 0:
        raise InvalidParameterError("leg lengths must be nonnegative")
    if a == b == c == 0:
        raise InvalidParameterError("at least one leg must be nonzero")
    edges: list[Edge] = []
    start = 1
    for length in (a, b, c):
        prev = 0
        for i in range(start, start + length):
            edges.append((prev, i))
            prev = i
        start += length
    return Graph(1 + a + b + c, tuple(edges))


def disjoint_union(g: Graph, h: Graph) -> Graph:
    """Concatenate vertex ranges; ``h``'s ids are shifted by ``g.vertex_count``."""
    shift = g.vertex_count
    edges = g.edges + tuple((u + shift, w + shift) for u, w in h.edges)
    labels = None
    if g.labels is not None or h.labels is not None:
        labels = tuple(g.name(v) for v in range(g.vertex_count)) + tuple(
            h.name(v) for v in range(h.vertex_count)
        )
    return Graph(g.vertex_count + h.vertex_count, edges, labels)


def _ramify(g: Graph, split: frozenset[int]) -> tuple[Graph, tuple[int, ...]]:
    """Ramification plus the homomorphism back to ``g`` (new id -> old id).

    Kept vertices come first in their original order; each split vertex ``a``
    contributes one copy ``a_x`` per incident edge ``{a, x}``, labeled with the
    vertex names and ordered by ``(a, x)``.
    """
    for v in split:
        if not (0 <= v < g.vertex_count):
            raise InvalidParameterError(f"split vertex {v} out of range")
    kept = [v for v in range(g.vertex_count) if v not in split]
    new_id: dict[int, int] = {v: i for i, v in enumerate(kept)}
    origin = list(kept)
    labels = [g.name(v) for v in kept]
    copy_id: dict[tuple[int, int], int] = {}
    for a in sorted(split):
        for x in g.neighbors[a]:
            copy_id[(a, x)] = len(origin)
            origin.append(a)
            labels.append(f"{g.name(a)}_{g.name(x)}")
    edges: list[Edge] = []
    for u, w in g.edges:
        if u not in split and w not in split:
            edges.append((new_id[u], new_id[w]))
        elif u in split and w in split:
            edges.append((copy_id[(u, w)], copy_id[(w, u)]))
        elif u in split:
            edges.append((copy_id[(u, w)], new_id[w]))
        else:
            edges.append((copy_id[(w, u)], new_id[u]))
    return Graph(len(origin), tuple(edges), tuple(labels)), tuple(origin)


def ramification(g: Graph, split: Iterable[int]) -> Graph:
    """Split ``g`` apart at the given vertices, one copy per incident edge."""
    return _ramify(g, frozenset(split))[0]


def induced_subgraph(g: Graph, vertices: Iterable[int]) -> tuple[Graph, tuple[int, ...]]:
    """Subgraph induced by ``vertices`` plus the new->old vertex map."""
    members = sorted(set(vertices))
    for v in members:
        if not (0 <= v < g.vertex_count):
            raise InvalidParameterError(f"vertex {v} out of range")
    back = {old: new for new, old in enumerate(members)}
    edges = tuple((back[u], back[w]) for u, w in g.edges if u in back and w in back)
    labels = tuple(g.name(v) for v in members) if g.labels else None
    return Graph(len(members), edges, labels), tuple(members)


@dataclass(frozen=True)
class Trimming:
    """A trimmed graph together with its arrow correspondence.

    ``vertex_map[p]`` is the vertex of ``original`` that vertex ``p`` of
    ``graph`` collapses onto (identity for kept vertices, the split vertex for
    a copy).  ``edge_map[j]`` is the edge index in ``original`` realizing edge
    ``j`` of ``graph``; it is injective, so arrows transfer both ways.
    """

    original: Graph
    graph: Graph
    vertex_map: tuple[int, ...]
    edge_map: tuple[int, ...]

    @cached_property
    def inverse_edge_map(self) -> dict[int, int]:
        return {orig: j for j, orig in enumerate(self.edge_map)}


def trimming(g: Graph) -> Trimming:
    """Remove the leaves of ``g``, then split at the vertices they touched.

    A leafless graph trims to itself.  The result never has isolated vertices
    unless ``g`` itself had them.
    """
    leaves = g.leaves()
    internal = sorted(v for v in range(g.vertex_count) if g.degrees[v] != 1)
    core, core_origin = induced_subgraph(g, internal)
    touched = frozenset(
        core_new
        for core_new, old in enumerate(core_origin)
        if any(n in leaves for n in g.neighbors[old])
    )
    trimmed, ram_origin = _ramify(core, touched)
    vertex_map = tuple(core_origin[ram_origin[p]] for p in range(trimmed.vertex_count))
    edge_map = []
    for p, q in trimmed.edges:
        u, w = vertex_map[p], vertex_map[q]
        edge_map.append(g.edge_index[(u, w) if u < w else (w, u)])
    return Trimming(g, trimmed, vertex_map, tuple(edge_map))


def inverse_trimming(h: Graph) -> Graph:
    """A graph that trims back to ``h``: attach one pendant to every leaf."""
    if h.isolated_vertices():
        raise InvalidParameterError("input graph must have no isolated vertices")
    leaves = sorted(h.leaves())
    n = h.vertex_count
    edges = list(h.edges)
    labels = [h.name(v) for v in range(n)]
    for x in leaves:
        edges.append((x, n))
        labels.append(f"{h.name(x)}'")
        n += 1
    return Graph(n, tuple(edges), tuple(labels))


# ---------------------------------------------------------------------------
# Canonical codes for trees (AHU) and forest isomorphism.


def tree_component_code(
    graph: Graph, members: list[int], label: Callable[[int], bytes]
) -> bytes:
    """Canonical code of one tree component, honoring per-vertex labels.

    Two labeled trees get the same code exactly when some graph isomorphism
    between them preserves labels.  ``members`` lists the component's
    vertices; the component must be a tree.
    """
    if len(members) == 1:
        return b"1:" + label(members[0])
    member_set = set(members)
    deg = {v: sum(1 for w in graph.neighbors[v] if w in member_set) for v in members}
    # peel leaves layer by layer to find the 1- or 2-vertex center
    remaining = set(members)
    layer = [v for v in members if deg[v] <= 1]
    while len(remaining) > 2:
        nxt = []
        for v in layer:
            remaining.discard(v)
        for v in layer:
            for w in graph.neighbors[v]:
                if w in remaining:
                    deg[w] -= 1
                    if deg[w] == 1:
                        nxt.append(w)
        layer = nxt
    centers = sorted(remaining)

    def rooted(v: int, parent: int) -> bytes:
        children = sorted(
            rooted(w, v)
            for w in graph.neighbors[v]
            if w != parent and w in member_set
        )
        return label(v) + b"(" + b"".join(children) + b")"

    if len(centers) == 1:
        return b"c:" + rooted(centers[0], -1)
    c1, c2 = centers
    halves = sorted([rooted(c1, c2), rooted(c2, c1)])
    return b"e:" + halves[0] + b"|" + halves[1]


def _unlabeled(_: int) -> bytes:
    return b"."


def forest_canonical_code(g: Graph) -> bytes:
    """Canonical code of a forest: sorted multiset of tree component codes."""
    codes = []
    for comp, members in g.connected_components():
        if not comp.is_tree():
            raise InvalidParameterError("graph is not a forest")
        codes.append(tree_component_code(comp, list(range(comp.vertex_count)), _unlabeled))
    return b"+".join(sorted(codes))


def forest_isomorphic(g: Graph, h: Graph) -> bool:
    """Graph isomorphism test for forests via canonical codes."""
    if g.vertex_count != h.vertex_count or g.edge_count != h.edge_count:
        return False
    return forest_canonical_code(g) == forest_canonical_code(h)


# ---------------------------------------------------------------------------
# Text format.  Newline-delimited UTF-8, '#' starts a comment.  Either a long
# form ("v <n>" then "e <u> <w>" lines) or one shorthand line
# ("path <n>" / "spider <a> <b> <c>").


def _format_lines(text: str) -> Iterator[tuple[int, list[str]]]:
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield line_no, line.split()


def _int_fields(line_no: int, fields: list[str], expect: int) -> list[int]:
    if len(fields) - 1 != expect:
        raise FormatError(line_no, f"'{fields[0]}' takes {expect} argument(s)")
    try:
        return [int(f) for f in fields[1:]]
    except ValueError:
        raise FormatError(line_no, f"non-integer argument in '{' '.join(fields)}'") from None


def parse_graph(text: str) -> Graph:
    """Parse the graph text format, rejecting any trailing state lines."""
    graph, extra = _parse_graph_section(text)
    if extra:
        line_no, fields = extra[0]
        raise FormatError(line_no, f"unexpected directive '{fields[0]}' in graph file")
    return graph


def _parse_graph_section(text: str):
    """Parse the leading graph directives; return (graph, remaining lines)."""
    vertex_count: int | None = None
    edges: list[Edge] = []
    rest: list[tuple[int, list[str]]] = []
    lines = list(_format_lines(text))
    if not lines:
        raise FormatError(1, "empty graph description")
    i = 0
    line_no, fields = lines[0]
    kind = fields[0]
    if kind == "path":
        (n,) = _int_fields(line_no, fields, 1)
        if n < 1:
            raise FormatError(line_no, "path needs at least one vertex")
        return path_graph(n), lines[1:]
    if kind == "spider":
        a, b, c = _int_fields(line_no, fields, 3)
        try:
            return spider_graph(a, b, c), lines[1:]
        except InvalidParameterError as exc:
            raise FormatError(line_no, str(exc)) from None
    if kind == "sstate":
        # state shorthand; the caller (state parser) owns this line
        return None, lines
    if kind != "v":
        raise FormatError(line_no, f"expected 'v', 'path', 'spider' or 'sstate', got '{kind}'")
    (vertex_count,) = _int_fields(line_no, fields, 1)
    if vertex_count < 0:
        raise FormatError(line_no, "vertex count must be nonnegative")
    i = 1
    while i < len(lines):
        line_no, fields = lines[i]
        if fields[0] != "e":
            break
        u, w = _int_fields(line_no, fields, 2)
        if not (0 <= u < vertex_count and 0 <= w < vertex_count) or u == w:
            raise FormatError(line_no, f"bad edge {u} {w}")
        edges.append((u, w))
        i += 1
    try:
        graph = Graph(vertex_count, tuple(edges))
    except (InvalidGraphError, InvalidParameterError) as exc:
        raise FormatError(lines[0][0], str(exc)) from None
    return graph, lines[i:]


def format_graph(g: Graph) -> str:
    """Serialize in the long form; edges sorted so output is byte-stable."""
    out = [f"v {g.vertex_count}"]
    out.extend(f"e {u} {w}" for u, w in g.edges)
    return "\n".join(out) + "\n"
