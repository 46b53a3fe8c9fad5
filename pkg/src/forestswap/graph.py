"""Multigraphs with positional edge identity.

Edge ids are 0-based positions in ``MultiGraph.edges``. Every construction
that produces a new graph from an old one returns an explicit table mapping
new edge ids back to old ones, so that bases can be moved between the two
without ambiguity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .errors import ContractError, ParseError

EdgeSet = frozenset  # frozenset[int] of edge ids


class UnionFind:
    """Disjoint sets over ``0..n-1`` with path halving."""

    __slots__ = ("parent", "count")

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.count = n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        """Merge the sets of ``a`` and ``b``; False if already merged."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if ra < rb:
            ra, rb = rb, ra
        self.parent[ra] = rb
        self.count -= 1
        return True


@dataclass(frozen=True)
class MultiGraph:
    """An undirected multigraph; loops and parallel edges are allowed."""

    vertex_count: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        edges = tuple((int(a), int(b)) for a, b in self.edges)
        object.__setattr__(self, "edges", edges)
        if self.vertex_count < 0:
            raise ContractError("vertex_count must be nonnegative")
        for i, (a, b) in enumerate(edges):
            if not (0 <= a < self.vertex_count and 0 <= b < self.vertex_count):
                raise ContractError(f"edge {i} = {(a, b)} has an endpoint outside 0..{self.vertex_count - 1}")

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def all_edges(self) -> frozenset:
        return frozenset(range(len(self.edges)))

    def has_loop(self) -> bool:
        return any(a == b for a, b in self.edges)

    def degree(self, v: int) -> int:
        # a loop contributes 2
        return sum((a == v) + (b == v) for a, b in self.edges)

    def incident(self, v: int) -> frozenset:
        return frozenset(i for i, (a, b) in enumerate(self.edges) if a == v or b == v)

    def other_end(self, e: int, v: int) -> int:
        a, b = self.edges[e]
        if a == v:
            return b
        if b == v:
            return a
        raise ContractError(f"edge {e} is not incident to vertex {v}")


@dataclass(frozen=True)
class DerivedGraph:
    """Result of unsubdividing a vertex ``v``.

    ``edge_origin[c]`` is the parent edge id of child edge ``c``, or ``None``
    when ``c`` is synthetic; ``pre_edges[c]`` lists the two parent edges of
    the star that a synthetic edge replaces. ``vertex_origin`` maps child
    vertices to parent vertices.
    """

    parent: MultiGraph
    v: int
    star: frozenset
    child: MultiGraph
    edge_origin: tuple
    vertex_origin: tuple
    pre_edges: dict = field(default_factory=dict)
    e_star: int = -1

    @property
    def synthetic(self) -> frozenset:
        return frozenset(self.pre_edges)

    def parent_to_child(self) -> dict:
        return {p: c for c, p in enumerate(self.edge_origin) if p is not None}

    def synthetic_for_pair(self) -> dict:
        return {frozenset(pair): c for c, pair in self.pre_edges.items()}


def parse_graph(text: str) -> MultiGraph:
    """Parse the edge-list format: a header ``n m`` then ``m`` lines ``u v``.

    Vertex ids in the text are 1-based; blank lines and ``#`` comments are
    skipped.

    >>> parse_graph("2 2\\n1 2\\n1 2").edges
    ((0, 1), (0, 1))
    """
    header = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected two integers, got {line!r}", lineno)
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"expected two integers, got {line!r}", lineno) from None
        if header is None:
            if a < 0 or b < 0:
                raise ParseError("vertex and edge counts must be nonnegative", lineno)
            header = (a, b)
            continue
        n = header[0]
        for u in (a, b):
            if u < 1:
                raise ParseError(f"vertex id {u} is not positive", lineno)
            if u > n:
                raise ParseError(f"vertex id {u} exceeds declared count {n}", lineno)
        edges.append((a - 1, b - 1))
    if header is None:
        raise ParseError("missing header line 'n m'")
    if len(edges) != header[1]:
        raise ParseError(f"header declares {header[1]} edges but {len(edges)} were given")
    return MultiGraph(header[0], tuple(edges))


def format_graph(g: MultiGraph) -> str:
    lines = [f"{g.vertex_count} {g.edge_count}"]
    lines += [f"{a + 1} {b + 1}" for a, b in g.edges]
    return "\n".join(lines) + "\n"


def components(g: MultiGraph, s: Iterable[int] | None = None) -> tuple[tuple[int, ...], ...]:
    """Connected components of the spanning subgraph ``(V(g), s)``.

    Blocks are sorted tuples, ordered by their smallest vertex. ``s=None``
    means all edges.
    """
    uf = UnionFind(g.vertex_count)
    for e in (range(g.edge_count) if s is None else s):
        a, b = g.edges[e]
        uf.union(a, b)
    blocks: dict[int, list[int]] = {}
    for x in range(g.vertex_count):
        blocks.setdefault(uf.find(x), []).append(x)
    return tuple(sorted((tuple(b) for b in blocks.values()), key=lambda b: b[0]))


def component_count(g: MultiGraph, s: Iterable[int] | None = None) -> int:
    uf = UnionFind(g.vertex_count)
    for e in (range(g.edge_count) if s is None else s):
        a, b = g.edges[e]
        uf.union(a, b)
    return uf.count


def is_acyclic(g: MultiGraph, s: Iterable[int]) -> bool:
    # hot path of every base test; union-find inlined
    parent = list(range(g.vertex_count))
    edges = g.edges
    for e in s:
        a, b = edges[e]
        while parent[a] != a:
            a = parent[a]
        while parent[b] != b:
            b = parent[b]
        if a == b:
            return False
        parent[a] = b
    return True


def is_spanning_forest(g: MultiGraph, s: Iterable[int], rank: int | None = None) -> bool:
    """True iff ``s`` is acyclic with exactly ``rank(g)`` edges."""
    s = tuple(s)
    if rank is None:
        rank = g.vertex_count - component_count(g)
    return len(s) == rank and is_acyclic(g, s)


def min_degree_vertex(g: MultiGraph) -> int:
    """A vertex of minimum degree, smallest id on ties."""
    if g.vertex_count == 0:
        raise ContractError("empty graph has no vertices")
    degrees = [0] * g.vertex_count
    for a, b in g.edges:
        degrees[a] += 1
        degrees[b] += 1
    return min(range(g.vertex_count), key=lambda x: (degrees[x], x))


def unsubdivide(g: MultiGraph, v: int, matching: Iterable[Iterable[int]]) -> DerivedGraph:
    """Delete ``v`` and replace each matched pair of star edges by one edge.

    The child keeps the non-star edges in their original order, followed by
    one synthetic edge per pair (pairs in sorted order) joining the far
    endpoints of its two pre-edges. ``e_star`` is the smallest unmatched star
    edge.
    """
    star = g.incident(v)
    if any(g.edges[e][0] == g.edges[e][1] for e in star):
        raise ContractError(f"vertex {v} carries a loop")
    pairs = sorted(tuple(sorted(p)) for p in matching)
    used: set[int] = set()
    for p in pairs:
        if len(p) != 2 or p[0] == p[1]:
            raise ContractError(f"matching element {p} is not a pair of distinct edges")
        if not set(p) <= star:
            raise ContractError(f"pair {p} is not contained in the star of vertex {v}")
        if used & set(p):
            raise ContractError("matching pairs are not disjoint")
        used.update(p)
    unmatched = sorted(star - used)
    if not unmatched:
        raise ContractError("every star edge is matched; no leftover edge exists")

    vertex_origin = tuple(x for x in range(g.vertex_count) if x != v)
    new_id = {x: i for i, x in enumerate(vertex_origin)}
    edges, origin = [], []
    for e, (a, b) in enumerate(g.edges):
        if e in star:
            continue
        edges.append((new_id[a], new_id[b]))
        origin.append(e)
    pre_edges = {}
    for p in pairs:
        a, b = g.other_end(p[0], v), g.other_end(p[1], v)
        pre_edges[len(edges)] = p
        edges.append((new_id[a], new_id[b]))
        origin.append(None)
    child = MultiGraph(len(vertex_origin), tuple(edges))
    return DerivedGraph(
        parent=g,
        v=v,
        star=star,
        child=child,
        edge_origin=tuple(origin),
        vertex_origin=vertex_origin,
        pre_edges=pre_edges,
        e_star=unmatched[0],
    )


def induced_edge_subgraph(g: MultiGraph, keep: Iterable[int], drop_isolated: bool = True):
    """Subgraph on the edges ``keep`` (in ascending order).

    Returns ``(child, vertex_origin, edge_origin)``.
    """
    keep = sorted(keep)
    if drop_isolated:
        verts = sorted({x for e in keep for x in g.edges[e]})
    else:
        verts = list(range(g.vertex_count))
    new_id = {x: i for i, x in enumerate(verts)}
    child = MultiGraph(len(verts), tuple((new_id[g.edges[e][0]], new_id[g.edges[e][1]]) for e in keep))
    return child, tuple(verts), tuple(keep)
