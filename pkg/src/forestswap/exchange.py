"""Double swaps and the exchange graphs built from them.

Three vertex kinds appear here:

* k-tuples: ``k`` pairwise disjoint bases covering the edge set, stored as a
  tuple of frozensets in canonical (lexicographic) order;
* ordered pairs: ``(first, second)`` disjoint bases covering a ``2r`` edge set;
* fiber multisets: ``k`` bases, repeats allowed, with a fixed multiset union.

The explicit graph builders are brute-force oracles; the constructive path
algorithms in :mod:`forestswap.pathfinder` are checked against them.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Iterator, Sequence

from .errors import ContractError
from .graph import MultiGraph
from .matroid import base_key, enumerate_bases, is_base, rank


def canon_tuple(bases: Iterable[Iterable[int]]) -> tuple[frozenset, ...]:
    return tuple(sorted((frozenset(b) for b in bases), key=base_key))


def tuple_key(bases: Iterable[Iterable[int]]) -> tuple:
    return tuple(sorted(base_key(b) for b in bases))


def is_k_tuple(g: MultiGraph, bases: Sequence[Iterable[int]], k: int | None = None, r: int | None = None) -> bool:
    """Pairwise disjoint bases whose union is the whole edge set."""
    bases = [frozenset(b) for b in bases]
    if k is not None and len(bases) != k:
        return False
    if r is None:
        r = rank(g)
    seen: set[int] = set()
    for b in bases:
        if seen & b or not is_base(g, b, r):
            return False
        seen |= b
    return seen == g.all_edges


def double_swap_candidates(g: MultiGraph, B: Iterable[int], D: Iterable[int], b: int, r: int | None = None) -> list[int]:
    """All ``d`` in ``D`` such that ``B + d - b`` and ``D + b - d`` are bases."""
    B, D = frozenset(B), frozenset(D)
    if b not in B:
        raise ContractError(f"edge {b} is not in the first base")
    if r is None:
        r = rank(g)
    if b in D:
        return [b]
    out = []
    for d in sorted(D):
        if d in B:
            continue
        if is_base(g, (B - {b}) | {d}, r) and is_base(g, (D - {d}) | {b}, r):
            out.append(d)
    return out


def apply_double_swap(g: MultiGraph, t: Sequence[Iterable[int]], i: int, j: int, b: int, d: int,
                      r: int | None = None) -> tuple[frozenset, ...]:
    """Exchange ``b`` of member ``i`` with ``d`` of member ``j``; positions are kept."""
    members = [frozenset(x) for x in t]
    if i == j:
        if b != d:
            raise ContractError("a member can only swap an edge with itself")
        return tuple(members)
    if b not in members[i] or d not in members[j]:
        raise ContractError(f"edge {b} not in member {i} or edge {d} not in member {j}")
    if r is None:
        r = rank(g)
    new_i = (members[i] - {b}) | {d}
    new_j = (members[j] - {d}) | {b}
    if not (is_base(g, new_i, r) and is_base(g, new_j, r)):
        raise ContractError(f"swapping {b} and {d} does not preserve bases")
    members[i], members[j] = new_i, new_j
    return tuple(members)


def adjacent_k(u: Iterable[Iterable[int]], v: Iterable[Iterable[int]]) -> bool:
    u = {frozenset(b) for b in u}
    v = {frozenset(b) for b in v}
    if u == v:
        raise ContractError("a vertex is not adjacent to itself")
    return bool(u & v)


def adjacent_single(p: Sequence[Iterable[int]], q: Sequence[Iterable[int]], r: int) -> bool:
    return len(frozenset(p[0]) & frozenset(q[0])) == r - 1


@dataclass
class ExchangeGraph:
    vertices: list
    adjacency: list[list[int]]
    kind: str = "k-base"
    index: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.index:
            self.index = {x: i for i, x in enumerate(self.vertices)}

    @property
    def edge_count(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    def component_labels(self) -> list[int]:
        label = [-1] * len(self.vertices)
        current = 0
        for s in range(len(self.vertices)):
            if label[s] >= 0:
                continue
            label[s] = current
            queue = deque([s])
            while queue:
                x = queue.popleft()
                for y in self.adjacency[x]:
                    if label[y] < 0:
                        label[y] = current
                        queue.append(y)
            current += 1
        return label

    def component_count(self) -> int:
        labels = self.component_labels()
        return max(labels) + 1 if labels else 0

    def distances_from(self, s: int) -> list[int]:
        dist = [-1] * len(self.vertices)
        dist[s] = 0
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in self.adjacency[x]:
                if dist[y] < 0:
                    dist[y] = dist[x] + 1
                    queue.append(y)
        return dist

    def stats(self) -> dict:
        comps = self.component_count()
        return {
            "vertices": len(self.vertices),
            "edges": self.edge_count,
            "connected": comps <= 1,
            "components": comps,
        }


def is_connected(x: ExchangeGraph) -> bool:
    if len(x.vertices) <= 1:
        return True
    return all(d >= 0 for d in x.distances_from(0))


def _check_edge_count(g: MultiGraph, k: int) -> int:
    r = rank(g)
    if g.edge_count != k * r:
        raise ContractError(f"graph has {g.edge_count} edges but k*rank = {k}*{r} = {k * r}")
    return r


def k_tuples(g: MultiGraph, k: int, bases: list[frozenset] | None = None) -> Iterator[tuple[frozenset, ...]]:
    """Exact-cover search for all sets of ``k`` disjoint bases covering ``E(g)``.

    The least uncovered edge is forced into the next base, so each set is
    produced exactly once.
    """
    if bases is None:
        bases = list(enumerate_bases(g))
    containing: dict[int, list[frozenset]] = {e: [] for e in range(g.edge_count)}
    for b in bases:
        for e in b:
            containing[e].append(b)
    chosen: list[frozenset] = []

    def search(uncovered: frozenset) -> Iterator[tuple[frozenset, ...]]:
        if not uncovered:
            if len(chosen) == k:
                yield canon_tuple(chosen)
            return
        if len(chosen) == k:
            return
        e = min(uncovered)
        for b in containing[e]:
            if b <= uncovered:
                chosen.append(b)
                yield from search(uncovered - b)
                chosen.pop()

    if g.edge_count == 0:
        if k >= 0 and rank(g) == 0:
            yield tuple(frozenset() for _ in range(k))
        return
    yield from search(g.all_edges)


def _graph_from_buckets(vertices: list, buckets: Iterable[list[int]], kind: str) -> ExchangeGraph:
    adj: list[set[int]] = [set() for _ in vertices]
    for bucket in buckets:
        for i in bucket:
            for j in bucket:
                if i != j:
                    adj[i].add(j)
    return ExchangeGraph(vertices, [sorted(a) for a in adj], kind)


def build_k_base_graph(g: MultiGraph, k: int) -> ExchangeGraph:
    """Vertices: sets of ``k`` disjoint bases; edges: sets sharing a base.

    For ``k == 2`` two distinct vertices never share a base, so the graph is
    edgeless.
    """
    if k < 1:
        raise ContractError("k must be positive")
    _check_edge_count(g, k)
    vertices = sorted(k_tuples(g, k), key=tuple_key)
    by_base: dict[frozenset, list[int]] = {}
    for i, t in enumerate(vertices):
        for b in set(t):
            by_base.setdefault(b, []).append(i)
    return _graph_from_buckets(vertices, by_base.values(), "k-base")


def ordered_pairs(g: MultiGraph) -> list[tuple[frozenset, frozenset]]:
    r = rank(g)
    full = g.all_edges
    out = []
    for b in enumerate_bases(g):
        rest = full - b
        if is_base(g, rest, r):
            out.append((b, rest))
    return out


def pair_key(p) -> tuple:
    return (base_key(p[0]), base_key(p[1]))


def build_single_exchange_graph(g: MultiGraph) -> ExchangeGraph:
    """Vertices: ordered disjoint base pairs; edges: first members share ``r - 1``."""
    r = _check_edge_count(g, 2)
    vertices = sorted(ordered_pairs(g), key=pair_key)
    index = {v: i for i, v in enumerate(vertices)}
    adj: list[list[int]] = []
    for first, second in vertices:
        nbrs = set()
        for b in first:
            for d in second:
                q = ((first - {b}) | {d}, (second - {d}) | {b})
                j = index.get(q)
                if j is not None:
                    nbrs.add(j)
        adj.append(sorted(nbrs))
    return ExchangeGraph(vertices, adj, "single", index)


def fiber_multisets(g: MultiGraph, exponent: Sequence[int], k: int,
                    bases: list[frozenset] | None = None) -> list[tuple[frozenset, ...]]:
    """All multisets of ``k`` bases whose multiset union is ``exponent``."""
    exponent = tuple(int(x) for x in exponent)
    if len(exponent) != g.edge_count:
        raise ContractError("exponent length differs from the edge count")
    r = rank(g)
    if sum(exponent) != k * r or any(x < 0 for x in exponent):
        return []
    support = frozenset(i for i, x in enumerate(exponent) if x > 0)
    if bases is None:
        bases = list(enumerate_bases(g))
    bases = sorted((b for b in bases if b <= support), key=base_key)
    last_with: dict[int, int] = {}
    for idx, b in enumerate(bases):
        for e in b:
            last_with[e] = idx
    if any(e not in last_with for e in support):
        return []
    remaining = list(exponent)
    chosen: list[frozenset] = []
    out = []

    def search(start: int) -> None:
        if len(chosen) == k:
            out.append(tuple(chosen))
            return
        live = [e for e in support if remaining[e] > 0]
        if any(last_with[e] < start for e in live):
            return
        for idx in range(start, len(bases)):
            b = bases[idx]
            if all(remaining[e] > 0 for e in b):
                for e in b:
                    remaining[e] -= 1
                chosen.append(b)
                search(idx)
                chosen.pop()
                for e in b:
                    remaining[e] += 1

    search(0)
    return out


def multiset_key(m: Iterable[Iterable[int]]) -> tuple:
    return tuple(sorted(base_key(b) for b in m))


def canon_multiset(m: Iterable[Iterable[int]]) -> tuple[frozenset, ...]:
    return tuple(sorted((frozenset(b) for b in m), key=base_key))


def swap_neighbours(g: MultiGraph, m: Sequence[frozenset], r: int) -> Iterator[tuple[frozenset, ...]]:
    """Multisets one double swap away from ``m`` (canonical, may repeat)."""
    k = len(m)
    for i in range(k):
        for j in range(i + 1, k):
            Bi, Bj = m[i], m[j]
            for b in Bi - Bj:
                for d in Bj - Bi:
                    ni = (Bi - {b}) | {d}
                    nj = (Bj - {d}) | {b}
                    if is_base(g, ni, r) and is_base(g, nj, r):
                        rest = [m[x] for x in range(k) if x != i and x != j]
                        yield canon_multiset(rest + [ni, nj])


def build_multiset_fiber_graph(g: MultiGraph, exponent: Sequence[int], k: int,
                               bases: list[frozenset] | None = None) -> ExchangeGraph:
    """Multisets of ``k`` bases with union ``exponent``, joined by single double swaps."""
    found = fiber_multisets(g, exponent, k, bases)
    vertices = sorted((canon_multiset(m) for m in found), key=multiset_key)
    index = {v: i for i, v in enumerate(vertices)}
    r = rank(g)
    adj = []
    for i, m in enumerate(vertices):
        nbrs = {index[n] for n in swap_neighbours(g, m, r)}
        nbrs.discard(i)
        adj.append(sorted(nbrs))
    return ExchangeGraph(vertices, adj, "fiber", index)


def bfs_path(x: ExchangeGraph, source: Hashable, target: Hashable) -> list | None:
    """Shortest path between two vertices of an explicit graph, or None."""
    s, t = x.index[source], x.index[target]
    prev = {s: None}
    queue = deque([s])
    while queue:
        a = queue.popleft()
        if a == t:
            break
        for b in x.adjacency[a]:
            if b not in prev:
                prev[b] = a
                queue.append(b)
    if t not in prev:
        return None
    path = [t]
    while prev[path[-1]] is not None:
        path.append(prev[path[-1]])
    return [x.vertices[i] for i in reversed(path)]


def theta_counter(m: Iterable[Iterable[int]]) -> Counter:
    return Counter(e for b in m for e in b)
