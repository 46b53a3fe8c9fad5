"""Cycle-matroid semantics over a multigraph.

Bases are spanning forests, represented as ``frozenset`` of edge ids.
Anything that needs a canonical order (output, sorting tuples) goes through
:func:`base_key`, which is the ascending tuple of ids.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import ContractError, ParseError
from .graph import MultiGraph, UnionFind, component_count, components, induced_edge_subgraph, is_acyclic


def rank(g: MultiGraph) -> int:
    # graphs are immutable, so the value is memoized on the instance
    cached = g.__dict__.get("_rank")
    if cached is None:
        cached = g.vertex_count - component_count(g)
        object.__setattr__(g, "_rank", cached)
    return cached


def base_key(base: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(base))


def is_base(g: MultiGraph, s: Iterable[int], r: int | None = None) -> bool:
    s = tuple(s)
    if r is None:
        r = rank(g)
    return len(s) == r and len(set(s)) == r and is_acyclic(g, s)


def enumerate_bases(g: MultiGraph) -> Iterator[frozenset]:
    """Yield every spanning forest once, in lexicographic order of id lists."""
    r = rank(g)
    m = g.edge_count
    edges = g.edges

    # suffix_ok[i][j]: can a forest be completed using edges >= i; checked lazily
    def completable(uf_parent: list[int], start: int, need: int) -> bool:
        if need == 0:
            return True
        uf = UnionFind(0)
        uf.parent = list(uf_parent)
        gained = 0
        for e in range(start, m):
            a, b = edges[e]
            if uf.union(a, b):
                gained += 1
                if gained >= need:
                    return True
        return False

    chosen: list[int] = []

    def extend(uf_parent: list[int], start: int) -> Iterator[frozenset]:
        need = r - len(chosen)
        if need == 0:
            yield frozenset(chosen)
            return
        for e in range(start, m - need + 1):
            a, b = edges[e]
            uf = UnionFind(0)
            uf.parent = list(uf_parent)
            if not uf.union(a, b):
                continue
            if not completable(uf.parent, e + 1, need - 1):
                continue
            chosen.append(e)
            yield from extend(uf.parent, e + 1)
            chosen.pop()

    yield from extend(list(range(g.vertex_count)), 0)


def count_bases(g: MultiGraph) -> int:
    return sum(1 for _ in enumerate_bases(g))


@dataclass(frozen=True)
class ParallelExtension:
    """Parent edge ``i`` replaced by ``multiplicity[i]`` parallel copies.

    Copies of one parent edge receive consecutive child ids; ``alpha[c]`` is
    the parent edge of child edge ``c``.
    """

    parent: MultiGraph
    multiplicity: tuple[int, ...]
    child: MultiGraph
    alpha: tuple[int, ...]

    def fiber(self, i: int) -> tuple[int, ...]:
        return tuple(c for c, p in enumerate(self.alpha) if p == i)

    def project(self, child_set: Iterable[int]) -> frozenset:
        """``alpha`` applied to a set; raises if two copies of one edge collide."""
        out = [self.alpha[c] for c in child_set]
        image = frozenset(out)
        if len(image) != len(out):
            raise ContractError("set contains two parallel copies of one edge")
        return image


def parallel_extension(g: MultiGraph, multiplicity: Sequence[int]) -> ParallelExtension:
    mult = tuple(int(x) for x in multiplicity)
    if len(mult) != g.edge_count:
        raise ContractError(f"multiplicity vector has length {len(mult)}, graph has {g.edge_count} edges")
    if any(x < 0 for x in mult):
        raise ContractError("multiplicities must be nonnegative")
    edges, alpha = [], []
    for i, s in enumerate(mult):
        edges.extend([g.edges[i]] * s)
        alpha.extend([i] * s)
    return ParallelExtension(g, mult, MultiGraph(g.vertex_count, tuple(edges)), tuple(alpha))


def lift_tuple(ext: ParallelExtension, bases: Sequence[Iterable[int]]) -> list[frozenset]:
    """Split parallel copies among ``bases`` to get disjoint child bases.

    Copies of edge ``i`` go, in ascending child id, to the bases containing
    ``i`` in list order.
    """
    bases = [frozenset(b) for b in bases]
    counts = Counter(e for b in bases for e in b)
    for i, s in enumerate(ext.multiplicity):
        if counts.get(i, 0) != s:
            raise ContractError(
                f"edge {i} appears {counts.get(i, 0)} times in the bases but has multiplicity {s}"
            )
    extra = set(counts) - set(range(len(ext.multiplicity)))
    if extra:
        raise ContractError(f"bases use unknown edges {sorted(extra)}")
    fibers = {i: list(ext.fiber(i)) for i in range(len(ext.multiplicity))}
    cursor = {i: 0 for i in fibers}
    lifted = []
    for b in bases:
        child = []
        for i in sorted(b):
            child.append(fibers[i][cursor[i]])
            cursor[i] += 1
        lifted.append(frozenset(child))
    return lifted


@dataclass(frozen=True)
class Component:
    """A connected piece of a graph with maps back to the parent ids."""

    graph: MultiGraph
    vertex_origin: tuple[int, ...]
    edge_origin: tuple[int, ...]

    def to_parent(self, child_set: Iterable[int]) -> frozenset:
        return frozenset(self.edge_origin[c] for c in child_set)

    def from_parent(self, parent_set: Iterable[int]) -> frozenset:
        back = {p: c for c, p in enumerate(self.edge_origin)}
        return frozenset(back[p] for p in parent_set if p in back)


def split_components(g: MultiGraph) -> list[Component]:
    """One :class:`Component` per connected component that has an edge."""
    out = []
    for block in components(g):
        members = set(block)
        keep = [e for e, (a, _) in enumerate(g.edges) if a in members]
        if not keep:
            continue
        child, verts, origin = induced_edge_subgraph(g, keep)
        out.append(Component(child, verts, origin))
    return out


# -- text forms --------------------------------------------------------------

def format_base(base: Iterable[int]) -> str:
    return ",".join(str(e) for e in base_key(base))


def parse_base(text: str) -> frozenset:
    text = text.strip()
    if not text:
        return frozenset()
    try:
        ids = [int(x) for x in text.split(",")]
    except ValueError:
        raise ParseError(f"malformed base {text!r}") from None
    if len(set(ids)) != len(ids):
        raise ParseError(f"base {text!r} repeats an edge id")
    if any(i < 0 for i in ids):
        raise ParseError(f"base {text!r} has a negative edge id")
    return frozenset(ids)


def format_bases(bases: Iterable[Iterable[int]]) -> str:
    return ";".join(format_base(b) for b in bases)


def parse_bases(text: str) -> list[frozenset]:
    return [parse_base(part) for part in text.split(";")]
