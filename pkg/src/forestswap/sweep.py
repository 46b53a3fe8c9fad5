"""Exhaustive small-graph sweeps.

Graphs are generated up to isomorphism. A connected graph with ``m`` edges
arises from one with ``m - 1`` edges either by an edge between existing
vertices (delete a non-bridge) or by a pendant edge to a new vertex (delete a
leaf edge), so edge-by-edge augmentation with canonical-form deduplication
reaches every class.

Only ``(k, k)``-sparse graphs, where every vertex set ``S`` spans at most
``k(|S| - 1)`` edges, can be covered by ``k`` spanning forests. Everything
else has an empty k-base graph and no full-support fiber, so the generators
prune on sparsity as they grow.
"""

from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterator

from .errors import InvariantError, PathError
from .exchange import (
    build_k_base_graph,
    build_multiset_fiber_graph,
    build_single_exchange_graph,
    k_tuples,
)
from .graph import MultiGraph, components, format_graph
from .ideal import BaseBinomial, decompose_to_quadrics, verify_certificate
from .matroid import enumerate_bases, format_bases, rank
from .pathfinder import (
    balance,
    cocircuit_star,
    find_path_k,
    find_path_single,
    matching_graph,
    profile,
    statement_a_moves,
    verify_k_path,
    verify_pair_path,
)

MAX_EDGES = 12


# -- canonical forms -----------------------------------------------------------

def _adjacency(n: int, edges, weights=None) -> list[dict]:
    adj: list[dict] = [dict() for _ in range(n)]
    for i, (a, b) in enumerate(edges):
        w = 1 if weights is None else weights[i]
        adj[a].setdefault(b, []).append(w)
        if a != b:
            adj[b].setdefault(a, []).append(w)
    return [{u: tuple(sorted(ws)) for u, ws in row.items()} for row in adj]


def _refine(adj: list[dict], colour: list[int]) -> list[int]:
    """Colour refinement until stable; colours stay consistent with the input order."""
    n = len(adj)
    cells = len(set(colour))
    while True:
        sig = [(colour[v], tuple(sorted((colour[u], w) for u, w in adj[v].items()))) for v in range(n)]
        ranks = {s: i for i, s in enumerate(sorted(set(sig)))}
        colour = [ranks[s] for s in sig]
        if len(ranks) == cells:
            return colour
        cells = len(ranks)


def _canonical_connected(adj: list[dict]) -> tuple:
    n = len(adj)
    best = None

    def form(colour):
        out = []
        for v in range(n):
            for u, w in adj[v].items():
                if colour[v] <= colour[u]:
                    out.append((colour[v], colour[u], w))
        return tuple(sorted(out))

    def search(colour):
        nonlocal best
        colour = _refine(adj, colour)
        if len(set(colour)) == n:
            f = form(colour)
            if best is None or f < best:
                best = f
            return
        counts = Counter(colour)
        target = min(c for c in counts if counts[c] > 1)
        cell = [v for v in range(n) if colour[v] == target]
        # twins (same neighbourhood apart from each other) give identical branches
        seen = []
        for v in cell:
            if any(_twins(adj, v, u) for u in seen):
                continue
            seen.append(v)
            nxt = [2 * c + (1 if (c == target and x != v) else 0) for x, c in enumerate(colour)]
            search(nxt)

    search([0] * n)
    return (n, best)


def _twins(adj, a, b) -> bool:
    ra = {u: w for u, w in adj[a].items() if u != b}
    rb = {u: w for u, w in adj[b].items() if u != a}
    return ra == rb and adj[a].get(a) == adj[b].get(b)


def canonical_form(g: MultiGraph, weights=None) -> tuple:
    """An isomorphism-invariant key; optional per-edge ``weights`` must be preserved too.

    Components are canonized separately and the results sorted. Isolated
    vertices count as components.
    """
    out = []
    for block in components(g):
        idx = {x: i for i, x in enumerate(block)}
        es = [(idx[a], idx[b]) for a, b in g.edges if a in idx]
        ws = None if weights is None else [w for (a, _), w in zip(g.edges, weights) if a in idx]
        out.append(_canonical_connected(_adjacency(len(block), es, ws)))
    return tuple(sorted(out))


def from_canonical(key: tuple) -> MultiGraph:
    """Rebuild a graph (unweighted) from :func:`canonical_form`."""
    edges, offset = [], 0
    for n, form in key:
        for a, b, w in form or ():
            edges.extend([(offset + a, offset + b)] * len(w))
        offset += n
    return MultiGraph(offset, tuple(edges))


# -- sparsity and generators ---------------------------------------------------

def is_sparse(g: MultiGraph, k: int, through: tuple[int, int] | None = None) -> bool:
    """Every vertex set ``S`` spans at most ``k(|S|-1)`` edges.

    With ``through=(u, v)`` only sets containing both are checked, which is
    enough after adding the edge ``uv`` to a sparse graph.
    """
    n = g.vertex_count
    masks = [(1 << a) | (1 << b) for a, b in g.edges]
    if any(a == b for a, b in g.edges):
        return False
    must = 0 if through is None else (1 << through[0]) | (1 << through[1])
    others = [x for x in range(n) if not (must >> x) & 1]
    for size in range(0, len(others) + 1):
        for extra in itertools.combinations(others, size):
            s = must
            for x in extra:
                s |= 1 << x
            count = bin(s).count("1")
            if count < 2:
                continue
            spanned = sum(1 for m in masks if m & s == m)
            if spanned > k * (count - 1):
                return False
    return True


def connected_sparse_graphs(max_edges: int, k: int, max_vertices: int | None = None) -> dict[int, list[MultiGraph]]:
    """Connected loopless ``(k,k)``-sparse multigraphs by edge count, one per class."""
    if max_edges > MAX_EDGES:
        raise ValueError(f"max_edges {max_edges} exceeds the supported bound {MAX_EDGES}")
    cap = max_edges + 1 if max_vertices is None else max_vertices
    levels = {0: [MultiGraph(1, ())]}
    for m in range(1, max_edges + 1):
        seen: dict[tuple, MultiGraph] = {}
        for g in levels[m - 1]:
            n = g.vertex_count
            mult = Counter(tuple(sorted(e)) for e in g.edges)
            for a, b in itertools.combinations(range(n + 1), 2):
                if b == n and n + 1 > cap:
                    continue
                if b < n and mult[(a, b)] >= k:
                    continue
                h = MultiGraph(max(n, b + 1), g.edges + ((a, b),))
                key = canonical_form(h)
                if key in seen:
                    continue
                if b < n and not is_sparse(h, k, (a, b)):
                    seen[key] = None
                    continue
                seen[key] = h
        levels[m] = sorted((h for h in seen.values() if h is not None), key=lambda h: canonical_form(h))
    return levels


def tight_graphs(max_edges: int, k: int) -> Iterator[MultiGraph]:
    """Connected graphs with ``|E| = k * rank`` and ``|E| <= max_edges`` that the k-base graph is nonempty on."""
    levels = connected_sparse_graphs(max_edges, k, max_vertices=max_edges // k + 1)
    for m in range(k, max_edges + 1, k):
        for g in levels[m]:
            if m == k * rank(g):
                yield g


def sparse_graphs(max_edges: int, k: int) -> Iterator[MultiGraph]:
    """All ``(k,k)``-sparse loopless graphs with ``1..max_edges`` edges, no isolated vertices.

    Disconnected graphs are multisets of connected classes.
    """
    levels = connected_sparse_graphs(max_edges, k)
    pool = [(m, g) for m in range(1, max_edges + 1) for g in levels[m]]

    def rec(start: int, budget: int, acc: list[MultiGraph]) -> Iterator[list[MultiGraph]]:
        if acc:
            yield acc
        for i in range(start, len(pool)):
            m, g = pool[i]
            if m <= budget:
                yield from rec(i, budget - m, acc + [g])

    for parts in rec(0, max_edges, []):
        yield disjoint_union(parts)


def disjoint_union(parts: list[MultiGraph]) -> MultiGraph:
    edges, offset = [], 0
    for g in parts:
        edges.extend((a + offset, b + offset) for a, b in g.edges)
        offset += g.vertex_count
    return MultiGraph(offset, tuple(edges))


def labeled_multigraphs(n: int, m: int) -> Iterator[MultiGraph]:
    """Every loopless multigraph on vertices ``0..n-1`` with ``m`` edges (edges as a sorted multiset)."""
    pairs = list(itertools.combinations(range(n), 2))
    for chosen in itertools.combinations_with_replacement(pairs, m):
        yield MultiGraph(n, chosen)


# -- per-instance checks -------------------------------------------------------

@dataclass
class Report:
    mode: str
    k: int
    instances: int = 0
    checks: Counter = field(default_factory=Counter)
    failures: list = field(default_factory=list)
    stats: Counter = field(default_factory=Counter)

    def fail(self, g: MultiGraph, what: str, detail: str = "") -> None:
        self.failures.append({"graph": format_graph(g), "check": what, "detail": detail})

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "k": self.k,
            "instances": self.instances,
            "checks": dict(sorted(self.checks.items())),
            "failures": self.failures[:20],
            "failure_count": len(self.failures),
            "ok": self.ok,
        }


def _sample_pairs(rng: random.Random, vertices: list, count: int) -> list[tuple]:
    return [(rng.choice(vertices), rng.choice(vertices)) for _ in range(count)]


def check_balance(g: MultiGraph, k: int, tuples: list, report: Report) -> None:
    for v in range(g.vertex_count):
        d = g.degree(v)
        if d == 0 or d > 2 * k - 1:
            continue
        star = cocircuit_star(g, v)
        for t in tuples:
            prof = profile(t, star)
            if max(prof) <= 2:
                continue
            report.checks["balance"] += 1
            bound = sum(max(0, p - 2) for p in prof)
            try:
                path = balance(g, t, v)
            except InvariantError as exc:
                report.fail(g, "balance", f"v={v} t={format_bases(t)}: {exc}")
                continue
            steps = len(path.tuples) - 1
            if steps > bound or max(profile(path.tuples[-1], star)) > 2 or not verify_k_path(g, path, k, t):
                report.fail(g, "balance", f"v={v} t={format_bases(t)}: {steps} steps, bound {bound}")


def _balanced_tuples(g, k, tuples, v, star):
    """Balanced tuples for ``star``, including endpoints of balancing paths of unbalanced ones."""
    found = {}
    for t in tuples:
        if max(profile(t, star)) > 2:
            t = tuple(balance(g, t, v).tuples[-1])
        found[tuple(sorted(tuple(sorted(b)) for b in t))] = t
    return list(found.values())


def check_statement_a(g: MultiGraph, k: int, tuples: list, report: Report, ordered: bool = False) -> None:
    for v in range(g.vertex_count):
        d = g.degree(v)
        if d == 0 or d > 2 * k - 1:
            continue
        star = cocircuit_star(g, v)
        for t in _balanced_tuples(g, k, tuples, v, star):
            mg = matching_graph(t, star)
            if len(mg.pairs) < 2 or not mg.isolated:
                continue
            pairs = sorted((tuple(sorted(p)) for p in mg.pairs))
            for p1, p2 in itertools.combinations(pairs, 2):
                for e5 in sorted(mg.isolated):
                    report.checks["statement_a"] += 1
                    mv = statement_a_moves(g, t, star, p1, p2, e5, ordered)
                    first = mv["i"] or mv["ii"]
                    second = mv["iii"] or mv["iv"]
                    fallback = mv["v"] or mv["vi"] or (mv["i"] and mv["ii"]) or (mv["iii"] and mv["iv"])
                    if not (first and second and fallback):
                        valid = [x for x in ("i", "ii", "iii", "iv", "v", "vi") if mv[x]]
                        report.fail(g, "statement_a",
                                    f"v={v} t={format_bases(t)} pairs={p1},{p2} e5={e5} valid={valid}")


def check_k_instance(g: MultiGraph, k: int, rng: random.Random, report: Report, samples: int = 20,
                     deep: bool = True) -> None:
    report.instances += 1
    x = build_k_base_graph(g, k)
    report.checks["connectivity"] += 1
    if x.component_count() > 1:
        report.fail(g, "connectivity", f"{x.component_count()} components")
    if not x.vertices:
        return
    for s, t in _sample_pairs(rng, x.vertices, samples):
        report.checks["path"] += 1
        try:
            path = find_path_k(g, s, t, k, stats=report.stats)
        except (InvariantError, PathError) as exc:
            report.fail(g, "path", f"{format_bases(s)} -> {format_bases(t)}: {exc}")
            continue
        if not verify_k_path(g, path, k, s, t):
            report.fail(g, "path", f"{format_bases(s)} -> {format_bases(t)}: re-verification failed")
    if deep:
        check_balance(g, k, x.vertices, report)
        check_statement_a(g, k, x.vertices, report)


def check_single_instance(g: MultiGraph, rng: random.Random, report: Report, samples: int = 20,
                          deep: bool = True) -> None:
    report.instances += 1
    x = build_single_exchange_graph(g)
    report.checks["connectivity"] += 1
    if x.component_count() > 1:
        report.fail(g, "connectivity", f"{x.component_count()} components")
    if not x.vertices:
        return
    for s, t in _sample_pairs(rng, x.vertices, samples):
        report.checks["path"] += 1
        try:
            path = find_path_single(g, s, t, stats=report.stats)
        except (InvariantError, PathError) as exc:
            report.fail(g, "path", f"{format_bases(s)} -> {format_bases(t)}: {exc}")
            continue
        if not verify_pair_path(g, path, s, t):
            report.fail(g, "path", f"{format_bases(s)} -> {format_bases(t)}: re-verification failed")
    if deep:
        tuples = list(k_tuples(g, 2))
        check_balance(g, 2, tuples, report)
        check_statement_a(g, 2, tuples, report, ordered=True)


def full_support_exponents(g: MultiGraph, k: int, bases: list | None = None) -> list[tuple[int, ...]]:
    """Exponents of the nonempty fibers of degree ``k`` using every edge, one per automorphism class.

    Exponent vectors are summed as base-``(k+1)`` integers, so each multiset of
    bases costs one addition; no digit can carry because it never exceeds ``k``.
    """
    m = g.edge_count
    if bases is None:
        bases = list(enumerate_bases(g))
    radix = k + 1
    full = (1 << m) - 1
    items = [(sum(1 << e for e in b), sum(radix ** e for e in b)) for b in bases]
    r = rank(g)
    found: set[int] = set()

    def rec(start: int, left: int, mask: int, code: int) -> None:
        if left == 0:
            if mask == full:
                found.add(code)
            return
        if bin(full & ~mask).count("1") > left * r:
            return
        for i in range(start, len(items)):
            bm, bc = items[i]
            rec(i, left - 1, mask | bm, code + bc)

    rec(0, k, 0, 0)
    out, seen = [], set()
    for code in sorted(found):
        s = []
        for _ in range(m):
            code, digit = divmod(code, radix)
            s.append(digit)
        s = tuple(s)
        key = canonical_form(g, s)
        if key not in seen:
            seen.add(key)
            out.append(s)
    return out


def check_white_instance(g: MultiGraph, k: int, rng: random.Random, report: Report, samples: int = 10) -> None:
    report.instances += 1
    bases = list(enumerate_bases(g))
    for s in full_support_exponents(g, k, bases):
        x = build_multiset_fiber_graph(g, s, k, bases=bases)
        if not x.vertices:
            continue
        report.checks["fiber"] += 1
        if x.component_count() > 1:
            report.fail(g, "fiber", f"S={s}: {x.component_count()} components")
        for lhs, rhs in _sample_pairs(rng, x.vertices, samples):
            report.checks["certificate"] += 1
            b = BaseBinomial(lhs, rhs)
            try:
                cert = decompose_to_quadrics(g, b, stats=report.stats)
            except (InvariantError, PathError) as exc:
                report.fail(g, "certificate", f"S={s} {format_bases(lhs)} - {format_bases(rhs)}: {exc}")
                continue
            verdict = verify_certificate(g, b, cert)
            if not verdict:
                report.fail(g, "certificate", f"S={s} {format_bases(lhs)} - {format_bases(rhs)}: {verdict.reason}")


# -- drivers -------------------------------------------------------------------

def sweep_theorem7(max_edges: int, seed: int = 0, samples: int = 20, deep: bool = True,
                   graphs: Callable[[], Iterator[MultiGraph]] | None = None) -> Report:
    report = Report("theorem7", 2)
    rng = random.Random(seed)
    for g in (graphs() if graphs else tight_graphs(max_edges, 2)):
        check_single_instance(g, rng, report, samples, deep)
    return report


def sweep_theorem4(max_edges: int, k: int, seed: int = 0, samples: int = 20, deep: bool = True,
                   graphs: Callable[[], Iterator[MultiGraph]] | None = None) -> Report:
    if k < 3:
        raise ValueError("the k-base sweep needs k >= 3; use theorem7 for k = 2")
    report = Report("theorem4", k)
    rng = random.Random(seed)
    for g in (graphs() if graphs else tight_graphs(max_edges, k)):
        check_k_instance(g, k, rng, report, samples, deep)
    return report


def sweep_white(max_edges: int, k: int, seed: int = 0, samples: int = 10,
                graphs: Callable[[], Iterator[MultiGraph]] | None = None) -> Report:
    if k < 2:
        raise ValueError("degree must be at least 2")
    report = Report("white", k)
    rng = random.Random(seed)
    for g in (graphs() if graphs else sparse_graphs(max_edges, k)):
        check_white_instance(g, k, rng, report, samples)
    return report


def labeled_source(max_edges: int, k: int, mode: str) -> Callable[[], Iterator[MultiGraph]]:
    """Every labeled instance, including the non-sparse ones, for cross-checking small bounds."""
    def gen():
        if mode == "white":
            for m in range(1, max_edges + 1):
                for n in range(2, 2 * m + 1):
                    for g in labeled_multigraphs(n, m):
                        if all(g.degree(v) for v in range(n)):
                            yield g
            return
        for n in range(2, max_edges // k + 2):
            m = k * (n - 1)
            if m > max_edges:
                break
            for g in labeled_multigraphs(n, m):
                if len(components(g)) == 1:
                    yield g
    return gen
