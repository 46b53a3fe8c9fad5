"""Brute-force reference implementations the tests compare against.

Nothing here imports the package's search code: bases come from all
``r``-subsets, exchange graphs from all pairs of vertices, spanning-tree
counts from the matrix-tree theorem.
"""

from __future__ import annotations

import itertools
from collections import deque
from fractions import Fraction

import networkx as nx


def bf_rank(n, edges):
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    r = 0
    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
            r += 1
    return r


def bf_is_forest(n, edges, subset):
    return bf_rank(n, [edges[e] for e in subset]) == len(subset)


def bf_bases(n, edges):
    r = bf_rank(n, edges)
    return [frozenset(c) for c in itertools.combinations(range(len(edges)), r) if bf_is_forest(n, edges, c)]


def matrix_tree_count(n, edges):
    """Spanning trees of a connected loopless multigraph via a Laplacian cofactor."""
    if n == 1:
        return 1
    lap = [[Fraction(0)] * n for _ in range(n)]
    for a, b in edges:
        if a == b:
            continue
        lap[a][a] += 1
        lap[b][b] += 1
        lap[a][b] -= 1
        lap[b][a] -= 1
    m = [row[1:] for row in lap[1:]]
    size = n - 1
    det = Fraction(1)
    for col in range(size):
        pivot = next((r for r in range(col, size) if m[r][col] != 0), None)
        if pivot is None:
            return 0
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        for r in range(col + 1, size):
            f = m[r][col] / m[col][col]
            for c in range(col, size):
                m[r][c] -= f * m[col][c]
    return int(det)


def bf_k_tuples(n, edges, k):
    """Sets of k pairwise disjoint bases covering every edge."""
    bases = bf_bases(n, edges)
    full = frozenset(range(len(edges)))
    out = set()
    for combo in itertools.combinations(bases, k):
        if frozenset().union(*combo) == full and sum(len(b) for b in combo) == len(edges):
            out.add(frozenset(combo))
    return out


def bf_ordered_pairs(n, edges):
    return {(a, b) for t in bf_k_tuples(n, edges, 2) for a, b in (tuple(t), tuple(t)[::-1])}


def bf_components(vertices, adjacent):
    vertices = list(vertices)
    seen, comps = set(), 0
    for s in vertices:
        if s in seen:
            continue
        comps += 1
        seen.add(s)
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in vertices:
                if y not in seen and adjacent(x, y):
                    seen.add(y)
                    queue.append(y)
    return comps


def bf_fiber(n, edges, exponent, k):
    """All k-multisets of bases with multiset union ``exponent``."""
    bases = bf_bases(n, edges)
    out = set()
    for combo in itertools.combinations_with_replacement(sorted(bases, key=sorted), k):
        counts = [0] * len(edges)
        for b in combo:
            for e in b:
                counts[e] += 1
        if tuple(counts) == tuple(exponent):
            out.add(tuple(sorted(tuple(sorted(b)) for b in combo)))
    return out


def differ_by_double_swap(m1, m2):
    """True iff the multisets m1, m2 of bases differ by one double swap."""
    m1 = [frozenset(b) for b in m1]
    m2 = [frozenset(b) for b in m2]
    if sorted(map(sorted, m1)) == sorted(map(sorted, m2)):
        return False
    for i, j in itertools.combinations(range(len(m1)), 2):
        rest = [m1[x] for x in range(len(m1)) if x not in (i, j)]
        for b in m1[i] - m1[j]:
            for d in m1[j] - m1[i]:
                ni = (m1[i] - {b}) | {d}
                nj = (m1[j] - {d}) | {b}
                cand = rest + [ni, nj]
                if sorted(map(sorted, cand)) == sorted(map(sorted, m2)):
                    return True
    return False


def to_nx(n, edges):
    g = nx.MultiGraph()
    g.add_nodes_from(range(n))
    g.add_edges_from(edges)
    return g


def nx_classes(graphs):
    """Representatives of the isomorphism classes among ``graphs`` (pairs ``(n, edges)``)."""
    reps = []
    buckets: dict = {}
    for n, edges in graphs:
        g = to_nx(n, edges)
        inv = (n, len(edges), tuple(sorted(d for _, d in g.degree())))
        bucket = buckets.setdefault(inv, [])
        if any(nx.is_isomorphic(g, h) for h in bucket):
            continue
        bucket.append(g)
        reps.append((n, edges))
    return reps


def bf_sparse(n, edges, k):
    for size in range(2, n + 1):
        for s in itertools.combinations(range(n), size):
            ss = set(s)
            if sum(1 for a, b in edges if a in ss and b in ss) > k * (size - 1):
                return False
    return all(a != b for a, b in edges)
