"""Walk between the two orderings of a Hamiltonian-path split of K4.

K4 has six edges and rank three, so its edge set splits into two disjoint
spanning trees in several ways. The single exchange graph joins two splits
when one double swap turns the first into the second. Reversing a split
is not a single move once the rank is at least two, so the shortest walk
between (P1, P2) and (P2, P1) shows how far apart the orderings sit.

Run: python3 demos/k4_exchange_walk.py
"""

from forestswap import MultiGraph, build_single_exchange_graph, find_path_single, verify_pair_path
from forestswap.exchange import bfs_path
from forestswap.matroid import count_bases, format_base

k4 = MultiGraph(4, ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)))
p1, p2 = frozenset({0, 3, 5}), frozenset({1, 2, 4})

x = build_single_exchange_graph(k4)
print(f"K4: {count_bases(k4)} spanning trees, {len(x.vertices)} ordered tree pairs, {x.edge_count} exchange edges")
print(f"single exchange graph connected: {x.stats()['connected']}")

shortest = bfs_path(x, (p1, p2), (p2, p1))
print(f"\nshortest walk from (P1, P2) to (P2, P1): {len(shortest) - 1} swaps")

path = find_path_single(k4, (p1, p2), (p2, p1))
assert verify_pair_path(k4, path, (p1, p2), (p2, p1))
print(f"constructive walk ({len(path)} swaps, re-verified):")
for (first, second), swap in zip(path.pairs, path.swaps + [None]):
    step = f"   swap out {swap[0]}, in {swap[1]}" if swap else ""
    print(f"  ({format_base(first):>5} | {format_base(second):>5}){step}")
