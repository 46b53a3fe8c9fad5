"""Explicit paths in the k-base graph and the single exchange graph.

The algorithm follows the induction on rank:

1. on a disconnected graph, move one component at a time;
2. otherwise fix a vertex ``v`` of minimum degree with star ``C``;
3. *balance* both endpoints so every base meets ``C`` at most twice;
4. *equalize* their matching graphs by rearranging only the star edges;
5. unsubdivide ``v`` to get a rank ``r - 1`` graph, recurse there, pull the
   child path back and patch its junctions.

Internally a *state* is a tuple of bases whose positions are meaningful
(for ordered pairs the order is the vertex; for k-tuples it is bookkeeping).
Every path is re-verified before it is returned.
"""

from __future__ import annotations

import itertools
import logging
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import ContractError, InvariantError, PathError
from .exchange import canon_tuple, is_k_tuple, tuple_key
from .graph import DerivedGraph, MultiGraph, component_count, components, min_degree_vertex, unsubdivide
from .matroid import base_key, is_base, rank, split_components

log = logging.getLogger(__name__)

State = tuple  # tuple[frozenset, ...]


# -- frames -------------------------------------------------------------------

class _Frame:
    """Per-graph context: rank, tuple width, and a memoized base test."""

    def __init__(self, g: MultiGraph, k: int, ordered: bool, stats: Counter | None = None):
        self.g = g
        self.k = k
        self.ordered = ordered
        self.r = rank(g)
        self.stats = stats if stats is not None else Counter()
        self._bases: dict[frozenset, bool] = {}

    def is_base(self, s: frozenset) -> bool:
        hit = self._bases.get(s)
        if hit is None:
            hit = self._bases[s] = is_base(self.g, s, self.r)
        return hit

    def valid(self, state: State) -> bool:
        return is_k_tuple(self.g, state, self.k, self.r)

    def adjacent(self, x: State, y: State) -> bool:
        if self.ordered:
            return len(x[0] & y[0]) == self.r - 1
        sx, sy = set(x), set(y)
        return sx != sy and bool(sx & sy)

    def key(self, state: State) -> tuple:
        if self.ordered:
            return tuple(base_key(b) for b in state)
        return tuple_key(state)

    def swap(self, state: State, i: int, j: int, b: int, d: int) -> State | None:
        """Double swap ``b`` of member ``i`` with ``d`` of member ``j``, or None."""
        ni = (state[i] - {b}) | {d}
        nj = (state[j] - {d}) | {b}
        if not (self.is_base(ni) and self.is_base(nj)):
            return None
        out = list(state)
        out[i], out[j] = ni, nj
        return tuple(out)


def _as_state(t: Iterable[Iterable[int]]) -> State:
    return tuple(frozenset(b) for b in t)


def _erase_loops(frame: _Frame, path: list[State]) -> list[State]:
    out: list[State] = []
    seen: dict[tuple, int] = {}
    for s in path:
        key = frame.key(s)
        if key in seen:
            cut = seen[key]
            for dropped in out[cut + 1:]:
                seen.pop(frame.key(dropped), None)
            del out[cut + 1:]
            continue
        seen[key] = len(out)
        out.append(s)
    return out


def _verify(frame: _Frame, path: list[State], source: State | None = None, target: State | None = None) -> None:
    if not path:
        raise PathError("empty path")
    for i, s in enumerate(path):
        if not frame.valid(s):
            raise PathError(f"state {i} is not a vertex of the exchange graph", junction=i)
    for i in range(len(path) - 1):
        if not frame.adjacent(path[i], path[i + 1]):
            raise PathError(f"states {i} and {i + 1} are not adjacent", junction=i)
    if source is not None and frame.key(path[0]) != frame.key(source):
        raise PathError("path does not start at the requested source")
    if target is not None and frame.key(path[-1]) != frame.key(target):
        raise PathError("path does not end at the requested target")


# -- public path records -------------------------------------------------------

@dataclass
class KPath:
    """A walk in the k-base graph with one shared base per junction."""

    tuples: list
    witnesses: list = field(default_factory=list)

    def __len__(self):
        return len(self.tuples) - 1


@dataclass
class PairPath:
    """A walk in the single exchange graph; ``swaps[i]`` is ``(out, in)`` of the first base."""

    pairs: list
    swaps: list = field(default_factory=list)

    def __len__(self):
        return len(self.pairs) - 1


def _kpath(states: list[State], canonical: bool = True) -> KPath:
    tuples = [canon_tuple(s) if canonical else s for s in states]
    witnesses = []
    for a, b in zip(tuples, tuples[1:]):
        shared = set(a) & set(b)
        witnesses.append(min(shared, key=base_key) if shared else None)
    return KPath(tuples, witnesses)


def _pairpath(states: list[State]) -> PairPath:
    swaps = []
    for a, b in zip(states, states[1:]):
        out = a[0] - b[0]
        into = b[0] - a[0]
        swaps.append((min(out), min(into)) if len(out) == 1 and len(into) == 1 else None)
    return PairPath(list(states), swaps)


# -- star, balance, matching graphs ------------------------------------------

def cocircuit_star(g: MultiGraph, v: int) -> frozenset:
    """Edges incident to ``v``."""
    for e in g.incident(v):
        a, b = g.edges[e]
        if a == b:
            raise ContractError(f"vertex {v} carries loop {e}")
    return g.incident(v)


def profile(state: Sequence[frozenset], star: frozenset) -> tuple[int, ...]:
    return tuple(len(b & star) for b in state)


def _balance(frame: _Frame, state: State, v: int, star: frozenset) -> list[State]:
    g = frame.g
    path = [state]
    while True:
        sizes = profile(state, star)
        heavy = [i for i, s in enumerate(sizes) if s > 2]
        if not heavy:
            return path
        i = heavy[0]
        light = [j for j, s in enumerate(sizes) if s == 1]
        if not light:
            raise InvariantError(f"unbalanced profile {sizes} without a singly-met member")
        j = light[0]
        (f,) = state[j] & star
        # parts of C cut out by the components of B_i - C on V - v
        blocks = components(g, state[i] - star)
        block_of = {x: n for n, block in enumerate(blocks) for x in block}
        part = {c: block_of[g.other_end(c, v)] for c in star}
        movable = sorted(e for e in state[i] & star if part[e] != part[f])
        if not movable:
            raise InvariantError("no star edge outside the part of the singly-met member")
        e = movable[0]
        nxt = None
        for d in sorted(state[j]):
            nxt = frame.swap(state, i, j, e, d)
            if nxt is not None:
                if d in star:
                    raise InvariantError(f"balancing swap exchanged star edges {e} and {d}")
                break
        if nxt is None:
            raise InvariantError(f"star edge {e} has no double-swap partner")
        state = nxt
        path.append(state)


def balance(g: MultiGraph, t: Sequence[Iterable[int]], v: int) -> KPath:
    """Double swaps from ``t`` to a tuple meeting the star of ``v`` at most twice per base.

    Member positions are preserved along the returned path.
    """
    state = _as_state(t)
    frame = _Frame(g, len(state), ordered=False)
    if not frame.valid(state):
        raise ContractError("input is not a set of disjoint bases covering the edges")
    star = cocircuit_star(g, v)
    if g.degree(v) > 2 * len(state) - 1:
        raise ContractError(f"vertex {v} has degree {g.degree(v)} > 2k - 1")
    return _kpath(_balance(frame, state, v, star), canonical=False)


@dataclass(frozen=True)
class MatchingGraph:
    """Pairs of star edges met twice by one base, plus the rest as isolated vertices."""

    star: frozenset
    pairs: frozenset  # frozenset of 2-element frozensets
    owner: tuple  # ((pair, member index), ...) sorted by pair
    isolated: frozenset

    def owner_of(self, pair) -> int:
        return dict(self.owner)[frozenset(pair)]

    def same_pairs(self, other: "MatchingGraph") -> bool:
        return self.pairs == other.pairs


def matching_graph(t: Sequence[Iterable[int]], star: Iterable[int]) -> MatchingGraph:
    star = frozenset(star)
    pairs, owner = set(), []
    for i, b in enumerate(t):
        part = frozenset(b) & star
        if len(part) > 2:
            raise ContractError(f"member {i} meets the star {len(part)} times; tuple is not balanced")
        if len(part) == 2:
            pairs.add(part)
            owner.append((part, i))
    covered = frozenset().union(*pairs) if pairs else frozenset()
    owner.sort(key=lambda x: sorted(x[0]))
    return MatchingGraph(star, frozenset(pairs), tuple(owner), star - covered)


# -- valid moves ---------------------------------------------------------------

def _realize(frame: _Frame, state: State, star: frozenset, involved: frozenset,
             target_pairs: Iterable[frozenset]) -> list[State] | None:
    """Double swaps among the owners of ``involved`` star edges reaching ``target_pairs``.

    Only star edges in ``involved`` move. Returns the states after each swap
    (``[]`` if already there), or None when the target is unreachable.
    """
    target = frozenset(frozenset(p) for p in target_pairs)
    owners = [i for i, b in enumerate(state) if b & involved]
    for i in owners:
        if not (state[i] & star) <= involved:
            raise ContractError("move touches a member that owns star edges outside the move")
    cores = {i: state[i] - star for i in owners}

    def goal(parts: tuple) -> bool:
        return frozenset(p for p in parts if len(p) == 2) == target

    start = tuple(state[i] & star for i in owners)
    if goal(start):
        return []
    prev = {start: None}
    queue = deque([start])
    found = None
    while queue and found is None:
        parts = queue.popleft()
        for a, b in itertools.combinations(range(len(owners)), 2):
            for x in sorted(parts[a]):
                for y in sorted(parts[b]):
                    na = (parts[a] - {x}) | {y}
                    nb = (parts[b] - {y}) | {x}
                    nxt = list(parts)
                    nxt[a], nxt[b] = na, nb
                    nxt = tuple(nxt)
                    if nxt in prev:
                        continue
                    if not (frame.is_base(cores[owners[a]] | na) and frame.is_base(cores[owners[b]] | nb)):
                        continue
                    prev[nxt] = parts
                    if goal(nxt):
                        found = nxt
                        break
                    queue.append(nxt)
                if found is not None:
                    break
            if found is not None:
                break
    if found is None:
        return None
    chain = [found]
    while prev[chain[-1]] is not None:
        chain.append(prev[chain[-1]])
    chain.reverse()
    out = []
    for parts in chain[1:]:
        s = list(state)
        for i, p in zip(owners, parts):
            s[i] = cores[i] | p
        out.append(tuple(s))
    return out


def _pairs_in(mg: MatchingGraph, within: frozenset) -> list[frozenset]:
    return sorted((p for p in mg.pairs if p <= within), key=sorted)


@dataclass
class ValidMove:
    """One rearrangement of the matching graph realized by double swaps."""

    kind: str  # "pivot" (delete a pair, pair one end with an isolated vertex) or "repair" (re-pair two pairs)
    removed: tuple
    added: tuple
    result: State
    path: list


def _pivot(frame, state, star, pair, keep, iso, helpers) -> list[State] | None:
    """Replace ``pair`` by ``(keep, iso)``, trying each helper pair in turn."""
    new_pair = frozenset((keep, iso))
    for helper in [None] + list(helpers):
        involved = pair | {iso} | (helper or frozenset())
        target = [new_pair] + ([helper] if helper else [])
        moves = _realize(frame, state, star, involved, target)
        if moves is not None:
            return moves
    return None


def _repair(frame, state, star, p1, p2, new1, new2) -> list[State] | None:
    return _realize(frame, state, star, p1 | p2, [new1, new2])


def enumerate_valid_moves(g: MultiGraph, t: Sequence[Iterable[int]], star: Iterable[int],
                          ordered: bool = False) -> list[ValidMove]:
    """Every pivot and re-pairing move on the matching graph of ``t`` that double swaps realize."""
    state = _as_state(t)
    star = frozenset(star)
    frame = _Frame(g, len(state), ordered)
    mg = matching_graph(state, star)
    pairs = sorted(mg.pairs, key=sorted)
    out = []
    for p in pairs:
        others = [q for q in pairs if q != p]
        for iso in sorted(mg.isolated):
            for keep in sorted(p):
                moves = _pivot(frame, state, star, p, keep, iso, others)
                if moves is not None:
                    final = moves[-1] if moves else state
                    out.append(ValidMove("pivot", (tuple(sorted(p)),), (tuple(sorted((keep, iso))),), final, moves))
    for p1, p2 in itertools.combinations(pairs, 2):
        a, b = sorted(p1)
        for c, d in (sorted(p2), sorted(p2)[::-1]):
            new1, new2 = frozenset((a, c)), frozenset((b, d))
            moves = _repair(frame, state, star, p1, p2, new1, new2)
            if moves is not None:
                final = moves[-1] if moves else state
                out.append(ValidMove("repair", (tuple(sorted(p1)), tuple(sorted(p2))),
                                     (tuple(sorted(new1)), tuple(sorted(new2))), final, moves))
    return out


def statement_a_moves(g: MultiGraph, t: Sequence[Iterable[int]], star: Iterable[int],
                      p1: tuple[int, int], p2: tuple[int, int], e5: int, ordered: bool = False) -> dict[str, bool]:
    """Which of the six labeled moves are valid for pairs ``(e1,e2)``, ``(e3,e4)`` and isolated ``e5``."""
    state = _as_state(t)
    star = frozenset(star)
    frame = _Frame(g, len(state), ordered)
    e1, e2 = p1
    e3, e4 = p2
    P1, P2 = frozenset(p1), frozenset(p2)
    involved = P1 | P2 | {e5}

    def ok(targets):
        return _realize(frame, state, star, involved, targets) is not None

    return {
        "i": ok([frozenset((e1, e5)), P2]),
        "ii": ok([frozenset((e2, e5)), P2]),
        "iii": ok([P1, frozenset((e3, e5))]),
        "iv": ok([P1, frozenset((e4, e5))]),
        "v": _repair(frame, state, star, P1, P2, frozenset((e1, e3)), frozenset((e2, e4))) is not None,
        "vi": _repair(frame, state, star, P1, P2, frozenset((e1, e4)), frozenset((e2, e3))) is not None,
    }


# -- equalizing matching graphs ----------------------------------------------

class _NeedSearch(Exception):
    pass


class _Side:
    def __init__(self, state: State):
        self.state = state
        self.path = [state]

    def apply(self, moves: list[State]) -> None:
        self.path.extend(moves)
        if moves:
            self.state = moves[-1]


def _isolatable(frame, side, star, W) -> dict[int, list[State]]:
    mg = matching_graph(side.state, star)
    pairs = _pairs_in(mg, W)
    iso = sorted((mg.isolated & W))
    out: dict[int, list[State]] = {x: [] for x in iso}
    for p in pairs:
        helpers = [q for q in pairs if q != p]
        for keep in sorted(p):
            (freed,) = p - {keep}
            if freed in out:
                continue
            for z in iso:
                moves = _pivot(frame, side.state, star, p, keep, z, helpers)
                if moves is not None:
                    out[freed] = moves
                    break
    return out


def _pairable(frame, side, star, W, x) -> dict[int, list[State]]:
    mg = matching_graph(side.state, star)
    pairs = _pairs_in(mg, W)
    out = {}
    for p in pairs:
        helpers = [q for q in pairs if q != p]
        for y in sorted(p):
            if y in out:
                continue
            moves = _pivot(frame, side.state, star, p, y, x, helpers)
            if moves is not None:
                out[y] = moves
    return out


def _cycle_phase(frame, sb: _Side, sd: _Side, star, W) -> None:
    while True:
        hb = set(_pairs_in(matching_graph(sb.state, star), W))
        hd = set(_pairs_in(matching_graph(sd.state, star), W))
        common = hb & hd
        for p in common:
            W = W - p
        hb -= common
        hd -= common
        if not hb and not hd:
            return
        partner_b = {x: y for p in hb for x, y in (tuple(p), tuple(p)[::-1])}
        partner_d = {x: y for p in hd for x, y in (tuple(p), tuple(p)[::-1])}
        if set(partner_b) != set(partner_d):
            raise _NeedSearch("matchings do not span the same vertices in the cycle phase")
        e1 = min(partner_d)
        e2 = partner_d[e1]
        e3 = partner_b[e2]
        e4 = partner_d[e3]
        e5 = partner_b[e4]
        f = frozenset
        moves = _repair(frame, sd.state, star, f((e1, e2)), f((e3, e4)), f((e1, e4)), f((e2, e3)))
        if moves is not None:
            sd.apply(moves)
            continue
        moves = _repair(frame, sb.state, star, f((e2, e3)), f((e4, e5)), f((e2, e5)), f((e3, e4)))
        if moves is not None:
            sb.apply(moves)
            continue
        md = _repair(frame, sd.state, star, f((e1, e2)), f((e3, e4)), f((e1, e3)), f((e2, e4)))
        mb = _repair(frame, sb.state, star, f((e2, e3)), f((e4, e5)), f((e2, e4)), f((e3, e5)))
        if md is None or mb is None:
            raise _NeedSearch(f"no re-pairing valid on the cycle through {e1},{e2},{e3},{e4}")
        sd.apply(md)
        sb.apply(mb)


def _equalize_constructive(frame, sb: _Side, sd: _Side, star) -> None:
    W = frozenset(star)
    while True:
        mb, md = matching_graph(sb.state, star), matching_graph(sd.state, star)
        hb, hd = set(_pairs_in(mb, W)), set(_pairs_in(md, W))
        if hb == hd:
            return
        t = len(W) - 2 * len(hb)
        if t != len(W) - 2 * len(hd):
            raise ContractError("matching graphs have different numbers of isolated vertices")
        if t == 0:
            _cycle_phase(frame, sb, sd, star, W)
            return
        ib = _isolatable(frame, sb, star, W)
        id_ = _isolatable(frame, sd, star, W)
        common = sorted(set(ib) & set(id_))
        if not common:
            raise _NeedSearch("no vertex is isolatable on both sides")
        x = common[0]
        sb.apply(ib[x])
        sd.apply(id_[x])
        if t > 1:
            W = W - {x}
            continue
        nb = _pairable(frame, sb, star, W, x)
        nd = _pairable(frame, sd, star, W, x)
        shared = sorted(set(nb) & set(nd))
        if shared:
            y = shared[0]
            sb.apply(nb[y])
            sd.apply(nd[y])
            W = W - {x, y}
            continue
        _cycle_phase(frame, sb, sd, star, W - {x})
        return


def _equalize_search(frame, tb: State, td: State, star) -> tuple[list[State], list[State]]:
    """Exhaustive search over star-edge rearrangements on both sides."""

    def explore(start: State):
        first: dict[frozenset, State] = {}
        prev = {start: None}
        queue = deque([start])
        while queue:
            s = queue.popleft()
            first.setdefault(matching_graph(s, star).pairs, s)
            for i, j in itertools.combinations(range(len(s)), 2):
                for x in sorted(s[i] & star):
                    for y in sorted(s[j] & star):
                        n = frame.swap(s, i, j, x, y)
                        if n is not None and n not in prev:
                            prev[n] = s
                            queue.append(n)
        return first, prev

    def trace(prev, end):
        chain = [end]
        while prev[chain[-1]] is not None:
            chain.append(prev[chain[-1]])
        return chain[::-1]

    fb, pb = explore(tb)
    fd, pd = explore(td)
    common = sorted(set(fb) & set(fd), key=lambda ps: sorted(sorted(p) for p in ps))
    if not common:
        raise InvariantError("no common matching graph reachable from both balanced tuples")
    m = common[0]
    return trace(pb, fb[m]), trace(pd, fd[m])


def _equalize(frame: _Frame, tb: State, td: State, star: frozenset) -> tuple[list[State], list[State]]:
    sb, sd = _Side(tb), _Side(td)
    try:
        _equalize_constructive(frame, sb, sd, star)
    except _NeedSearch as exc:
        frame.stats["equalize_search"] += 1
        log.warning("matching equalization fell back to search: %s", exc)
        return _equalize_search(frame, tb, td, star)
    frame.stats["equalize_constructive"] += 1
    return sb.path, sd.path


def equalize_matchings(g: MultiGraph, t_b: Sequence[Iterable[int]], t_d: Sequence[Iterable[int]],
                       star: Iterable[int], ordered: bool = False, stats: Counter | None = None):
    """Two paths of star rearrangements whose endpoints have the same matching graph."""
    tb, td = _as_state(t_b), _as_state(t_d)
    star = frozenset(star)
    frame = _Frame(g, len(tb), ordered, stats)
    mb, md = matching_graph(tb, star), matching_graph(td, star)
    if len(mb.isolated) != len(md.isolated):
        raise ContractError("balanced tuples have different numbers of isolated star edges")
    pb, pd = _equalize(frame, tb, td, star)
    wrap = _pairpath if ordered else (lambda s: _kpath(s, canonical=False))
    return wrap(pb), wrap(pd)


# -- pulling back through the unsubdivided graph ------------------------------

def child_state(ctx: DerivedGraph, state: Sequence[frozenset]) -> State:
    """Image of a balanced tuple whose matching graph is the one ``ctx`` was built from."""
    p2c = ctx.parent_to_child()
    s4p = ctx.synthetic_for_pair()
    out = []
    for b in state:
        part = b & ctx.star
        core = frozenset(p2c[e] for e in b - ctx.star)
        if len(part) == 2:
            core |= {s4p[part]}
        elif len(part) != 1:
            raise ContractError("member meets the star in neither one nor two edges")
        out.append(core)
    return tuple(out)


def pull_back(ctx: DerivedGraph, child: Sequence[Iterable[int]], hints: Sequence[Iterable[int]] | None = None) -> State:
    """Bases of the parent graph from bases of the unsubdivided child.

    Members meeting the synthetic edges take the lexicographically first
    valid choice of pre-edges; the remaining star edges go one per member,
    copying the assignment in ``hints`` where the non-star parts agree.
    """
    child = _as_state(child)
    g = ctx.parent
    r = rank(g)
    synth = ctx.synthetic
    origin = ctx.edge_origin
    out: list[frozenset | None] = [None] * len(child)
    used: set[int] = set()
    free: list[int] = []
    for i, b in enumerate(child):
        z = b & synth
        core = frozenset(origin[c] for c in b - synth)
        if not z:
            free.append(i)
            continue
        pre = sorted(e for s in z for e in ctx.pre_edges[s])
        for choice in itertools.combinations(pre, len(z) + 1):
            cand = core | frozenset(choice)
            if is_base(g, cand, r):
                out[i] = cand
                used.update(choice)
                break
        else:
            raise InvariantError(f"no valid choice of pre-edges for child member {i}")
    leftovers = set(ctx.star) - used
    # several members can share a non-star part only when it is empty (rank 1),
    # so hints for one core are consumed in member order
    hint_edge: dict[frozenset, list[frozenset]] = {}
    if hints is not None:
        for h in hints:
            h = frozenset(h)
            hint_edge.setdefault(h - ctx.star, []).append(h & ctx.star)
    pending = []
    for i in free:
        core = frozenset(origin[c] for c in child[i])
        queue = hint_edge.get(core)
        want = queue.pop(0) if queue else None
        if want is not None and len(want) == 1 and want <= leftovers:
            out[i] = core | want
            leftovers -= want
        else:
            pending.append((i, core))
    rest = sorted(leftovers)
    if len(rest) != len(pending):
        raise InvariantError("star edges left over do not match the members needing one")
    for (i, core), e in zip(pending, rest):
        out[i] = core | {e}
    for i, b in enumerate(out):
        if not is_base(g, b, r):
            raise InvariantError(f"pull back of member {i} is not a base")
    return tuple(out)


def _patch_junction(frame: _Frame, ctx: DerivedGraph, x: State, y: State, cx: State, cy: State) -> list[State]:
    """States to insert between pulled-back ``x`` and ``y`` so the walk stays adjacent."""
    if frame.adjacent(x, y):
        return []
    star, es = ctx.star, ctx.e_star
    if frame.ordered:
        for a, b in ((x, y), (y, x)):
            q = next(i for i, m in enumerate(a) if es in m)
            o = 1 - q
            for c in sorted(a[o] & star):
                p = frame.swap(a, q, o, es, c)
                if p is not None and frame.adjacent(a, p) and frame.adjacent(p, b):
                    return [p]
        raise PathError("ordered junction could not be patched")
    shared = [m for m in set(cx) & set(cy)]
    if not shared:
        raise PathError("consecutive child tuples share no base")
    s = min(shared, key=base_key)
    ia, ib = cx.index(s), cy.index(s)

    def bring_estar(t: State, i: int) -> State:
        j = next(n for n, m in enumerate(t) if es in m)
        if j == i:
            return t
        (c,) = t[i] & star
        moved = frame.swap(t, j, i, es, c)
        if moved is None:
            raise PathError("leftover star edge cannot be swapped into the shared base")
        return moved

    p, q = bring_estar(x, ia), bring_estar(y, ib)
    inserted = []
    for s_ in (p, q):
        last = inserted[-1] if inserted else x
        if frame.key(s_) != frame.key(last):
            inserted.append(s_)
    if inserted and frame.key(inserted[-1]) == frame.key(y):
        inserted.pop()
    return inserted


def patch_path(frame_or_graph, ctx: DerivedGraph, pulled: list[State], child_path: list[State]) -> list[State]:
    frame = frame_or_graph
    out = [pulled[0]]
    for i in range(1, len(pulled)):
        out.extend(_patch_junction(frame, ctx, pulled[i - 1], pulled[i], child_path[i - 1], child_path[i]))
        out.append(pulled[i])
    return out


def _same_matching(frame: _Frame, m: State, n: State, v: int, star: frozenset) -> list[State]:
    pairs = matching_graph(m, star).pairs
    if pairs != matching_graph(n, star).pairs:
        raise InvariantError("tuples passed to the recursion have different matching graphs")
    ctx = unsubdivide(frame.g, v, [tuple(p) for p in pairs])
    if frame.key(m) == frame.key(n):
        return [m]
    cm, cn = child_state(ctx, m), child_state(ctx, n)
    sub = _Frame(ctx.child, frame.k, frame.ordered, frame.stats)
    child_path = _find(sub, cm, cn)
    if len(child_path) == 1:
        # same child tuple; endpoints differ only in how single star edges are dealt
        child_path = [cm, cn]
    # member order at the ends must match the tuples being pulled back
    child_path = [cm] + child_path[1:-1] + [cn]
    pulled = [pull_back(ctx, cm, hints=m)]
    pulled += [pull_back(ctx, c) for c in child_path[1:-1]]
    pulled.append(pull_back(ctx, cn, hints=n))
    if frame.key(pulled[0]) != frame.key(m) or frame.key(pulled[-1]) != frame.key(n):
        raise InvariantError("hinted pull back did not reproduce an endpoint")
    frame.stats["pull_backs"] += len(pulled)
    return patch_path(frame, ctx, pulled, child_path)


# -- components ---------------------------------------------------------------

def _by_components(frame: _Frame, src: State, dst: State) -> list[State]:
    g = frame.g
    comps = split_components(g)
    k = frame.k
    rows = [[comp.from_parent(b) for comp in comps] for b in src]
    target = [[comp.from_parent(b) for comp in comps] for b in dst]

    def combined() -> State:
        return tuple(frozenset().union(*(comp.to_parent(rows[i][c]) for c, comp in enumerate(comps)))
                     for i in range(k))

    path = [combined()]
    for c, comp in enumerate(comps):
        sub = _Frame(comp.graph, k, frame.ordered, frame.stats)
        sub_src = tuple(rows[i][c] for i in range(k))
        sub_dst = tuple(target[i][c] for i in range(k))
        if frame.ordered:
            steps = _find(sub, sub_src, sub_dst)
            for s in steps[1:]:
                for i in range(k):
                    rows[i][c] = s[i]
                path.append(combined())
            continue
        steps = _find(sub, sub_src, sub_dst)
        for s in steps[1:]:
            current = [rows[i][c] for i in range(k)]
            shared = [m for m in current if m in set(s)]
            if not shared:
                raise PathError("component step shares no base")
            keep = min(shared, key=base_key)
            fresh = sorted((m for m in s if m != keep), key=base_key)
            for i in range(k):
                if rows[i][c] == keep:
                    continue
                rows[i][c] = fresh.pop(0)
            path.append(combined())
    if not frame.ordered:
        # re-pair columns so rows match the target rows; each transposition
        # leaves at least one row untouched when k >= 3
        anchor = {target[i][0]: i for i in range(k)}
        for c in range(1, len(comps)):
            for i in range(k):
                want = target[anchor[rows[i][0]]][c]
                if rows[i][c] == want:
                    continue
                j = next(n for n in range(k) if rows[n][c] == want)
                rows[i][c], rows[j][c] = rows[j][c], rows[i][c]
                path.append(combined())
    return path


# -- the recursion ---------------------------------------------------------------

def _find(frame: _Frame, src: State, dst: State) -> list[State]:
    g = frame.g
    if frame.key(src) == frame.key(dst):
        return [src]
    comps = split_components(g)
    isolated = component_count(g) - len(comps)
    if len(comps) != 1 or isolated:
        path = _by_components(frame, src, dst)
    elif frame.r == 1:
        if not frame.ordered:
            raise InvariantError("a rank-1 k-base graph has a single vertex")
        path = [src, dst]
    else:
        v = min_degree_vertex(g)
        star = cocircuit_star(g, v)
        if len(star) > 2 * frame.k - 1:
            raise InvariantError(f"minimum degree {len(star)} exceeds 2k - 1")
        pb = _balance(frame, src, v, star)
        pd = _balance(frame, dst, v, star)
        eb, ed = _equalize(frame, pb[-1], pd[-1], star)
        mid = _same_matching(frame, eb[-1], ed[-1], v, star)
        path = pb + eb[1:] + mid[1:] + ed[::-1][1:] + pd[::-1][1:]
    path = _erase_loops(frame, path)
    _verify(frame, path, src, dst)
    return path


def _validated(frame: _Frame, t, name) -> State:
    state = _as_state(t)
    if not frame.valid(state):
        raise ContractError(f"{name} is not a vertex of the exchange graph")
    return state


def find_path_k(g: MultiGraph, source, target, k: int | None = None, stats: Counter | None = None) -> KPath:
    """A verified path between two vertices of the k-base graph (``k >= 3``)."""
    k = len(source) if k is None else k
    if k < 3:
        raise ContractError("the k-base graph path algorithm needs k >= 3")
    if g.edge_count != k * rank(g):
        raise ContractError(f"graph has {g.edge_count} edges, expected k*rank = {k * rank(g)}")
    frame = _Frame(g, k, ordered=False, stats=stats)
    src = _validated(frame, source, "source")
    dst = _validated(frame, target, "target")
    path = _find(frame, src, dst)
    return _kpath(path)


def find_path_single(g: MultiGraph, source, target, stats: Counter | None = None) -> PairPath:
    """A verified path between two ordered pairs in the single exchange graph."""
    if g.edge_count != 2 * rank(g):
        raise ContractError(f"graph has {g.edge_count} edges, expected 2*rank = {2 * rank(g)}")
    frame = _Frame(g, 2, ordered=True, stats=stats)
    src = _validated(frame, source, "source")
    dst = _validated(frame, target, "target")
    return _pairpath(_find(frame, src, dst))


def verify_k_path(g: MultiGraph, path: KPath | Sequence, k: int, source=None, target=None) -> bool:
    """Independent re-check: every tuple valid, every junction shares a base."""
    tuples = path.tuples if isinstance(path, KPath) else path
    if not tuples:
        return False
    r = rank(g)
    for t in tuples:
        if not is_k_tuple(g, t, k, r):
            return False
    for a, b in zip(tuples, tuples[1:]):
        sa, sb = {frozenset(x) for x in a}, {frozenset(x) for x in b}
        if sa == sb or not (sa & sb):
            return False
    if source is not None and tuple_key(tuples[0]) != tuple_key(source):
        return False
    if target is not None and tuple_key(tuples[-1]) != tuple_key(target):
        return False
    return True


def verify_pair_path(g: MultiGraph, path: PairPath | Sequence, source=None, target=None) -> bool:
    pairs = path.pairs if isinstance(path, PairPath) else path
    if not pairs:
        return False
    r = rank(g)
    for p in pairs:
        if len(p) != 2 or not is_k_tuple(g, p, 2, r):
            return False
    for a, b in zip(pairs, pairs[1:]):
        if len(frozenset(a[0]) & frozenset(b[0])) != r - 1:
            return False
    key = lambda p: (base_key(p[0]), base_key(p[1]))  # noqa: E731
    if source is not None and key(pairs[0]) != key(source):
        return False
    if target is not None and key(pairs[-1]) != key(target):
        return False
    return True
