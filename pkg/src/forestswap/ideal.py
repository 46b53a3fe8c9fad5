"""Binomials in base variables and their reduction to double-swap quadrics.

A monomial in the variables ``y_B`` is a multiset of bases, stored as a
sorted tuple of frozensets. Coefficients never leave ``{+1, -1}``, so a
certificate is checked by exact multiset cancellation.

Degree ``k >= 3`` binomials are reduced one degree at a time: both sides
are lifted to disjoint tuples of a parallel extension, joined by a path in
its k-base graph, and each step of the path shares a base that factors out.
Degree 2 binomials follow a path in the single exchange graph of their
extension, one double swap per step.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable

from .errors import ContractError
from .exchange import double_swap_candidates
from .graph import MultiGraph
from .matroid import base_key, format_base, is_base, lift_tuple, parallel_extension, parse_base, rank
from .pathfinder import find_path_k, find_path_single


def monomial(bases: Iterable[Iterable[int]]) -> tuple[frozenset, ...]:
    return tuple(sorted((frozenset(b) for b in bases), key=base_key))


def monomial_key(m: Iterable[Iterable[int]]) -> tuple:
    return tuple(sorted(base_key(b) for b in m))


@dataclass(frozen=True)
class BaseBinomial:
    lhs: tuple
    rhs: tuple

    def __post_init__(self):
        object.__setattr__(self, "lhs", monomial(self.lhs))
        object.__setattr__(self, "rhs", monomial(self.rhs))

    @property
    def degree(self) -> int:
        return len(self.lhs)

    def is_zero(self) -> bool:
        return monomial_key(self.lhs) == monomial_key(self.rhs)


@dataclass(frozen=True)
class Quadric:
    """``y_B1 y_B2 - y_D1 y_D2`` with ``D1 = B1 - out + into`` and ``D2 = B2 - into + out``."""

    lhs: tuple
    rhs: tuple
    out: int
    into: int


@dataclass(frozen=True)
class CertificateTerm:
    sign: int
    cofactor: tuple
    quadric: Quadric


@dataclass
class QuadricCertificate:
    binomial: BaseBinomial
    terms: list = field(default_factory=list)

    def __len__(self):
        return len(self.terms)


@dataclass(frozen=True)
class Verdict:
    ok: bool
    reason: str = ""

    def __bool__(self):
        return self.ok


def theta(g: MultiGraph, m: Iterable[Iterable[int]]) -> tuple[int, ...]:
    """Exponent vector of the image monomial: how often each edge occurs."""
    counts = [0] * g.edge_count
    for b in m:
        for e in b:
            counts[e] += 1
    return tuple(counts)


def _check_bases(g: MultiGraph, m, r) -> None:
    for b in m:
        if not is_base(g, b, r):
            raise ContractError(f"{format_base(b)} is not a base")


def in_ideal(g: MultiGraph, b: BaseBinomial) -> bool:
    if len(b.lhs) != len(b.rhs):
        raise ContractError("the ideal is homogeneous; sides must have equal degree")
    return theta(g, b.lhs) == theta(g, b.rhs)


def _mismatch(g: MultiGraph, b: BaseBinomial) -> str:
    tl, tr = theta(g, b.lhs), theta(g, b.rhs)
    e = next(i for i, (x, y) in enumerate(zip(tl, tr)) if x != y)
    return f"binomial not in the ideal (exponent mismatch at edge {e})"


def _require(g: MultiGraph, b: BaseBinomial, min_degree: int = 0) -> None:
    r = rank(g)
    _check_bases(g, b.lhs, r)
    _check_bases(g, b.rhs, r)
    if not in_ideal(g, b):
        raise ContractError(_mismatch(g, b))
    if b.degree < min_degree:
        raise ContractError(f"degree {b.degree} < {min_degree}")


def decompose_step(g: MultiGraph, b: BaseBinomial, stats: Counter | None = None) -> list[tuple[frozenset, BaseBinomial]]:
    """``b`` as a sum of ``y_X * b_i`` with every ``b_i`` of degree one less.

    Terms whose binomial vanishes are dropped, so equal sides give ``[]``.
    """
    _require(g, b, 3)
    if b.is_zero():
        return []
    k = b.degree
    ext = parallel_extension(g, theta(g, b.lhs))
    u_b = lift_tuple(ext, b.lhs)
    u_d = lift_tuple(ext, b.rhs)
    path = find_path_k(ext.child, u_b, u_d, k, stats=stats)
    out = []
    for prev, cur, shared in zip(path.tuples, path.tuples[1:], path.witnesses):
        x = ext.project(shared)
        left = [ext.project(t) for t in prev]
        right = [ext.project(t) for t in cur]
        left.remove(x)
        right.remove(x)
        term = BaseBinomial(tuple(left), tuple(right))
        if not term.is_zero():
            out.append((x, term))
    return out


def _direct_swap(g: MultiGraph, lhs, rhs, r) -> Quadric | None:
    target = monomial_key(rhs)
    for B1, B2 in ((lhs[0], lhs[1]), (lhs[1], lhs[0])):
        for out in sorted(B1 - B2):
            for into in sorted(B2 - B1):
                D1 = (B1 - {out}) | {into}
                D2 = (B2 - {into}) | {out}
                if monomial_key((D1, D2)) == target and is_base(g, D1, r) and is_base(g, D2, r):
                    return Quadric((B1, B2), (D1, D2), out, into)
    return None


def _quadrics(g: MultiGraph, b: BaseBinomial, stats: Counter | None) -> list[Quadric]:
    r = rank(g)
    if b.is_zero():
        return []
    direct = _direct_swap(g, b.lhs, b.rhs, r)
    if direct is not None:
        return [direct]
    ext = parallel_extension(g, theta(g, b.lhs))
    src = tuple(lift_tuple(ext, b.lhs))
    dst = tuple(lift_tuple(ext, b.rhs))
    path = find_path_single(ext.child, src, dst, stats=stats)
    out = []
    for (p1, p2), (q1, q2) in zip(path.pairs, path.pairs[1:]):
        (c_out,) = p1 - q1
        (c_in,) = q1 - p1
        o, i = ext.alpha[c_out], ext.alpha[c_in]
        if o == i:
            continue
        quad = Quadric((ext.project(p1), ext.project(p2)), (ext.project(q1), ext.project(q2)), o, i)
        if monomial_key(quad.lhs) == monomial_key(quad.rhs):
            continue
        out.append(quad)
    return out


def _ends(term: CertificateTerm) -> tuple[tuple, tuple]:
    q = term.quadric
    a = monomial_key(term.cofactor + tuple(q.lhs))
    z = monomial_key(term.cofactor + tuple(q.rhs))
    return (a, z) if term.sign > 0 else (z, a)


def _erase_cycles(terms: list[CertificateTerm]) -> list[CertificateTerm]:
    """Drop closed sub-walks from a chain of terms, each leading one monomial to the next.

    Projecting a lifted path can revisit a monomial; the terms between the
    two visits telescope to zero. Chains that are not contiguous come back
    unchanged.
    """
    ends = [_ends(t) for t in terms]
    if any(ends[i][1] != ends[i + 1][0] for i in range(len(ends) - 1)):
        return terms
    kept: list[CertificateTerm] = []
    seen: dict[tuple, int] = {}
    if ends:
        seen[ends[0][0]] = 0
    for term, (_, z) in zip(terms, ends):
        kept.append(term)
        if z in seen:
            del kept[seen[z]:]
            seen = {m: i for m, i in seen.items() if i <= seen[z]}
        else:
            seen[z] = len(kept)
    return kept


def decompose_to_quadrics(g: MultiGraph, b: BaseBinomial, stats: Counter | None = None) -> QuadricCertificate:
    """A certificate writing ``b`` as a sum of monomial multiples of double-swap quadrics."""
    _require(g, b)
    terms: list[CertificateTerm] = []

    def recurse(binom: BaseBinomial, cofactor: tuple) -> None:
        if binom.is_zero():
            return
        if binom.degree == 2:
            for q in _quadrics(g, binom, stats):
                terms.append(CertificateTerm(1, monomial(cofactor), q))
            return
        for x, sub in decompose_step(g, binom, stats):
            recurse(sub, cofactor + (x,))

    if b.degree >= 2:
        recurse(b, ())
    elif not b.is_zero():
        raise ContractError("degree-1 binomials in the ideal are zero")
    return QuadricCertificate(b, _erase_cycles(terms))


def verify_certificate(g: MultiGraph, b: BaseBinomial, cert: QuadricCertificate) -> Verdict:
    """Expand every term, cancel formally and compare with ``lhs - rhs``."""
    r = rank(g)
    total: Counter = Counter()
    for n, term in enumerate(cert.terms):
        q = term.quadric
        if term.sign not in (1, -1):
            return Verdict(False, f"term {n}: sign {term.sign} is not +1 or -1")
        if len(term.cofactor) != b.degree - 2:
            return Verdict(False, f"term {n}: cofactor has degree {len(term.cofactor)}, expected {b.degree - 2}")
        for base in tuple(term.cofactor) + tuple(q.lhs) + tuple(q.rhs):
            if not is_base(g, base, r):
                return Verdict(False, f"term {n}: {format_base(base)} is not a base")
        B1, B2 = (frozenset(x) for x in q.lhs)
        D1, D2 = (frozenset(x) for x in q.rhs)
        if q.out not in B1 or q.into not in B2 or q.into in B1 or q.out in B2:
            return Verdict(False, f"term {n}: swap {q.out}->{q.into} does not fit the quadric")
        if q.into not in double_swap_candidates(g, B1, B2, q.out, r):
            return Verdict(False, f"term {n}: {q.out} and {q.into} do not double swap")
        if D1 != (B1 - {q.out}) | {q.into} or D2 != (B2 - {q.into}) | {q.out}:
            return Verdict(False, f"term {n}: right side is not the swap of the left side")
        cof = tuple(term.cofactor)
        total[monomial_key(cof + (B1, B2))] += term.sign
        total[monomial_key(cof + (D1, D2))] -= term.sign
    expected: Counter = Counter()
    expected[monomial_key(b.lhs)] += 1
    expected[monomial_key(b.rhs)] -= 1
    for key in set(total) | set(expected):
        if total[key] != expected[key]:
            shown = ";".join(",".join(map(str, base)) for base in key)
            return Verdict(False, f"coefficient of {shown} is {total[key]}, expected {expected[key]}")
    return Verdict(True)


# -- JSON forms --------------------------------------------------------------

def _bases_out(m) -> list[str]:
    return [format_base(x) for x in m]


def binomial_to_json(b: BaseBinomial) -> dict:
    return {"lhs": _bases_out(b.lhs), "rhs": _bases_out(b.rhs)}


def certificate_to_json(cert: QuadricCertificate) -> dict:
    return {
        "binomial": binomial_to_json(cert.binomial),
        "terms": [
            {
                "sign": t.sign,
                "cofactor": _bases_out(t.cofactor),
                "quadric": {
                    "lhs": _bases_out(t.quadric.lhs),
                    "rhs": _bases_out(t.quadric.rhs),
                    "swap": {"out": t.quadric.out, "in": t.quadric.into},
                },
            }
            for t in cert.terms
        ],
    }


def certificate_from_json(data: dict) -> QuadricCertificate:
    try:
        binom = BaseBinomial(tuple(map(parse_base, data["binomial"]["lhs"])),
                             tuple(map(parse_base, data["binomial"]["rhs"])))
        terms = []
        for t in data["terms"]:
            q = t["quadric"]
            quad = Quadric(tuple(map(parse_base, q["lhs"])), tuple(map(parse_base, q["rhs"])),
                           int(q["swap"]["out"]), int(q["swap"]["in"]))
            if len(quad.lhs) != 2 or len(quad.rhs) != 2:
                raise ValueError("quadric sides must hold two bases")
            terms.append(CertificateTerm(int(t["sign"]), monomial(map(parse_base, t["cofactor"])), quad))
    except (KeyError, TypeError, ValueError) as exc:
        raise ContractError(f"malformed certificate: {exc}") from None
    return QuadricCertificate(binom, terms)
