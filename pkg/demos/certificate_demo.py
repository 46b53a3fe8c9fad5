"""Write a degree-3 binomial of K4 as a sum of double-swap quadrics.

Edges of K4 are numbered 0..5 in the order 12, 13, 14, 23, 24, 34. The two
sides below share no spanning tree but use every edge equally often, so
the binomial lies in the toric ideal of the cycle matroid. The decomposer
returns signed, cofactor-weighted quadrics whose sum is exactly the target,
and the verifier re-checks every term from scratch. The certificate also
survives a JSON round trip.

Run: python3 demos/certificate_demo.py
"""

import json

from forestswap import BaseBinomial, MultiGraph, decompose_to_quadrics, theta, verify_certificate
from forestswap.ideal import certificate_from_json, certificate_to_json
from forestswap.matroid import format_base, format_bases

g = MultiGraph(4, ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)))
lhs = [{0, 1, 2}, {1, 4, 5}, {2, 3, 5}]
rhs = [{0, 2, 5}, {1, 2, 4}, {1, 3, 5}]
b = BaseBinomial(tuple(map(frozenset, lhs)), tuple(map(frozenset, rhs)))
print(f"target: y[{format_bases(b.lhs)}] - y[{format_bases(b.rhs)}]")
print(f"edge multiplicities match: {theta(g, b.lhs)} == {theta(g, b.rhs)}")

cert = decompose_to_quadrics(g, b)
print(f"\n{len(cert)} quadric terms:")
for t in cert.terms:
    q = t.quadric
    cof = " ".join(f"y[{format_base(c)}]" for c in t.cofactor) or "1"
    print(f"  {'+' if t.sign > 0 else '-'} {cof} * (y[{format_bases(q.lhs)}] - y[{format_bases(q.rhs)}])"
          f"   swap {q.out} <-> {q.into}")

print(f"\nverified: {verify_certificate(g, b, cert).ok}")
again = certificate_from_json(json.loads(json.dumps(certificate_to_json(cert))))
print(f"verified after JSON round trip: {verify_certificate(g, b, again).ok}")
