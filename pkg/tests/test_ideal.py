import itertools
import json
import random
from collections import Counter

import pytest
from hypothesis import given, strategies as st

from forestswap.errors import ContractError
from forestswap.exchange import build_multiset_fiber_graph, multiset_key
from forestswap.graph import MultiGraph
from forestswap.ideal import (
    BaseBinomial,
    CertificateTerm,
    Quadric,
    QuadricCertificate,
    certificate_from_json,
    certificate_to_json,
    decompose_step,
    decompose_to_quadrics,
    in_ideal,
    monomial_key,
    theta,
    verify_certificate,
)
from forestswap.matroid import enumerate_bases
from forestswap.sweep import full_support_exponents, sparse_graphs

from _oracles import bf_components, bf_fiber, differ_by_double_swap
from strategies import multigraphs

f = frozenset
SERIES = MultiGraph(3, ((0, 1), (0, 1), (1, 2), (1, 2)))  # two doubled edges in series


def formal(terms):
    total = Counter()
    for sign, lhs, rhs in terms:
        total[monomial_key(lhs)] += sign
        total[monomial_key(rhs)] -= sign
    return +Counter({k: v for k, v in total.items() if v}) | -Counter({k: v for k, v in total.items() if v})


def as_counter(b):
    return formal([(1, b.lhs, b.rhs)])


def test_theta_examples(k4):
    assert theta(k4, [f({0, 1, 2})]) == (1, 1, 1, 0, 0, 0)
    assert theta(k4, []) == (0,) * 6
    assert theta(k4, [f({0, 3, 5}), f({1, 2, 4})]) == (1,) * 6


P1, P2 = f({0, 3, 5}), f({1, 2, 4})  # disjoint Hamiltonian paths of K4


def test_in_ideal(k4):
    star, path = P1, P2
    assert in_ideal(k4, BaseBinomial((star, path), (path, star)))
    a, b = f({0, 2, 3}), f({1, 4, 5})
    assert in_ideal(k4, BaseBinomial((star, path), (a, b)))
    assert not in_ideal(k4, BaseBinomial((star, path), (a, star)))
    with pytest.raises(ContractError, match="degree"):
        in_ideal(k4, BaseBinomial((star,), (a, b)))


def test_not_in_ideal_message(k4):
    b = BaseBinomial((P1, P2), (P1, f({0, 1, 2})))
    with pytest.raises(ContractError, match=r"binomial not in the ideal \(exponent mismatch at edge 0\)"):
        decompose_to_quadrics(k4, b)


def test_non_base_rejected(k4):
    with pytest.raises(ContractError, match="not a base"):
        decompose_to_quadrics(k4, BaseBinomial((f({0, 1, 3}),), (f({0, 1, 3}),)))


def test_decompose_step_zero(c3):
    lhs = (f({0, 1}), f({0, 2}), f({1, 2}))
    assert decompose_step(c3, BaseBinomial(lhs, lhs[::-1])) == []
    with pytest.raises(ContractError):
        decompose_step(c3, BaseBinomial(lhs[:2], lhs[:2]))


def test_decompose_step_series():
    lhs = (f({0, 2}), f({0, 2}), f({1, 3}))
    rhs = (f({0, 2}), f({0, 3}), f({1, 2}))
    assert bf_fiber(3, SERIES.edges, theta(SERIES, lhs), 3) >= {monomial_key(lhs), monomial_key(rhs)}
    b = BaseBinomial(lhs, rhs)
    steps = decompose_step(SERIES, b)
    assert steps
    expanded = formal((1, (x,) + sub.lhs, (x,) + sub.rhs) for x, sub in steps)
    assert expanded == as_counter(b)
    for x, sub in steps:
        assert sub.degree == 2 and in_ideal(SERIES, sub)


def test_one_swap_quadric_gives_one_term(k4):
    b = BaseBinomial((P1, P2), ((P1 - {3}) | {1}, (P2 - {1}) | {3}))
    cert = decompose_to_quadrics(k4, b)
    assert len(cert) == 1
    assert cert.terms[0].cofactor == ()
    assert verify_certificate(k4, b, cert)


def test_zero_binomial_empty_certificate(k4):
    b = BaseBinomial((P1, P2), (P2, P1))
    assert len(decompose_to_quadrics(k4, b)) == 0
    assert verify_certificate(k4, b, QuadricCertificate(b, []))


def test_sign_flip_breaks_verification():
    lhs = (f({0, 2}), f({0, 2}), f({1, 3}))
    rhs = (f({0, 2}), f({0, 3}), f({1, 2}))
    b = BaseBinomial(lhs, rhs)
    cert = decompose_to_quadrics(SERIES, b)
    assert verify_certificate(SERIES, b, cert)
    first = cert.terms[0]
    flipped = QuadricCertificate(b, [CertificateTerm(-first.sign, first.cofactor, first.quadric)] + cert.terms[1:])
    verdict = verify_certificate(SERIES, b, flipped)
    assert not verdict
    assert "coefficient" in verdict.reason


def test_verification_rejects_fake_swap(k4):
    other = (f({0, 2, 3}), f({1, 4, 5}))
    b = BaseBinomial((P1, P2), other)
    assert verify_certificate(k4, b, QuadricCertificate(b, [CertificateTerm(1, (), Quadric((P1, P2), other, 5, 2))]))
    # same sides, wrong swap label
    bogus = Quadric((P1, P2), other, 3, 1)
    verdict = verify_certificate(k4, b, QuadricCertificate(b, [CertificateTerm(1, (), bogus)]))
    assert not verdict


def test_degree_three_round_trip_and_json():
    lhs = (f({0, 2}), f({0, 2}), f({1, 3}))
    rhs = (f({0, 2}), f({0, 3}), f({1, 2}))
    b = BaseBinomial(lhs, rhs)
    cert = decompose_to_quadrics(SERIES, b)
    data = json.loads(json.dumps(certificate_to_json(cert)))
    assert data["binomial"]["lhs"] == ["0,2", "0,2", "1,3"]
    back = certificate_from_json(data)
    assert certificate_to_json(back) == data
    assert verify_certificate(SERIES, back.binomial, back)


def test_malformed_certificate_json():
    with pytest.raises(ContractError, match="malformed"):
        certificate_from_json({"binomial": {"lhs": ["0"]}})


def _fiber_cases(max_edges, k):
    for g in sparse_graphs(max_edges, k):
        bases = list(enumerate_bases(g))
        for s in full_support_exponents(g, k, bases):
            yield g, s, build_multiset_fiber_graph(g, s, k, bases)


@pytest.mark.parametrize("k, max_edges", [(2, 6), (3, 5)])
def test_every_binomial_has_a_certificate(k, max_edges):
    rng = random.Random(k)
    for g, s, x in _fiber_cases(max_edges, k):
        assert {multiset_key(v) for v in x.vertices} == bf_fiber(g.vertex_count, g.edges, s, k)
        pairs = list(itertools.combinations(x.vertices, 2))
        for lhs, rhs in rng.sample(pairs, min(len(pairs), 6)):
            b = BaseBinomial(lhs, rhs)
            cert = decompose_to_quadrics(g, b)
            assert verify_certificate(g, b, cert)
            for term in cert.terms:
                q = term.quadric
                assert differ_by_double_swap(q.lhs, q.rhs)
                # every term lies in the same fiber
                assert theta(g, term.cofactor + q.lhs) == s


@pytest.mark.parametrize("k, max_edges", [(2, 6), (3, 5)])
def test_certificates_imply_fiber_connectivity(k, max_edges):
    """Reverse direction: certificate terms are fiber edges whose closure joins both sides."""
    for g, s, x in _fiber_cases(max_edges, k):
        if len(x.vertices) < 2:
            continue
        base = x.vertices[0]
        edges = set()
        for other in x.vertices[1:]:
            cert = decompose_to_quadrics(g, BaseBinomial(base, other))
            for t in cert.terms:
                a = monomial_key(t.cofactor + t.quadric.lhs)
                c = monomial_key(t.cofactor + t.quadric.rhs)
                edges.add((a, c))
                edges.add((c, a))
        keys = [multiset_key(v) for v in x.vertices]
        assert bf_components(keys, lambda a, c: (a, c) in edges) == 1
        assert x.component_count() == 1


@given(multigraphs(max_vertices=4, max_edges=6, loops=False), st.data())
def test_random_round_trip(g, data):
    bases = list(enumerate_bases(g))
    k = data.draw(st.integers(2, 3))
    lhs = data.draw(st.lists(st.sampled_from(bases), min_size=k, max_size=k))
    fiber = sorted(bf_fiber(g.vertex_count, g.edges, theta(g, lhs), k))
    rhs = data.draw(st.sampled_from(fiber))
    b = BaseBinomial(tuple(lhs), tuple(f(x) for x in rhs))
    cert = decompose_to_quadrics(g, b)
    assert verify_certificate(g, b, cert)


def _chain(cert):
    from forestswap.ideal import _ends
    return [_ends(t) for t in cert.terms]


def test_certificate_walk_has_no_repeated_monomial(k4):
    lhs = tuple(map(frozenset, ({0, 1, 2}, {1, 4, 5}, {2, 3, 5})))
    rhs = tuple(map(frozenset, ({0, 2, 5}, {1, 2, 4}, {1, 3, 5})))
    b = BaseBinomial(lhs, rhs)
    cert = decompose_to_quadrics(k4, b)
    assert verify_certificate(k4, b, cert)
    chain = _chain(cert)
    visited = [chain[0][0]] + [z for _, z in chain]
    assert len(set(visited)) == len(visited)
    # two swaps suffice here, and a redundant cycle used to pad it to six terms
    assert len(cert) == 2


def test_erase_cycles_trims_back_and_forth_but_not_gapped_chains(k4):
    from forestswap.ideal import _erase_cycles
    lhs = tuple(map(frozenset, ({0, 1, 2}, {1, 4, 5}, {2, 3, 5})))
    rhs = tuple(map(frozenset, ({0, 2, 5}, {1, 2, 4}, {1, 3, 5})))
    terms = decompose_to_quadrics(k4, BaseBinomial(lhs, rhs)).terms
    gapped = [terms[1], terms[0]]
    assert _erase_cycles(gapped) == gapped
    back = CertificateTerm(-terms[-1].sign, terms[-1].cofactor, terms[-1].quadric)
    assert _erase_cycles(terms + [back, terms[-1]]) == terms
    assert _erase_cycles([terms[0], CertificateTerm(-terms[0].sign, terms[0].cofactor, terms[0].quadric)]) == []
