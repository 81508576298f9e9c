from fractions import Fraction as F

import pytest

from _instances import cycle, k33, k4, octahedron, prism
from twoec.certificate import Certificate
from twoec.decomp import ConvexCombination
from twoec.graphs import GraphError, edge_connectivity, member
from twoec.uniform import cover_7_8
from twoec.verify import (
    all_members,
    brute_force_dominates,
    bridgeless_spanning,
    enumerate_members,
    gen_random_cubic_3ec,
    satisfies,
    two_vertex_connected,
    verify_certificate,
)


def test_k4_seven_eighths_dominates():
    assert brute_force_dominates(k4(), [F(7, 8)] * 6, "2ec-subgraph").dominates


def test_k4_two_thirds_is_decided_by_the_oracle():
    # three Hamiltonian 4-cycles at 1/3 each hit 2/3 exactly
    res = brute_force_dominates(k4(), [F(2, 3)] * 6, "2ec-subgraph")
    assert res.dominates
    assert sum(lam for lam, _ in res.combination) == 1
    agg = [sum(lam * col[i] for lam, col in res.combination) for i in range(6)]
    assert all(a <= F(2, 3) for a in agg)


def test_k4_below_two_thirds_fails_with_a_farkas_vector():
    y = [F(13, 20)] * 6
    res = brute_force_dominates(k4(), y, "2ec-subgraph")
    assert not res.dominates
    w = res.farkas
    wy = sum(a * b for a, b in zip(w, y))
    for mem in all_members(k4(), "2ec-subgraph"):
        assert sum(w[i] * k for i, k in mem.items()) > wy


def test_four_cycle_at_one_dominates():
    assert brute_force_dominates(cycle(4), [F(1)] * 4, "2ec-subgraph").dominates
    assert not brute_force_dominates(cycle(4), [F(3, 4)] * 4, "2ec-subgraph").dominates


def test_member_counts():
    # K4: one member with all six edges, six with five, three Hamiltonian cycles
    assert len(list(enumerate_members(k4(), "2ec-subgraph"))) == 10
    assert len(list(enumerate_members(cycle(4), "2ec-subgraph"))) == 1


def test_oracle_size_cap():
    from twoec.verify import OracleError

    with pytest.raises(OracleError):
        brute_force_dominates(gen_random_cubic_3ec(12, 0), [F(1)] * 18, "2ec-subgraph")


def test_tampered_multiplier_fails():
    cert = cover_7_8(k4())
    (lam, mem), *rest = cert.combination.terms
    bad = ConvexCombination(cert.host, [(lam + F(1, 1000), mem)] + rest)
    v = verify_certificate(Certificate(cert.host, cert.target, cert.relation, cert.predicate, bad))
    assert not v and "sum" in v.failure


def test_injected_bridge_fails():
    g = k4()
    comb = ConvexCombination(g, [(F(1), member([0, 1, 2]))])
    v = verify_certificate(Certificate(g, [F(1)] * 6, "dominates", "2ec-subgraph", comb))
    assert not v


def test_aggregate_above_target_fails():
    cert = cover_7_8(prism())
    v = verify_certificate(Certificate(cert.host, [F(3, 4)] * 9, cert.relation, cert.predicate, cert.combination))
    assert not v


def test_predicates():
    g = k4()
    assert satisfies(g, {i: 1 for i in range(6)}, "2vc-min-deg-3")
    # removing a perfect matching of K4 leaves degree two
    assert not satisfies(g, {0: 1, 5: 1}, "matching-2vc-complement")
    h = octahedron()
    assert satisfies(h, {0: 1}, "matching-2vc-complement")
    assert not satisfies(h, {0: 1, 1: 1}, "matching-2vc-complement")
    assert bridgeless_spanning(g, {0: 2, 1: 2, 2: 2})
    assert not two_vertex_connected(g, {0: 2, 1: 2, 2: 2})


def test_random_cubic_generator():
    small = gen_random_cubic_3ec(4, 0)
    assert small.is_simple() and {frozenset(small.ends(i)) for i in range(small.m)} == {frozenset(k4().ends(i)) for i in range(6)}
    g = gen_random_cubic_3ec(10, 7)
    assert g.is_cubic() and g.is_simple() and edge_connectivity(g) == 3
    assert gen_random_cubic_3ec(10, 7) == g
    with pytest.raises(GraphError):
        gen_random_cubic_3ec(9, 0)
    with pytest.raises(GraphError):
        gen_random_cubic_3ec(2, 0)


def test_k33_thirteen_fifteenths_matches_oracle():
    assert brute_force_dominates(k33(), [F(13, 15)] * 9, "2ec-subgraph", max_edges=9).dominates
