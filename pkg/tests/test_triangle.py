import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from _instances import k4, prism
from twoec.decomp import ConvexCombination, DecompositionError
from twoec.graphs import member
from twoec.triangle import (
    Z_HALF,
    Z_ONE,
    Z_STAR,
    TrianglePointError,
    a2_target,
    combo_a1,
    combo_a2,
    join_across_two_cut,
    raise_double,
    star_multiplicity_ok,
    triangle_certificate,
    triangulate,
    validate_triangle,
    z_vector,
)
from twoec.verify import cost_ratio, verify_certificate

TRI_K4 = triangulate(k4())
TRI_CHAIN = triangulate(join_across_two_cut(k4(), 0, k4(), 0))


def test_z_constants():
    assert Z_ONE == F(6, 5) + F(1, 120)
    assert Z_HALF == Z_ONE / 2 and Z_STAR == F(19, 24)


def test_combo_a1_targets():
    comb = combo_a1(prism(), 0, 1)
    comb.validate()
    agg = comb.aggregate()
    assert agg[0] <= F(3, 4) and agg[1] <= F(5, 8)
    assert all(a <= F(7, 8) for a in agg)


def test_combo_a2_is_exact():
    g = prism()
    comb = combo_a2(g, 6)
    assert comb.aggregate() == a2_target(g, 6)


@pytest.mark.parametrize("inst", [TRI_K4, TRI_CHAIN], ids=["k4", "chain"])
def test_triangle_certificates(inst):
    g, x, ones = inst
    e_star = ones[1]
    cert = triangle_certificate(g, x, e_star)
    assert verify_certificate(cert)
    z = z_vector(x, e_star)
    assert all(a <= b for a, b in zip(cert.combination.aggregate(), z))
    assert star_multiplicity_ok(cert, e_star)
    assert cert.combination.aggregate()[e_star] == Z_STAR


def test_chain_has_a_two_cut():
    g, x, ones = TRI_CHAIN
    assert triangle_certificate(g, x, ones[1]).notes["two_cuts"] == "1"


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_cost_ratio_under_random_costs(seed):
    g, x, ones = TRI_K4
    cert = _K4_CERT
    rng = random.Random(seed)
    costs = [F(rng.randint(0, 20), rng.randint(1, 5)) for _ in range(g.m)]
    lp = sum((c * v for c, v in zip(costs, x)), F(0))
    if lp == 0:
        return
    assert cost_ratio(costs, cert, lp) <= Z_ONE


_K4_CERT = triangle_certificate(TRI_K4[0], TRI_K4[1], TRI_K4[2][1])


def test_e_star_must_be_a_one_edge():
    g, x, _ = TRI_K4
    with pytest.raises(TrianglePointError):
        validate_triangle(g, x, 0)


def test_e_star_in_a_two_cut_rejected():
    g, x, _ = TRI_CHAIN
    cross = g.label_index()["x0"]
    with pytest.raises(TrianglePointError):
        validate_triangle(g, x, cross)


def test_raise_double():
    g = k4()
    comb = ConvexCombination(g, [(F(1, 2), member({0: 1, 1: 1})), (F(1, 2), member({0: 2}))], subgraph=False)
    out = raise_double(comb, 0, F(3, 4))
    assert out.aggregate()[0] == F(7, 4)
    with pytest.raises(DecompositionError):
        raise_double(comb, 0, F(1, 4))
    with pytest.raises(DecompositionError):
        raise_double(comb, 2, F(1, 2))
