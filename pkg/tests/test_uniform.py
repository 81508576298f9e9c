import os
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from _instances import cycle, k33, k33_coloring, k4, k4_coloring, petersen, prism
from twoec import io
from twoec.graphs import GraphError, Multigraph, is_2ec
from twoec.uniform import cover_13_15, cover_7_8, exact_piece
from twoec.verify import gen_random_cubic_3ec, verify_certificate


def _check(cert, beta):
    assert verify_certificate(cert)
    assert cert.combination.total() == 1
    assert all(a <= beta for a in cert.combination.aggregate())
    assert all(is_2ec(cert.host, dict(m)) for _, m in cert.combination.terms)


@pytest.mark.parametrize("make", [k4, prism, petersen])
def test_seven_eighths_named(make):
    _check(cover_7_8(make()), F(7, 8))


def test_prism_notes():
    notes = cover_7_8(prism()).notes
    assert notes["splits"] == "1" and notes["pieces"] == "2"


@settings(max_examples=8, deadline=None)
@given(st.sampled_from([6, 8, 10, 12]), st.integers(0, 10**6))
def test_seven_eighths_random(n, seed):
    _check(cover_7_8(gen_random_cubic_3ec(n, seed)), F(7, 8))


def test_thirteen_fifteenths():
    _check(cover_13_15(k4(), k4_coloring()), F(13, 15))
    _check(cover_13_15(k33(), k33_coloring()), F(13, 15))


def test_thirteen_fifteenths_needs_essentially_4ec():
    g = prism()
    col = {0: 0, 1: 1, 2: 2, 3: 0, 4: 1, 5: 2, 6: 1, 7: 2, 8: 0}
    with pytest.raises(GraphError):
        cover_13_15(g, col)


def test_bad_coloring_rejected():
    with pytest.raises(GraphError):
        cover_13_15(k4(), {i: 0 for i in range(6)})


def test_inputs_must_be_cubic_and_3ec():
    with pytest.raises(GraphError):
        cover_7_8(cycle(4))
    # two K4-minus-an-edge gadgets joined by a 2-edge cut
    gadget = [(0, 1), (0, 2), (0, 3), (1, 2), (2, 3)]
    two_ec = Multigraph.from_pairs(8, gadget + [(u + 4, v + 4) for u, v in gadget] + [(1, 5), (3, 7)])
    with pytest.raises(GraphError):
        cover_7_8(two_ec)


def test_exact_piece_on_k4():
    comb = exact_piece(k4(), [F(7, 8)] * 6)
    comb.validate()
    assert comb.aggregate() == [F(7, 8)] * 6


def test_same_input_same_bytes():
    g = gen_random_cubic_3ec(12, 3)
    a = io.dumps(io.certificate_to_json(cover_7_8(g)))
    b = io.dumps(io.certificate_to_json(cover_7_8(g)))
    assert a == b


def test_thread_count_does_not_change_output(monkeypatch):
    g = gen_random_cubic_3ec(12, 5)
    monkeypatch.setenv("TWOEC_THREADS", "1")
    a = io.dumps(io.certificate_to_json(cover_7_8(g)))
    monkeypatch.setenv("TWOEC_THREADS", "4")
    b = io.dumps(io.certificate_to_json(cover_7_8(g)))
    assert a == b


def test_hundred_random_samples():
    for j in range(100):
        g = gen_random_cubic_3ec(4 + 2 * (j % 7), 100 + j)
        assert verify_certificate(cover_7_8(g)), j
