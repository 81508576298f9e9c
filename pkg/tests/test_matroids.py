import random

from hypothesis import given, settings, strategies as st

from _instances import cycle, doubled_cycle4, k5, octahedron, random_4regular_4ec
from twoec.graphs import is_connected
from twoec.matroids import is_forest, two_disjoint_spanning_trees


def _spanning_tree(g, t):
    return len(t) == g.n - 1 and is_forest(g, t) and is_connected(g, {i: 1 for i in t})


def test_two_trees_in_k5_and_octahedron():
    for g in (k5(), octahedron(), doubled_cycle4()):
        pack = two_disjoint_spanning_trees(g)
        assert pack is not None
        a, b = pack
        assert not (a & b)
        assert _spanning_tree(g, a) and _spanning_tree(g, b)


def test_cycle_has_no_two_disjoint_trees():
    assert two_disjoint_spanning_trees(cycle(5)) is None


@settings(max_examples=15, deadline=None)
@given(st.integers(5, 9), st.integers(0, 10**6))
def test_4ec_graphs_pack_two_trees(n, seed):
    g = random_4regular_4ec(n, random.Random(seed))
    a, b = two_disjoint_spanning_trees(g)
    assert not (a & b) and _spanning_tree(g, a) and _spanning_tree(g, b)
