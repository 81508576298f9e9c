from fractions import Fraction as F

import pytest

from _instances import k4, prism
from twoec.decomp import ConvexCombination
from twoec.glue import GlueError, GlueStats, cut_multipliers, glue_3cut, reduce_and_glue
from twoec.graphs import is_2ec, member
from twoec.lp import solve_over
from twoec.verify import all_members


def test_cut_multipliers_at_seven_eighths():
    lam = cut_multipliers(F(7, 8), F(7, 8), F(7, 8))
    assert lam == {"ab": F(1, 8), "ac": F(1, 8), "bc": F(1, 8), "abc": F(5, 8)}
    assert sum(lam.values()) == 1


def test_cut_multipliers_reproduce_each_edge():
    xa, xb, xc = F(3, 4), F(5, 8), F(7, 8)
    lam = cut_multipliers(xa, xb, xc)
    assert lam["ab"] + lam["ac"] + lam["abc"] == xa
    assert lam["ab"] + lam["bc"] + lam["abc"] == xb
    assert lam["ac"] + lam["bc"] + lam["abc"] == xc


def test_cut_multipliers_reject_low_values():
    with pytest.raises(GlueError):
        cut_multipliers(F(1, 2), F(1, 2), F(1, 2))
    with pytest.raises(GlueError):
        cut_multipliers(F(3, 2), F(1), F(1))


def _exact_base(piece, target, origin, vorigin):
    cols = [(member(m), tuple(m.get(i, 0) for i in range(piece.m))) for m in all_members(piece, "2ec-subgraph")]
    sol = solve_over(target, cols)
    return ConvexCombination(piece, [(lam, key) for lam, key, _ in sol])


def test_prism_splits_once_and_glues_back():
    g = prism()
    stats = GlueStats()
    comb = reduce_and_glue(g, [F(7, 8)] * g.m, _exact_base, stats=stats)
    assert (stats.splits, stats.pieces, stats.piece_sizes) == (1, 2, [4, 4])
    comb.validate()
    assert comb.aggregate() == [F(7, 8)] * g.m
    assert all(is_2ec(g, dict(m)) for _, m in comb.terms)


def test_glue_rejects_unequal_pattern_mass():
    g = prism()
    a = ConvexCombination(g, [(F(1), member(range(9)))])
    b = ConvexCombination(g, [(F(1), member([0, 1, 2, 6, 7]))])
    with pytest.raises(GlueError):
        glue_3cut(g, a, b, [6, 7, 8])
