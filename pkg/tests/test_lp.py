import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from twoec.lp import Infeasible, solve_over


def _agg(sol, m):
    return [sum((lam * col[i] for lam, _, col in sol), F(0)) for i in range(m)]


def test_square_corners():
    cols = [("a", (1, 0)), ("b", (0, 1)), ("c", (1, 1)), ("d", (0, 0))]
    sol = solve_over([F(1, 2), F(1, 3)], cols)
    assert sum(lam for lam, _, _ in sol) == 1
    assert _agg(sol, 2) == [F(1, 2), F(1, 3)]
    assert all(lam > 0 for lam, _, _ in sol)


def test_outside_hull_is_infeasible():
    cols = [("a", (1, 0)), ("b", (0, 1))]
    with pytest.raises(Infeasible):
        solve_over([F(1, 2), F(1, 3)], cols)


def test_negative_target_is_infeasible():
    with pytest.raises(Infeasible):
        solve_over([F(-1)], [("a", (0,))])


def test_degenerate_many_duplicates():
    cols = [(k, (1, 1, 0)) for k in range(5)] + [(9, (0, 0, 1)), (10, (1, 1, 1))]
    sol = solve_over([F(1), F(1), F(1)], cols)
    assert _agg(sol, 3) == [1, 1, 1]


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_recovers_random_convex_points(seed):
    rng = random.Random(seed)
    m = rng.randint(2, 6)
    cols = [(j, tuple(rng.randint(0, 2) for _ in range(m))) for j in range(rng.randint(2, 12))]
    w = [F(rng.randint(0, 5)) for _ in cols]
    if sum(w) == 0:
        w[0] = F(1)
    w = [v / sum(w) for v in w]
    target = [sum((wj * c[i] for wj, (_, c) in zip(w, cols)), F(0)) for i in range(m)]
    sol = solve_over(target, cols)
    assert sum(lam for lam, _, _ in sol) == 1
    assert _agg(sol, m) == target
