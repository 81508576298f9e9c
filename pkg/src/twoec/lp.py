"""Exact rational column generation for convex decompositions.

Solves the feasibility problem

    sum_j lam_j a_j = b,   sum_j lam_j = 1,   lam >= 0

over an implicit column set, given a pricing oracle that returns a column
maximising ``pi . a`` for dual prices ``pi``.  Phase I of the revised simplex
method with one artificial per row; pivots use the lexicographic ratio test
so degenerate instances cannot cycle.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Callable, Hashable, Sequence

Column = tuple[Hashable, tuple[int, ...]]
Pricer = Callable[[list[Fraction]], Column | None]

ZERO = Fraction(0)
ONE = Fraction(1)


class Infeasible(Exception):
    """The target is not a convex combination of the oracle's columns."""


class _Basis:
    def __init__(self, b: Sequence[Fraction]) -> None:
        self.rows = len(b)
        self.rhs = [Fraction(x) for x in b]
        # artificial i starts basic in row i; negative right-hand sides cannot occur
        if any(x < 0 for x in self.rhs):
            raise Infeasible("negative target entry")
        self.inv = [[ONE if i == j else ZERO for j in range(self.rows)] for i in range(self.rows)]
        self.keys: list[Hashable] = [("art", i) for i in range(self.rows)]
        self.cols: list[tuple[int, ...] | None] = [None] * self.rows
        self.x = list(self.rhs)

    def cost(self, k: int) -> Fraction:
        return ONE if self.cols[k] is None else ZERO

    def duals(self) -> list[Fraction]:
        cb = [self.cost(k) for k in range(self.rows)]
        return [sum((cb[k] * self.inv[k][j] for k in range(self.rows) if cb[k]), ZERO) for j in range(self.rows)]

    def objective(self) -> Fraction:
        return sum((self.x[k] for k in range(self.rows) if self.cols[k] is None), ZERO)

    def pivot(self, key: Hashable, col: tuple[int, ...]) -> bool:
        full = list(col) + [1]
        d = [sum((self.inv[i][j] * full[j] for j in range(self.rows) if full[j]), ZERO) for i in range(self.rows)]
        best = None
        for i in range(self.rows):
            if d[i] > 0:
                lex = [self.x[i] / d[i]] + [self.inv[i][j] / d[i] for j in range(self.rows)]
                if best is None or lex < best[0]:
                    best = (lex, i)
        if best is None:
            return False
        r = best[1]
        piv = d[r]
        row_r = [v / piv for v in self.inv[r]]
        x_r = self.x[r] / piv
        for i in range(self.rows):
            if i == r or d[i] == 0:
                continue
            f = d[i]
            inv_i = self.inv[i]
            for j in range(self.rows):
                if row_r[j]:
                    inv_i[j] -= f * row_r[j]
            self.x[i] -= f * x_r
        self.inv[r] = row_r
        self.x[r] = x_r
        self.keys[r] = key
        self.cols[r] = tuple(col)
        return True


def column_generation(
    target: Sequence[Fraction],
    price: Pricer,
    initial: Sequence[Column] = (),
    max_iter: int = 100000,
) -> list[tuple[Fraction, Hashable, tuple[int, ...]]]:
    """Return ``[(lam, key, column), ...]`` with the lam summing to one.

    ``price(pi)`` receives the duals of the target rows followed by the dual
    of the convexity row and must return a column maximising the reduced
    profit ``pi[:-1] . a + pi[-1]``, or ``None``.
    """
    basis = _Basis(list(target) + [ONE])
    pool: dict[Hashable, tuple[int, ...]] = {}
    for key, col in initial:
        pool[key] = tuple(col)

    def profit(pi: list[Fraction], col: tuple[int, ...]) -> Fraction:
        return sum((pi[j] * col[j] for j in range(len(col)) if col[j]), ZERO) + pi[-1]

    for _ in range(max_iter):
        if basis.objective() == 0:
            break
        pi = basis.duals()
        basic = set(basis.keys)
        entering = None
        # cheap columns seen before are tried first
        for key, col in pool.items():
            if key not in basic and profit(pi, col) > 0:
                entering = (key, col)
                break
        if entering is None:
            got = price(pi)
            if got is not None and profit(pi, tuple(got[1])) > 0:
                entering = (got[0], tuple(got[1]))
                pool[entering[0]] = entering[1]
        if entering is None:
            raise Infeasible(f"phase one stalled at infeasibility {basis.objective()}")
        if not basis.pivot(*entering):
            raise Infeasible("unbounded direction in phase one")
    else:
        raise Infeasible("iteration limit reached")

    out = []
    for k in range(basis.rows):
        if basis.cols[k] is not None and basis.x[k] > 0:
            out.append((basis.x[k], basis.keys[k], basis.cols[k]))
    out.sort(key=lambda t: repr(t[1]))
    return out


def solve_over(target: Sequence[Fraction], columns: Sequence[Column]) -> list[tuple[Fraction, Hashable, tuple[int, ...]]]:
    """Column generation over an explicit list of columns."""
    cols = [(k, tuple(c)) for k, c in columns]

    def price(pi: list[Fraction]) -> Column | None:
        best, arg = None, None
        for key, col in cols:
            val = sum((pi[j] * col[j] for j in range(len(col)) if col[j]), ZERO)
            if best is None or val > best:
                best, arg = val, (key, col)
        return arg

    return column_generation(target, price)
