"""Certificate verification and an independent brute-force oracle.

Nothing here calls the pipelines.  Connectivity is re-implemented from
scratch (bridges by DFS lowpoints, cut vertices by deletion) so that a bug
in the pipeline predicates cannot hide a bad certificate.

The oracle decides ``y >= sum lam_F chi^F`` by enumerating members and
solving the feasibility LP with HiGHS as a guide only.  The answer is then
re-established exactly: a rational combination for "yes", a rational
Farkas vector ``w`` with ``min_F w.chi^F > w.y`` for "no".
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.optimize import linprog

from .certificate import Certificate
from .graphs import Edge, GraphError, Multigraph, edge_connectivity

SUBGRAPH_PREDICATES = ("2ec-subgraph", "matching-2vc-complement")


# ---------------------------------------------------------------------------
# connectivity, independently


def _adjacency(n: int, edges: Sequence[tuple[int, int, int]]) -> list[list[tuple[int, int, int]]]:
    adj: list[list[tuple[int, int, int]]] = [[] for _ in range(n)]
    for k, (u, v, mult) in enumerate(edges):
        if u == v:
            continue
        adj[u].append((v, k, mult))
        adj[v].append((u, k, mult))
    return adj


def _connected(n: int, edges: Sequence[tuple[int, int, int]], skip: int | None = None) -> bool:
    alive = [v for v in range(n) if v != skip]
    if not alive:
        return True
    adj = _adjacency(n, edges)
    seen = {alive[0]}
    stack = [alive[0]]
    while stack:
        v = stack.pop()
        for w, _, _ in adj[v]:
            if w != skip and w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(alive)


def _edge_list(g: Multigraph, mem: Mapping[int, int]) -> list[tuple[int, int, int]]:
    return [(g.edges[i].u, g.edges[i].v, k) for i, k in mem.items() if k > 0]


def bridgeless_spanning(g: Multigraph, mem: Mapping[int, int]) -> bool:
    """Connected on all vertices with no bridge; parallel copies count."""
    if g.n <= 1:
        return True
    edges = _edge_list(g, mem)
    if not _connected(g.n, edges):
        return False
    adj = _adjacency(g.n, edges)
    disc = [-1] * g.n
    low = [0] * g.n
    clock = 0
    # iterative DFS keyed on the entering edge so parallel copies are distinct
    stack = [(0, -1, iter(adj[0]))]
    disc[0] = low[0] = clock
    while stack:
        v, via, it = stack[-1]
        step = next(it, None)
        if step is None:
            stack.pop()
            if stack:
                p = stack[-1][0]
                low[p] = min(low[p], low[v])
                k_mult = edges[via][2]
                if low[v] > disc[p] and k_mult == 1:
                    return False
            continue
        w, k, _ = step
        if k == via:
            continue
        if disc[w] == -1:
            clock += 1
            disc[w] = low[w] = clock
            stack.append((w, k, iter(adj[w])))
        else:
            low[v] = min(low[v], disc[w])
    return True


def two_vertex_connected(g: Multigraph, mem: Mapping[int, int]) -> bool:
    """Connected, no cut vertex; on two vertices at least two parallel edges."""
    edges = _edge_list(g, mem)
    if g.n == 2:
        return sum(k for u, v, k in edges if u != v) >= 2
    if g.n < 2 or not _connected(g.n, edges):
        return False
    return all(_connected(g.n, edges, skip=v) for v in range(g.n))


def degrees(g: Multigraph, mem: Mapping[int, int]) -> list[int]:
    deg = [0] * g.n
    for i, k in mem.items():
        e = g.edges[i]
        deg[e.u] += k
        deg[e.v] += k
    return deg


def _is_matching(g: Multigraph, mem: Mapping[int, int]) -> bool:
    seen: set[int] = set()
    for i, k in mem.items():
        e = g.edges[i]
        if k != 1 or e.u == e.v or e.u in seen or e.v in seen:
            return False
        seen.update((e.u, e.v))
    return True


def satisfies(g: Multigraph, mem: Mapping[int, int], predicate: str) -> bool:
    if predicate in ("2ec-subgraph", "2ec-multigraph"):
        return bridgeless_spanning(g, mem)
    if predicate == "2vc-min-deg-3":
        return two_vertex_connected(g, mem) and min(degrees(g, mem), default=0) >= 3
    if predicate == "matching-2vc-complement":
        if not _is_matching(g, mem):
            return False
        rest = {i: 1 for i in range(g.m) if i not in mem}
        return two_vertex_connected(g, rest) and min(degrees(g, rest), default=0) >= 3
    raise ValueError(f"unknown predicate {predicate!r}")


# ---------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class Verdict:
    ok: bool
    failure: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def verify_certificate(c: Certificate) -> Verdict:
    """Check a certificate exactly; report the first violated condition."""
    g = c.host
    comb = c.combination
    cap = 1 if c.predicate in SUBGRAPH_PREDICATES else 2
    total = Fraction(0)
    agg = [Fraction(0)] * g.m
    for pos, (lam, mem) in enumerate(comb.terms):
        if not isinstance(lam, Fraction) or lam <= 0:
            return Verdict(False, f"member {pos}: multiplier {lam} is not a positive rational")
        total += lam
        d: dict[int, int] = {}
        for i, k in mem:
            if not (0 <= i < g.m):
                return Verdict(False, f"member {pos}: edge index {i} out of range")
            if i in d:
                return Verdict(False, f"member {pos}: edge {i} listed twice")
            if not (1 <= k <= cap):
                return Verdict(False, f"member {pos}: edge {g.edges[i].label} has multiplicity {k}, cap {cap}")
            d[i] = k
            agg[i] += lam * k
        if not satisfies(g, d, c.predicate):
            return Verdict(False, f"member {pos}: fails predicate {c.predicate}")
    if total != 1:
        return Verdict(False, f"multipliers sum to {total}")
    for i, (a, t) in enumerate(zip(agg, c.target)):
        if c.relation == "equal" and a != t:
            return Verdict(False, f"edge {g.edges[i].label}: aggregate {a} != target {t}")
        if c.relation == "dominates" and a > t:
            return Verdict(False, f"edge {g.edges[i].label}: aggregate {a} > target {t}")
    return Verdict(True)


def cost_ratio(costs: Sequence[Fraction], cert: Certificate, fractional: Fraction) -> Fraction:
    """Cheapest member cost over the fractional cost."""
    if fractional <= 0:
        raise ValueError("fractional cost must be positive")
    best = min(sum((Fraction(costs[i]) * k for i, k in mem), Fraction(0)) for _, mem in cert.combination.terms)
    return best / Fraction(fractional)


# ---------------------------------------------------------------------------
# brute-force dominance


class OracleError(RuntimeError):
    pass


def enumerate_members(g: Multigraph, predicate: str, max_edges: int = 14) -> list[tuple[int, ...]]:
    """All multiplicity vectors (cap 1 or 2) satisfying the predicate."""
    if g.m > max_edges:
        raise OracleError(f"instance has {g.m} edges, the oracle cap is {max_edges}")
    cap = 1 if predicate in SUBGRAPH_PREDICATES else 2
    need = 3 if predicate == "2vc-min-deg-3" else (2 if predicate in ("2ec-subgraph", "2ec-multigraph") else 0)
    # last edge index at each vertex, for degree pruning during the product walk
    last = [max(g.incident(v), default=-1) for v in range(g.n)]
    out: list[tuple[int, ...]] = []

    def rec(i: int, vec: list[int], deg: list[int]) -> None:
        if i == g.m:
            mem = {j: k for j, k in enumerate(vec) if k}
            if satisfies(g, mem, predicate):
                out.append(tuple(vec))
            return
        e = g.edges[i]
        for k in range(cap + 1):
            deg[e.u] += k
            if e.v != e.u:
                deg[e.v] += k
            if need and any(last[v] == i and deg[v] < need for v in (e.u, e.v)):
                pass
            else:
                vec.append(k)
                rec(i + 1, vec, deg)
                vec.pop()
            deg[e.u] -= k
            if e.v != e.u:
                deg[e.v] -= k

    rec(0, [], [0] * g.n)
    return out


def _solve_exact(rows: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """A solution of rows.x = rhs with free variables at zero, or None."""
    a = [list(r) + [b] for r, b in zip(rows, rhs)]
    ncols = len(rows[0]) if rows else 0
    piv_cols: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [v * inv for v in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [vi - f * vr for vi, vr in zip(a[i], a[r])]
        piv_cols.append(c)
        r += 1
    if any(all(v == 0 for v in row[:-1]) and row[-1] != 0 for row in a):
        return None
    sol = [Fraction(0)] * ncols
    for i, c in enumerate(piv_cols):
        sol[c] = a[i][-1]
    return sol


@dataclass
class OracleResult:
    dominates: bool
    members: int
    combination: list[tuple[Fraction, tuple[int, ...]]] | None = None
    farkas: list[Fraction] | None = None

    def __bool__(self) -> bool:
        return self.dominates


def _exact_primal(cols: list[tuple[int, ...]], y: list[Fraction], lam_f: np.ndarray) -> list[tuple[Fraction, tuple[int, ...]]] | None:
    support = [j for j, v in enumerate(lam_f) if v > 1e-9]
    if not support:
        return None
    agg = np.array([sum(lam_f[j] * cols[j][i] for j in support) for i in range(len(y))])
    tight = [i for i in range(len(y)) if abs(agg[i] - float(y[i])) < 1e-7]
    rows = [[Fraction(cols[j][i]) for j in support] for i in tight] + [[Fraction(1)] * len(support)]
    rhs = [y[i] for i in tight] + [Fraction(1)]
    attempts = [_solve_exact(rows, rhs)]
    # rounding-based second attempt
    approx = [Fraction(float(lam_f[j])).limit_denominator(10**6) for j in support]
    s = sum(approx)
    attempts.append([v / s for v in approx] if s > 0 else None)
    for lam in attempts:
        if lam is None or any(v < 0 for v in lam) or sum(lam) != 1:
            continue
        comb = [(v, cols[j]) for v, j in zip(lam, support) if v > 0]
        exact = [sum((v * c[i] for v, c in comb), Fraction(0)) for i in range(len(y))]
        if all(a <= b for a, b in zip(exact, y)):
            return comb
    return None


def _exact_farkas(cols: list[tuple[int, ...]], y: list[Fraction], w_f: np.ndarray) -> list[Fraction] | None:
    for den in (10**3, 10**6, 10**9):
        w = [max(Fraction(float(v)).limit_denominator(den), Fraction(0)) for v in w_f]
        wy = sum((a * b for a, b in zip(w, y)), Fraction(0))
        if min(sum((a * c for a, c in zip(w, col)), Fraction(0)) for col in cols) > wy:
            return w
    return None


def brute_force_dominates(g: Multigraph, y: Sequence[Fraction], predicate: str, max_edges: int = 14) -> OracleResult:
    """Decide exactly whether ``y`` dominates a convex combination of members."""
    y = [Fraction(v) for v in y]
    if len(y) != g.m:
        raise OracleError("y has the wrong length")
    cols = enumerate_members(g, predicate, max_edges)
    if not cols:
        return OracleResult(False, 0, farkas=[Fraction(0)] * g.m)
    a = np.array(cols, dtype=float).T  # edges x members
    yf = np.array([float(v) for v in y])
    primal = linprog(
        np.zeros(len(cols)),
        A_ub=a,
        b_ub=yf,
        A_eq=np.ones((1, len(cols))),
        b_eq=[1.0],
        bounds=[(0, None)] * len(cols),
        method="highs",
    )
    if primal.status == 0:
        comb = _exact_primal(cols, y, primal.x)
        if comb is not None:
            return OracleResult(True, len(cols), combination=comb)
    # maximise s - w.y  subject to  s <= w.chi^F,  w >= 0,  sum w = 1
    m, k = g.m, len(cols)
    c = np.zeros(m + 1)
    c[:m] = yf
    c[m] = -1.0
    a_ub = np.hstack([-a.T, np.ones((k, 1))])
    dual = linprog(
        c,
        A_ub=a_ub,
        b_ub=np.zeros(k),
        A_eq=np.hstack([np.ones((1, m)), np.zeros((1, 1))]),
        b_eq=[1.0],
        bounds=[(0, None)] * m + [(None, None)],
        method="highs",
    )
    if dual.status == 0 and -dual.fun > 0:
        w = _exact_farkas(cols, y, dual.x[:m])
        if w is not None:
            return OracleResult(False, len(cols), farkas=w)
    raise OracleError("could not certify the oracle's answer exactly")


# ---------------------------------------------------------------------------
# instances


def gen_random_cubic_3ec(n: int, seed: int, max_tries: int = 100000) -> Multigraph:
    """Pairing-model cubic graph, resampled until simple and 3-edge-connected."""
    if n < 4 or n % 2:
        raise GraphError("cubic graphs need an even number of vertices, at least 4")
    rng = random.Random(seed)
    points = [v for v in range(n) for _ in range(3)]
    for _ in range(max_tries):
        rng.shuffle(points)
        pairs = sorted(tuple(sorted(points[j : j + 2])) for j in range(0, len(points), 2))
        if any(u == v for u, v in pairs) or len(set(pairs)) != len(pairs):
            continue
        g = Multigraph.from_pairs(n, pairs)
        if edge_connectivity(g) >= 3:
            return g
    raise GraphError(f"no simple 3-edge-connected cubic graph found in {max_tries} tries")


def donut_integral_optimum(k: int) -> Fraction:
    """Minimum cost of a 2EC multigraph on the k-donut, by exhaustive search.

    Each 1-path of k edges at cost 1/k is compressed to one edge with three
    states: single (cost 1), doubled (cost 2) or broken with both stubs
    doubled (cost 2(k-1)/k, contributes nothing across).  Any other use of
    a path costs at least as much as one of these and connects no more.
    Square edges take multiplicity 0, 1 or 2.
    """
    from .square import gen_k_donut

    g, x, cost = gen_k_donut(k)
    # compress: square corners are the vertices of degree 3 in the support
    corners = sorted(v for v in range(g.n) if len(g.incident(v)) == 3)
    index = {v: j for j, v in enumerate(corners)}
    edges: list[tuple[int, int, list[tuple[int, Fraction]]]] = []
    for i, e in enumerate(g.edges):
        if x[i] == Fraction(1, 2):
            edges.append((index[e.u], index[e.v], [(0, Fraction(0)), (1, cost[i]), (2, 2 * cost[i])]))
    seen_path: set[int] = set()
    for v in corners:
        for i in g.incident(v):
            if x[i] != 1 or i in seen_path:
                continue
            prev, cur, path = v, g.other(i, v), [i]
            while cur not in index:
                nxt = next(j for j in g.incident(cur) if j != path[-1])
                path.append(nxt)
                prev, cur = cur, g.other(nxt, cur)
            seen_path.update(path)
            edges.append((index[v], index[cur], [(0, Fraction(2 * (k - 1), k)), (1, Fraction(1)), (2, Fraction(2))]))
    n = len(corners)
    order = sorted(range(len(edges)), key=lambda j: (max(edges[j][0], edges[j][1]), j))
    edges = [edges[j] for j in order]
    last = [max(j for j, (u, v, _) in enumerate(edges) if w in (u, v)) for w in range(n)]
    min_rest = [Fraction(0)] * (len(edges) + 1)
    for j in range(len(edges) - 1, -1, -1):
        min_rest[j] = min_rest[j + 1] + min(c for _, c in edges[j][2])
    best = [Fraction(10**9)]
    mult = [0] * len(edges)

    def feasible() -> bool:
        es = [(u, v, mult[j]) for j, (u, v, _) in enumerate(edges) if mult[j]]
        return _connected(n, es) and bridgeless_spanning(Multigraph(n, tuple(Edge(u, v, m, f"c{j}") for j, (u, v, m) in enumerate(es))), {j: m for j, (_, _, m) in enumerate(es)})

    def rec(j: int, spent: Fraction, deg: list[int]) -> None:
        if spent + min_rest[j] >= best[0]:
            return
        if j == len(edges):
            if feasible():
                best[0] = spent
            return
        u, v, opts = edges[j]
        for m, c in opts:
            deg[u] += m
            deg[v] += m
            if not any(last[w] == j and deg[w] < 2 for w in (u, v)):
                mult[j] = m
                rec(j + 1, spent + c, deg)
            deg[u] -= m
            deg[v] -= m
        mult[j] = 0

    rec(0, Fraction(0), [0] * n)
    return best[0]


def all_members(g: Multigraph, predicate: str, max_edges: int = 14) -> Iterable[dict[int, int]]:
    for vec in enumerate_members(g, predicate, max_edges):
        yield {i: k for i, k in enumerate(vec) if k}
