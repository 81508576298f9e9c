"""Weighted matroid intersection by shortest augmenting paths.

Matroids are given as independence oracles on a ground set ``range(n)``.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .graphs import GraphError, Multigraph

Oracle = Callable[[frozenset[int]], bool]


class _DSU:
    def __init__(self, n: int) -> None:
        self.p = list(range(n))

    def find(self, x: int) -> int:
        while self.p[x] != x:
            self.p[x] = self.p[self.p[x]]
            x = self.p[x]
        return x

    def union(self, a: int, b: int) -> bool:
        a, b = self.find(a), self.find(b)
        if a == b:
            return False
        self.p[a] = b
        return True


def is_forest(g: Multigraph, edges: Iterable[int]) -> bool:
    d = _DSU(g.n)
    for i in edges:
        u, v = g.ends(i)
        if not d.union(u, v):
            return False
    return True


def graphic(g: Multigraph, ground: Sequence[int]) -> Oracle:
    """Graphic matroid of ``g`` on the listed host edges."""
    return lambda s: is_forest(g, (ground[i] for i in s))


def one_tree_matroid(g: Multigraph, ground: Sequence[int], root: int) -> Oracle:
    """Forests of ``g - root`` plus at most two edges at ``root``.

    Its bases of size ``n`` are the 1-trees rooted at ``root``.
    """

    def indep(s: frozenset[int]) -> bool:
        at_root = 0
        rest = []
        for i in s:
            e = ground[i]
            if root in g.ends(e):
                at_root += 1
            else:
                rest.append(e)
        return at_root <= 2 and is_forest(g, rest)

    return indep


def partition(groups: Sequence[int], caps: dict[int, int] | None = None) -> Oracle:
    def indep(s: frozenset[int]) -> bool:
        used: dict[int, int] = {}
        for i in s:
            k = groups[i]
            used[k] = used.get(k, 0) + 1
            if used[k] > (caps or {}).get(k, 1):
                return False
        return True

    return indep


def intersection(
    size: int,
    m1: Oracle,
    m2: Oracle,
    weight: Sequence[Fraction] | None = None,
    want: int | None = None,
) -> frozenset[int] | None:
    """Max-weight common independent set of cardinality ``want``.

    With ``want=None`` the largest cardinality reachable is returned.  Gives
    ``None`` when no common independent set has ``want`` elements.
    """
    w = [Fraction(x) for x in weight] if weight is not None else [Fraction(0)] * size
    cur: frozenset[int] = frozenset()
    while want is None or len(cur) < want:
        path = _augment(size, cur, m1, m2, w)
        if path is None:
            break
        cur = cur.symmetric_difference(path)
    if want is not None and len(cur) != want:
        return None
    return cur


def _augment(size: int, cur: frozenset[int], m1: Oracle, m2: Oracle, w: list[Fraction]) -> list[int] | None:
    inside = sorted(cur)
    outside = [z for z in range(size) if z not in cur]
    x1 = [z for z in outside if m1(cur | {z})]
    x2 = {z for z in outside if m2(cur | {z})}
    if not x1 or not x2:
        return None
    arcs: dict[int, list[int]] = {v: [] for v in range(size)}
    for y in inside:
        base = cur - {y}
        for z in outside:
            if m1(base | {z}):
                arcs[y].append(z)
            if m2(base | {z}):
                arcs[z].append(y)
    # vertex lengths: -w on additions, +w on removals; ties prefer fewer arcs
    length = {v: (-w[v] if v not in cur else w[v]) for v in range(size)}
    dist: dict[int, tuple[Fraction, int]] = {z: (length[z], 0) for z in x1}
    prev: dict[int, int | None] = {z: None for z in x1}
    for _ in range(size):
        changed = False
        for a in sorted(dist):
            da = dist[a]
            for b in arcs[a]:
                cand = (da[0] + length[b], da[1] + 1)
                if b not in dist or cand < dist[b]:
                    dist[b] = cand
                    prev[b] = a
                    changed = True
        if not changed:
            break
    ends = [z for z in x2 if z in dist]
    if not ends:
        return None
    end = min(ends, key=lambda z: (dist[z], z))
    path = []
    node: int | None = end
    while node is not None:
        path.append(node)
        node = prev[node]
    return path


def two_disjoint_spanning_trees(g: Multigraph) -> tuple[frozenset[int], frozenset[int]] | None:
    """Two edge-disjoint spanning trees as sets of host edge indices.

    Parallel copies of an edge may go to different trees only if the edge
    has multiplicity two or more in the host; one host index is used per tree.
    """
    if g.n <= 1:
        return frozenset(), frozenset()
    ground: list[tuple[int, int]] = []
    for i, e in enumerate(g.edges):
        if e.u == e.v:
            continue
        for c in range(2):
            ground.append((i, c))
    copy_groups = [i for i, _ in ground]
    caps = {i: min(2, g.edges[i].mult) for i in range(g.m)}

    def m1(s: frozenset[int]) -> bool:
        return all(is_forest(g, (ground[j][0] for j in s if ground[j][1] == c)) for c in (0, 1))

    m2 = partition(copy_groups, caps)
    got = intersection(len(ground), m1, m2, want=2 * (g.n - 1))
    if got is None:
        return None
    t = [frozenset(ground[j][0] for j in got if ground[j][1] == c) for c in (0, 1)]
    if any(len(x) != g.n - 1 for x in t):
        raise GraphError("tree packing produced a non-spanning forest")
    return t[0], t[1]
