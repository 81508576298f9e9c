"""Top-down coloring of links with factors 3/5, 5/8 and 4/5.

Links are colored in order of LCA depth (highest first, ties by index).
Each algorithm proposes colors by its case rules; before a proposal is
committed it is checked against what the run still needs (last covering
links must complete their edges and, for 5/8 and 4/5, the bookkeeping
invariants must survive).  A proposal that fails the check is replaced by
the first subset of colors that passes, and the run records a repair.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterable, Sequence

from .decomp import ConvexCombination, leaf_matching_links
from .graphs import GraphError, member
from .trees import RootedTree, Subdivision, lca_cov, subdivide


class ColoringError(RuntimeError):
    def __init__(self, message: str, trace: Sequence[str] = ()) -> None:
        super().__init__(message)
        self.trace = list(trace)


@dataclass
class PartialColoring:
    tree: RootedTree
    p: int
    q: int
    colors: dict[int, frozenset[int]] = field(default_factory=dict)
    order: list[int] = field(default_factory=list)
    trace: list[str] = field(default_factory=list)
    repairs: int = 0
    subdivision: Subdivision | None = None

    def class_links(self, c: int) -> list[int]:
        """Links of color ``c``, as host links of the original tree."""
        out = [ell for ell, cs in self.colors.items() if c in cs]
        if self.subdivision is not None:
            out = [self.subdivision.link_of[ell] for ell in out]
        return sorted(out)

    def missing(self) -> dict[int, frozenset[int]]:
        paths, _ = lca_cov(self.tree, list(self.colors))
        miss = {e: set(range(self.q)) for e in self.tree.edges}
        for ell, cs in self.colors.items():
            for e in paths[ell]:
                miss[e] -= cs
        return {e: frozenset(v) for e, v in miss.items()}


def link_order(tree: RootedTree, links: Iterable[int]) -> list[int]:
    def key(ell: int) -> tuple[int, int]:
        u, v = tree.host.ends(ell)
        return tree.depth[tree.lca(u, v)], ell

    return sorted(links, key=key)


def _fmt(cs: Iterable[int]) -> str:
    return "{" + ",".join(str(c) for c in sorted(cs)) + "}"


class _Run:
    """State shared by the three algorithms."""

    def __init__(self, tree: RootedTree, p: int, q: int) -> None:
        self.tree = tree
        self.p, self.q = p, q
        self.paths, self.cov = lca_cov(tree)
        self.left = {e: len(ls) for e, ls in self.cov.items()}
        self.miss = {e: set(range(q)) for e in tree.edges}
        self.out = PartialColoring(tree, p, q)
        self.order = link_order(tree, tree.links)
        self.out.order = list(self.order)

    # -- helpers on sides -------------------------------------------------
    def tier(self, side: list[int], size: int) -> set[int] | None:
        for e in side:
            if len(self.miss[e]) == size:
                return set(self.miss[e])
        return None

    def highest_missing(self, side: list[int], exclude: set[int]) -> int | None:
        for e in side:
            rest = self.miss[e] - exclude
            if rest:
                return min(rest)
        return None

    # -- proposal assembly ------------------------------------------------
    def add(self, picked: list[int], c: int | None) -> None:
        if c is not None and c not in picked and len(picked) < self.p:
            picked.append(c)

    def add_from(self, picked: list[int], pool: Iterable[int] | None, k: int = 1, avoid: Iterable[int] = ()) -> None:
        if pool is None:
            return
        skip = set(avoid)
        for c in sorted(pool):
            if k <= 0:
                break
            if c not in picked and c not in skip and len(picked) < self.p:
                picked.append(c)
                k -= 1

    def complete_last(self, picked: list[int], ell: int) -> None:
        for e in self.paths[ell]:
            if self.left[e] == 1:
                self.add_from(picked, self.miss[e], k=self.q)

    def fill(self, picked: list[int]) -> None:
        for c in range(self.q):
            if len(picked) >= self.p:
                break
            if c not in picked:
                picked.append(c)

    # -- checks -----------------------------------------------------------
    def edges_ok(self, ell: int, s: frozenset[int]) -> bool:
        for e in self.paths[ell]:
            rest = self.miss[e] - s
            if self.left[e] == 1 and rest:
                return False
            if len(rest) > self.p * (self.left[e] - 1):
                return False
        return True

    def settle(self, ell: int, picked: list[int], ok: Callable[[frozenset[int]], bool], case: str, prefer: Sequence[int]) -> frozenset[int]:
        s = frozenset(picked)
        if len(s) != self.p:
            raise ColoringError(f"proposal for link {ell} has {len(s)} colors", self.out.trace)
        if not ok(s):
            rank = {c: k for k, c in enumerate(prefer)}
            best = None
            for combo in combinations(range(self.q), self.p):
                cand = frozenset(combo)
                if ok(cand):
                    score = sorted(rank.get(c, self.q + c) for c in cand)
                    if best is None or score < best[0]:
                        best = (score, cand)
            if best is None:
                raise ColoringError(f"no admissible color set for link {ell} ({case})", self.out.trace)
            s = best[1]
            self.out.repairs += 1
            case += "+repair"
        self.commit(ell, s, case)
        return s

    def commit(self, ell: int, s: frozenset[int], case: str) -> None:
        for e in self.paths[ell]:
            self.miss[e] -= s
            self.left[e] -= 1
        self.out.colors[ell] = s
        label = self.tree.host.edges[ell].label
        self.out.trace.append(f"{label} {case} {_fmt(s)}")

    def finish(self) -> PartialColoring:
        for e, m in self.miss.items():
            if m:
                raise ColoringError(
                    f"tree edge {self.tree.host.edges[e].label} still misses {_fmt(m)}", self.out.trace
                )
        return self.out


# ---------------------------------------------------------------------------
# 3/5


def color_3_5(tree: RootedTree) -> PartialColoring:
    """Three of five colors per link; needs a tree without leaf-matching links."""
    if leaf_matching_links(tree.host, tree.edges, tree.root):
        raise ColoringError("tree has leaf-matching links")
    run = _Run(tree, 3, 5)
    for ell in run.order:
        a, b = tree.host.ends(ell)
        da, db = tree.tree_degree(a), tree.tree_degree(b)
        first = a if (da, -a) >= (db, -b) else b
        _, u, v, left, right = tree.sides(ell, first)
        if not left:
            left = right
        if not right:
            right = left
        picked: list[int] = []
        run.add(picked, run.highest_missing(left, set()))
        run.add(picked, run.highest_missing(right, set(picked)))
        run.add(picked, run.highest_missing(right, set(picked)))
        rule = list(picked)
        run.complete_last(picked, ell)
        run.fill(picked)

        def ok(s: frozenset[int], ell: int = ell) -> bool:
            if not run.edges_ok(ell, s):
                return False
            return all(not run.miss[e] or run.miss[e] & s for e in run.paths[ell])

        run.settle(ell, picked, ok, "rule", rule)
    return run.finish()


# ---------------------------------------------------------------------------
# 5/8


def select_five_colors(a: int, b: int, A: Iterable[int], B: Iterable[int], C5: Iterable[int], universe: int = 8) -> frozenset[int]:
    """Five colors containing a and b, two of A, two of B and three of C5."""
    A, B, C5 = set(A), set(B), set(C5)
    if len(A) != 3 or len(B) != 3 or len(C5) != 5 or a not in A or b not in B:
        raise ValueError("select_five_colors needs |A| = |B| = 3, |C5| = 5, a in A, b in B")
    if not (A | B | C5 | {a, b}) <= set(range(universe)):
        raise ValueError("colors outside the universe")
    X = A | B
    meet = len(A & B)
    removable = sorted(X - C5 - {a, b})
    if meet == 0:
        if len(X & C5) == 3:
            s = X - {removable[0]}
        else:
            c = removable[0] if removable else min(X - {a, b})
            s = X - {c}
    elif meet == 1:
        if len(X & C5) >= 3:
            s = set(X)
        else:
            s = X - {removable[0]}
            s.add(min(C5 - X))
    elif meet == 2:
        if len(X & C5) >= 2:
            s = X | {min(C5 - X)}
        else:
            s = X - {removable[0]}
            s |= set(sorted(C5 - X)[:2])
    else:
        s = {a, b} | set(sorted(C5 - {a, b})[:3])
        for c in sorted(A - s) + sorted(C5 - s) + list(range(universe)):
            if len(s) >= 5:
                break
            s.add(c)
    return frozenset(s)


def five_colors_ok(s: frozenset[int], a: int, b: int, A: set[int], B: set[int], C5: set[int]) -> bool:
    return len(s) == 5 and a in s and b in s and len(s & A) >= 2 and len(s & B) >= 2 and len(s & C5) >= 3


def color_5_8(tree: RootedTree) -> PartialColoring:
    """Five of eight colors per link; leaf-matching links must be vertex-disjoint."""
    g = tree.host
    lml = leaf_matching_links(g, tree.edges, tree.root)
    mate: dict[int, tuple[int, int]] = {}
    for ell in lml:
        u, v = g.ends(ell)
        if u in mate or v in mate:
            raise ColoringError("leaf-matching links are not vertex-disjoint")
        mate[u] = (v, ell)
        mate[v] = (u, ell)
    links_at: dict[int, list[int]] = {x: [] for x in range(g.n)}
    for ell in tree.links:
        u, v = g.ends(ell)
        links_at[u].append(ell)
        links_at[v].append(ell)
    run = _Run(tree, 5, 8)
    leaf_edge = {x: tree.parent_edge(x) for x in range(g.n) if tree.is_leaf(x)}

    for ell in run.order:
        a, b = g.ends(ell)
        # the leaf, if any, plays u
        first = a if tree.is_leaf(a) or not tree.is_leaf(b) else b
        _, u, v, left, right = tree.sides(ell, first)
        if not left:
            left = right
        if not right:
            right = left
        ul, vl = tree.is_leaf(u), tree.is_leaf(v)
        c1L, c3L = run.tier(left, 1), run.tier(left, 3)
        c1R, c3R = run.tier(right, 1), run.tier(right, 3)
        picked: list[int] = []
        case = ""
        if ul and vl:
            case = "3"
            eu, ev = leaf_edge[u], leaf_edge[v]
            mu, mv = run.miss[eu], run.miss[ev]
            c = None
            if mu and mv:
                common = mu & mv
                c = min(common) if common else None
            elif mv:
                c = min(mv)
            elif mu:
                c = min(mu)
            run.add(picked, c)
            run.add_from(picked, c1R)
            run.add_from(picked, c1L)
            run.add_from(picked, c3L, avoid=[c] if c is not None else ())
            run.add_from(picked, c3R)
        elif ul:
            w = mate.get(u)
            ell_w = None
            if w is not None and w[1] != ell and w[1] not in run.out.colors:
                others = [x for x in links_at[w[0]] if x != w[1]]
                colored = [x for x in others if x in run.out.colors]
                if colored:
                    ell_w = colored[0]
            if ell_w is not None and c1L and c1R and c3L and c3R:
                case = "2a"
                s = select_five_colors(min(c1L), min(c1R), c3L, c3R, run.out.colors[ell_w])
                picked = sorted(s)
            else:
                case = "2b"
                run.add_from(picked, c1L)
                run.add_from(picked, c1R)
                run.add_from(picked, (c3L or set()) - (c1L or set()), k=2)
                run.add_from(picked, (c3R or set()) - (c1R or set()), k=1)
        else:
            case = "1"
            run.add_from(picked, c1L)
            run.add_from(picked, c1R)
            run.add_from(picked, (c3L or set()) - (c1L or set()), k=1)
            run.add_from(picked, (c3R or set()) - (c1R or set()), k=1)
        for tier in (c3L, c3R):
            if tier is not None and len(set(picked) & tier) < 2:
                run.add_from(picked, tier, k=2 - len(set(picked) & tier))
        rule = list(picked)
        run.complete_last(picked, ell)
        run.fill(picked)

        pending = [x for x in lml if x != ell and x not in run.out.colors]

        def ok(s: frozenset[int], ell: int = ell, pending: list[int] = pending) -> bool:
            if not run.edges_ok(ell, s):
                return False
            on_path = set(run.paths[ell])
            for e in on_path:
                if len(run.miss[e] - s) not in (0, 1, 3, 8):
                    return False
            for lm in pending:
                x, y = g.ends(lm)
                ex, ey = leaf_edge[x], leaf_edge[y]
                mx = run.miss[ex] - s if ex in on_path else run.miss[ex]
                my = run.miss[ey] - s if ey in on_path else run.miss[ey]
                if mx and my and not (mx & my):
                    return False
            return True

        run.settle(ell, picked, ok, case, rule)
    return run.finish()


# ---------------------------------------------------------------------------
# 4/5 with vertex requirements


def color_4_5_vertex(tree: RootedTree) -> PartialColoring:
    """Four of five colors on the subdivided instance of ``tree``.

    Each color class then gives a 2-vertex-connected subgraph in which
    every vertex has degree at least three, provided the host is 4-regular
    and 4-edge-connected.
    """
    g = tree.host
    r = tree.root
    if tree.tree_degree(r) != 1:
        raise ColoringError("root must be a tree leaf")
    if any(tree.tree_degree(v) >= 4 for v in range(g.n)):
        raise ColoringError("tree has a vertex of degree four")
    sub = subdivide(tree)
    t2 = sub.tree
    run = _Run(t2, 4, 5)
    run.out.subdivision = sub
    recv = {v: [0] * 5 for v in range(g.n)}
    todo = {v: 0 for v in range(g.n)}
    for ell in t2.links:
        for x in set(sub.attach[ell]):
            todo[x] += 1
    need = {v: {1: 2, 2: 1}.get(tree.tree_degree(v), 0) for v in range(g.n)}

    def vertex_pick(picked: list[int], x: int) -> None:
        for c in range(5):
            if recv[x][c] == 0 and c not in picked:
                run.add(picked, c)
                return
        for c in range(5):
            if recv[x][c] == 1 and c not in picked:
                run.add(picked, c)
                return

    for ell in run.order:
        u, v = sub.attach[ell]
        # the first G' endpoint of a subdivided link is the one hooked for u
        hu, _ = sub.graph.ends(ell)
        _, _, _, left, right = t2.sides(ell, hu)
        picked: list[int] = []
        vertex_pick(picked, u)
        vertex_pick(picked, v)
        c = run.highest_missing(left, set(picked))
        if c is None:
            c = next((k for k in range(5) if recv[u][k] == 1 and k not in picked), None)
        run.add(picked, c)
        c = run.highest_missing(right, set(picked))
        if c is None:
            c = next((k for k in range(5) if recv[v][k] == 1 and k not in picked), None)
        run.add(picked, c)
        rule = list(picked)
        run.complete_last(picked, ell)
        run.fill(picked)

        def ok(s: frozenset[int], ell: int = ell, ends: tuple[int, int] = (u, v)) -> bool:
            if not run.edges_ok(ell, s):
                return False
            for x in set(ends):
                rem = todo[x] - 1
                short = 0
                for k in range(5):
                    have = recv[x][k] + (1 if k in s else 0)
                    gap = max(0, need[x] - have)
                    if gap > rem:
                        return False
                    short += gap
                if short > 4 * rem:
                    return False
            return True

        s = run.settle(ell, picked, ok, "rule", rule)
        for x in set((u, v)):
            todo[x] -= 1
            for k in s:
                recv[x][k] += 1
    out = run.finish()
    for x in range(g.n):
        if any(recv[x][k] < need[x] for k in range(5)):
            raise ColoringError(f"vertex {x} did not receive every color often enough", out.trace)
    return out


# ---------------------------------------------------------------------------
# audit and conversion


def verify_admissible(coloring: PartialColoring) -> tuple[bool, str | None]:
    """Replay the coloring in order and check every tree edge ends with all colors."""
    t = coloring.tree
    depth_seen = -1
    paths, _ = lca_cov(t)
    miss = {e: set(range(coloring.q)) for e in t.edges}
    if set(coloring.order) != set(t.links) or set(coloring.colors) != set(t.links):
        return False, "not every link is colored"
    for step, ell in enumerate(coloring.order):
        u, v = t.host.ends(ell)
        d = t.depth[t.lca(u, v)]
        if d < depth_seen:
            return False, f"step {step}: link {ell} breaks the LCA order"
        depth_seen = d
        cs = coloring.colors[ell]
        if len(cs) != coloring.p or not cs <= set(range(coloring.q)):
            return False, f"step {step}: link {ell} does not carry {coloring.p} valid colors"
        for e in paths[ell]:
            miss[e] -= cs
    for e in sorted(miss):
        if miss[e]:
            return False, f"tree edge {e} misses {_fmt(miss[e])}"
    return True, None


def classes_to_combination(coloring: PartialColoring, base: RootedTree | None = None, weight: Fraction = Fraction(1)) -> ConvexCombination:
    """The q subgraphs T + L_c, each at ``weight / q``.

    For a subdivided coloring pass the original tree as ``base``.
    """
    ok, why = verify_admissible(coloring)
    if not ok:
        raise ColoringError(f"coloring is not admissible: {why}", coloring.trace)
    t = base if base is not None else coloring.tree
    if coloring.subdivision is not None and base is None:
        raise GraphError("subdivided coloring needs the original tree")
    terms = []
    for c in range(coloring.q):
        terms.append((weight / coloring.q, member({**{e: 1 for e in t.edges}, **{ell: 1 for ell in coloring.class_links(c)}})))
    return ConvexCombination(t.host, terms)
