"""Exact convex decompositions: cycle covers, rainbow 1-trees and their spanning trees."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

import networkx as nx

from .graphs import GraphError, Member, Multigraph, member
from .lp import Infeasible, column_generation
from .matroids import intersection, one_tree_matroid, partition

log = logging.getLogger(__name__)


class DecompositionError(RuntimeError):
    pass


@dataclass
class ConvexCombination:
    host: Multigraph
    terms: list[tuple[Fraction, Member]]
    subgraph: bool = True

    def total(self) -> Fraction:
        return sum((lam for lam, _ in self.terms), Fraction(0))

    def aggregate(self) -> list[Fraction]:
        agg = [Fraction(0)] * self.host.m
        for lam, mem in self.terms:
            for i, k in mem:
                agg[i] += lam * k
        return agg

    def normalized(self) -> "ConvexCombination":
        """Merge repeated members, drop zero weights, sort by member."""
        acc: dict[Member, Fraction] = {}
        for lam, mem in self.terms:
            if lam:
                acc[mem] = acc.get(mem, Fraction(0)) + lam
        return ConvexCombination(self.host, sorted(((v, k) for k, v in acc.items() if v), key=lambda t: t[1]), self.subgraph)

    def lift(self, host: Multigraph, edge_map: Sequence[int]) -> "ConvexCombination":
        """Rename edges through ``edge_map`` (piece index -> host index)."""
        terms = []
        for lam, mem in self.terms:
            terms.append((lam, member({edge_map[i]: k for i, k in mem})))
        return ConvexCombination(host, terms, self.subgraph)

    def validate(self) -> None:
        if self.total() != 1:
            raise DecompositionError(f"multipliers sum to {self.total()}")
        cap = 1 if self.subgraph else 2
        for lam, mem in self.terms:
            if lam <= 0:
                raise DecompositionError("non-positive multiplier")
            for i, k in mem:
                if not (0 <= i < self.host.m) or not (1 <= k <= cap):
                    raise DecompositionError(f"bad member entry {(i, k)}")


def mix(host: Multigraph, parts: Iterable[tuple[Fraction, ConvexCombination]], subgraph: bool = True) -> ConvexCombination:
    terms = []
    for w, comb in parts:
        terms.extend((w * lam, mem) for lam, mem in comb.terms)
    return ConvexCombination(host, terms, subgraph).normalized()


# ---------------------------------------------------------------------------
# LP membership


def _scale(values: Iterable[Fraction]) -> int:
    d = 1
    for v in values:
        d = math.lcm(d, Fraction(v).denominator)
    return d


def check_in_LP(g: Multigraph, x: Sequence[Fraction]) -> tuple[bool, frozenset[int] | None]:
    """Whether ``x(delta(S)) >= 2`` for all proper S; else a violated side."""
    for i, v in enumerate(x):
        if not (0 <= v <= 2):
            raise GraphError(f"value {v} on edge {g.edges[i].label!r} is outside [0, 2]")
    if g.n <= 1:
        return True, None
    scale = _scale(x)
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    for i, e in enumerate(g.edges):
        if e.u == e.v:
            continue
        w = h.get_edge_data(e.u, e.v, {"weight": 0})["weight"]
        h.add_edge(e.u, e.v, weight=w + int(x[i] * scale))
    comps = list(nx.connected_components(h))
    if len(comps) > 1:
        return False, frozenset(min(comps, key=min))
    value, (side, _) = nx.stoer_wagner(h)
    if value < 2 * scale:
        return False, frozenset(side)
    return True, None


# ---------------------------------------------------------------------------
# cycle covers


def _check_coloring(g: Multigraph, coloring: Mapping[int, int]) -> None:
    for v in range(g.n):
        seen = [coloring.get(i) for i in g.incident(v)]
        if len(seen) != 3 or None in seen or len(set(seen)) != 3:
            raise GraphError(f"edge coloring is not proper at vertex {v}")


def max_weight_perfect_matching(g: Multigraph, weight: Sequence[Fraction]) -> frozenset[int] | None:
    """Blossom matching on integer-scaled weights; parallel edges keep the best copy."""
    scale = _scale(weight)
    ints = [int(w * scale) for w in weight]
    shift = 1 + sum(abs(w) for w in ints)
    best: dict[tuple[int, int], int] = {}
    for i, e in enumerate(g.edges):
        if e.u == e.v:
            continue
        key = (min(e.u, e.v), max(e.u, e.v))
        if key not in best or ints[i] > ints[best[key]]:
            best[key] = i
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    for (u, v), i in sorted(best.items()):
        h.add_edge(u, v, weight=ints[i] + shift, idx=i)
    mate = nx.max_weight_matching(h, maxcardinality=True)
    if 2 * len(mate) != g.n:
        return None
    return frozenset(h[u][v]["idx"] for u, v in mate)


def decompose_cycle_covers(g: Multigraph, coloring: Mapping[int, int] | None = None) -> ConvexCombination:
    """Cycle covers whose combination is exactly 2/3 on every edge."""
    if not g.is_cubic():
        raise GraphError("cycle covers need a cubic graph")
    if coloring is not None:
        _check_coloring(g, coloring)
        terms = []
        for c in sorted(set(coloring.values())):
            terms.append((Fraction(1, 3), member(i for i in range(g.m) if coloring[i] != c)))
        return ConvexCombination(g, terms).normalized()

    third = [Fraction(1, 3)] * g.m

    def price(pi: list[Fraction]):
        pm = max_weight_perfect_matching(g, pi[:-1])
        if pm is None:
            raise DecompositionError("no perfect matching in pricing step")
        return (tuple(sorted(pm)), tuple(1 if i in pm else 0 for i in range(g.m)))

    try:
        sol = column_generation(third, price)
    except Infeasible as exc:
        raise DecompositionError(f"2/3 vector not decomposed: {exc}") from exc
    terms = [(lam, member(i for i in range(g.m) if i not in set(key))) for lam, key, _ in sol]
    return ConvexCombination(g, terms).normalized()


def cover_cycles(g: Multigraph, cover: Iterable[int]) -> list[tuple[list[int], list[int]]]:
    """Split a 2-regular edge set into cycles ``(vertices, edges)``.

    Edge ``edges[j]`` joins ``vertices[j]`` and ``vertices[j+1]`` (cyclically);
    each walk starts at its lowest vertex along its lower-indexed edge.
    """
    cov = set(cover)
    at: dict[int, list[int]] = {}
    for i in sorted(cov):
        u, v = g.ends(i)
        at.setdefault(u, []).append(i)
        at.setdefault(v, []).append(i)
    if any(len(x) != 2 for x in at.values()):
        raise GraphError("edge set is not 2-regular")
    used: set[int] = set()
    out = []
    for start in sorted(at):
        if at[start][0] in used:
            continue
        verts, edges = [start], []
        cur, e = start, at[start][0]
        while e not in used:
            used.add(e)
            edges.append(e)
            cur = g.other(e, cur)
            nxt = [f for f in at[cur] if f not in used]
            if not nxt:
                break
            verts.append(cur)
            e = nxt[0]
        out.append((verts, edges))
    return out


# ---------------------------------------------------------------------------
# half-edge pairings


class PairingError(DecompositionError):
    pass


@dataclass(frozen=True)
class HalfEdgePairing:
    pairs: tuple[tuple[int, int], ...]
    rainbow: frozenset[int]
    leftovers: tuple[int, ...] = ()
    root: int | None = None

    def partner(self) -> dict[int, int]:
        out = {}
        for a, b in self.pairs:
            out[a], out[b] = b, a
        return out


def _cycle_pairings(verts: list[int], edges: list[int]) -> Iterable[tuple[list[tuple[int, int]], list[int], set[int]]]:
    """Candidate pairings of one cycle: fewest leftovers first, then lexicographic."""
    m = len(edges)
    if m == 2:
        # a digon: both edges meet at both vertices
        yield [(edges[0], edges[1])], [], {verts[1]}
        yield [(edges[0], edges[1])], [], {verts[0]}
        return
    for t in range(m % 2, m // 2 + 1, 2):
        if t == 0:
            for off in (0, 1):
                pairs, rb = [], set()
                for j in range(off, off + m, 2):
                    pairs.append((edges[j % m], edges[(j + 1) % m]))
                    rb.add(verts[(j + 1) % m])
                yield pairs, [], rb
            continue
        for left in combinations(range(m), t):
            if any((b - a) in (1, m - 1) for a, b in combinations(left, 2)):
                continue
            gaps = [(left[(k + 1) % t] - left[k] - 1) % m for k in range(t)]
            if t == 1:
                gaps = [m - 1]
            if any(g % 2 for g in gaps):
                continue
            pairs, rb = [], set()
            for k in range(t):
                j = left[k] + 1
                for _ in range(gaps[k] // 2):
                    pairs.append((edges[j % m], edges[(j + 1) % m]))
                    rb.add(verts[(j + 1) % m])
                    j += 2
            yield pairs, [edges[j] for j in left], rb


def pair_half_edges(
    g: Multigraph,
    cover: Iterable[int],
    root: int,
    avoid: Iterable[int] = (),
    require_root: bool = True,
) -> HalfEdgePairing:
    """Pair the edges of every cycle into adjacent pairs.

    ``root`` must end up a rainbow vertex (if ``require_root``) and no vertex
    of ``avoid`` may be one.  Cycles of odd length leave one edge over; more
    leftovers are used only when the constraints demand it, and leftovers
    are never adjacent.  Leftovers are then paired with each other in index
    order.
    """
    bad = set(avoid)
    pairs: list[tuple[int, int]] = []
    rainbow: set[int] = set()
    leftovers: list[int] = []
    for verts, edges in cover_cycles(g, cover):
        need_root = require_root and root in verts
        for cand, left, rb in _cycle_pairings(verts, edges):
            if need_root and root not in rb:
                continue
            if rb & bad:
                continue
            pairs.extend(cand)
            rainbow |= rb
            leftovers.extend(left)
            break
        else:
            raise PairingError(f"no admissible pairing on the cycle through {verts}")
    leftovers.sort()
    if len(leftovers) % 2:
        raise PairingError("odd number of leftover edges")
    for a, b in zip(leftovers[0::2], leftovers[1::2]):
        pairs.append((a, b))
    return HalfEdgePairing(tuple(pairs), frozenset(rainbow), tuple(leftovers), root)


# ---------------------------------------------------------------------------
# rainbow 1-trees


def is_one_tree(g: Multigraph, edges: Iterable[int], root: int) -> bool:
    es = list(edges)
    if len(es) != g.n:
        return False
    at_root = [i for i in es if root in g.ends(i)]
    if len(at_root) != 2:
        return False
    ground = [i for i in es if i not in at_root]
    from .matroids import is_forest

    return is_forest(g, ground) and len(ground) == g.n - 2


def rainbow_one_tree_decompose(
    g: Multigraph,
    y: Sequence[Fraction],
    pairing: HalfEdgePairing,
    root: int,
) -> ConvexCombination:
    """Write ``y`` exactly as a combination of 1-trees using one edge per pair."""
    ground = [i for i in range(g.m) if y[i] > 0]
    pos = {e: j for j, e in enumerate(ground)}
    groups = list(range(len(ground)))
    for k, (a, b) in enumerate(pairing.pairs):
        groups[pos[a]] = len(ground) + k
        groups[pos[b]] = len(ground) + k
    m1 = one_tree_matroid(g, ground, root)
    m2 = partition(groups)

    def price(pi: list[Fraction]):
        w = [pi[e] for e in ground]
        got = intersection(len(ground), m1, m2, w, want=g.n)
        if got is None:
            raise DecompositionError("no rainbow 1-tree exists for this pairing")
        tree = sorted(ground[j] for j in got)
        return tuple(tree), tuple(1 if i in set(tree) else 0 for i in range(g.m))

    try:
        sol = column_generation(list(y), price)
    except Infeasible as exc:
        raise DecompositionError(f"rainbow decomposition failed: {exc}") from exc
    comb = ConvexCombination(g, [(lam, member(key)) for lam, key, _ in sol]).normalized()
    for _, mem in comb.terms:
        have = {i for i, _ in mem}
        for a, b in pairing.pairs:
            if (a in have) == (b in have):
                raise DecompositionError(f"member breaks the pair rule on {(a, b)}")
    return comb


def rainbow_by_enumeration(g: Multigraph, y: Sequence[Fraction], pairing: HalfEdgePairing, root: int) -> ConvexCombination:
    """Reference decomposition over all rainbow 1-trees (small instances only)."""
    from .lp import solve_over

    forced = [i for i in range(g.m) if y[i] == 1]
    choice = list(pairing.pairs)
    cols = []
    for bits in range(1 << len(choice)):
        es = list(forced) + [choice[k][(bits >> k) & 1] for k in range(len(choice))]
        if is_one_tree(g, es, root):
            cols.append((tuple(sorted(es)), tuple(1 if i in es else 0 for i in range(g.m))))
    if not cols:
        raise DecompositionError("no rainbow 1-tree")
    sol = solve_over(list(y), cols)
    return ConvexCombination(g, [(lam, member(key)) for lam, key, _ in sol]).normalized()


# ---------------------------------------------------------------------------
# 1-trees to spanning trees


def leaf_matching_links(g: Multigraph, tree: Iterable[int], root: int) -> list[int]:
    t = set(tree)
    deg = [0] * g.n
    for i in t:
        u, v = g.ends(i)
        deg[u] += 1
        deg[v] += 1
    out = []
    for i in range(g.m):
        if i in t:
            continue
        u, v = g.ends(i)
        if u != v and u != root and v != root and deg[u] == 1 and deg[v] == 1:
            out.append(i)
    return out


def vertex_disjoint(g: Multigraph, links: Iterable[int]) -> bool:
    seen: set[int] = set()
    for i in links:
        u, v = g.ends(i)
        if u in seen or v in seen:
            return False
        seen.update((u, v))
    return True


@dataclass
class TreeCombination:
    """Spanning trees with their weights plus the leaf-matching report."""

    host: Multigraph
    root: int
    trees: list[tuple[Fraction, frozenset[int]]]
    leaf_matching: dict[frozenset[int], list[int]] = field(default_factory=dict)

    def aggregate(self) -> list[Fraction]:
        agg = [Fraction(0)] * self.host.m
        for lam, t in self.trees:
            for i in t:
                agg[i] += lam
        return agg


def one_trees_to_spanning_trees(
    comb: ConvexCombination,
    root: int,
    half: Iterable[int] = (),
    policy: str = "half-edge",
    e_star: int | None = None,
    e_prime: int | None = None,
) -> TreeCombination:
    """Drop one root edge from every 1-tree.

    ``half-edge``: remove the tree's edge at ``root`` that lies in ``half``.
    ``rainbow3``: remove ``e_star`` when present, otherwise ``e_prime``.
    """
    g = comb.host
    halves = set(half)
    acc: dict[frozenset[int], Fraction] = {}
    for lam, mem in comb.terms:
        es = {i for i, _ in mem}
        at_root = sorted(i for i in es if root in g.ends(i))
        if len(at_root) != 2:
            raise DecompositionError("root does not have degree two in a member")
        if policy == "half-edge":
            drop = [i for i in at_root if i in halves]
            if len(drop) != 1:
                raise DecompositionError("expected exactly one half-edge at the root")
            cut = drop[0]
        elif policy == "rainbow3":
            if e_star in es:
                cut = e_star
            elif e_prime in es:
                cut = e_prime
            else:
                raise DecompositionError("member holds neither special edge")
            if cut not in at_root:
                raise DecompositionError("special edge is not at the root")
        else:
            raise ValueError(f"unknown policy {policy!r}")
        t = frozenset(es - {cut})
        acc[t] = acc.get(t, Fraction(0)) + lam
    trees = sorted(acc.items(), key=lambda kv: sorted(kv[0]))
    out = TreeCombination(g, root, [(lam, t) for t, lam in trees])
    for _, t in out.trees:
        out.leaf_matching[t] = leaf_matching_links(g, t, root)
    return out


# ---------------------------------------------------------------------------
# adjusting a combination to exact targets


def pad_to_target(comb: ConvexCombination, target: Sequence[Fraction], edges: Iterable[int]) -> ConvexCombination:
    """Add an edge to members that lack it until its aggregate equals the target.

    Adding edges keeps members 2-edge-connected.  Members are split where a
    partial amount is needed.
    """
    terms = [(lam, dict(mem)) for lam, mem in comb.terms]
    cap = 1 if comb.subgraph else 2
    agg = comb.aggregate()
    for e in sorted(set(edges)):
        need = Fraction(target[e]) - agg[e]
        if need < 0:
            raise DecompositionError(f"aggregate on edge {e} already exceeds the target")
        new_terms = []
        for lam, mem in terms:
            if need > 0 and mem.get(e, 0) < cap:
                take = min(lam, need)
                bumped = dict(mem)
                bumped[e] = bumped.get(e, 0) + 1
                new_terms.append((take, bumped))
                if lam > take:
                    new_terms.append((lam - take, mem))
                need -= take
            else:
                new_terms.append((lam, mem))
        if need > 0:
            raise DecompositionError(f"cannot raise edge {e} to its target")
        terms = new_terms
    return ConvexCombination(comb.host, [(lam, member(m)) for lam, m in terms], comb.subgraph).normalized()
