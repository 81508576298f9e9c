"""Multigraphs with stable edge indices, edge vectors and connectivity predicates.

Edges are identified by their index in the host graph.  Labels only matter
for reading and writing files, so every ordering decision in the package
uses the index.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, NamedTuple, Sequence

import networkx as nx


class Edge(NamedTuple):
    u: int
    v: int
    mult: int
    label: str


class GraphError(ValueError):
    """Raised for malformed graphs or violated preconditions."""


@dataclass(frozen=True)
class Multigraph:
    n: int
    edges: tuple[Edge, ...]
    _inc: tuple[tuple[int, ...], ...] = field(default=(), repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.n < 0:
            raise GraphError("negative vertex count")
        inc: list[list[int]] = [[] for _ in range(self.n)]
        seen: set[str] = set()
        for i, e in enumerate(self.edges):
            if not (0 <= e.u < self.n and 0 <= e.v < self.n):
                raise GraphError(f"edge {e.label!r} has an endpoint out of range")
            if e.mult < 1:
                raise GraphError(f"edge {e.label!r} has multiplicity {e.mult}")
            if e.label in seen:
                raise GraphError(f"duplicate edge label {e.label!r}")
            seen.add(e.label)
            inc[e.u].append(i)
            if e.v != e.u:
                inc[e.v].append(i)
        object.__setattr__(self, "_inc", tuple(tuple(x) for x in inc))

    @classmethod
    def from_pairs(
        cls,
        n: int,
        pairs: Iterable[Sequence[int]],
        labels: Sequence[str] | None = None,
    ) -> "Multigraph":
        edges = []
        for i, p in enumerate(pairs):
            u, v = int(p[0]), int(p[1])
            mult = int(p[2]) if len(p) > 2 else 1
            label = labels[i] if labels is not None else f"e{i}"
            edges.append(Edge(u, v, mult, label))
        return cls(n, tuple(edges))

    @property
    def m(self) -> int:
        return len(self.edges)

    def incident(self, v: int) -> tuple[int, ...]:
        return self._inc[v]

    def degree(self, v: int) -> int:
        d = 0
        for i in self._inc[v]:
            e = self.edges[i]
            d += 2 * e.mult if e.u == e.v else e.mult
        return d

    def other(self, i: int, v: int) -> int:
        e = self.edges[i]
        if e.u == v:
            return e.v
        if e.v == v:
            return e.u
        raise GraphError(f"vertex {v} is not an endpoint of edge {i}")

    def ends(self, i: int) -> tuple[int, int]:
        e = self.edges[i]
        return e.u, e.v

    def label_index(self) -> dict[str, int]:
        return {e.label: i for i, e in enumerate(self.edges)}

    def is_cubic(self) -> bool:
        return all(self.degree(v) == 3 for v in range(self.n))

    def has_loops(self) -> bool:
        return any(e.u == e.v for e in self.edges)

    def is_simple(self) -> bool:
        if self.has_loops() or any(e.mult > 1 for e in self.edges):
            return False
        keys = {(min(e.u, e.v), max(e.u, e.v)) for e in self.edges}
        return len(keys) == self.m

    def with_multiplicities(self, member: Mapping[int, int]) -> "Multigraph":
        """Spanning subgraph keeping edge ``i`` with multiplicity ``member[i]``."""
        edges = []
        for i, k in sorted(member.items()):
            if k > 0:
                e = self.edges[i]
                edges.append(Edge(e.u, e.v, k, e.label))
        return Multigraph(self.n, tuple(edges))

    def to_nx(self, member: Mapping[int, int] | None = None) -> nx.MultiGraph:
        """Multigraph with one networkx edge per copy, keyed ``(index, copy)``."""
        g = nx.MultiGraph()
        g.add_nodes_from(range(self.n))
        items = member.items() if member is not None else ((i, e.mult) for i, e in enumerate(self.edges))
        for i, k in items:
            e = self.edges[i]
            if e.u == e.v:
                continue
            for c in range(k):
                g.add_edge(e.u, e.v, key=(i, c))
        return g


# ---------------------------------------------------------------------------
# members and vectors


Member = tuple[tuple[int, int], ...]


def member(items: Mapping[int, int] | Iterable[int]) -> Member:
    """Canonical hashable form of an edge multiset."""
    if isinstance(items, Mapping):
        return tuple(sorted((int(i), int(k)) for i, k in items.items() if k > 0))
    counts: dict[int, int] = {}
    for i in items:
        counts[i] = counts.get(i, 0) + 1
    return tuple(sorted(counts.items()))


def member_dict(m: Member) -> dict[int, int]:
    return dict(m)


@dataclass(frozen=True)
class EdgeVector:
    host: Multigraph
    values: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.values) != self.host.m:
            raise GraphError("vector length does not match edge count")
        object.__setattr__(self, "values", tuple(Fraction(x) for x in self.values))

    @classmethod
    def everywhere(cls, host: Multigraph, beta: Fraction | int | str) -> "EdgeVector":
        return cls(host, tuple(Fraction(beta) for _ in host.edges))

    def __getitem__(self, i: int) -> Fraction:
        return self.values[i]

    def __len__(self) -> int:
        return len(self.values)

    def by_label(self) -> dict[str, Fraction]:
        return {e.label: x for e, x in zip(self.host.edges, self.values)}

    def support(self) -> list[int]:
        return [i for i, x in enumerate(self.values) if x != 0]

    def scaled(self, factor: Fraction | int) -> "EdgeVector":
        f = Fraction(factor)
        return EdgeVector(self.host, tuple(f * x for x in self.values))


# ---------------------------------------------------------------------------
# connectivity


def components(g: Multigraph, member: Mapping[int, int] | None = None) -> list[set[int]]:
    return [set(c) for c in nx.connected_components(g.to_nx(member))]


def is_connected(g: Multigraph, member: Mapping[int, int] | None = None) -> bool:
    if g.n == 0:
        return False
    return nx.is_connected(g.to_nx(member))


def is_2ec(g: Multigraph, member: Mapping[int, int] | None = None) -> bool:
    """Spanning, connected and bridgeless.  A single vertex counts as 2EC."""
    if g.n == 1:
        return True
    h = g.to_nx(member)
    if not nx.is_connected(h):
        return False
    return not nx.has_bridges(h)


def is_2vc(g: Multigraph, member: Mapping[int, int] | None = None) -> bool:
    """2-vertex-connected spanning subgraph.

    On two vertices a doubled edge counts as 2VC; a single vertex is 2VC.
    """
    if g.n == 1:
        return True
    h = g.to_nx(member)
    if not nx.is_connected(h):
        return False
    if g.n == 2:
        return h.number_of_edges() >= 2
    return not any(True for _ in nx.articulation_points(nx.Graph(h)))


def cut_size(g: Multigraph, side: Iterable[int], member: Mapping[int, int] | None = None) -> int:
    s = set(side)
    total = 0
    items = member.items() if member is not None else ((i, e.mult) for i, e in enumerate(g.edges))
    for i, k in items:
        e = g.edges[i]
        if (e.u in s) != (e.v in s):
            total += k
    return total


def delta(g: Multigraph, side: Iterable[int]) -> list[int]:
    s = set(side)
    return [i for i, e in enumerate(g.edges) if (e.u in s) != (e.v in s)]


def edge_connectivity(g: Multigraph) -> int:
    if g.n <= 1:
        return 0
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    for e in g.edges:
        if e.u == e.v:
            continue
        w = h.get_edge_data(e.u, e.v, {"weight": 0})["weight"]
        h.add_edge(e.u, e.v, weight=w + e.mult)
    if not nx.is_connected(h):
        return 0
    value, _ = nx.stoer_wagner(h)
    return int(value)


def _small_cuts(g: Multigraph, k: int) -> Iterable[tuple[int, ...]]:
    """Edge index subsets of total multiplicity at most ``k`` (loops excluded)."""
    idx = [i for i, e in enumerate(g.edges) if e.u != e.v and e.mult <= k]
    for size in range(1, k + 1):
        for sub in combinations(idx, size):
            if sum(g.edges[i].mult for i in sub) <= k:
                yield sub


def _comps_without(g: Multigraph, removed: Iterable[int]) -> list[set[int]]:
    drop = set(removed)
    keep = {i: e.mult for i, e in enumerate(g.edges) if i not in drop}
    return components(g, keep)


def nontrivial_cuts(g: Multigraph, k: int) -> list[frozenset[int]]:
    """Vertex sets S with 2 <= |S| <= n-2 and |delta(S)| <= k.

    Each cut is reported once, as the side not containing the highest vertex.
    """
    found: set[frozenset[int]] = set()
    top = g.n - 1
    for sub in _small_cuts(g, k):
        comps = _comps_without(g, sub)
        if len(comps) < 2:
            continue
        # any union of components is a side whose cut lies inside ``sub``
        comps.sort(key=min)
        for r in range(1, len(comps)):
            for pick in combinations(range(len(comps)), r):
                s = set().union(*(comps[j] for j in pick))
                if top in s:
                    s = set(range(g.n)) - s
                if 2 <= len(s) <= g.n - 2 and cut_size(g, s) <= k:
                    found.add(frozenset(s))
    return sorted(found, key=lambda s: (len(s), sorted(s)))


def is_essentially_4ec(g: Multigraph) -> bool:
    return edge_connectivity(g) >= 3 and not nontrivial_cuts(g, 3)


def proper_3cuts(g: Multigraph) -> list[frozenset[int]]:
    """Proper 3-cuts of a 3EC graph, each given by its smaller side.

    Ties on size are broken towards the side holding the lowest vertex.
    """
    if not g.is_cubic():
        raise GraphError("proper 3-cuts are defined here for cubic graphs only")
    out: set[frozenset[int]] = set()
    everything = set(range(g.n))
    for s in nontrivial_cuts(g, 3):
        if cut_size(g, s) != 3:
            continue
        t = everything - s
        if len(t) < len(s) or (len(t) == len(s) and min(t) < min(s)):
            s = frozenset(t)
        out.add(frozenset(s))
    return sorted(out, key=lambda s: (len(s), sorted(s)))


def two_edge_cuts(g: Multigraph) -> list[tuple[int, int]]:
    """All pairs of distinct edges whose removal disconnects ``g``."""
    out = []
    idx = [i for i, e in enumerate(g.edges) if e.u != e.v]
    for a, b in combinations(idx, 2):
        if g.edges[a].mult + g.edges[b].mult > 2:
            continue
        if len(_comps_without(g, (a, b))) > 1:
            out.append((a, b))
    return out


# ---------------------------------------------------------------------------
# contraction


@dataclass(frozen=True)
class Piece:
    """Graph obtained by contracting every component of G - S to a vertex.

    ``edge_map[j]`` is the host index of piece edge ``j``, ``vertex_map`` sends
    kept host vertices to piece vertices and ``contracted`` lists the new
    vertices standing for the removed components.
    """

    graph: Multigraph
    edge_map: tuple[int, ...]
    vertex_map: dict[int, int]
    contracted: tuple[int, ...]


def contract_piece(g: Multigraph, keep: Iterable[int]) -> Piece:
    s = sorted(set(keep))
    vmap = {v: j for j, v in enumerate(s)}
    rest = set(range(g.n)) - set(s)
    inner = {i: e.mult for i, e in enumerate(g.edges) if e.u in rest and e.v in rest}
    comps = [c for c in components(g, inner) if c <= rest]
    comps.sort(key=min)
    where = {}
    for j, c in enumerate(comps):
        for v in c:
            where[v] = len(s) + j
    full = dict(vmap)
    full.update(where)
    edges, emap = [], []
    for i, e in enumerate(g.edges):
        if e.u in rest and e.v in rest:
            continue
        edges.append(Edge(full[e.u], full[e.v], e.mult, e.label))
        emap.append(i)
    piece = Multigraph(len(s) + len(comps), tuple(edges))
    return Piece(piece, tuple(emap), vmap, tuple(range(len(s), len(s) + len(comps))))
