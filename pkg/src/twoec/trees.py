"""Rooted spanning trees, link paths and the edge subdivision used for vertex coloring."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .graphs import Edge, GraphError, Multigraph


@dataclass
class RootedTree:
    """Spanning tree ``edges`` of ``host`` hanging from ``root``.

    Edges of the host outside the tree are the links.
    """

    host: Multigraph
    edges: frozenset[int]
    root: int
    parent: dict[int, tuple[int, int]] = field(default_factory=dict)
    depth: dict[int, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.edges = frozenset(self.edges)
        if len(self.edges) != self.host.n - 1:
            raise GraphError("tree has the wrong number of edges")
        adj: dict[int, list[tuple[int, int]]] = {v: [] for v in range(self.host.n)}
        for i in sorted(self.edges):
            u, v = self.host.ends(i)
            if u == v:
                raise GraphError("tree contains a loop")
            adj[u].append((v, i))
            adj[v].append((u, i))
        self.depth = {self.root: 0}
        self.parent = {}
        stack = [self.root]
        while stack:
            x = stack.pop()
            for y, i in adj[x]:
                if y not in self.depth:
                    self.depth[y] = self.depth[x] + 1
                    self.parent[y] = (x, i)
                    stack.append(y)
        if len(self.depth) != self.host.n:
            raise GraphError("tree edges do not span the host")
        self._tdeg = {v: len(adj[v]) for v in adj}

    @property
    def links(self) -> list[int]:
        return [i for i in range(self.host.m) if i not in self.edges]

    def tree_degree(self, v: int) -> int:
        return self._tdeg[v]

    def is_leaf(self, v: int) -> bool:
        """Degree-one tree vertex other than the root."""
        return v != self.root and self._tdeg[v] == 1

    def parent_edge(self, v: int) -> int:
        return self.parent[v][1]

    def lower(self, i: int) -> int:
        """Endpoint of tree edge ``i`` farther from the root."""
        u, v = self.host.ends(i)
        return u if self.depth[u] > self.depth[v] else v

    def lca(self, u: int, v: int) -> int:
        while self.depth[u] > self.depth[v]:
            u = self.parent[u][0]
        while self.depth[v] > self.depth[u]:
            v = self.parent[v][0]
        while u != v:
            u = self.parent[u][0]
            v = self.parent[v][0]
        return u

    def climb(self, s: int, x: int) -> list[int]:
        """Tree edges on the s-x path ordered from ``s`` downwards; ``s`` is an ancestor."""
        out = []
        while x != s:
            p, i = self.parent[x]
            out.append(i)
            x = p
        out.reverse()
        return out

    def sides(self, link: int, first: int | None = None) -> tuple[int, int, int, list[int], list[int]]:
        """Split the path of a link at its LCA.

        Returns ``(s, u, v, left, right)`` where ``left`` is the s-u path and
        ``right`` the s-v path, both listed top down.  ``first`` picks which
        endpoint plays ``u``.
        """
        a, b = self.host.ends(link)
        if first is not None and first == b:
            a, b = b, a
        s = self.lca(a, b)
        return s, a, b, self.climb(s, a), self.climb(s, b)

    def path(self, link: int) -> list[int]:
        _, _, _, left, right = self.sides(link)
        return left + right


def lca_cov(tree: RootedTree, links: Iterable[int] | None = None) -> tuple[dict[int, list[int]], dict[int, list[int]]]:
    """Path of every link and, for every tree edge, the links covering it."""
    paths: dict[int, list[int]] = {}
    cov: dict[int, list[int]] = {i: [] for i in sorted(tree.edges)}
    for ell in (tree.links if links is None else links):
        p = tree.path(ell)
        paths[ell] = p
        for e in p:
            cov[e].append(ell)
    return paths, cov


@dataclass
class Subdivision:
    """Every tree edge ``e`` split by a new vertex ``v_e``.

    A link keeps an endpoint that is the root or a tree leaf.  An internal
    endpoint ``u`` is replaced by ``v_e`` for the edge ``e`` of the link path
    at ``u``.  ``attach`` gives the original endpoints of each new link.
    """

    graph: Multigraph
    tree: RootedTree
    split_vertex: dict[int, int]
    link_of: dict[int, int]
    attach: dict[int, tuple[int, int]]


def subdivide(tree: RootedTree) -> Subdivision:
    g = tree.host
    r = tree.root
    if tree.tree_degree(r) != 1:
        raise GraphError("the tree must be rooted at one of its leaves")
    tree_edges = sorted(tree.edges)
    split = {e: g.n + k for k, e in enumerate(tree_edges)}
    edges: list[Edge] = []
    tedges: list[int] = []
    for e in tree_edges:
        u, v = g.ends(e)
        w = split[e]
        lab = g.edges[e].label
        tedges.append(len(edges))
        edges.append(Edge(u, w, 1, f"{lab}/a"))
        tedges.append(len(edges))
        edges.append(Edge(w, v, 1, f"{lab}/b"))

    def hook(x: int, side: list[int], other: list[int]) -> int:
        if x == r or tree.tree_degree(x) == 1:
            return x
        if side:
            return split[side[-1]]
        return split[other[0]]

    link_of, attach = {}, {}
    for ell in tree.links:
        _, u, v, left, right = tree.sides(ell)
        if u == v:
            raise GraphError("loops cannot be subdivided")
        j = len(edges)
        edges.append(Edge(hook(u, left, right), hook(v, right, left), g.edges[ell].mult, g.edges[ell].label))
        link_of[j] = ell
        attach[j] = (u, v)
    h = Multigraph(g.n + len(tree_edges), tuple(edges))
    return Subdivision(h, RootedTree(h, frozenset(tedges), r), split, link_of, attach)
