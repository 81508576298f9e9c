"""Half-integer triangle points and the z^{x,e*} certificate.

Every vertex of the support lies on one half-triangle and one 1-edge.
Contracting the triangles gives a cubic graph on which the 7/8 machinery
runs with two special edges at a vertex; the result is expanded back to
the triangles.  Two-edge cuts are split off and glued with fixed marker
fractions 5/24 and 19/24.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .certificate import Certificate, trace_hash
from .decomp import ConvexCombination, DecompositionError, check_in_LP, mix, pad_to_target
from .glue import GlueStats, glue_2cut, reduce_and_glue
from .graphs import Edge, GraphError, Multigraph, components, edge_connectivity, is_2ec, member, two_edge_cuts
from .uniform import Special, _Tally, seven_eighths_base

log = logging.getLogger(__name__)

HALF = Fraction(1, 2)
ONE = Fraction(1)
Z_ONE = Fraction(29, 24)
Z_STAR = Fraction(19, 24)
Z_HALF = Fraction(29, 48)
FIVE_24 = Fraction(5, 24)


class TrianglePointError(GraphError):
    pass


@dataclass
class TrianglePoint:
    host: Multigraph
    x: list[Fraction]
    e_star: int
    triangles: list[tuple[int, int, int]]
    tri_of: dict[int, int]
    one_at: dict[int, int]
    contracted: Multigraph
    one_edges: list[int]

    def half_edge(self, a: int, b: int) -> int:
        for i in self.host.incident(a):
            if self.x[i] == HALF and self.host.other(i, a) == b:
                return i
        raise KeyError((a, b))


def z_vector(x: Sequence[Fraction], e_star: int) -> list[Fraction]:
    return [Z_STAR if i == e_star else (Z_ONE if v == ONE else Z_HALF) for i, v in enumerate(x)]


def validate_triangle(g: Multigraph, x: Sequence[Fraction], e_star: int) -> TrianglePoint:
    x = [Fraction(v) for v in x]
    if len(x) != g.m:
        raise TrianglePointError("x has the wrong length")
    if any(v not in (HALF, ONE) for v in x):
        raise TrianglePointError("x is not half-integer with support values 1/2 and 1")
    if g.has_loops() or any(e.mult != 1 for e in g.edges):
        raise TrianglePointError("support must be loopless with unit multiplicities")
    if not g.is_cubic():
        raise TrianglePointError("support is not cubic")
    halves: dict[int, list[int]] = {v: [] for v in range(g.n)}
    one_at: dict[int, int] = {}
    for i, e in enumerate(g.edges):
        for v in (e.u, e.v):
            if x[i] == HALF:
                halves[v].append(i)
            elif v in one_at:
                raise TrianglePointError(f"vertex {v} has two 1-edges")
            else:
                one_at[v] = i
    if len(one_at) != g.n:
        raise TrianglePointError("some vertex has no 1-edge")
    triangles: list[tuple[int, int, int]] = []
    tri_of: dict[int, int] = {}
    for v in range(g.n):
        if v in tri_of:
            continue
        a, b = (g.other(i, v) for i in halves[v])
        if len(halves[v]) != 2 or a == b or not any(g.other(i, a) == b for i in halves[a]):
            raise TrianglePointError(f"half-edges at vertex {v} do not close a triangle")
        for w in (v, a, b):
            tri_of[w] = len(triangles)
        triangles.append((v, a, b))
    ok, side = check_in_LP(g, x)
    if not ok:
        raise TrianglePointError(f"x violates a cut constraint at {sorted(side)}")
    if not (0 <= e_star < g.m) or x[e_star] != ONE:
        raise TrianglePointError("e* must be a 1-edge")
    if not is_2ec(g, {i: 1 for i in range(g.m) if i != e_star}):
        raise TrianglePointError("e* lies in a 2-edge cut")
    ones = [i for i in range(g.m) if x[i] == ONE]
    cg = Multigraph(
        len(triangles),
        tuple(Edge(tri_of[g.edges[i].u], tri_of[g.edges[i].v], 1, g.edges[i].label) for i in ones),
    )
    return TrianglePoint(g, x, e_star, triangles, tri_of, one_at, cg, ones)


# ---------------------------------------------------------------------------
# combinations on the contracted cubic graph


def _shared_vertex(g: Multigraph, e1: int, e2: int) -> int:
    common = set(g.ends(e1)) & set(g.ends(e2))
    if e1 == e2 or len(common) != 1:
        raise GraphError("the two edges must share exactly one endpoint")
    return common.pop()


def combo_a1(g: Multigraph, e1: int, e2: int, tally: _Tally | None = None) -> ConvexCombination:
    """2EC subgraphs under 7/8 off {e1, e2}, 3/4 on e1 and 5/8 on e2."""
    _shared_vertex(g, e1, e2)
    if not g.is_cubic() or edge_connectivity(g) < 3:
        raise GraphError("combo_a1 needs a cubic 3-edge-connected graph")
    target = [Fraction(7, 8)] * g.m
    target[e1] = Fraction(3, 4)
    target[e2] = Fraction(5, 8)
    base = seven_eighths_base(tally or _Tally(), Special(e_star=e2, e_prime=e1))
    return reduce_and_glue(g, target, base, stats=GlueStats())


def neighbour_edges(g: Multigraph, e: int) -> list[int]:
    u, v = g.ends(e)
    return sorted({i for w in (u, v) for i in g.incident(w) if i != e})


def a2_target(g: Multigraph, e_star: int) -> list[Fraction]:
    y = [Fraction(7, 8)] * g.m
    for i in neighbour_edges(g, e_star):
        y[i] = Fraction(13, 16)
    y[e_star] = Z_STAR
    return y


def combo_a2(g: Multigraph, e_star: int, tally: _Tally | None = None) -> ConvexCombination:
    """The a2 vector written exactly: the average of four a1 runs, padded."""
    nb = neighbour_edges(g, e_star)
    if len(nb) != 4:
        raise GraphError(f"e* has {len(nb)} distinct neighbouring edges, expected 4")
    parts = [(Fraction(1, 4), combo_a1(g, e_star, e2, tally)) for e2 in nb]
    return pad_to_target(mix(g, parts), a2_target(g, e_star), range(g.m))


# ---------------------------------------------------------------------------
# expansion to the triangles


def _triangle_options(tp: TrianglePoint, t: tuple[int, int, int], in_f: set[int]) -> list[list[int]]:
    u, v, w = t
    e = {a: tp.one_at[a] for a in t}
    star = [a for a in t if e[a] == tp.e_star]
    he = tp.half_edge
    if star:
        # relabel so that e* sits at u
        s = star[0]
        rest = [a for a in t if a != s]
        u, v, w = s, rest[0], rest[1]
        if e[u] not in in_f:
            return [[he(u, v), he(u, w)]]
        if e[v] not in in_f:
            return [[he(u, w)], [he(v, w), he(u, v)]]
        if e[w] not in in_f:
            return [[he(u, v)], [he(v, w), he(u, w)]]
        return [[he(u, v), he(v, w)], [he(u, w), he(v, w)]]
    missing = [a for a in t if e[a] not in in_f]
    if len(missing) > 1:
        raise DecompositionError(f"F meets the triangle at {t} in fewer than two edges")
    if missing:
        a = missing[0]
        b, c = (z for z in t if z != a)
        return [[he(b, c)], [he(a, b), he(a, c)]]
    return [[he(u, v), he(v, w)], [he(v, w), he(w, u)], [he(u, v), he(w, u)]]


def base_expand_a3(tp: TrianglePoint, comb: ConvexCombination) -> ConvexCombination:
    """Six multigraphs of G_x per member F, sharing one choice index mod 2 and mod 3.

    Two-option triangles list the option that leaves the corner of the
    missing 1-edge hanging on its doubled edge first; across a doubled
    edge the two ends take opposite options, which keeps every member
    connected without changing any single triangle's marginals.
    """
    terms = []
    for lam, mem in comb.terms:
        f_host = {tp.one_edges[j] for j, _ in mem}
        base: dict[int, int] = {}
        for i in tp.one_edges:
            if i == tp.e_star:
                if i in f_host:
                    base[i] = 1
            else:
                base[i] = 1 if i in f_host else 2
        options = [_triangle_options(tp, t, f_host) for t in tp.triangles]
        # the two ends of a doubled 1-edge must not both isolate their corner
        flip = [0] * len(tp.triangles)
        for i in tp.one_edges:
            if i not in f_host and i != tp.e_star:
                a, b = (tp.tri_of[v] for v in tp.host.ends(i))
                flip[max(a, b)] = 1
        for k in range(6):
            out = dict(base)
            for q, opts in enumerate(options):
                for i in opts[(k + flip[q]) % len(opts)]:
                    out[i] = 1
            terms.append((lam / 6, member(out)))
    return ConvexCombination(tp.host, terms, subgraph=False).normalized()


# ---------------------------------------------------------------------------
# two-edge cuts


def _side_point(tp: TrianglePoint, keep: set[int], a: int, b: int, e_star: int | None) -> tuple[TrianglePoint, dict[int, int], int]:
    """``G_x[keep] + ab`` with the new edge at x = 1.

    Returns the point, the map from its edges (other than the marker) to
    host edges, and the marker index.  ``e_star=None`` makes the marker e*.
    """
    g = tp.host
    order = sorted(keep)
    vmap = {v: j for j, v in enumerate(order)}
    edges, x, back = [], [], {}
    for i, e in enumerate(g.edges):
        if e.u in keep and e.v in keep:
            back[len(edges)] = i
            edges.append(Edge(vmap[e.u], vmap[e.v], 1, e.label))
            x.append(tp.x[i])
    marker = len(edges)
    la, lb = g.edges[tp.one_at[a]].label, g.edges[tp.one_at[b]].label
    edges.append(Edge(vmap[a], vmap[b], 1, f"[{la}|{lb}]"))
    x.append(ONE)
    h = Multigraph(len(order), tuple(edges))
    star = marker if e_star is None else next(j for j, i in back.items() if i == e_star)
    return validate_triangle(h, x, star), back, marker


def raise_double(comb: ConvexCombination, e: int, frac: Fraction) -> ConvexCombination:
    """Add a second copy of ``e`` to single-copy members until the doubled mass is ``frac``."""
    doubled = Fraction(0)
    for lam, mem in comb.terms:
        k = dict(mem).get(e, 0)
        if k == 0:
            raise DecompositionError("a member lacks the marker edge")
        if k == 2:
            doubled += lam
    need = frac - doubled
    if need < 0:
        raise DecompositionError(f"marker already doubled with mass {doubled} > {frac}")
    terms = []
    for lam, mem in comb.terms:
        d = dict(mem)
        if need > 0 and d[e] == 1:
            take = min(lam, need)
            bumped = dict(d)
            bumped[e] = 2
            terms.append((take, member(bumped)))
            if lam > take:
                terms.append((lam - take, mem))
            need -= take
        else:
            terms.append((lam, mem))
    return ConvexCombination(comb.host, terms, comb.subgraph).normalized()


@dataclass
class _Report:
    cuts: int = 0
    bases: int = 0
    tally: _Tally | None = None


def _solve(tp: TrianglePoint, rep: _Report) -> ConvexCombination:
    g, cg = tp.host, tp.contracted
    cuts = two_edge_cuts(cg)
    if not cuts:
        rep.bases += 1
        star_c = tp.one_edges.index(tp.e_star)
        comb = combo_a2(cg, star_c, rep.tally)
        out = base_expand_a3(tp, comb)
        z = z_vector(tp.x, tp.e_star)
        bad = [i for i, (a, b) in enumerate(zip(out.aggregate(), z)) if a > b]
        if bad:
            raise DecompositionError(f"expanded aggregate exceeds z on edges {bad}")
        return out
    rep.cuts += 1
    star_ends = set(g.ends(tp.e_star))
    best = None
    for a, b in cuts:
        comps = components(cg, {i: 1 for i in range(cg.m) if i not in (a, b)})
        for c in comps:
            side = {v for q in c for v in tp.triangles[q]}
            if side & star_ends:
                continue
            key = (len(side), sorted(side))
            if best is None or key < best[0]:
                best = (key, side, (a, b))
    if best is None:
        raise TrianglePointError("every 2-edge cut side holds e*")
    _, far, (ca, cb) = best
    near = set(range(g.n)) - far
    h1, h2 = tp.one_edges[ca], tp.one_edges[cb]
    # cut edges uw and vz with u, v on the e* side
    u, w = g.ends(h1) if g.ends(h1)[0] in near else g.ends(h1)[::-1]
    v, z = g.ends(h2) if g.ends(h2)[0] in near else g.ends(h2)[::-1]
    p1, map1, uv = _side_point(tp, near, u, v, tp.e_star)
    p2, map2, wz = _side_point(tp, far, w, z, None)
    c1 = raise_double(_solve(p1, rep), uv, FIVE_24)
    c2 = _solve(p2, rep)
    return glue_2cut(g, c1, map1, uv, c2, map2, wz, h1, h2)


def triangle_certificate(g: Multigraph, x: Sequence[Fraction], e_star: int) -> Certificate:
    tp = validate_triangle(g, x, e_star)
    rep = _Report(tally=_Tally())
    comb = _solve(tp, rep)
    return Certificate(
        g,
        z_vector(tp.x, e_star),
        "dominates",
        "2ec-multigraph",
        comb,
        {
            "pipeline": "triangle z",
            "e_star": g.edges[e_star].label,
            "two_cuts": str(rep.cuts),
            "bases": str(rep.bases),
            "repairs": str(rep.tally.repairs),
            "relaxed_pairings": str(rep.tally.relaxed),
            "exact_pieces": str(rep.tally.exact),
            "trace": trace_hash(rep.tally.trace),
        },
    )


def star_multiplicity_ok(cert: Certificate, e_star: int) -> bool:
    return all(dict(m).get(e_star, 0) <= 1 for _, m in cert.combination.terms)


# ---------------------------------------------------------------------------
# instances


def triangulate(g: Multigraph) -> tuple[Multigraph, list[Fraction], dict[int, int]]:
    """Blow every vertex of a cubic graph into a half-triangle.

    Returns the support, x and the map from host edges to their 1-edges.
    """
    if not g.is_cubic():
        raise GraphError("triangulate needs a cubic graph")
    edges: list[Edge] = []
    x: list[Fraction] = []
    corner: dict[tuple[int, int], int] = {}
    for v in range(g.n):
        base = 3 * v
        for j in range(3):
            edges.append(Edge(base + j, base + (j + 1) % 3, 1, f"t{v}.{j}"))
            x.append(HALF)
        for j, i in enumerate(g.incident(v)):
            corner[(i, 0) if (i, 0) not in corner else (i, 1)] = base + j
    ones = {}
    for i, e in enumerate(g.edges):
        if e.mult != 1 or e.u == e.v:
            raise GraphError("triangulate needs a loopless graph with unit multiplicities")
        ones[i] = len(edges)
        edges.append(Edge(corner[(i, 0)], corner[(i, 1)], 1, e.label))
        x.append(ONE)
    return Multigraph(3 * g.n, tuple(edges)), x, ones


def join_across_two_cut(g1: Multigraph, i1: int, g2: Multigraph, i2: int) -> Multigraph:
    """Delete edge ``i1`` of g1 and ``i2`` of g2, then reconnect their ends crosswise."""
    a, b = g1.ends(i1)
    c, d = g2.ends(i2)
    off = g1.n
    edges = [e for j, e in enumerate(g1.edges) if j != i1]
    edges += [Edge(e.u + off, e.v + off, e.mult, f"{e.label}'") for j, e in enumerate(g2.edges) if j != i2]
    edges.append(Edge(a, c + off, 1, "x0"))
    edges.append(Edge(b, d + off, 1, "x1"))
    return Multigraph(g1.n + g2.n, tuple(edges))
