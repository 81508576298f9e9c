"""Half-integer square points: the 9/7 certificate and the k-donut family."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .certificate import Certificate, trace_hash
from .coloring import classes_to_combination, color_4_5_vertex
from .decomp import ConvexCombination, check_in_LP, mix, pad_to_target
from .graphs import Edge, GraphError, Multigraph, edge_connectivity, is_2vc, member
from .lp import solve_over
from .matroids import two_disjoint_spanning_trees
from .trees import RootedTree

log = logging.getLogger(__name__)

HALF = Fraction(1, 2)
ONE = Fraction(1)
TENTH = Fraction(1, 10)


class SquarePointError(GraphError):
    pass


@dataclass
class SquarePoint:
    """A validated square point with its contraction.

    ``squares[q]`` lists the vertices ``u0..u3`` in cyclic order and the
    edges ``s0..s3`` with ``s_j = u_j u_{j+1}``.  ``paths[p]`` is a 1-path
    as ``(edges, (a, b))`` with square vertices ``a`` and ``b`` at its ends;
    edge ``p`` of ``contracted`` is that path.
    """

    host: Multigraph
    x: list[Fraction]
    squares: list[tuple[tuple[int, ...], tuple[int, ...]]]
    square_of: dict[int, int]
    paths: list[tuple[tuple[int, ...], tuple[int, int]]]
    path_at: dict[int, int]
    contracted: Multigraph

    @property
    def one_edges(self) -> list[int]:
        return [i for i, v in enumerate(self.x) if v == ONE]

    @property
    def half_edges(self) -> list[int]:
        return [i for i, v in enumerate(self.x) if v == HALF]


def validate_and_contract(g: Multigraph, x: Sequence[Fraction]) -> SquarePoint:
    x = [Fraction(v) for v in x]
    if len(x) != g.m:
        raise SquarePointError("x has the wrong length")
    if any(v not in (HALF, ONE) for v in x):
        raise SquarePointError("x is not half-integer with support values 1/2 and 1")
    if any(e.mult != 1 for e in g.edges) or g.has_loops():
        raise SquarePointError("support must be loopless with unit multiplicities")
    half_at: dict[int, list[int]] = {v: [] for v in range(g.n)}
    one_at: dict[int, list[int]] = {v: [] for v in range(g.n)}
    for i, e in enumerate(g.edges):
        bucket = half_at if x[i] == HALF else one_at
        bucket[e.u].append(i)
        bucket[e.v].append(i)
    for v in range(g.n):
        h, o = len(half_at[v]), len(one_at[v])
        if (h, o) not in ((2, 1), (0, 2)):
            raise SquarePointError(f"vertex {v} has {h} half-edges and {o} 1-edges")
    squares: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
    square_of: dict[int, int] = {}
    for start in range(g.n):
        if not half_at[start] or start in square_of:
            continue
        verts, edges = [start], []
        cur, e = start, half_at[start][0]
        while True:
            edges.append(e)
            nxt = g.other(e, cur)
            if nxt == start:
                break
            verts.append(nxt)
            cur = nxt
            e = next(f for f in half_at[cur] if f != e)
            if len(verts) > 4:
                break
        if len(verts) != 4 or len(edges) != 4 or len(set(verts)) != 4:
            raise SquarePointError(f"half-edges through vertex {start} do not form a 4-cycle")
        for v in verts:
            square_of[v] = len(squares)
        squares.append((tuple(verts), tuple(edges)))
    ok, side = check_in_LP(g, x)
    if not ok:
        raise SquarePointError(f"x violates a cut constraint at {sorted(side)}")

    paths: list[tuple[tuple[int, ...], tuple[int, int]]] = []
    path_at: dict[int, int] = {}
    for v in sorted(square_of):
        if v in path_at:
            continue
        cur, e = v, one_at[v][0]
        walk = [e]
        while True:
            cur = g.other(e, cur)
            if cur in square_of:
                break
            e = next(f for f in one_at[cur] if f != e)
            walk.append(e)
            if len(walk) > g.m:
                raise SquarePointError("a cycle of 1-edges avoids every square")
        if square_of[cur] == square_of[v]:
            raise SquarePointError(f"a 1-path returns to the square of vertex {v}")
        path_at[v] = path_at[cur] = len(paths)
        paths.append((tuple(walk), (v, cur)))
    covered = {i for p, _ in paths for i in p}
    if covered != {i for i in range(g.m) if x[i] == ONE}:
        raise SquarePointError("some 1-edges lie on no path between squares")
    cg = Multigraph(
        len(squares),
        tuple(Edge(square_of[a], square_of[b], 1, f"p{j}") for j, (_, (a, b)) in enumerate(paths)),
    )
    if any(cg.degree(q) != 4 for q in range(cg.n)):
        raise SquarePointError("contracted graph is not 4-regular")
    if edge_connectivity(cg) < 4:
        raise SquarePointError("contracted graph is not 4-edge-connected")
    return SquarePoint(g, x, squares, square_of, paths, path_at, cg)


# ---------------------------------------------------------------------------
# the Hamiltonian cycle H


def _cycles_of(g: Multigraph, edges: set[int]) -> dict[int, int]:
    """Component id per vertex of a 2-regular edge set."""
    comp: dict[int, int] = {}
    adj: dict[int, list[int]] = {v: [] for v in range(g.n)}
    for i in edges:
        u, v = g.ends(i)
        adj[u].append(v)
        adj[v].append(u)
    for s in range(g.n):
        if s in comp:
            continue
        comp[s] = s
        stack = [s]
        while stack:
            a = stack.pop()
            for b in adj[a]:
                if b not in comp:
                    comp[b] = s
                    stack.append(b)
    return comp


def find_hamiltonian_H(sp: SquarePoint) -> tuple[frozenset[int], list[int]]:
    """H and the chosen opposite pair (0 or 1) per square.

    Pair 0 is ``{s0, s2}`` and pair 1 is ``{s1, s3}``.  Start with pair 0
    everywhere and flip a square whose two H-edges lie on different cycles.
    """
    g = sp.host
    choice = [0] * len(sp.squares)

    def build() -> set[int]:
        h = set(sp.one_edges)
        for q, (_, es) in enumerate(sp.squares):
            h.add(es[choice[q]])
            h.add(es[choice[q] + 2])
        return h

    for _ in range(len(sp.squares) + 1):
        h = build()
        comp = _cycles_of(g, h)
        if len(set(comp.values())) == 1:
            return frozenset(h), choice
        for q, (vs, _) in enumerate(sp.squares):
            if len({comp[v] for v in vs}) > 1:
                choice[q] ^= 1
                break
        else:
            raise SquarePointError("no square joins two cycles; the support is disconnected")
    raise SquarePointError("flip procedure did not reach a single cycle")


def classes_ABC(sp: SquarePoint, h: frozenset[int]) -> dict[str, list[int]]:
    return {
        "A": sp.one_edges,
        "B": [i for i in sp.half_edges if i in h],
        "C": [i for i in sp.half_edges if i not in h],
    }


def r_vector(sp: SquarePoint, h: frozenset[int], alpha: Fraction) -> list[Fraction]:
    out = []
    for i, v in enumerate(sp.x):
        if v == ONE:
            out.append(1 + alpha)
        elif i in h:
            out.append(HALF)
        else:
            out.append(1 - alpha)
    return out


# ---------------------------------------------------------------------------
# P(G, 1/10)


@dataclass
class MatchingFamily:
    combination: ConvexCombination
    roots: list[int] = field(default_factory=list)
    repairs: int = 0
    trace: list[str] = field(default_factory=list)


def p_matchings_1_10(g: Multigraph) -> MatchingFamily:
    """Matchings at exactly 1/10 per edge whose complements are 2VC with min degree 3."""
    if any(g.degree(v) != 4 for v in range(g.n)):
        raise GraphError("P(G,1/10) needs a 4-regular graph")
    if g.has_loops() or any(e.mult != 1 for e in g.edges):
        raise GraphError("parallel edges must be listed separately")
    if edge_connectivity(g) < 4:
        raise GraphError("P(G,1/10) needs a 4-edge-connected graph")
    pack = two_disjoint_spanning_trees(g)
    if pack is None:
        raise GraphError("no two edge-disjoint spanning trees")
    fam = MatchingFamily(ConvexCombination(g, []))
    parts = []
    for t in pack:
        deg = [0] * g.n
        for i in t:
            a, b = g.ends(i)
            deg[a] += 1
            deg[b] += 1
        root = min(v for v in range(g.n) if deg[v] == 1)
        tree = RootedTree(g, t, root)
        col = color_4_5_vertex(tree)
        fam.roots.append(root)
        fam.repairs += col.repairs
        fam.trace.extend(col.trace)
        parts.append((HALF, classes_to_combination(col, base=tree)))
    keep = pad_to_target(mix(g, parts), [Fraction(9, 10)] * g.m, range(g.m))
    terms = []
    for lam, mem in keep.terms:
        have = {i for i, _ in mem}
        terms.append((lam, member(i for i in range(g.m) if i not in have)))
    fam.combination = ConvexCombination(g, terms).normalized()
    return fam


def is_matching(g: Multigraph, edges) -> bool:
    seen: set[int] = set()
    for i in edges:
        u, v = g.ends(i)
        if u == v or u in seen or v in seen:
            return False
        seen.update((u, v))
    return True


def complement_ok(g: Multigraph, edges, min_degree: int = 3) -> bool:
    drop = set(edges)
    rest = {i: 1 for i in range(g.m) if i not in drop}
    deg = [0] * g.n
    for i in rest:
        a, b = g.ends(i)
        deg[a] += 1
        deg[b] += 1
    return is_2vc(g, rest) and min(deg) >= min_degree


def brute_force_p(g: Multigraph, alpha: Fraction, min_degree: int = 0) -> ConvexCombination:
    """Everywhere-``alpha`` as matchings with 2VC complements, by enumeration."""
    cols = []
    m = g.m

    def rec(i: int, chosen: list[int], used: set[int]) -> None:
        if i == m:
            if complement_ok(g, chosen, min_degree):
                cols.append((tuple(chosen), tuple(1 if j in chosen else 0 for j in range(m))))
            return
        rec(i + 1, chosen, used)
        a, b = g.ends(i)
        if a not in used and b not in used and a != b:
            rec(i + 1, chosen + [i], used | {a, b})

    rec(0, [], set())
    sol = solve_over([Fraction(alpha)] * m, cols)
    return ConvexCombination(g, [(lam, member(key)) for lam, key, _ in sol]).normalized()


# ---------------------------------------------------------------------------
# matchings to 2EC multigraphs of G_x


def _square_parts(sp: SquarePoint, q: int, hpair: int, matched: tuple[int, bool] | None, first: bool) -> list[int]:
    verts, es = sp.squares[q]
    b_edges = [es[hpair], es[hpair + 2]]
    c_edges = [es[1 - hpair], es[3 - hpair]]
    if matched is None:
        return c_edges + [b_edges[0] if first else b_edges[1]]
    u, incoming = matched
    j = verts.index(u)
    near = {es[j], es[(j - 1) % 4]}
    b_near = next(e for e in b_edges if e in near)
    b_far = next(e for e in b_edges if e not in near)
    c_near = next(e for e in c_edges if e in near)
    c_far = next(e for e in c_edges if e not in near)
    short = [c_far, b_far]
    long = [c_near, c_far, b_near]
    if incoming:
        return short if first else long
    return long if first else short


def expand_matchings_to_r(sp: SquarePoint, h: frozenset[int], hpairs: Sequence[int], matchings: ConvexCombination) -> ConvexCombination:
    """Two multigraphs of G_x per matching; their average is exactly r^{alpha,x}."""
    g = sp.host
    terms = []
    for lam, mem in matchings.terms:
        mset = {i for i, _ in mem}
        at_square: dict[int, tuple[int, bool]] = {}
        for p in sorted(mset):
            _, (a, b) = sp.paths[p]
            qa, qb = sp.square_of[a], sp.square_of[b]
            # oriented from the lower square towards the higher one
            lo, hi = (a, b) if qa < qb else (b, a)
            for q, end, inc in ((sp.square_of[lo], lo, False), (sp.square_of[hi], hi, True)):
                if q in at_square:
                    raise SquarePointError(f"two matched edges meet square {q}")
                at_square[q] = (end, inc)
        for first in (True, False):
            mult: dict[int, int] = {}
            for p, (walk, _) in enumerate(sp.paths):
                for e in walk:
                    mult[e] = 2 if p in mset else 1
            for q in range(len(sp.squares)):
                for e in _square_parts(sp, q, hpairs[q], at_square.get(q), first):
                    mult[e] = 1
            terms.append((lam / 2, member(mult)))
    return ConvexCombination(g, terms, subgraph=False).normalized()


# ---------------------------------------------------------------------------
# assembly


def assemble_9_7(g: Multigraph, x: Sequence[Fraction]) -> Certificate:
    sp = validate_and_contract(g, x)
    h, hpairs = find_hamiltonian_H(sp)
    fam = p_matchings_1_10(sp.contracted)
    r = expand_matchings_to_r(sp, h, hpairs, fam.combination)
    ham = ConvexCombination(g, [(ONE, member(h))], subgraph=False)
    comb = mix(g, [(Fraction(5, 7), r), (Fraction(2, 7), ham)], subgraph=False)
    return Certificate(
        g,
        [Fraction(9, 7) * v for v in sp.x],
        "dominates",
        "2ec-multigraph",
        comb,
        {
            "pipeline": "square 9/7",
            "squares": str(len(sp.squares)),
            "tree-roots": ",".join(str(v) for v in fam.roots),
            "repairs": str(fam.repairs),
            "trace": trace_hash(fam.trace),
        },
    )


def donut_certificate(k: int) -> tuple[Certificate, Fraction]:
    """The bespoke 1/5 H + 4/5 r^{alpha} combination with alpha = 1/4 - 1/(2k).

    Returns the certificate (relation ``equal`` against the displayed z) and
    the common A-edge value.
    """
    g, x, _ = gen_k_donut(k)
    sp = validate_and_contract(g, x)
    h, hpairs = find_hamiltonian_H(sp)
    alpha = Fraction(1, 4) - Fraction(1, 2 * k)
    mats = brute_force_p(sp.contracted, alpha)
    r = expand_matchings_to_r(sp, h, hpairs, mats)
    ham = ConvexCombination(g, [(ONE, member(h))], subgraph=False)
    comb = mix(g, [(Fraction(4, 5), r), (Fraction(1, 5), ham)], subgraph=False)
    rv = r_vector(sp, h, alpha)
    z = [Fraction(4, 5) * rv[i] + (Fraction(1, 5) if i in h else 0) for i in range(g.m)]
    cert = Certificate(g, z, "equal", "2ec-multigraph", comb, {"pipeline": f"donut bespoke alpha={alpha}"})
    return cert, Fraction(6, 5) - Fraction(2, 5 * k)


# ---------------------------------------------------------------------------
# instances


def gen_k_donut(k: int) -> tuple[Multigraph, list[Fraction], list[Fraction]]:
    """The k-donut support, its point and its costs.

    Square j has outer vertices o_j^L, o_j^R and inner vertices i_j^L,
    i_j^R.  Outer and inner square edges cost 2, the two closing edges cost
    1, and every 1-edge costs 1/k.  Consecutive squares are joined by an
    outer and an inner path of k 1-edges.
    """
    if k < 2:
        raise ValueError("k-donuts need k >= 2")
    edges: list[Edge] = []
    x: list[Fraction] = []
    cost: list[Fraction] = []
    n = 0

    def vertex() -> int:
        nonlocal n
        n += 1
        return n - 1

    sq = []
    for j in range(k):
        oL, oR, iR, iL = vertex(), vertex(), vertex(), vertex()
        sq.append((oL, oR, iR, iL))
        for (a, b), c, tag in (((oL, oR), 2, "out"), ((oR, iR), 1, "cl"), ((iR, iL), 2, "in"), ((iL, oL), 1, "cl")):
            edges.append(Edge(a, b, 1, f"q{j}{tag}{a}"))
            x.append(HALF)
            cost.append(Fraction(c))
    for j in range(k):
        nxt = sq[(j + 1) % k]
        for side, a, b in (("o", sq[j][1], nxt[0]), ("i", sq[j][2], nxt[3])):
            prev = a
            for s in range(k):
                cur = b if s == k - 1 else vertex()
                edges.append(Edge(prev, cur, 1, f"{side}{j}.{s}"))
                x.append(ONE)
                cost.append(Fraction(1, k))
                prev = cur
    return Multigraph(n, tuple(edges)), x, cost


def square_point_from_4regular(g: Multigraph, path_length: int = 1) -> tuple[Multigraph, list[Fraction]]:
    """Blow every vertex of a 4-regular graph into a half-square.

    The i-th edge end at a vertex is attached to the i-th square corner in
    incidence order; each host edge becomes a path of ``path_length`` 1-edges.
    """
    edges: list[Edge] = []
    x: list[Fraction] = []
    corner: dict[tuple[int, int], int] = {}
    for v in range(g.n):
        inc = g.incident(v)
        if len(inc) != 4:
            raise GraphError("host is not 4-regular")
        base = 4 * v
        for j in range(4):
            edges.append(Edge(base + j, base + (j + 1) % 4, 1, f"s{v}.{j}"))
            x.append(HALF)
        for j, i in enumerate(inc):
            key = (i, 0) if (i, 0) not in corner else (i, 1)
            corner[key] = base + j
    n = 4 * g.n
    for i, e in enumerate(g.edges):
        a, b = corner[(i, 0)], corner[(i, 1)]
        prev = a
        for s in range(path_length):
            if s == path_length - 1:
                cur = b
            else:
                cur = n
                n += 1
            edges.append(Edge(prev, cur, 1, f"{e.label}.{s}"))
            x.append(ONE)
            prev = cur
    return Multigraph(n, tuple(edges)), x
