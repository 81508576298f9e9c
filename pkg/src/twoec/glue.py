"""Gluing convex combinations across proper 3-edge cuts and 2-edge cuts."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .decomp import ConvexCombination, DecompositionError, pad_to_target
from .graphs import Multigraph, contract_piece, delta, member, proper_3cuts

log = logging.getLogger(__name__)

PATTERNS = ("ab", "ac", "bc", "abc")


class GlueError(DecompositionError):
    pass


def cut_multipliers(xa: Fraction, xb: Fraction, xc: Fraction) -> dict[str, Fraction]:
    """Unique pattern masses reproducing the three cut values."""
    xa, xb, xc = Fraction(xa), Fraction(xb), Fraction(xc)
    if max(xa, xb, xc) > 1:
        raise GlueError("cut values above one")
    lam = {
        "ab": 1 - xc,
        "ac": 1 - xb,
        "bc": 1 - xa,
        "abc": xa + xb + xc - 2,
    }
    if any(v < 0 for v in lam.values()):
        raise GlueError(f"cut values {xa}, {xb}, {xc} give a negative pattern mass")
    return lam


def _pattern(mem: dict[int, int], cut: Sequence[int]) -> str:
    name = "".join(ch for ch, e in zip("abc", cut) if mem.get(e, 0) > 0)
    if name not in PATTERNS:
        raise GlueError(f"member uses cut pattern {name or 'none'}")
    return name


def _greedy(left: list[tuple[Fraction, dict[int, int]]], right: list[tuple[Fraction, dict[int, int]]], join: Callable[[dict[int, int], dict[int, int]], dict[int, int]]) -> list[tuple[Fraction, dict[int, int]]]:
    """Pair two lists of equal total mass, heaviest first."""
    a = sorted(left, key=lambda t: (-t[0], sorted(t[1].items())))
    b = sorted(right, key=lambda t: (-t[0], sorted(t[1].items())))
    out = []
    i = j = 0
    ra = a[0][0] if a else Fraction(0)
    rb = b[0][0] if b else Fraction(0)
    while i < len(a) and j < len(b):
        s = min(ra, rb)
        out.append((s, join(a[i][1], b[j][1])))
        ra -= s
        rb -= s
        if ra == 0:
            i += 1
            ra = a[i][0] if i < len(a) else Fraction(0)
        if rb == 0:
            j += 1
            rb = b[j][0] if j < len(b) else Fraction(0)
    if i < len(a) or j < len(b):
        raise GlueError("greedy pairing left mass unmatched")
    return out


def glue_3cut(host: Multigraph, comb_a: ConvexCombination, comb_b: ConvexCombination, cut: Sequence[int]) -> ConvexCombination:
    """Join two host-indexed combinations that agree on the proper 3-cut ``cut``."""
    groups: dict[str, tuple[list, list]] = {h: ([], []) for h in PATTERNS}
    for side, comb in ((0, comb_a), (1, comb_b)):
        for lam, mem in comb.terms:
            d = dict(mem)
            groups[_pattern(d, cut)][side].append((lam, d))
    terms = []
    for h in PATTERNS:
        la, lb = groups[h]
        ma = sum((t[0] for t in la), Fraction(0))
        mb = sum((t[0] for t in lb), Fraction(0))
        if ma != mb:
            raise GlueError(f"pattern {h} has mass {ma} on one side and {mb} on the other")

        def join(x: dict[int, int], y: dict[int, int]) -> dict[int, int]:
            out = dict(y)
            out.update(x)
            return out

        terms.extend(_greedy(la, lb, join))
    return ConvexCombination(host, [(lam, member(m)) for lam, m in terms], comb_a.subgraph and comb_b.subgraph).normalized()


# (piece, piece target, piece edge -> top edge, piece vertex -> top vertex or None)
BaseSolver = Callable[[Multigraph, list[Fraction], tuple[int, ...], tuple[int | None, ...]], ConvexCombination]


@dataclass
class GlueStats:
    splits: int = 0
    pieces: int = 0
    max_depth: int = 0
    piece_sizes: list[int] = field(default_factory=list)


def reduce_and_glue(
    g: Multigraph,
    target: Sequence[Fraction],
    base: BaseSolver,
    origin: tuple[int, ...] | None = None,
    stats: GlueStats | None = None,
    vorigin: tuple[int | None, ...] | None = None,
    _depth: int = 0,
) -> ConvexCombination:
    """Split along proper 3-cuts until pieces are essentially 4EC, then glue back.

    ``base(piece, piece_target, origin, vorigin)`` solves a piece; ``origin``
    maps the piece's edges to the edges of the top-level graph and
    ``vorigin`` its vertices to top-level vertices (``None`` for contracted
    ones).  Piece results are
    padded on the cut edges so both sides meet the target there exactly.
    """
    origin = tuple(range(g.m)) if origin is None else origin
    vorigin = tuple(range(g.n)) if vorigin is None else vorigin
    stats = stats if stats is not None else GlueStats()
    stats.max_depth = max(stats.max_depth, _depth)
    cuts = proper_3cuts(g)
    if not cuts:
        stats.pieces += 1
        stats.piece_sizes.append(g.n)
        return base(g, list(target), origin, vorigin)
    stats.splits += 1
    side = cuts[0]
    cut = delta(g, side)
    if len(cut) != 3:
        raise GlueError("selected cut is not a 3-edge cut")
    halves = []
    for keep in (side, set(range(g.n)) - set(side)):
        piece = contract_piece(g, keep)
        emap = piece.edge_map
        sub_target = [target[emap[j]] for j in range(piece.graph.m)]
        vmap: list[int | None] = [None] * piece.graph.n
        for v, j in piece.vertex_map.items():
            vmap[j] = vorigin[v]
        sub = reduce_and_glue(
            piece.graph, sub_target, base, tuple(origin[e] for e in emap), stats, tuple(vmap), _depth + 1
        )
        halves.append(pad_to_target(sub.lift(g, emap), target, cut))
    return glue_3cut(g, halves[0], halves[1], cut)


def glue_2cut(
    host: Multigraph,
    comb_1: ConvexCombination,
    map_1: dict[int, int],
    uv: int,
    comb_2: ConvexCombination,
    map_2: dict[int, int],
    wz: int,
    uw: int,
    vz: int,
) -> ConvexCombination:
    """Join the two sides of a 2-edge cut {uw, vz}.

    ``comb_1`` lives on the side graph with marker ``uv`` and ``comb_2`` on
    the other side with marker ``wz``; ``map_*`` send side edges other than
    the marker to host indices.  Members with ``uv`` doubled meet members
    without ``wz`` and receive both cut edges twice; the rest meet members
    with ``wz`` and receive each cut edge once.
    """
    five = Fraction(5, 24)
    doubled, single = [], []
    for lam, mem in comb_1.terms:
        d = dict(mem)
        k = d.pop(uv, 0)
        body = {map_1[i]: c for i, c in d.items()}
        if k == 2:
            doubled.append((lam, body))
        elif k == 1:
            single.append((lam, body))
        else:
            raise GlueError("a member of the first side lacks the marker edge")
    absent, present = [], []
    for lam, mem in comb_2.terms:
        d = dict(mem)
        k = d.pop(wz, 0)
        body = {map_2[i]: c for i, c in d.items()}
        if k == 0:
            absent.append((lam, body))
        elif k == 1:
            present.append((lam, body))
        else:
            raise GlueError("the second side doubles its marker edge")
    masses = [sum((t[0] for t in grp), Fraction(0)) for grp in (doubled, absent)]
    if masses[0] != five or masses[1] != five:
        raise GlueError(f"marker fractions are {masses[0]} and {masses[1]}, expected 5/24")

    def joiner(copies: int):
        def join(x: dict[int, int], y: dict[int, int]) -> dict[int, int]:
            out = dict(x)
            for i, c in y.items():
                out[i] = out.get(i, 0) + c
            out[uw] = copies
            out[vz] = copies
            return out

        return join

    terms = _greedy(doubled, absent, joiner(2)) + _greedy(single, present, joiner(1))
    return ConvexCombination(host, [(lam, member(m)) for lam, m in terms], subgraph=False).normalized()
