"""Command-line front door.

Exit status: 0 on success or a verified claim, 1 when a claim is false or a
pipeline fails, 2 on malformed input or violated preconditions.
"""
from __future__ import annotations

import argparse
import logging
import sys
from fractions import Fraction
from typing import Sequence

from . import io
from .certificate import Certificate
from .decomp import DecompositionError
from .graphs import Multigraph
from .lp import Infeasible

log = logging.getLogger("twoec")

PREDICATES = ("2ec-subgraph", "2ec-multigraph", "2vc-min-deg-3", "matching-2vc-complement")


class InputError(Exception):
    pass


def _read(path: str | None) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def three_edge_coloring(g: Multigraph) -> dict[int, int] | None:
    """Backtracking 3-edge-coloring of a cubic graph, or None."""
    color: dict[int, int] = {}

    def free(i: int) -> list[int]:
        used = {color[j] for v in g.ends(i) for j in g.incident(v) if j in color}
        return [c for c in range(3) if c not in used]

    def rec(k: int) -> bool:
        if k == g.m:
            return True
        for c in free(k):
            color[k] = c
            if rec(k + 1):
                return True
            del color[k]
        return False

    return dict(color) if rec(0) else None


def _emit_certificate(cert: Certificate, args) -> int:
    from .verify import verify_certificate

    verdict = verify_certificate(cert)
    if not verdict:
        print(f"error: produced certificate failed verification: {verdict.failure}", file=sys.stderr)
        return 1
    _write(io.dumps(io.certificate_to_json(cert)), args.output)
    return 0


def _need_x(inst: io.Instance) -> list[Fraction]:
    if inst.x is None:
        raise InputError("this command needs an x value on every edge")
    return inst.x


def cmd_uniform_cover(args) -> int:
    from .uniform import cover_13_15, cover_7_8

    inst = io.read_instance(_read(args.input))
    if args.variant == "7/8":
        return _emit_certificate(cover_7_8(inst.graph), args)
    coloring = inst.color if inst.color is not None else three_edge_coloring(inst.graph)
    if coloring is None:
        raise InputError("graph is not 3-edge-colorable")
    return _emit_certificate(cover_13_15(inst.graph, coloring), args)


def cmd_square(args) -> int:
    from .square import assemble_9_7

    inst = io.read_instance(_read(args.input))
    return _emit_certificate(assemble_9_7(inst.graph, _need_x(inst)), args)


def cmd_triangle(args) -> int:
    from .triangle import triangle_certificate

    inst = io.read_instance(_read(args.input))
    e_star = inst.e_star
    if args.e_star is not None:
        labels = {e.label: i for i, e in enumerate(inst.graph.edges)}
        if args.e_star not in labels:
            raise InputError(f"no edge labelled {args.e_star!r}")
        e_star = labels[args.e_star]
    if e_star is None:
        raise InputError("flag e* in the input or pass --e-star LABEL")
    return _emit_certificate(triangle_certificate(inst.graph, _need_x(inst), e_star), args)


def cmd_verify(args) -> int:
    from .verify import verify_certificate

    cert = io.certificate_from_json(io.loads(_read(args.input)))
    verdict = verify_certificate(cert)
    agg = cert.combination.aggregate()
    lines = [
        f"relation   {cert.relation}",
        f"predicate  {cert.predicate}",
        f"members    {len(cert.combination.terms)}",
        f"max aggregate {io.fstr(max(agg, default=Fraction(0)))}",
    ]
    for k, v in sorted(cert.notes.items()):
        lines.append(f"note {k} = {v}")
    lines.append("VERIFIED" if verdict else f"FAILED: {verdict.failure}")
    _write("\n".join(lines) + "\n", args.output)
    return 0 if verdict else 1


def cmd_gen(args) -> int:
    from .square import gen_k_donut
    from .triangle import join_across_two_cut, triangulate
    from .verify import gen_random_cubic_3ec

    if args.what == "donut":
        if args.k is None:
            raise InputError("gen donut needs --k")
        g, x, cost = gen_k_donut(args.k)
        inst = io.Instance(g, x, cost)
    elif args.what == "cubic":
        if args.n is None:
            raise InputError("gen cubic needs --n")
        inst = io.Instance(gen_random_cubic_3ec(args.n, args.seed))
    else:
        k4 = Multigraph.from_pairs(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
        base = k4 if args.what == "triangle-k4" else join_across_two_cut(k4, 0, k4, 0)
        g, x, ones = triangulate(base)
        inst = io.Instance(g, x, e_star=ones[1])
    text = io.dumps(io.instance_to_json(inst)) if args.format == "json" else io.format_text(inst)
    _write(text, args.output)
    return 0


def cmd_oracle(args) -> int:
    from .verify import brute_force_dominates

    inst = io.read_instance(_read(args.input))
    if args.y is not None:
        y = [io.frac(args.y)] * inst.graph.m
    elif inst.x is not None:
        y = inst.x
    else:
        raise InputError("oracle needs --y or an x column")
    res = brute_force_dominates(inst.graph, y, args.predicate, args.max_edges)
    verdict = "dominates" if res.dominates else "does not dominate"
    _write(f"{verdict} ({res.members} members enumerated)\n", args.output)
    return 0 if res.dominates else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="twoec", description="Convex-combination certificates for 2-edge-connected spanning subgraphs.")
    p.add_argument("--trace", action="store_true", help="log pipeline stages to stderr")
    sub = p.add_subparsers(dest="verb", required=True)

    def common(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("input", nargs="?", help="input file, default standard input")
        sp.add_argument("-o", "--output", help="output file, default standard output")

    sp = sub.add_parser("uniform-cover", help="7/8 or 13/15 cover of a cubic 3EC graph")
    common(sp)
    sp.add_argument("--variant", choices=("7/8", "13/15"), default="7/8")
    sp.set_defaults(fn=cmd_uniform_cover)

    sp = sub.add_parser("square", help="9/7 certificate for a half-integer square point")
    common(sp)
    sp.set_defaults(fn=cmd_square)

    sp = sub.add_parser("triangle", help="z^{x,e*} certificate for a half-integer triangle point")
    common(sp)
    sp.add_argument("--e-star", help="label of e*, overriding a flag in the input")
    sp.set_defaults(fn=cmd_triangle)

    sp = sub.add_parser("verify", help="check a certificate exactly")
    common(sp)
    sp.set_defaults(fn=cmd_verify)

    sp = sub.add_parser("gen", help="emit an instance")
    sp.add_argument("what", choices=("donut", "cubic", "triangle-k4", "triangle-chain"))
    sp.add_argument("--k", type=int)
    sp.add_argument("--n", type=int)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.add_argument("-o", "--output")
    sp.set_defaults(fn=cmd_gen)

    sp = sub.add_parser("oracle", help="brute-force dominance check on a tiny instance")
    common(sp)
    sp.add_argument("--predicate", choices=PREDICATES, default="2ec-subgraph")
    sp.add_argument("--y", help="uniform value p/q; default is the x column")
    sp.add_argument("--max-edges", type=int, default=14)
    sp.set_defaults(fn=cmd_oracle)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.trace else logging.WARNING, stream=sys.stderr, format="%(name)s: %(message)s")
    try:
        return args.fn(args)
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DecompositionError, Infeasible, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
