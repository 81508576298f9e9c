"""Reading and writing graphs, instances and certificates.

Text format::

    n m
    u v mult [label] [x=p/q] [cost=p/q] [color=c] [estar]
    ...

Blank lines and ``#`` comments are ignored.  The JSON mirror carries a
``version`` field; rationals are always ``"p/q"`` strings.  Output is
deterministic: keys sorted, edges in index order.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .certificate import Certificate
from .decomp import ConvexCombination
from .graphs import Edge, GraphError, Multigraph, member

FORMAT_VERSION = 1


class FormatError(ValueError):
    pass


@dataclass
class Instance:
    graph: Multigraph
    x: list[Fraction] | None = None
    cost: list[Fraction] | None = None
    color: dict[int, int] | None = None
    e_star: int | None = None
    meta: dict[str, str] = field(default_factory=dict)


def frac(s: Any) -> Fraction:
    if isinstance(s, int) and not isinstance(s, bool):
        return Fraction(s)
    if not isinstance(s, str):
        raise FormatError(f"expected a rational string, got {s!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"bad rational {s!r}") from exc


def fstr(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# text


def parse_text(text: str) -> Instance:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise FormatError("empty input")
    head = lines[0].split()
    try:
        n, m = int(head[0]), int(head[1])
    except (IndexError, ValueError) as exc:
        raise FormatError("first line must be 'n m'") from exc
    if len(head) != 2 or n < 0 or m < 0:
        raise FormatError("first line must be 'n m'")
    if len(lines) - 1 != m:
        raise FormatError(f"header announces {m} edges, found {len(lines) - 1}")
    edges, xs, costs, colors = [], [], [], {}
    e_star = None
    for j, ln in enumerate(lines[1:]):
        tok = ln.split()
        if len(tok) < 3:
            raise FormatError(f"edge line {j + 1}: need 'u v mult'")
        try:
            u, v, mult = int(tok[0]), int(tok[1]), int(tok[2])
        except ValueError as exc:
            raise FormatError(f"edge line {j + 1}: endpoints and multiplicity must be integers") from exc
        label = f"e{j}"
        rest = tok[3:]
        if rest and "=" not in rest[0] and rest[0] != "estar":
            label, rest = rest[0], rest[1:]
        x = cost = None
        for t in rest:
            if t == "estar":
                if e_star is not None:
                    raise FormatError("more than one edge flagged estar")
                e_star = j
            elif t.startswith("x="):
                x = frac(t[2:])
            elif t.startswith("cost="):
                cost = frac(t[5:])
            elif t.startswith("color="):
                try:
                    colors[j] = int(t[6:])
                except ValueError as exc:
                    raise FormatError(f"edge line {j + 1}: bad color") from exc
            else:
                raise FormatError(f"edge line {j + 1}: unknown field {t!r}")
        edges.append(Edge(u, v, mult, label))
        xs.append(x)
        costs.append(cost)
    try:
        g = Multigraph(n, tuple(edges))
    except GraphError as exc:
        raise FormatError(str(exc)) from exc
    return Instance(g, _column(xs, "x"), _column(costs, "cost"), _colors(colors, m), e_star)


def _column(vals: list, name: str) -> list[Fraction] | None:
    if all(v is None for v in vals):
        return None
    if any(v is None for v in vals):
        raise FormatError(f"column {name} is given on some edges only")
    return vals


def _colors(colors: dict[int, int], m: int) -> dict[int, int] | None:
    if not colors:
        return None
    if len(colors) != m:
        raise FormatError("color is given on some edges only")
    return colors


def format_text(inst: Instance) -> str:
    g = inst.graph
    out = [f"{g.n} {g.m}"]
    for i, e in enumerate(g.edges):
        parts = [str(e.u), str(e.v), str(e.mult), e.label]
        if inst.x is not None:
            parts.append(f"x={fstr(inst.x[i])}")
        if inst.cost is not None:
            parts.append(f"cost={fstr(inst.cost[i])}")
        if inst.color is not None:
            parts.append(f"color={inst.color[i]}")
        if inst.e_star == i:
            parts.append("estar")
        out.append(" ".join(parts))
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# JSON


def _check_version(d: dict, kind: str) -> None:
    if not isinstance(d, dict):
        raise FormatError("expected a JSON object")
    ver = d.get("version")
    if ver != FORMAT_VERSION:
        raise FormatError(f"format version {ver!r} found, this release reads version {FORMAT_VERSION}")
    if d.get("kind") != kind:
        raise FormatError(f"expected a {kind} record, found {d.get('kind')!r}")


def graph_to_json(g: Multigraph) -> dict:
    return {
        "n": g.n,
        "edges": [{"u": e.u, "v": e.v, "mult": e.mult, "label": e.label} for e in g.edges],
    }


def graph_from_json(d: dict) -> Multigraph:
    try:
        edges = tuple(Edge(int(e["u"]), int(e["v"]), int(e["mult"]), str(e["label"])) for e in d["edges"])
        return Multigraph(int(d["n"]), edges)
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed graph record: {exc}") from exc


def instance_to_json(inst: Instance) -> dict:
    d: dict[str, Any] = {"version": FORMAT_VERSION, "kind": "instance", "graph": graph_to_json(inst.graph)}
    if inst.x is not None:
        d["x"] = [fstr(v) for v in inst.x]
    if inst.cost is not None:
        d["cost"] = [fstr(v) for v in inst.cost]
    if inst.color is not None:
        d["color"] = [inst.color[i] for i in range(inst.graph.m)]
    if inst.e_star is not None:
        d["e_star"] = inst.graph.edges[inst.e_star].label
    if inst.meta:
        d["meta"] = dict(inst.meta)
    return d


def instance_from_json(d: dict) -> Instance:
    _check_version(d, "instance")
    g = graph_from_json(d.get("graph", {}))
    labels = {e.label: i for i, e in enumerate(g.edges)}

    def col(name: str) -> list[Fraction] | None:
        if name not in d:
            return None
        vals = [frac(v) for v in d[name]]
        if len(vals) != g.m:
            raise FormatError(f"{name} has {len(vals)} entries for {g.m} edges")
        return vals

    color = None
    if "color" in d:
        if len(d["color"]) != g.m:
            raise FormatError("color has the wrong length")
        color = {i: int(c) for i, c in enumerate(d["color"])}
    e_star = None
    if "e_star" in d:
        if d["e_star"] not in labels:
            raise FormatError(f"e_star names unknown edge {d['e_star']!r}")
        e_star = labels[d["e_star"]]
    return Instance(g, col("x"), col("cost"), color, e_star, dict(d.get("meta", {})))


def certificate_to_json(c: Certificate) -> dict:
    labels = [e.label for e in c.host.edges]
    return {
        "version": FORMAT_VERSION,
        "kind": "certificate",
        "graph": graph_to_json(c.host),
        "target": [fstr(v) for v in c.target],
        "relation": c.relation,
        "predicate": c.predicate,
        "subgraph": c.combination.subgraph,
        "terms": [
            {"weight": fstr(lam), "member": [[labels[i], k] for i, k in mem]} for lam, mem in c.combination.terms
        ],
        "notes": dict(sorted(c.notes.items())),
    }


def certificate_from_json(d: dict) -> Certificate:
    _check_version(d, "certificate")
    g = graph_from_json(d.get("graph", {}))
    labels = {e.label: i for i, e in enumerate(g.edges)}
    try:
        terms = []
        for t in d["terms"]:
            mem = {}
            for lab, k in t["member"]:
                if lab not in labels:
                    raise FormatError(f"member names unknown edge {lab!r}")
                mem[labels[lab]] = int(k)
            terms.append((frac(t["weight"]), member(mem)))
        comb = ConvexCombination(g, terms, bool(d["subgraph"]))
        return Certificate(g, [frac(v) for v in d["target"]], d["relation"], d["predicate"], comb, dict(d.get("notes", {})))
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed certificate record: {exc}") from exc
    except ValueError as exc:
        if isinstance(exc, FormatError):
            raise
        raise FormatError(str(exc)) from exc


def dumps(d: dict) -> str:
    return json.dumps(d, sort_keys=True, indent=1) + "\n"


def loads(text: str) -> dict:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from exc


def read_instance(text: str) -> Instance:
    """Text or JSON, detected by the first non-blank character."""
    if text.lstrip().startswith("{"):
        return instance_from_json(loads(text))
    return parse_text(text)
