"""Certificates: a convex combination together with the claim it witnesses."""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .decomp import ConvexCombination
from .graphs import Multigraph

RELATIONS = ("equal", "dominates")
PREDICATES = ("2ec-subgraph", "2ec-multigraph", "2vc-min-deg-3", "matching-2vc-complement")


@dataclass
class Certificate:
    host: Multigraph
    target: list[Fraction]
    relation: str
    predicate: str
    combination: ConvexCombination
    notes: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.relation not in RELATIONS:
            raise ValueError(f"unknown relation {self.relation!r}")
        if self.predicate not in PREDICATES:
            raise ValueError(f"unknown predicate {self.predicate!r}")
        self.target = [Fraction(v) for v in self.target]
        if len(self.target) != self.host.m:
            raise ValueError("target length differs from the edge count")


def trace_hash(lines: Sequence[str]) -> str:
    h = hashlib.sha256()
    for line in lines:
        h.update(line.encode())
        h.update(b"\n")
    return h.hexdigest()[:16]
