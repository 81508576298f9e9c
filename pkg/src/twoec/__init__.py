"""Exact convex-combination certificates for 2-edge-connected spanning subgraphs."""
from .certificate import Certificate
from .decomp import ConvexCombination
from .graphs import Edge, GraphError, Multigraph
from .square import assemble_9_7, donut_certificate, gen_k_donut
from .triangle import triangle_certificate, triangulate
from .uniform import cover_13_15, cover_7_8
from .verify import brute_force_dominates, gen_random_cubic_3ec, verify_certificate

__version__ = "0.1.0"

__all__ = [
    "Certificate",
    "ConvexCombination",
    "Edge",
    "GraphError",
    "Multigraph",
    "assemble_9_7",
    "brute_force_dominates",
    "cover_13_15",
    "cover_7_8",
    "donut_certificate",
    "gen_k_donut",
    "gen_random_cubic_3ec",
    "triangle_certificate",
    "triangulate",
    "verify_certificate",
]
