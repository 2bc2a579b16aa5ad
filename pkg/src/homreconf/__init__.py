"""NU-graph detection and H-extension reconfiguration."""

from __future__ import annotations

from ._kernels import BACKEND
from .dismantle import (
    DismantlingSequence,
    DismantlingStep,
    InvalidDismantling,
    efficient_dismantle_diagonal,
    greedy_dismantle,
)
from .errors import CapExceeded, InvalidCertificate, InvalidHomomorphism
from .graph import INFINITE, Graph, GraphParseError, parse_graph, read_graph
from .homgraph import RECONFIG, WALK, EdgeMode, hom_graph, oracle_distance
from .nu import MajorityTable, find_majority, is_nu
from .reconfig import ReconfigPath, Walk, delta_stats, reconfigure
from .solver import shortest_hom_walk, solve_extension

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CapExceeded",
    "DismantlingSequence",
    "DismantlingStep",
    "EdgeMode",
    "Graph",
    "GraphParseError",
    "INFINITE",
    "InvalidCertificate",
    "InvalidDismantling",
    "InvalidHomomorphism",
    "MajorityTable",
    "RECONFIG",
    "ReconfigPath",
    "WALK",
    "Walk",
    "delta_stats",
    "efficient_dismantle_diagonal",
    "find_majority",
    "greedy_dismantle",
    "hom_graph",
    "is_nu",
    "oracle_distance",
    "parse_graph",
    "read_graph",
    "reconfigure",
    "shortest_hom_walk",
    "solve_extension",
]
