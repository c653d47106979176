"""Solvers for patrolling security games with a spatially uncertain alarm system."""

from .graph_core import (
    DistanceMatrix,
    Instance,
    Signal,
    Target,
    all_pairs_shortest_paths,
    build_instance,
    serialize_instance,
)
from .covering_dp import CoveringSetResult, Route, compute_cov_sets

__version__ = "0.1.0"

__all__ = [
    "Instance",
    "Target",
    "Signal",
    "DistanceMatrix",
    "Route",
    "CoveringSetResult",
    "build_instance",
    "serialize_instance",
    "all_pairs_shortest_paths",
    "compute_cov_sets",
    "__version__",
]
