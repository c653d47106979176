"""Optimal static placement of the patroller.

With every target alarmed and no false positives or missed detections,
the patroller's best strategy is to sit at the vertex whose
signal-response game value is smallest and respond to signals from
there. The report also carries the second-best placement and the
missed-detection rate below which the placement provably stays optimal:
(1 - alpha) * (1 - g_best) must still beat 1 - g_second.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .graph_core import DistanceMatrix, Instance, all_pairs_shortest_paths
from .srg_solver import SignalResponseSolution, solve_srg_auto

__all__ = [
    "PlacementReport",
    "best_placement",
    "max_tolerable_missed_detection",
    "alpha_bound",
]


@dataclass(frozen=True)
class PlacementReport:
    """Per-vertex game values with the best and second-best placements.

    ``alpha_bound`` is the supremum of tolerable missed-detection rates
    (None when undefined because the best placement already concedes
    everything, 1.0 when the graph has a single vertex and no competing
    placement exists).
    """

    game_values: Mapping[int, float]
    best_vertex: int
    second_vertex: int | None
    alpha_bound: float | None

    @property
    def best_value(self) -> float:
        return self.game_values[self.best_vertex]

    @property
    def second_value(self) -> float | None:
        if self.second_vertex is None:
            return None
        return self.game_values[self.second_vertex]

    def to_document(self) -> dict:
        return {
            "g_v": {str(v): g for v, g in sorted(self.game_values.items())},
            "best_vertex": self.best_vertex,
            "second_vertex": self.second_vertex,
            "alpha_bound": self.alpha_bound,
        }


def alpha_bound(g_best: float, g_second: float) -> float:
    """Largest missed-detection rate under which staying put still wins.

    Solves (1 - alpha) * (1 - g_best) > (1 - g_second) for alpha; the
    returned value is the supremum of the feasible rates.
    """
    if g_best >= 1.0:
        raise ValueError("undefined when the best placement concedes value 1")
    return 1.0 - (1.0 - g_second) / (1.0 - g_best)


def max_tolerable_missed_detection(report: PlacementReport) -> float:
    """Alpha bound of a report; raises when it is undefined."""
    if report.second_vertex is None:
        return 1.0
    if report.best_value >= 1.0:
        raise ValueError("undefined when the best placement concedes value 1")
    return alpha_bound(report.best_value, report.second_value)


def best_placement(
    inst: Instance,
    algo: str = "dp",
    dm: DistanceMatrix | None = None,
    **params,
) -> PlacementReport:
    """Solve the signal-response game from every vertex and pick the
    minimizer (ties to the lowest vertex id)."""
    if dm is None:
        dm = all_pairs_shortest_paths(inst)
    values: dict[int, float] = {}
    for v in range(inst.num_vertices):
        sol: SignalResponseSolution = solve_srg_auto(v, algo, inst, dm, **params)
        values[v] = sol.game_value
    best_vertex = min(values, key=lambda v: (values[v], v))
    others = [v for v in values if v != best_vertex]
    if not others:
        return PlacementReport(
            game_values=values,
            best_vertex=best_vertex,
            second_vertex=None,
            alpha_bound=1.0,
        )
    second_vertex = min(others, key=lambda v: (values[v], v))
    g_best = values[best_vertex]
    bound = alpha_bound(g_best, values[second_vertex]) if g_best < 1.0 else None
    return PlacementReport(
        game_values=values,
        best_vertex=best_vertex,
        second_vertex=second_vertex,
        alpha_bound=bound,
    )
