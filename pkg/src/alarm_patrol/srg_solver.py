"""Signal-response game solver: payoffs and the maxmin linear program.

Given a start vertex and, per signal, a menu of candidate routes, the
Defender's optimal signal-response strategy solves

    min g   s.t.  sum_{s in S(t)} p(s|t) * sum_r sigma_s(r) U_A(r, t) <= g
                  for every target t, with sigma_s a distribution per signal,

where U_A(r, t) is the Attacker's payoff pi(t) when route r leaves t
uncovered and 0 otherwise. The LP is dense and small (columns are
routes), solved with scipy's HiGHS backend.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from scipy.optimize import linprog

from .graph_core import DistanceMatrix, Instance, all_pairs_shortest_paths
from .covering_dp import Route, compute_cov_sets

__all__ = [
    "LPNumericalFailure",
    "RouteMenu",
    "SignalResponseSolution",
    "attacker_utility",
    "assemble_lp",
    "make_menus",
    "solve_srg",
    "solve_srg_auto",
    "ALGORITHMS",
]

LP_TOL = 1e-9
BEST_RESPONSE_TOL = 1e-6

ALGORITHMS = ("dp", "bnb", "approx-dp", "approx-bnb")


class LPNumericalFailure(Exception):
    pass


@dataclass
class RouteMenu:
    """Per-signal route lists for one start vertex.

    Routes are deduplicated by exact sequence; the stay-put route is
    always appended so every signal has a feasible response.
    """

    start: int
    per_signal: dict[str, list[Route]] = field(default_factory=dict)

    def add(self, signal_id: str, routes: Sequence[Route]) -> None:
        bucket = self.per_signal.setdefault(signal_id, [])
        seen = {r.targets for r in bucket}
        for r in routes:
            if r.start != self.start:
                raise ValueError("route start does not match menu start")
            if r.targets not in seen:
                seen.add(r.targets)
                bucket.append(r)

    def finalize(self, inst: Instance) -> None:
        stay = Route(start=self.start, targets=(), arrivals=())
        for s in inst.signals:
            bucket = self.per_signal.setdefault(s.id, [])
            if not any(r.targets == () for r in bucket):
                bucket.append(stay)

    def filter_dominated(self) -> None:
        """Drop routes whose covered set is strictly contained in another
        route's covered set for the same signal (never changes the game
        value; shrinks the LP)."""
        for sid, bucket in self.per_signal.items():
            order = sorted(range(len(bucket)), key=lambda i: -len(bucket[i].targets))
            kept: list[Route] = []
            kept_sets: list[frozenset[int]] = []
            for i in order:
                cov = bucket[i].covered()
                if any(cov < big for big in kept_sets):
                    continue
                if cov in kept_sets:
                    continue
                kept.append(bucket[i])
                kept_sets.append(cov)
            kept.sort(key=lambda r: (len(r.targets), r.targets))
            self.per_signal[sid] = kept


@dataclass(frozen=True)
class SignalResponseSolution:
    """Equilibrium value and the Defender's per-signal mixed response."""

    start: int
    game_value: float
    strategy: Mapping[str, tuple[tuple[Route, float], ...]]
    attacker_best_responses: tuple[int, ...]
    diagnostics: Mapping[str, float] = field(default_factory=dict)

    @property
    def defender_value(self) -> float:
        return 1.0 - self.game_value

    def to_document(self) -> dict:
        return {
            "vertex": self.start,
            "g_v": self.game_value,
            "defender_value": self.defender_value,
            "signals": [
                {
                    "signal": sid,
                    "strategy": [
                        {
                            "route": r.vertex_sequence(),
                            "arrivals": list(r.arrivals),
                            "prob": p,
                        }
                        for r, p in rows
                        if p > 1e-12
                    ],
                }
                for sid, rows in self.strategy.items()
            ],
            "best_responses": list(self.attacker_best_responses),
            "diagnostics": dict(self.diagnostics),
        }


def attacker_utility(route: Route, t: int, inst: Instance) -> float:
    """pi(t) when the route leaves t uncovered, else 0.

    The route's start vertex counts as covered (capture on contact).
    """
    if t not in inst.targets:
        raise ValueError(f"vertex {t} is not a target")
    if t == route.start or t in route.covered():
        return 0.0
    return inst.targets[t].value


def assemble_lp(v: int, menus: RouteMenu, inst: Instance):
    """Dense LP data for the maxmin program: one inequality row per
    target, one equality row per signal, columns (g, route probs)."""
    targets = inst.target_ids
    sig_ids = [s.id for s in inst.signals]
    columns: list[tuple[str, Route]] = []
    col_of_signal: dict[str, list[int]] = {sid: [] for sid in sig_ids}
    for sid in sig_ids:
        for r in menus.per_signal[sid]:
            col_of_signal[sid].append(len(columns))
            columns.append((sid, r))

    n_cols = 1 + len(columns)  # g first, then route probabilities
    a_ub = np.zeros((len(targets), n_cols))
    a_ub[:, 0] = -1.0
    for row, t in enumerate(targets):
        for s in inst.signals_for_target(t):
            p_st = s.coverage[t]
            for ci in col_of_signal[s.id]:
                a_ub[row, 1 + ci] = p_st * attacker_utility(columns[ci][1], t, inst)

    a_eq = np.zeros((len(sig_ids), n_cols))
    for srow, sid in enumerate(sig_ids):
        for ci in col_of_signal[sid]:
            a_eq[srow, 1 + ci] = 1.0

    c = np.zeros(n_cols)
    c[0] = 1.0
    return c, a_ub, a_eq, col_of_signal


def solve_srg(v: int, menus: RouteMenu, inst: Instance) -> SignalResponseSolution:
    """Solve the maxmin LP over the given route menus."""
    menus.finalize(inst)
    targets = inst.target_ids
    sig_ids = [s.id for s in inst.signals]
    c, a_ub, a_eq, col_of_signal = assemble_lp(v, menus, inst)
    n_route_cols = a_ub.shape[1] - 1
    bounds = [(None, None)] + [(0.0, 1.0)] * n_route_cols
    res = linprog(
        c,
        A_ub=a_ub,
        b_ub=np.zeros(len(targets)),
        A_eq=a_eq,
        b_eq=np.ones(len(sig_ids)),
        bounds=bounds,
        method="highs",
        options={"primal_feasibility_tolerance": LP_TOL, "dual_feasibility_tolerance": LP_TOL},
    )
    if not res.success:
        raise LPNumericalFailure(f"LP failed: {res.message}")
    g = max(0.0, float(res.x[0]))  # payoffs are non-negative; strip LP noise

    strategy: dict[str, tuple[tuple[Route, float], ...]] = {}
    for sid in sig_ids:
        probs = np.clip(res.x[[1 + ci for ci in col_of_signal[sid]]], 0.0, None)
        total = probs.sum()
        if total <= 0:
            raise LPNumericalFailure(f"degenerate strategy for signal {sid}")
        probs = probs / total
        strategy[sid] = tuple(
            (menus.per_signal[sid][i], float(p)) for i, p in enumerate(probs)
        )

    payoff = a_ub[:, 1:] @ res.x[1:]
    top = payoff.max() if len(payoff) else 0.0
    best = tuple(t for t, val in zip(targets, payoff) if val >= top - BEST_RESPONSE_TOL)
    return SignalResponseSolution(
        start=v,
        game_value=g,
        strategy=strategy,
        attacker_best_responses=best,
    )


def make_menus(
    v: int,
    algo: str,
    inst: Instance,
    dm: DistanceMatrix | None = None,
    *,
    rho: float = 1.0,
    delta: float = 2.0,
    rand_orders: int = 10,
    seed: int = 0,
    dominance_filter: bool = True,
    auto_topology: bool = False,
) -> tuple[RouteMenu, dict]:
    """Generate per-signal route menus with the chosen algorithm.

    Signals are handled independently. Diagnostics report the covering
    set counts (total / non-dominated) for the exact DP path, which the
    benchmark harness records.
    """
    from . import covering_bnb, approx_monotonic, special_topologies

    if algo not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algo!r}")
    if dm is None:
        dm = all_pairs_shortest_paths(inst)
    menu = RouteMenu(start=v)
    diag: dict = {}
    covsets_total = 0
    covsets_nondominated = 0
    fast_topology = None
    if auto_topology and algo == "dp":
        kind = special_topologies.detect_topology(inst).kind
        if kind in ("linear", "cycle"):
            fast_topology = kind

    for s in inst.signals:
        if algo == "dp":
            if fast_topology is not None:
                results = special_topologies.solve_line_cycle(v, s.id, inst, dm)
            else:
                results = compute_cov_sets(v, s.id, inst, dm)
            covsets_total += len(results)
            covsets_nondominated += sum(r.maximal for r in results)
            pick = [r.route for r in results if r.maximal] if dominance_filter else [
                r.route for r in results
            ]
            menu.add(s.id, pick)
        elif algo == "bnb":
            routes = covering_bnb.branch_and_bound(v, s.id, 0.0, delta, inst, dm)
            menu.add(s.id, routes)
        elif algo == "approx-dp":
            routes = approx_monotonic.approx_route_set(v, s.id, rand_orders, seed, inst, dm)
            menu.add(s.id, routes)
        else:  # approx-bnb
            routes = covering_bnb.branch_and_bound(v, s.id, rho, delta, inst, dm)
            menu.add(s.id, routes)

    if algo == "dp":
        diag["covsets_total"] = covsets_total
        diag["covsets_nondominated"] = covsets_nondominated
        if fast_topology is not None:
            diag["topology_fast_path"] = fast_topology
    if dominance_filter:
        menu.filter_dominated()
    return menu, diag


def solve_srg_auto(
    v: int,
    algo: str,
    inst: Instance,
    dm: DistanceMatrix | None = None,
    **params,
) -> SignalResponseSolution:
    """Menu generation plus the maxmin LP, as one call."""
    menu, diag = make_menus(v, algo, inst, dm, **params)
    solution = solve_srg(v, menu, inst)
    if diag:
        solution = SignalResponseSolution(
            start=solution.start,
            game_value=solution.game_value,
            strategy=solution.strategy,
            attacker_best_responses=solution.attacker_best_responses,
            diagnostics=diag,
        )
    return solution
