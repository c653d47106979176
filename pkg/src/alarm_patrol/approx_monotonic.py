"""Polynomial-time route generation via monotonic routes.

A route is monotonic with respect to a total order on the signal's
targets when targets appear along it consistently with the order. For a
fixed order the dynamic program below finds, per (first target, route
length), one monotonic route minimizing the maximum lateness (arrival
minus deadline over its targets), in O(n^3).

Route sets are formed by merging the runs of three heuristic orders
(distance, deadline, slack, each ascending from the start vertex) with
an optional batch of seeded random permutations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import random

from .covering_dp import Route, SignalEnv
from .graph_core import DistanceMatrix, Instance, Signal, all_pairs_shortest_paths

__all__ = [
    "TotalOrder",
    "LatenessTable",
    "heuristic_orders",
    "random_orders",
    "monotonic_routes",
    "approx_route_set",
]

INFEASIBLE = float("inf")


@dataclass(frozen=True)
class TotalOrder:
    """A permutation of the enumeration universe with a provenance tag."""

    targets: tuple[int, ...]
    provenance: str

    def __post_init__(self):
        if len(set(self.targets)) != len(self.targets):
            raise ValueError("order must not repeat targets")


@dataclass(frozen=True)
class LatenessTable:
    """DP matrices: routes[k][l] and max-lateness values, 1-indexed by
    (first-target position in the order, covered-target count)."""

    order: TotalOrder
    routes: tuple[tuple[tuple[int, ...] | None, ...], ...]
    lateness: tuple[tuple[float, ...], ...]


def _env(inst: Instance, dm: DistanceMatrix | None, v: int, s: Union[str, Signal]) -> SignalEnv:
    if dm is None:
        dm = all_pairs_shortest_paths(inst)
    return SignalEnv.build(inst, dm, v, s)


def heuristic_orders(v: int, s: Union[str, Signal], inst: Instance, dm: DistanceMatrix | None = None) -> list[TotalOrder]:
    """Distance-, deadline- and slack-ascending orders (ties: lower id)."""
    env = _env(inst, dm, v, s)
    pairs = list(zip(env.universe, env.w_start, env.deadlines))
    by_distance = tuple(t for t, w, d in sorted(pairs, key=lambda x: (x[1], x[0])))
    by_deadline = tuple(t for t, w, d in sorted(pairs, key=lambda x: (x[2], x[0])))
    by_slack = tuple(t for t, w, d in sorted(pairs, key=lambda x: (x[2] - x[1], x[0])))
    return [
        TotalOrder(by_distance, "distance"),
        TotalOrder(by_deadline, "deadline"),
        TotalOrder(by_slack, "slack"),
    ]


def random_orders(
    v: int,
    s: Union[str, Signal],
    count: int,
    seed: int,
    inst: Instance,
    dm: DistanceMatrix | None = None,
) -> list[TotalOrder]:
    env = _env(inst, dm, v, s)
    rng = random.Random(seed)
    out = []
    for i in range(count):
        perm = list(env.universe)
        rng.shuffle(perm)
        out.append(TotalOrder(tuple(perm), f"random({seed}:{i})"))
    return out


def build_lateness_table(
    v: int,
    s: Union[str, Signal],
    order: TotalOrder,
    inst: Instance,
    dm: DistanceMatrix | None = None,
) -> LatenessTable:
    env = _env(inst, dm, v, s)
    if sorted(order.targets) != sorted(env.universe):
        raise ValueError("order must be a permutation of the signal's targets")
    seq = [env.pos[t] for t in order.targets]  # order position -> universe index
    n = len(seq)
    w_start, w, deadlines = env.w_start, env.w, env.deadlines

    # routes[k][l]: tuple of order positions, first target at order
    # position k, l targets; lateness[k][l]: its max lateness.
    routes: list[list[tuple[int, ...] | None]] = [[None] * (n + 1) for _ in range(n + 1)]
    lateness: list[list[float]] = [[INFEASIBLE] * (n + 1) for _ in range(n + 1)]
    for k in range(n, 0, -1):
        tk = seq[k - 1]
        base_late = w_start[tk] - deadlines[tk]
        routes[k][1] = (k,)
        lateness[k][1] = base_late
        for l in range(2, n - k + 2):
            best_j = -1
            best_late = INFEASIBLE
            for k2 in range(k + 1, n + 1):
                if routes[k2][l - 1] is None:
                    continue
                tk2 = seq[k2 - 1]
                shift = w_start[tk] + w[tk][tk2] - w_start[tk2]
                cand = max(base_late, shift + lateness[k2][l - 1])
                if cand < best_late:
                    best_late = cand
                    best_j = k2
            if best_j >= 0 and best_late <= 0:
                routes[k][l] = (k,) + routes[best_j][l - 1]
                lateness[k][l] = best_late
    return LatenessTable(
        order=order,
        routes=tuple(tuple(row) for row in routes),
        lateness=tuple(tuple(row) for row in lateness),
    )


def monotonic_routes(
    v: int,
    s: Union[str, Signal],
    order: TotalOrder,
    inst: Instance,
    dm: DistanceMatrix | None = None,
) -> list[Route]:
    """All feasible routes stored by the lateness DP for this order."""
    if dm is None:
        dm = all_pairs_shortest_paths(inst)
    env = SignalEnv.build(inst, dm, v, s)
    table = build_lateness_table(v, s, order, inst, dm)
    seq = [env.pos[t] for t in order.targets]
    out: list[Route] = []
    n = len(seq)
    for k in range(1, n + 1):
        for l in range(1, n + 1):
            stored = table.routes[k][l]
            if stored is None or table.lateness[k][l] > 0:
                continue
            idx_seq = [seq[p - 1] for p in stored]
            arrivals = []
            clock = env.w_start[idx_seq[0]]
            arrivals.append(clock)
            for a, b in zip(idx_seq, idx_seq[1:]):
                clock += env.w[a][b]
                arrivals.append(clock)
            out.append(env.route_from_indices(idx_seq, arrivals))
    return out


def approx_route_set(
    v: int,
    s: Union[str, Signal],
    rand_orders: int,
    seed: int,
    inst: Instance,
    dm: DistanceMatrix | None = None,
) -> list[Route]:
    """Union of monotonic routes over the heuristic orders plus
    ``rand_orders`` seeded random permutations, exact duplicates removed."""
    if rand_orders < 0:
        raise ValueError("rand_orders must be >= 0")
    if dm is None:
        dm = all_pairs_shortest_paths(inst)
    orders = heuristic_orders(v, s, inst, dm)
    orders.extend(random_orders(v, s, rand_orders, seed, inst, dm))
    seen: set[tuple[int, ...]] = set()
    out: list[Route] = []
    for order in orders:
        for r in monotonic_routes(v, s, order, inst, dm):
            if r.targets not in seen:
                seen.add(r.targets)
                out.append(r)
    return out
