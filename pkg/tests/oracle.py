"""Independent brute-force references used by the test suite.

Everything here re-derives results by exhaustive enumeration so the
production solvers can be checked against it: proper covering routes by
DFS over all target sequences, game values by a directly assembled
maxmin program, Hamiltonian paths and equal-halves partitions by
enumeration.
"""

from __future__ import annotations

import itertools
from typing import Sequence

import numpy as np
from scipy.optimize import linprog

from alarm_patrol.covering_dp import Route
from alarm_patrol.graph_core import DistanceMatrix, Instance, all_pairs_shortest_paths


def enumerate_proper_routes(
    inst: Instance, dm: DistanceMatrix, v: int, signal_id: str
) -> list[Route]:
    """Every covering route from v that walks over no uncovered target.

    The start vertex counts as always covered; legs follow canonical
    shortest paths and a leg is allowed only when the targets strictly
    inside it are already part of the route (properness).
    """
    signal = inst.signal(signal_id)
    universe = [t for t in signal.targets() if t != v]

    def interior(a: int, b: int) -> frozenset[int]:
        path = dm.path(a, b)
        return frozenset(x for x in path[1:-1] if x in signal.coverage and x != v)

    out: list[Route] = []

    def grow(seq: list[int], arrivals: list[int], covered: set[int]) -> None:
        at = seq[-1] if seq else v
        clock = arrivals[-1] if arrivals else 0
        for t in universe:
            if t in covered:
                continue
            arr = clock + dm.distance(at, t)
            if arr > inst.targets[t].deadline:
                continue
            if not interior(at, t) <= covered:
                continue
            seq.append(t)
            arrivals.append(arr)
            covered.add(t)
            out.append(Route(start=v, targets=tuple(seq), arrivals=tuple(arrivals)))
            grow(seq, arrivals, covered)
            seq.pop()
            arrivals.pop()
            covered.remove(t)

    grow([], [], set())
    return out


def enumerate_covering_routes(
    inst: Instance, dm: DistanceMatrix, v: int, signal_id: str
) -> list[Route]:
    """Every covering route from v, properness not required."""
    signal = inst.signal(signal_id)
    universe = [t for t in signal.targets() if t != v]
    out: list[Route] = []

    def grow(seq: list[int], arrivals: list[int], covered: set[int]) -> None:
        at = seq[-1] if seq else v
        clock = arrivals[-1] if arrivals else 0
        for t in universe:
            if t in covered:
                continue
            arr = clock + dm.distance(at, t)
            if arr > inst.targets[t].deadline:
                continue
            seq.append(t)
            arrivals.append(arr)
            covered.add(t)
            out.append(Route(start=v, targets=tuple(seq), arrivals=tuple(arrivals)))
            grow(seq, arrivals, covered)
            seq.pop()
            arrivals.pop()
            covered.remove(t)

    grow([], [], set())
    return out


def oracle_cov_sets(
    inst: Instance, dm: DistanceMatrix, v: int, signal_id: str
) -> dict[frozenset[int], int]:
    """Proper covering sets with their cheapest route cost."""
    best: dict[frozenset[int], int] = {}
    for r in enumerate_proper_routes(inst, dm, v, signal_id):
        key = r.covered()
        if key not in best or r.cost < best[key]:
            best[key] = r.cost
    return best


def maximal_sets(families: Sequence[frozenset[int]]) -> set[frozenset[int]]:
    fams = set(families)
    return {q for q in fams if not any(q < other for other in fams)}


def oracle_game_value(
    inst: Instance,
    dm: DistanceMatrix,
    v: int,
    route_sets: dict[str, list[frozenset[int]]] | None = None,
) -> float:
    """Maxmin value with menus given as covered-set families per signal.

    When ``route_sets`` is omitted, the full proper-route enumeration is
    used for every signal. The LP is assembled here independently of the
    production solver; the stay-put option (empty set) is always added.
    """
    if route_sets is None:
        route_sets = {
            s.id: sorted(
                {r.covered() for r in enumerate_proper_routes(inst, dm, v, s.id)},
                key=lambda q: (len(q), sorted(q)),
            )
            for s in inst.signals
        }
    columns: list[tuple[str, frozenset[int]]] = []
    for s in inst.signals:
        sets = list(route_sets.get(s.id, []))
        if frozenset() not in sets:
            sets.append(frozenset())
        for q in sets:
            columns.append((s.id, q))

    targets = inst.target_ids
    n_cols = 1 + len(columns)
    a_ub = np.zeros((len(targets), n_cols))
    a_ub[:, 0] = -1.0
    for row, t in enumerate(targets):
        pi = inst.targets[t].value
        for ci, (sid, q) in enumerate(columns):
            p_st = inst.signal(sid).coverage.get(t, 0.0)
            if p_st and t != v and t not in q:
                a_ub[row, 1 + ci] = p_st * pi
    a_eq = np.zeros((len(inst.signals), n_cols))
    for srow, s in enumerate(inst.signals):
        for ci, (sid, _) in enumerate(columns):
            if sid == s.id:
                a_eq[srow, 1 + ci] = 1.0
    c = np.zeros(n_cols)
    c[0] = 1.0
    res = linprog(
        c,
        A_ub=a_ub,
        b_ub=np.zeros(len(targets)),
        A_eq=a_eq,
        b_eq=np.ones(len(inst.signals)),
        bounds=[(None, None)] + [(0, 1)] * len(columns),
        method="highs",
    )
    assert res.success, res.message
    return float(res.x[0])


def has_hamiltonian_path(adjacency: Sequence[Sequence[int]]) -> bool:
    n = len(adjacency)
    if n <= 1:
        return True
    adj = [set(nbrs) for nbrs in adjacency]
    # Bitmask DP over (visited set, last vertex).
    reach = [[False] * n for _ in range(1 << n)]
    for v in range(n):
        reach[1 << v][v] = True
    for mask in range(1 << n):
        for last in range(n):
            if not reach[mask][last]:
                continue
            for nxt in adj[last]:
                if mask >> nxt & 1:
                    continue
                reach[mask | (1 << nxt)][nxt] = True
    full = (1 << n) - 1
    return any(reach[full][v] for v in range(n))


def equal_partition_exists(weights: Sequence[int]) -> bool:
    total = sum(weights)
    if total % 2:
        return False
    half = total // 2
    sums = {0}
    for w in weights:
        sums |= {s + w for s in sums if s + w <= half}
    return half in sums


def star_best_pure_value(
    inst: Instance, dm: DistanceMatrix, v: int, signal_id: str
) -> float:
    """Min over all pure routes of the max uncovered value, by exhaustion."""
    signal = inst.signal(signal_id)
    universe = [t for t in signal.targets() if t != v]
    best = None
    for k in range(len(universe) + 1):
        for combo in itertools.permutations(universe, k):
            route = Route.from_targets(v, combo, dm)
            if not route.is_covering(inst):
                continue
            uncovered = [t for t in universe if t not in combo]
            value = max((inst.targets[t].value for t in uncovered), default=0.0)
            if best is None or value < best:
                best = value
    assert best is not None  # the empty route is always covering
    return best


def star_full_cover_exists(
    inst: Instance, dm: DistanceMatrix, v: int, signal_id: str
) -> bool:
    signal = inst.signal(signal_id)
    universe = [t for t in signal.targets() if t != v]
    for combo in itertools.permutations(universe):
        if Route.from_targets(v, combo, dm).is_covering(inst):
            return True
    return not universe
