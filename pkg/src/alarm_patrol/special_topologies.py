"""Polynomial-time exact solvers for special graph shapes.

On path and cycle graphs every proper covering set is an arc around the
start vertex, characterized by its two extreme targets, so the whole
family is enumerable in O(n^2) by a frontier walk: states track how far
coverage has advanced on each side of the start and which side the
patroller currently stands on. Leg legality and costs use the same
canonical-shortest-path and walk-through rules as the generic
enumeration, so both produce identical set families and costs.

Star graphs admit an exact scheduling view: serving branch i costs
2 * gamma_i with an effective deadline d(t_i) + gamma_i, so earliest
due date decides full coverage, and the best pure response is found by
dropping the cheapest target until the schedule fits.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .covering_dp import (
    CoveringSetResult,
    Route,
    SignalEnv,
    annotate_dominance,
)
from .graph_core import DistanceMatrix, Instance, Signal, all_pairs_shortest_paths

__all__ = [
    "TopologyClass",
    "StarSchedule",
    "WrongTopology",
    "StartNotHub",
    "detect_topology",
    "solve_line_cycle",
    "edd_full_cover",
    "best_pure_star",
]


class WrongTopology(Exception):
    pass


class StartNotHub(Exception):
    pass


@dataclass(frozen=True)
class TopologyClass:
    """Exact structural class of the instance graph."""

    kind: str  # linear | cycle | star | tree | arbitrary
    hub: int | None = None
    leaf_count: int | None = None


def detect_topology(inst: Instance) -> TopologyClass:
    n = inst.num_vertices
    degree = [0] * n
    for u, v, _ in inst.edges:
        degree[u] += 1
        degree[v] += 1
    m = len(inst.edges)
    if m == n - 1:  # connected and acyclic
        if n == 1 or max(degree) <= 2:
            return TopologyClass(kind="linear")
        hubs = [v for v in range(n) if degree[v] == n - 1]
        if hubs and all(degree[v] == 1 for v in range(n) if v != hubs[0]):
            return TopologyClass(kind="star", hub=hubs[0])
        return TopologyClass(kind="tree", leaf_count=sum(1 for d in degree if d == 1))
    if m == n and n >= 3 and all(d == 2 for d in degree):
        return TopologyClass(kind="cycle")
    return TopologyClass(kind="arbitrary")


def _path_order(inst: Instance) -> list[int]:
    """Vertices of a path graph from one endpoint to the other."""
    adj = {v: [] for v in range(inst.num_vertices)}
    for u, v, _ in inst.edges:
        adj[u].append(v)
        adj[v].append(u)
    if inst.num_vertices == 1:
        return [0]
    ends = sorted(v for v, nbrs in adj.items() if len(nbrs) == 1)
    order = [ends[0]]
    prev = None
    while len(order) < inst.num_vertices:
        nxt = [x for x in adj[order[-1]] if x != prev]
        prev = order[-1]
        order.append(nxt[0])
    return order


def _cycle_order(inst: Instance, v: int) -> list[int]:
    """Cycle vertices starting at v, walking toward its lower neighbor."""
    adj = {u: [] for u in range(inst.num_vertices)}
    for a, b, _ in inst.edges:
        adj[a].append(b)
        adj[b].append(a)
    order = [v]
    prev = None
    cur = v
    nxt = min(adj[v])
    while nxt != v:
        order.append(nxt)
        prev, cur = cur, nxt
        nxt = [x for x in adj[cur] if x != prev][0]
    return order


def _frontier_sides(inst: Instance, env: SignalEnv, topo: TopologyClass) -> tuple[list[int], list[int]]:
    """Universe targets on each side of the start, nearest first."""
    v = env.v
    if topo.kind == "linear":
        order = _path_order(inst)
        at = order.index(v)
        left = [t for t in reversed(order[:at]) if t in env.pos]
        right = [t for t in order[at + 1 :] if t in env.pos]
        return left, right
    ring = _cycle_order(inst, v)  # starts at v
    ccw = [t for t in ring[1:] if t in env.pos]
    return ccw, list(reversed(ccw))


def solve_line_cycle(
    v: int,
    s: Union[str, Signal],
    inst: Instance,
    dm: DistanceMatrix | None = None,
) -> list[CoveringSetResult]:
    """Enumerate proper covering sets on a path or cycle graph.

    Every reachable coverage state is an extreme pair: the farthest
    target reached on each side of the start. The walk extends one
    frontier at a time (so plain one-way sweeps, sweeps with one turn,
    and deadline-forced zigzags are all represented) and keeps the
    minimum arrival time per (extent-left, extent-right, side).
    """
    topo = detect_topology(inst)
    if topo.kind not in ("linear", "cycle"):
        raise WrongTopology(f"expected a path or cycle graph, found {topo.kind}")
    if dm is None:
        dm = all_pairs_shortest_paths(inst)
    env = SignalEnv.build(inst, dm, v, s)
    left, right = _frontier_sides(inst, env, topo)
    is_cycle = topo.kind == "cycle"
    nl, nr = len(left), len(right)
    pos = env.pos
    left_idx = [pos[t] for t in left]
    right_idx = [pos[t] for t in right]

    def leg_ok(cur_idx: int | None, nxt_idx: int, covered: int) -> tuple[bool, int]:
        if cur_idx is None:
            cost = env.w_start[nxt_idx]
            blocked = env.int_start[nxt_idx] & ~covered
        else:
            cost = env.w[cur_idx][nxt_idx]
            blocked = env.interior[cur_idx][nxt_idx] & ~covered
        return blocked == 0, cost

    # state: (i, j, side) -> (time, parent_state, new_target_idx)
    State = tuple[int, int, int]
    table: dict[State, tuple[int, State | None, int]] = {}

    def consider(state: State, time: int, parent: State | None, new_idx: int) -> None:
        old = table.get(state)
        if old is None or time < old[0]:
            table[state] = (time, parent, new_idx)

    def covered_mask(i: int, j: int) -> int:
        m = 0
        for x in left_idx[:i]:
            m |= 1 << x
        for x in right_idx[:j]:
            m |= 1 << x
        return m

    def total_allowed(i: int, j: int) -> bool:
        return i + j <= nl if is_cycle else True

    # Seed from the start vertex.
    if nl and total_allowed(1, 0):
        ok, cost = leg_ok(None, left_idx[0], 0)
        if ok and cost <= env.deadlines[left_idx[0]]:
            consider((1, 0, 0), cost, None, left_idx[0])
    if nr and total_allowed(0, 1):
        ok, cost = leg_ok(None, right_idx[0], 0)
        if ok and cost <= env.deadlines[right_idx[0]]:
            consider((0, 1, 1), cost, None, right_idx[0])

    max_total = nl if is_cycle else nl + nr
    for total in range(1, max_total):
        for (i, j, side), (time, _, _) in [
            (k, val) for k, val in table.items() if k[0] + k[1] == total
        ]:
            covered = covered_mask(i, j)
            cur = left_idx[i - 1] if side == 0 else right_idx[j - 1]
            if i < nl and total_allowed(i + 1, j):
                nxt = left_idx[i]
                ok, cost = leg_ok(cur, nxt, covered)
                if ok and time + cost <= env.deadlines[nxt]:
                    consider((i + 1, j, 0), time + cost, (i, j, side), nxt)
            if j < nr and total_allowed(i, j + 1):
                nxt = right_idx[j]
                ok, cost = leg_ok(cur, nxt, covered)
                if ok and time + cost <= env.deadlines[nxt]:
                    consider((i, j + 1, 1), time + cost, (i, j, side), nxt)

    # Cheapest state per covered set (on a cycle several frontier splits
    # can cover the same arc), route by parent chain.
    best_state: dict[int, State] = {}
    for state, (time, _, _) in table.items():
        key = covered_mask(state[0], state[1])
        cur = best_state.get(key)
        if cur is None or time < table[cur][0]:
            best_state[key] = state

    results = []
    for _, state in sorted(best_state.items(), key=lambda kv: (kv[0].bit_count(), kv[0])):
        chain: list[tuple[int, int]] = []  # (target idx, arrival)
        st: State | None = state
        while st is not None:
            time, parent, new_idx = table[st]
            chain.append((new_idx, time))
            st = parent
        chain.reverse()
        route = env.route_from_indices([c[0] for c in chain], [c[1] for c in chain])
        results.append(
            CoveringSetResult(
                targets=route.covered(),
                route=route,
                cost=route.cost,
            )
        )
    return annotate_dominance(results)


@dataclass(frozen=True)
class StarSchedule:
    """Branch-serving schedule on a star: per target, a job of length
    2 * gamma with deadline d + gamma, in earliest-due-date order."""

    targets: tuple[int, ...]
    durations: tuple[int, ...]
    due_dates: tuple[int, ...]
    completions: tuple[int, ...]
    feasible: bool


def _star_hubs(inst: Instance) -> list[int]:
    """Hubs of a star-shaped graph (every edge incident to one vertex
    touching all others). Unlike detect_topology this accepts the
    degenerate one- and two-branch stars that classify as paths; a
    single edge has two valid hubs."""
    n = inst.num_vertices
    if len(inst.edges) != n - 1 or n < 2:
        return []
    degree = [0] * n
    for u, w, _ in inst.edges:
        degree[u] += 1
        degree[w] += 1
    return [
        hub
        for hub in range(n)
        if degree[hub] == n - 1 and all(hub in (u, w) for u, w, _ in inst.edges)
    ]


def _star_env(v: int, s: Union[str, Signal], inst: Instance) -> list[int]:
    hubs = _star_hubs(inst)
    if not hubs:
        raise WrongTopology(f"expected a star graph, found {detect_topology(inst).kind}")
    if v not in hubs:
        raise StartNotHub(f"start vertex {v} is not the hub {hubs[0]}")
    signal = inst.signal(s) if isinstance(s, str) else s
    return [t for t in signal.targets() if t != v]


def _edd_schedule(inst: Instance, hub: int, targets: list[int]) -> StarSchedule:
    gamma = {t: next(c for u, w, c in inst.edges if {u, w} == {hub, t}) for t in targets}
    order = sorted(targets, key=lambda t: (inst.targets[t].deadline + gamma[t], t))
    completions = []
    clock = 0
    feasible = True
    for t in order:
        clock += 2 * gamma[t]
        completions.append(clock)
        if clock > inst.targets[t].deadline + gamma[t]:
            feasible = False
    return StarSchedule(
        targets=tuple(order),
        durations=tuple(2 * gamma[t] for t in order),
        due_dates=tuple(inst.targets[t].deadline + gamma[t] for t in order),
        completions=tuple(completions),
        feasible=feasible,
    )


def _schedule_route(inst: Instance, hub: int, schedule: StarSchedule) -> Route:
    arrivals = tuple(
        c - d // 2 for c, d in zip(schedule.completions, schedule.durations)
    )
    return Route(start=hub, targets=schedule.targets, arrivals=arrivals)


def edd_full_cover(v: int, s: Union[str, Signal], inst: Instance) -> Route | None:
    """Route covering all of the signal's targets, or None when no such
    route exists (earliest due date is exact here)."""
    targets = _star_env(v, s, inst)
    if not targets:
        return Route(start=v, targets=(), arrivals=())
    schedule = _edd_schedule(inst, v, targets)
    if not schedule.feasible:
        return None
    return _schedule_route(inst, v, schedule)


def best_pure_star(v: int, s: Union[str, Signal], inst: Instance) -> tuple[Route, float]:
    """Best single route from the hub and the attacker's value against it.

    Repeatedly drops the lowest-value target until the earliest-due-date
    schedule of the remainder fits; the dropped values bound what the
    attacker can take.
    """
    targets = _star_env(v, s, inst)
    remaining = list(targets)
    removed: list[int] = []
    while remaining:
        schedule = _edd_schedule(inst, v, remaining)
        if schedule.feasible:
            break
        victim = min(remaining, key=lambda t: (inst.targets[t].value, t))
        remaining.remove(victim)
        removed.append(victim)
    if remaining:
        route = _schedule_route(inst, v, _edd_schedule(inst, v, remaining))
    else:
        route = Route(start=v, targets=(), arrivals=())
    value = max((inst.targets[t].value for t in removed), default=0.0)
    return route, value
