"""Depth-first branch-and-bound search over covering routes.

Routes grow by inserting one new target after an existing position,
never reordering what is already there, so a route's first target is
fixed for its whole subtree. Closed routes feed two sets: a minimal set
used to prune expansions that revisit explored ground, and a maximal
set collected as the result.

Route containment here is the expansion relation: r' is contained in r
when both start at the same vertex, share the first target, and r'
visits its targets as an order-preserving subsequence of r. Requiring
the first target to match is what makes pruning safe: an insertion can
never displace position one, so only routes with the same first target
are reachable by expanding r'.

The ``rho`` knob disables backtracking for the first
``ceil(rho * |T(s)|)`` expansions of every branch (pure greedy dives at
rho=1, exhaustive search at rho=0). ``delta`` splits targets into tight
(deadline < delta * distance-from-start) and large; tight targets are
always inserted first, ranked by the conservative insertion score
``h = min(advance time, forward slack - extra mileage)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence, Union

from .covering_dp import Route, SignalEnv
from .graph_core import DistanceMatrix, Instance, Signal, all_pairs_shortest_paths

__all__ = [
    "SearchState",
    "Insertion",
    "branch_and_bound",
    "tree_search",
    "close",
    "expand",
    "heuristic_h",
    "possible_forward_shift",
    "is_contained",
]


def is_contained(small: Route, big: Route) -> bool:
    """Expansion containment: same start, same first target, and
    ``small``'s target sequence embeds in ``big``'s preserving order."""
    if small.start != big.start or not small.targets:
        return False
    if not big.targets or small.targets[0] != big.targets[0]:
        return False
    it = iter(big.targets)
    return all(t in it for t in small.targets)


def possible_forward_shift(route: Route, inst: Instance) -> int:
    """Minimum slack d(t) - arrival(t) over the route's targets."""
    return min(
        inst.targets[t].deadline - a for t, a in zip(route.targets, route.arrivals)
    )


def heuristic_h(
    route: Route,
    t_new: int,
    p: int,
    inst: Instance,
    dm: DistanceMatrix | None = None,
) -> int:
    """Insertion score for placing ``t_new`` after the p-th target.

    The advance time is the margin left on the new target's deadline;
    the extra mileage is the delay pushed onto the targets after
    position p (zero for tail insertions, which displace nothing).
    """
    if dm is None:
        dm = all_pairs_shortest_paths(inst)
    if not 1 <= p <= len(route.targets):
        raise ValueError("insertion position out of range")
    if t_new in route.targets:
        raise ValueError("target already on the route")
    anchor = route.targets[p - 1]
    arr_anchor = route.arrivals[p - 1]
    advance = inst.targets[t_new].deadline - (arr_anchor + dm.distance(anchor, t_new))
    pfs = possible_forward_shift(route, inst)
    if p < len(route.targets):
        nxt = route.targets[p]
        extra = (
            arr_anchor
            + dm.distance(anchor, t_new)
            + dm.distance(t_new, nxt)
            - route.arrivals[p]
        )
    else:
        extra = 0
    return min(advance, pfs - extra)


@dataclass(frozen=True)
class Insertion:
    """One accepted expansion: target ``q`` placed after position ``p``."""

    route: Route
    target: int
    position: int
    result: Route
    score: int


@dataclass
class SearchState:
    """Mutable search bookkeeping for one (v, s, rho, delta) run."""

    env: SignalEnv
    rho: float
    delta: float
    # first target -> { mask -> set of target sequences } of closed
    # routes that are minimal under containment.
    cl_min: dict[int, dict[int, set[tuple[int, ...]]]] = field(default_factory=dict)
    # first target -> closed maximal routes in insertion order.
    cl_max: dict[int, list[Route]] = field(default_factory=dict)
    tight: frozenset[int] = frozenset()

    @classmethod
    def create(cls, env: SignalEnv, rho: float, delta: float) -> "SearchState":
        tight = frozenset(
            t
            for t, w, d in zip(env.universe, env.w_start, env.deadlines)
            if d < delta * w
        )
        return cls(env=env, rho=rho, delta=delta, tight=tight)

    def mask_of(self, targets: Sequence[int]) -> int:
        pos = self.env.pos
        m = 0
        for t in targets:
            m |= 1 << pos[t]
        return m

    def cl_min_routes(self) -> Iterator[tuple[int, tuple[int, ...]]]:
        for first, by_mask in self.cl_min.items():
            for mask, seqs in by_mask.items():
                for seq in seqs:
                    yield mask, seq

    def all_cl_max(self) -> list[Route]:
        out: list[Route] = []
        for first in sorted(self.cl_max, key=self.env.pos.get):
            out.extend(self.cl_max[first])
        return out


def _is_subseq(small: tuple[int, ...], big: tuple[int, ...]) -> bool:
    it = iter(big)
    return all(t in it for t in small)


def _pruned_by_cl_min(state: SearchState, seq: tuple[int, ...], mask: int) -> bool:
    by_mask = state.cl_min.get(seq[0])
    if not by_mask:
        return False
    for m, seqs in by_mask.items():
        if m & mask != m:
            continue
        if m == mask:
            if seq in seqs:
                return True
            continue
        if any(_is_subseq(s, seq) for s in seqs):
            return True
    return False


def close(route: Route, state: SearchState) -> None:
    """Fold a closed route into the minimal and maximal sets."""
    seq = route.targets
    first = seq[0]
    mask = state.mask_of(seq)
    by_mask = state.cl_min.setdefault(first, {})
    # Drop stored supersequences of the new route.
    for m in list(by_mask):
        if mask & m != mask:
            continue
        seqs = by_mask[m]
        survivors = {s for s in seqs if not _is_subseq(seq, s)}
        if survivors:
            by_mask[m] = survivors
        else:
            del by_mask[m]
    by_mask.setdefault(mask, set()).add(seq)

    bucket = state.cl_max.setdefault(first, [])
    for other in bucket:
        if is_contained(route, other):
            return
    bucket.append(route)


def expand(route: Route, state: SearchState) -> list[Insertion]:
    """Accepted single-target insertions, best-ranked first.

    Tight targets come before large ones. Within a class, positions are
    ranked per target by descending score, targets by their best
    position's score; expansions that stop being covering routes or
    that contain a closed minimal route are dropped.
    """
    env = state.env
    pos = env.pos
    seq = route.targets
    arrivals = route.arrivals
    idx_seq = [pos[t] for t in seq]
    k = len(seq)
    present = state.mask_of(seq)
    pfs = min(env.deadlines[i] - a for i, a in zip(idx_seq, arrivals))

    def candidates(target_pool: list[int]) -> list[Insertion]:
        per_target: list[tuple[int, int, list[tuple[int, int, Route]]]] = []
        for q in target_pool:
            qi = pos[q]
            d_q = env.deadlines[qi]
            options: list[tuple[int, int, Route]] = []
            for p in range(1, k + 1):
                anchor = idx_seq[p - 1]
                arr_q = arrivals[p - 1] + env.w[anchor][qi]
                if arr_q > d_q:
                    continue
                if p < k:
                    nxt = idx_seq[p]
                    extra = arr_q + env.w[qi][nxt] - arrivals[p]
                    # Shift every later arrival and recheck deadlines.
                    feasible = all(
                        arrivals[j] + extra <= env.deadlines[idx_seq[j]]
                        for j in range(p, k)
                    )
                    if not feasible:
                        continue
                else:
                    extra = 0
                new_seq = seq[:p] + (q,) + seq[p:]
                new_arrivals = (
                    arrivals[:p] + (arr_q,) + tuple(a + extra for a in arrivals[p:])
                )
                if _pruned_by_cl_min(state, new_seq, present | (1 << qi)):
                    continue
                advance = d_q - arr_q
                score = min(advance, pfs - extra)
                options.append(
                    (score, p, Route(start=route.start, targets=new_seq, arrivals=new_arrivals))
                )
            if options:
                options.sort(key=lambda o: (-o[0], o[1]))
                per_target.append((options[0][0], q, options))
        per_target.sort(key=lambda item: (-item[0], item[1]))
        out: list[Insertion] = []
        for _, q, options in per_target:
            for score, p, new_route in options:
                out.append(
                    Insertion(route=route, target=q, position=p, result=new_route, score=score)
                )
        return out

    missing = [t for t in env.universe if not present >> pos[t] & 1]
    tight_pool = [t for t in missing if t in state.tight]
    large_pool = [t for t in missing if t not in state.tight]
    return candidates(tight_pool) + candidates(large_pool)


def tree_search(k: int, route: Route, state: SearchState) -> None:
    """Depth-first exploration: greedy while ``k`` lasts, then full
    backtracking with post-order closing."""
    expansions = expand(route, state)
    if not expansions:
        close(route, state)
        return
    if k > 0:
        tree_search(k - 1, expansions[0].result, state)
        return
    for ins in expansions:
        tree_search(0, ins.result, state)
        close(ins.result, state)


def branch_and_bound(
    v: int,
    s: Union[str, Signal],
    rho: float,
    delta: float,
    inst: Instance,
    dm: DistanceMatrix | None = None,
) -> list[Route]:
    """Collected maximal closed routes over all reachable first targets.

    With rho=0 the search is exhaustive and the covered-set family of
    the result (after inter-set dominance filtering) matches the exact
    enumeration; with rho=1 each first target yields one greedy dive.
    """
    if not 0.0 <= rho <= 1.0:
        raise ValueError("rho must lie in [0, 1]")
    if delta <= 0:
        raise ValueError("delta must be positive")
    if dm is None:
        dm = all_pairs_shortest_paths(inst)
    env = SignalEnv.build(inst, dm, v, s)
    signal = inst.signal(s) if isinstance(s, str) else s
    state = SearchState.create(env, rho, delta)
    greedy = math.ceil(rho * len(signal.targets()))
    for i, t in enumerate(env.universe):
        if env.w_start[i] <= env.deadlines[i]:
            seed_route = Route(start=v, targets=(t,), arrivals=(env.w_start[i],))
            tree_search(greedy, seed_route, state)
    return state.all_cl_max()
