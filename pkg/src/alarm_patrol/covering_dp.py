"""Exact enumeration of proper covering sets by dynamic programming.

The DP grows covering sets one target at a time, keyed by (terminal
target, cardinality). A set extension ``Q -> Q + {t'}`` is kept when the
new target is reached within its deadline and the canonical shortest
path from the current terminal to ``t'`` passes through no target that
is still uncovered, so every stored set admits a route that never walks
over a target outside the set (a proper covering set).

Conventions shared with the other route generators:

- the start vertex, when it is itself one of the signal's targets, is
  treated as covered at time zero and excluded from the enumeration
  universe; payoffs account for it separately;
- the rule above also applies to walk-through checks: the start vertex
  never blocks a leg.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Sequence, Union

from .graph_core import DistanceMatrix, Instance, Signal, all_pairs_shortest_paths

__all__ = [
    "Route",
    "SignalEnv",
    "CoveringCollection",
    "CoveringSetResult",
    "compute_cov_sets",
    "covering_collection",
    "collection_lookup",
    "min_cost_covering_route",
    "annotate_dominance",
    "results_to_documents",
]


@dataclass(frozen=True)
class Route:
    """An ordered visit of distinct targets from a start vertex.

    ``arrivals[i]`` is the turn at which ``targets[i]`` is reached when
    moving along canonical shortest paths between consecutive stops.
    """

    start: int
    targets: tuple[int, ...]
    arrivals: tuple[int, ...]

    @property
    def cost(self) -> int:
        return self.arrivals[-1] if self.arrivals else 0

    def covered(self) -> frozenset[int]:
        return frozenset(self.targets)

    def is_covering(self, inst: Instance) -> bool:
        return all(
            a <= inst.targets[t].deadline for t, a in zip(self.targets, self.arrivals)
        )

    @classmethod
    def from_targets(cls, start: int, seq: Sequence[int], dm: DistanceMatrix) -> "Route":
        arrivals = []
        at = start
        clock = 0
        for t in seq:
            clock += dm.distance(at, t)
            arrivals.append(clock)
            at = t
        return cls(start=start, targets=tuple(seq), arrivals=tuple(arrivals))

    def vertex_sequence(self) -> list[int]:
        return [self.start, *self.targets]


def _resolve_signal(inst: Instance, s: Union[str, Signal]) -> Signal:
    return inst.signal(s) if isinstance(s, str) else s


@dataclass(frozen=True)
class SignalEnv:
    """Bitmask working view of one (start vertex, signal) pair.

    ``universe`` holds the signal's targets other than the start vertex,
    sorted ascending; masks index into it. ``interior[a][b]`` is the
    mask of universe targets strictly inside the canonical path from
    universe[a] to universe[b].
    """

    v: int
    universe: tuple[int, ...]
    pos: dict[int, int]
    full_mask: int
    w_start: tuple[int, ...]
    w: tuple[tuple[int, ...], ...]
    deadlines: tuple[int, ...]
    values: tuple[float, ...]
    int_start: tuple[int, ...]
    interior: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return len(self.universe)

    @classmethod
    def build(cls, inst: Instance, dm: DistanceMatrix, v: int, s: Union[str, Signal]) -> "SignalEnv":
        signal = _resolve_signal(inst, s)
        universe = tuple(t for t in signal.targets() if t != v)
        pos = {t: i for i, t in enumerate(universe)}
        n = len(universe)
        dist = dm.dist

        def path_mask(a: int, b: int) -> int:
            m = 0
            x = a
            hop = dm.first_hop
            while True:
                x = int(hop[x, b])
                if x == b:
                    return m
                i = pos.get(x)
                if i is not None:
                    m |= 1 << i
        w_start = tuple(int(dist[v, t]) for t in universe)
        w = tuple(tuple(int(dist[a, b]) for b in universe) for a in universe)
        deadlines = tuple(inst.targets[t].deadline for t in universe)
        values = tuple(inst.targets[t].value for t in universe)
        int_start = tuple(path_mask(v, t) for t in universe)
        interior = tuple(
            tuple(path_mask(a, b) if a != b else 0 for b in universe) for a in universe
        )
        return cls(
            v=v,
            universe=universe,
            pos=pos,
            full_mask=(1 << n) - 1,
            w_start=w_start,
            w=w,
            deadlines=deadlines,
            values=values,
            int_start=int_start,
            interior=interior,
        )

    def route_from_indices(self, idx_seq: Sequence[int], arrivals: Sequence[int]) -> Route:
        return Route(
            start=self.v,
            targets=tuple(self.universe[i] for i in idx_seq),
            arrivals=tuple(arrivals),
        )


class CoveringCollection:
    """Trie-indexed proper covering sets, per (terminal, cardinality).

    A set over a universe of n targets is a length-n bit vector; each
    (terminal, cardinality) pair owns a binary trie of depth n, so
    membership, insertion and cost lookup each walk n nodes. Entries
    carry the best cost found so far, a predecessor entry for route
    reconstruction, and a dominated mark.
    """

    def __init__(self, env: SignalEnv):
        self.env = env
        n = env.n
        self._n = n
        # Trie nodes as parallel arrays; 0 is the null node.
        self._lo = [0]
        self._hi = [0]
        self._leaf = [0]  # entry id + 1 stored at depth-n nodes
        self._roots: dict[int, int] = {}  # (term * (n+1) + k) -> root node
        # Entry store (struct of arrays).
        self.masks: list[int] = []
        self.terms: list[int] = []
        self.cards: list[int] = []
        self.costs: list[int] = []
        self.parents: list[int] = []
        self.dominated: list[bool] = []

    def __len__(self) -> int:
        return len(self.masks)

    def _root(self, term: int, k: int, create: bool) -> int:
        key = term * (self._n + 1) + k
        node = self._roots.get(key, 0)
        if node == 0 and create:
            self._lo.append(0)
            self._hi.append(0)
            self._leaf.append(0)
            node = len(self._lo) - 1
            self._roots[key] = node
        return node

    def upsert(self, term: int, k: int, mask: int, cost: int, parent: int) -> tuple[int, bool]:
        """Insert mask under (term, k) or lower its stored cost.

        Returns (entry id, created flag); an existing entry with a cost
        no worse than ``cost`` is left untouched.
        """
        lo, hi, leaf = self._lo, self._hi, self._leaf
        node = self._root(term, k, create=True)
        for i in range(self._n):
            if mask >> i & 1:
                nxt = hi[node]
                if nxt == 0:
                    lo.append(0)
                    hi.append(0)
                    leaf.append(0)
                    nxt = len(lo) - 1
                    hi[node] = nxt
            else:
                nxt = lo[node]
                if nxt == 0:
                    lo.append(0)
                    hi.append(0)
                    leaf.append(0)
                    nxt = len(lo) - 1
                    lo[node] = nxt
            node = nxt
        eid = leaf[node] - 1
        if eid < 0:
            eid = len(self.masks)
            self.masks.append(mask)
            self.terms.append(term)
            self.cards.append(k)
            self.costs.append(cost)
            self.parents.append(parent)
            self.dominated.append(False)
            leaf[node] = eid + 1
            return eid, True
        if cost < self.costs[eid]:
            self.costs[eid] = cost
            self.parents[eid] = parent
        return eid, False

    def find(self, term: int, k: int, mask: int) -> int:
        """Entry id for exactly ``mask`` under (term, k), or -1."""
        node = self._root(term, k, create=False)
        if node == 0:
            return -1
        lo, hi = self._lo, self._hi
        for i in range(self._n):
            node = hi[node] if mask >> i & 1 else lo[node]
            if node == 0:
                return -1
        return self._leaf[node] - 1

    def lookup_cost(self, targets: Iterable[int]) -> int | None:
        """Minimum stored cost over terminals for exactly this set."""
        tset = set(targets)
        if not tset:
            return None
        mask = 0
        for t in tset:
            i = self.env.pos.get(t)
            if i is None:
                return None
            mask |= 1 << i
        k = len(tset)
        best: int | None = None
        for term in range(self._n):
            eid = self.find(term, k, mask)
            if eid >= 0 and (best is None or self.costs[eid] < best):
                best = self.costs[eid]
        return best

    def entry_route(self, eid: int) -> Route:
        idx_seq: list[int] = []
        arrivals: list[int] = []
        e = eid
        while e >= 0:
            idx_seq.append(self.terms[e])
            arrivals.append(self.costs[e])
            e = self.parents[e]
        idx_seq.reverse()
        arrivals.reverse()
        return self.env.route_from_indices(idx_seq, arrivals)

    def best_entry_for_mask(self) -> dict[int, int]:
        """Per distinct set: entry id with minimal cost (ties: lowest
        terminal index)."""
        best: dict[int, int] = {}
        for eid in range(len(self.masks)):
            m = self.masks[eid]
            cur = best.get(m)
            if cur is None:
                best[m] = eid
                continue
            if self.costs[eid] < self.costs[cur] or (
                self.costs[eid] == self.costs[cur] and self.terms[eid] < self.terms[cur]
            ):
                best[m] = eid
        return best


@dataclass(frozen=True)
class CoveringSetResult:
    """One proper covering set with its cheapest route found."""

    targets: frozenset[int]
    route: Route
    cost: int
    proper: bool = True
    dominated: bool = False
    maximal: bool = False


def covering_collection(
    v: int,
    s: Union[str, Signal],
    inst: Instance,
    dm: DistanceMatrix | None = None,
) -> CoveringCollection:
    """Run the covering-set DP and return the populated collection."""
    if dm is None:
        dm = all_pairs_shortest_paths(inst)
    env = SignalEnv.build(inst, dm, v, s)
    coll = CoveringCollection(env)
    n = env.n
    w_start, deadlines, int_start = env.w_start, env.deadlines, env.int_start
    full = env.full_mask

    level: list[int] = []
    for i in range(n):
        if w_start[i] <= deadlines[i] and int_start[i] == 0:
            eid, _ = coll.upsert(i, 1, 1 << i, w_start[i], -1)
            level.append(eid)

    masks, terms, costs = coll.masks, coll.terms, coll.costs
    w, interior = env.w, env.interior
    for k in range(2, n + 1):
        if not level:
            break
        new_level: list[int] = []
        for eid in level:
            mask = masks[eid]
            cost = costs[eid]
            w_row = w[terms[eid]]
            int_row = interior[terms[eid]]
            rem = full & ~mask
            while rem:
                b = rem & -rem
                rem ^= b
                j = b.bit_length() - 1
                c2 = cost + w_row[j]
                if c2 > deadlines[j]:
                    continue
                if int_row[j] & ~mask:
                    continue
                eid2, created = coll.upsert(j, k, mask | b, c2, eid)
                if created:
                    new_level.append(eid2)
        level = new_level
    _mark_dominated(coll)
    return coll


def _mark_dominated(coll: CoveringCollection) -> None:
    """Set the per-entry dominated mark: some stored strict superset exists."""
    distinct = sorted(set(coll.masks), key=lambda m: (-m.bit_count(), m))
    maximal: list[int] = []
    dominated_masks = set()
    for m in distinct:
        if any(m & big == m for big in maximal):
            dominated_masks.add(m)
        else:
            maximal.append(m)
    for eid in range(len(coll.masks)):
        coll.dominated[eid] = coll.masks[eid] in dominated_masks


def compute_cov_sets(
    v: int,
    s: Union[str, Signal],
    inst: Instance,
    dm: DistanceMatrix | None = None,
) -> list[CoveringSetResult]:
    """All proper covering sets reachable by the DP, one best route each.

    Results are sorted by (cardinality, target ids); dominance flags are
    set against the returned family (a set is dominated exactly when a
    strict superset is present).
    """
    coll = covering_collection(v, s, inst, dm)
    best = coll.best_entry_for_mask()
    results = []
    for mask in sorted(best, key=lambda m: (m.bit_count(), m)):
        eid = best[mask]
        route = coll.entry_route(eid)
        results.append(
            CoveringSetResult(
                targets=route.covered(),
                route=route,
                cost=coll.costs[eid],
                dominated=coll.dominated[eid],
                maximal=not coll.dominated[eid],
            )
        )
    return results


def collection_lookup(targets: Iterable[int], coll: CoveringCollection) -> int | None:
    """Stored cost for exactly this target set, or None when absent.

    The empty set is always absent (its cost is infinite by convention).
    """
    return coll.lookup_cost(targets)


def min_cost_covering_route(
    targets: Iterable[int],
    results: Union[CoveringCollection, Sequence[CoveringSetResult]],
) -> tuple[Route, int] | None:
    """Cheapest stored route covering exactly ``targets``; None if the
    set is not a stored covering set."""
    tset = frozenset(targets)
    if not tset:
        return None
    if isinstance(results, CoveringCollection):
        coll = results
        mask = 0
        for t in tset:
            i = coll.env.pos.get(t)
            if i is None:
                return None
            mask |= 1 << i
        k = len(tset)
        best_eid = -1
        for term in range(coll.env.n):
            eid = coll.find(term, k, mask)
            if eid >= 0 and (best_eid < 0 or coll.costs[eid] < coll.costs[best_eid]):
                best_eid = eid
        if best_eid < 0:
            return None
        return coll.entry_route(best_eid), coll.costs[best_eid]
    for r in results:
        if r.targets == tset:
            return r.route, r.cost
    return None


def annotate_dominance(results: Sequence[CoveringSetResult]) -> list[CoveringSetResult]:
    """Recompute dominated/maximal flags over the given result family."""
    order = sorted(range(len(results)), key=lambda i: (-len(results[i].targets), sorted(results[i].targets)))
    maximal_sets: list[frozenset[int]] = []
    flags: dict[int, bool] = {}
    for i in order:
        tset = results[i].targets
        dom = any(tset < big for big in maximal_sets)
        flags[i] = dom
        if not dom:
            maximal_sets.append(tset)
    return [
        replace(r, dominated=flags[i], maximal=not flags[i]) for i, r in enumerate(results)
    ]


def results_to_documents(results: Sequence[CoveringSetResult]) -> list[dict]:
    """JSON-ready rows for ``solve --dump-covsets``."""
    return [
        {
            "set": sorted(r.targets),
            "cost": r.cost,
            "route": r.route.vertex_sequence(),
            "maximal": r.maximal,
        }
        for r in results
    ]
