"""Instance model, validation, and all-pairs shortest paths.

An instance is an undirected connected graph with positive integer edge
costs (turns), a set of target vertices carrying a value and a deadline,
and an alarm system: a list of signals, each with a conditional
probability of being raised when one of its targets is attacked.

Vertices are dense integers ``0 .. num_vertices-1``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

__all__ = [
    "Target",
    "Signal",
    "Instance",
    "DistanceMatrix",
    "InstanceError",
    "MalformedDocument",
    "DisconnectedGraph",
    "ProbabilityNotNormalized",
    "EmptySignalCoverage",
    "SignalUnknown",
    "build_instance",
    "instance_from_mapping",
    "instance_to_mapping",
    "serialize_instance",
    "all_pairs_shortest_paths",
    "interior_targets",
]

PROB_TOL = 1e-9


class InstanceError(Exception):
    """Base class for instance validation failures."""


class MalformedDocument(InstanceError):
    pass


class DisconnectedGraph(InstanceError):
    pass


class ProbabilityNotNormalized(InstanceError):
    def __init__(self, target: int, total: float):
        self.target = target
        self.total = total
        super().__init__(f"signal probabilities for target {target} sum to {total}, expected 1")


class EmptySignalCoverage(InstanceError):
    def __init__(self, signal_id: str):
        self.signal_id = signal_id
        super().__init__(f"signal {signal_id!r} covers no target")


class SignalUnknown(InstanceError):
    def __init__(self, signal_id: str):
        self.signal_id = signal_id
        super().__init__(f"unknown signal {signal_id!r}")


@dataclass(frozen=True)
class Target:
    """A sensitive vertex: value in (0, 1], deadline in turns (>= 1)."""

    value: float
    deadline: int


@dataclass(frozen=True)
class Signal:
    """An alarm signal with its per-target generation probabilities.

    ``coverage`` maps target vertex -> p(signal | attack on target); only
    strictly positive entries are stored, so its key set is the set of
    targets able to raise this signal.
    """

    id: str
    coverage: Mapping[int, float]

    def targets(self) -> tuple[int, ...]:
        return tuple(sorted(self.coverage))


@dataclass(frozen=True)
class Instance:
    """Validated game instance. Immutable after construction."""

    num_vertices: int
    edges: tuple[tuple[int, int, int], ...]
    targets: Mapping[int, Target]
    signals: tuple[Signal, ...]
    _signals_by_id: Mapping[str, Signal] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_signals_by_id", {s.id: s for s in self.signals})

    @property
    def target_ids(self) -> tuple[int, ...]:
        return tuple(sorted(self.targets))

    def signal(self, signal_id: str) -> Signal:
        try:
            return self._signals_by_id[signal_id]
        except KeyError:
            raise SignalUnknown(signal_id) from None

    def signals_for_target(self, t: int) -> tuple[Signal, ...]:
        return tuple(s for s in self.signals if t in s.coverage)

    def adjacency(self) -> list[list[tuple[int, int]]]:
        """Neighbor lists as (vertex, cost) pairs, neighbors ascending."""
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.num_vertices)]
        for u, v, c in self.edges:
            adj[u].append((v, c))
            adj[v].append((u, c))
        for row in adj:
            row.sort()
        return adj


def _require_keys(obj: dict, allowed: set[str], where: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise MalformedDocument(f"unknown keys {sorted(unknown)} in {where}")


def _as_int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise MalformedDocument(f"{where} must be an integer, got {value!r}")
    return value


def instance_from_mapping(doc: Mapping) -> Instance:
    """Build and validate an Instance from a parsed document mapping."""
    if not isinstance(doc, dict):
        raise MalformedDocument("top-level document must be an object")
    _require_keys(doc, {"vertices", "edges", "targets", "signals"}, "document")
    for key in ("vertices", "edges", "targets", "signals"):
        if key not in doc:
            raise MalformedDocument(f"missing key {key!r}")

    n = _as_int(doc["vertices"], "vertices")
    if n < 1:
        raise MalformedDocument("vertices must be >= 1")

    edges: list[tuple[int, int, int]] = []
    seen = set()
    for item in doc["edges"]:
        if not isinstance(item, (list, tuple)) or len(item) != 3:
            raise MalformedDocument(f"edge {item!r} must be [u, v, cost]")
        u = _as_int(item[0], "edge endpoint")
        v = _as_int(item[1], "edge endpoint")
        c = _as_int(item[2], "edge cost")
        if not (0 <= u < n and 0 <= v < n):
            raise MalformedDocument(f"edge ({u}, {v}) out of vertex range")
        if u == v:
            raise MalformedDocument(f"self-loop at vertex {u}")
        if c < 1:
            raise MalformedDocument(f"edge ({u}, {v}) has non-positive cost {c}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise MalformedDocument(f"duplicate edge ({u}, {v})")
        seen.add(key)
        edges.append((key[0], key[1], c))
    edges.sort()

    targets: dict[int, Target] = {}
    for item in doc["targets"]:
        if not isinstance(item, dict):
            raise MalformedDocument(f"target entry {item!r} must be an object")
        _require_keys(item, {"vertex", "value", "deadline"}, "target entry")
        t = _as_int(item.get("vertex"), "target vertex")
        if not 0 <= t < n:
            raise MalformedDocument(f"target vertex {t} out of range")
        if t in targets:
            raise MalformedDocument(f"duplicate target {t}")
        value = item.get("value")
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise MalformedDocument(f"target {t} value must be a number")
        value = float(value)
        if not 0.0 < value <= 1.0:
            raise MalformedDocument(f"target {t} value {value} outside (0, 1]")
        deadline = _as_int(item.get("deadline"), f"target {t} deadline")
        if deadline < 1:
            raise MalformedDocument(f"target {t} deadline {deadline} must be >= 1")
        targets[t] = Target(value=value, deadline=deadline)
    if not targets:
        raise MalformedDocument("instance has no targets")

    signals: list[Signal] = []
    signal_ids = set()
    for item in doc["signals"]:
        if not isinstance(item, dict):
            raise MalformedDocument(f"signal entry {item!r} must be an object")
        _require_keys(item, {"id", "coverage"}, "signal entry")
        sid = item.get("id")
        if not isinstance(sid, str) or not sid:
            raise MalformedDocument("signal id must be a non-empty string")
        if sid in signal_ids:
            raise MalformedDocument(f"duplicate signal id {sid!r}")
        signal_ids.add(sid)
        coverage: dict[int, float] = {}
        for cov in item.get("coverage", []):
            if not isinstance(cov, dict):
                raise MalformedDocument(f"coverage entry {cov!r} must be an object")
            _require_keys(cov, {"target", "prob"}, "coverage entry")
            t = _as_int(cov.get("target"), "coverage target")
            if t not in targets:
                raise MalformedDocument(f"signal {sid!r} covers non-target vertex {t}")
            p = cov.get("prob")
            if not isinstance(p, (int, float)) or isinstance(p, bool):
                raise MalformedDocument(f"signal {sid!r} probability must be a number")
            p = float(p)
            if not 0.0 < p <= 1.0:
                raise MalformedDocument(f"signal {sid!r} probability {p} outside (0, 1]")
            if t in coverage:
                raise MalformedDocument(f"signal {sid!r} lists target {t} twice")
            coverage[t] = p
        if not coverage:
            raise EmptySignalCoverage(sid)
        signals.append(Signal(id=sid, coverage=coverage))
    if not signals:
        raise MalformedDocument("instance has no signals")

    inst = Instance(
        num_vertices=n,
        edges=tuple(edges),
        targets=targets,
        signals=tuple(signals),
    )
    _validate(inst)
    return inst


def _validate(inst: Instance) -> None:
    # Connectivity (union-find over edges).
    parent = list(range(inst.num_vertices))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v, _ in inst.edges:
        parent[find(u)] = find(v)
    root = find(0)
    if any(find(v) != root for v in range(inst.num_vertices)):
        raise DisconnectedGraph("graph is not connected")

    # Every target raises some signal with total probability one.
    for t in inst.target_ids:
        total = sum(s.coverage.get(t, 0.0) for s in inst.signals)
        if abs(total - 1.0) > PROB_TOL:
            raise ProbabilityNotNormalized(t, total)


def build_instance(document: str) -> Instance:
    """Parse an instance file (JSON text) into a validated Instance."""
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"invalid JSON: {exc}") from exc
    return instance_from_mapping(doc)


def instance_to_mapping(inst: Instance) -> dict:
    return {
        "vertices": inst.num_vertices,
        "edges": [[u, v, c] for u, v, c in inst.edges],
        "targets": [
            {"vertex": t, "value": inst.targets[t].value, "deadline": inst.targets[t].deadline}
            for t in inst.target_ids
        ],
        "signals": [
            {
                "id": s.id,
                "coverage": [{"target": t, "prob": s.coverage[t]} for t in s.targets()],
            }
            for s in inst.signals
        ],
    }


def serialize_instance(inst: Instance) -> str:
    return json.dumps(instance_to_mapping(inst), indent=2) + "\n"


@dataclass(frozen=True)
class DistanceMatrix:
    """Exact integer shortest-path distances plus canonical paths.

    ``first_hop[u, w]`` is the first vertex after ``u`` on the canonical
    shortest path u -> w. Among all shortest paths the canonical one is
    the lexicographically smallest vertex sequence, i.e. ties are broken
    toward the lower-id next vertex at every step.
    """

    dist: np.ndarray
    first_hop: np.ndarray

    def distance(self, u: int, w: int) -> int:
        return int(self.dist[u, w])

    def path(self, u: int, w: int) -> list[int]:
        """Canonical shortest path from u to w, endpoints included."""
        out = [u]
        while u != w:
            u = int(self.first_hop[u, w])
            out.append(u)
        return out


def all_pairs_shortest_paths(inst: Instance) -> DistanceMatrix:
    """Floyd-Warshall distances with deterministic path reconstruction."""
    n = inst.num_vertices
    big = np.iinfo(np.int64).max // 4
    dist = np.full((n, n), big, dtype=np.int64)
    np.fill_diagonal(dist, 0)
    for u, v, c in inst.edges:
        if c < dist[u, v]:
            dist[u, v] = c
            dist[v, u] = c
    for k in range(n):
        via = dist[:, k : k + 1] + dist[k : k + 1, :]
        np.minimum(dist, via, out=dist)

    # Canonical first hop: lowest-id neighbor lying on some shortest path.
    first_hop = np.full((n, n), -1, dtype=np.int64)
    adj = inst.adjacency()
    for u in range(n):
        row = dist[u]
        for x, c in adj[u]:  # neighbors ascending, first match wins
            on_path = (c + dist[x]) == row
            unset = first_hop[u] == -1
            first_hop[u][on_path & unset] = x
        first_hop[u, u] = -1
    return DistanceMatrix(dist=dist, first_hop=first_hop)


def interior_targets(u: int, w: int, inst: Instance, dm: DistanceMatrix) -> frozenset[int]:
    """Targets strictly between u and w on the canonical path u -> w."""
    if u == w:
        raise ValueError("interior_targets requires distinct endpoints")
    path = dm.path(u, w)
    return frozenset(x for x in path[1:-1] if x in inst.targets)


def edge_list_from_pairs(n: int, pairs: Iterable[tuple[int, int]], cost: int = 1) -> list[tuple[int, int, int]]:
    """Helper for generators: undirected unit/uniform-cost edge list."""
    return [(min(u, v), max(u, v), cost) for u, v in pairs]
