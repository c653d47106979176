"""Seeded instance generators for experiments and hardness constructions.

All generators are deterministic given their parameters and seed. The
PRNG is Python's Mersenne Twister (``random.Random``), which is stable
across platforms and versions, so generated instances are reproducible
byte-for-byte.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Sequence

from .graph_core import Instance, Signal, Target, instance_from_mapping, instance_to_mapping

__all__ = [
    "GenError",
    "InvalidDensity",
    "OddTotalWeight",
    "GeneratedInstance",
    "GenSpec",
    "gen_worstcase",
    "gen_s2lstar",
    "gen_multisignal",
    "gen_from_hampath",
]


class GenError(Exception):
    pass


class InvalidDensity(GenError):
    pass


class OddTotalWeight(GenError):
    pass


@dataclass(frozen=True)
class GeneratedInstance:
    """A generated instance plus the start vertex chosen by the generator.

    The instance file schema has no start-vertex field, so the start is
    reported out of band (callers pass it to the solver explicitly).
    """

    instance: Instance
    start: int


@dataclass(frozen=True)
class GenSpec:
    """Declarative description of a generator run: (kind, params, seed)."""

    kind: str
    params: dict = field(default_factory=dict)
    seed: int = 0

    def build(self) -> GeneratedInstance:
        if self.kind == "worstcase":
            return gen_worstcase(seed=self.seed, **self.params)
        if self.kind == "s2lstar":
            return gen_s2lstar(**self.params)
        if self.kind == "multisignal":
            return gen_multisignal(seed=self.seed, **self.params)
        if self.kind == "hampath-reduction":
            return gen_from_hampath(**self.params)
        raise GenError(f"unknown generator kind {self.kind!r}")


def _validated(mapping: dict) -> Instance:
    # Round-trip through the document schema so every generated instance
    # passes exactly the same validation as a loaded file.
    return instance_from_mapping(mapping)


def _worstcase_graph(n_targets: int, eps: float, rng: random.Random) -> list[tuple[int, int]]:
    n = n_targets
    max_edges = n * (n - 1) // 2
    mean = eps * max_edges
    count = round(rng.gauss(mean, 1.0))
    count = max(n - 1, min(max_edges, count))
    all_pairs = list(itertools.combinations(range(n), 2))
    chosen = set(rng.sample(all_pairs, count))

    # Connectivity repair: bridge components with extra uniform edges.
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in chosen:
        parent[find(u)] = find(v)
    while True:
        roots = {find(v) for v in range(n)}
        if len(roots) == 1:
            break
        comps: dict[int, list[int]] = {}
        for v in range(n):
            comps.setdefault(find(v), []).append(v)
        a_root, b_root = rng.sample(sorted(comps), 2)
        u = rng.choice(comps[a_root])
        v = rng.choice(comps[b_root])
        chosen.add((min(u, v), max(u, v)))
        parent[find(u)] = find(v)
    return sorted(chosen)


def gen_worstcase(n_targets: int, eps: float, seed: int) -> GeneratedInstance:
    """Hard single-signal instance: every vertex a target, unit costs.

    Deadlines are ``n_targets - 1``; values are uniform on (0, 1]; the
    edge count is a unit-sigma normal draw around ``eps`` times the
    complete-graph edge count, clamped so the graph can be connected.
    """
    if n_targets < 2:
        raise GenError("worstcase generation needs at least 2 targets")
    if not 0.0 < eps <= 1.0:
        raise InvalidDensity(f"edge density {eps} outside (0, 1]")
    rng = random.Random(seed)
    edges = _worstcase_graph(n_targets, eps, rng)
    deadline = n_targets - 1
    values = {t: _uniform_value(rng) for t in range(n_targets)}
    start = rng.randrange(n_targets)
    mapping = {
        "vertices": n_targets,
        "edges": [[u, v, 1] for u, v in edges],
        "targets": [
            {"vertex": t, "value": values[t], "deadline": deadline} for t in range(n_targets)
        ],
        "signals": [
            {"id": "s1", "coverage": [{"target": t, "prob": 1.0} for t in range(n_targets)]}
        ],
    }
    return GeneratedInstance(instance=_validated(mapping), start=start)


def _uniform_value(rng: random.Random) -> float:
    # Uniform on (0, 1]: flip random() from [0, 1) half-open.
    return 1.0 - rng.random()


def gen_s2lstar(gamma: Sequence[int]) -> GeneratedInstance:
    """Two-level star encoding equal-halves partition in branch budgets.

    Branch i hangs an inner target (edge cost gamma_i from the hub) and
    an outer target (another gamma_i further out). Deadlines are
    ``6H - 3*gamma_i`` (inner) and ``10H - 2*gamma_i`` (outer) with
    ``H = sum(gamma) / 2``; a full covering route from the hub exists
    exactly when the branch weights split into two equal halves.
    """
    gamma = list(gamma)
    n = len(gamma)
    if n < 2:
        raise GenError("need at least 2 branches")
    if any((not isinstance(g, int)) or g < 1 for g in gamma):
        raise GenError("branch weights must be positive integers")
    total = sum(gamma)
    if total % 2:
        raise OddTotalWeight(f"sum of branch weights {total} is odd")
    h = total // 2
    edges = []
    target_rows = []
    for i, g in enumerate(gamma, start=1):
        inner = i
        outer = n + i
        edges.append([0, inner, g])
        edges.append([inner, outer, g])
        d_inner = 6 * h - 3 * g
        d_outer = 10 * h - 2 * g
        if d_inner < 1 or d_outer < 1:
            raise GenError(f"branch weight {g} leaves a non-positive deadline")
        target_rows.append({"vertex": inner, "value": 1.0, "deadline": d_inner})
        target_rows.append({"vertex": outer, "value": 1.0, "deadline": d_outer})
    mapping = {
        "vertices": 2 * n + 1,
        "edges": edges,
        "targets": sorted(target_rows, key=lambda r: r["vertex"]),
        "signals": [
            {
                "id": "s1",
                "coverage": [{"target": r["vertex"], "prob": 1.0} for r in sorted(target_rows, key=lambda r: r["vertex"])],
            }
        ],
    }
    return GeneratedInstance(instance=_validated(mapping), start=0)


def gen_multisignal(n_targets: int, m: int, eps: float, seed: int) -> GeneratedInstance:
    """Worst-case graph layer with ``m`` signals of random coverage.

    Each target picks a uniformly random non-empty subset of signals and
    uniform-random positive probabilities over it, normalized to sum to
    one. A signal left with no targets is repaired by attaching it to a
    random target (and renormalizing that target's row), so generated
    instances always validate.
    """
    if m < 1:
        raise GenError("need at least one signal")
    base = gen_worstcase(n_targets, eps, seed)
    rng = random.Random(seed ^ 0x5F5E1A7)  # decoupled from the graph draw
    assignment: dict[int, list[str]] = {}
    signal_ids = [f"s{i + 1}" for i in range(m)]
    for t in range(n_targets):
        mask = rng.randrange(1, 2**m)
        assignment[t] = [signal_ids[i] for i in range(m) if mask >> i & 1]
    for i, sid in enumerate(signal_ids):
        if not any(sid in chosen for chosen in assignment.values()):
            assignment[rng.randrange(n_targets)].append(sid)
    weights = {
        t: {sid: _uniform_value(rng) for sid in chosen} for t, chosen in assignment.items()
    }
    mapping = instance_to_mapping(base.instance)
    coverage: dict[str, list[dict]] = {sid: [] for sid in signal_ids}
    for t in range(n_targets):
        total = sum(weights[t].values())
        for sid in sorted(weights[t], key=signal_ids.index):
            coverage[sid].append({"target": t, "prob": weights[t][sid] / total})
    mapping["signals"] = [{"id": sid, "coverage": coverage[sid]} for sid in signal_ids]
    return GeneratedInstance(instance=_validated(mapping), start=base.start)


def gen_from_hampath(adjacency: Sequence[Sequence[int]]) -> GeneratedInstance:
    """Instance whose game value is zero iff the input graph has a
    Hamiltonian path.

    A fresh start vertex is joined to every input vertex; every input
    vertex becomes a target with deadline equal to the input vertex
    count, unit edge costs, one signal.
    """
    n = len(adjacency)
    if n < 1:
        raise GenError("input graph is empty")
    edges = set()
    for u, nbrs in enumerate(adjacency):
        for v in nbrs:
            if not 0 <= v < n:
                raise GenError(f"neighbor {v} out of range")
            if u == v:
                continue
            edges.add((min(u, v), max(u, v)))
    start = n
    for u in range(n):
        edges.add((u, start))
    mapping = {
        "vertices": n + 1,
        "edges": [[u, v, 1] for u, v in sorted(edges)],
        "targets": [{"vertex": t, "value": 1.0, "deadline": n} for t in range(n)],
        "signals": [
            {"id": "s1", "coverage": [{"target": t, "prob": 1.0} for t in range(n)]}
        ],
    }
    return GeneratedInstance(instance=_validated(mapping), start=start)
