import json
import random

import pytest

from alarm_patrol.graph_core import all_pairs_shortest_paths, build_instance


def make_instance(doc: dict):
    return build_instance(json.dumps(doc))


def fig1_doc(signal="single"):
    """Hourglass graph: hub 0, targets 1..4, edges hub-leaf plus (1,2), (3,4)."""
    doc = {
        "vertices": 5,
        "edges": [[0, 1, 1], [0, 2, 1], [0, 3, 1], [0, 4, 1], [1, 2, 1], [3, 4, 1]],
        "targets": [{"vertex": t, "value": 0.5, "deadline": 4} for t in (1, 2, 3, 4)],
    }
    if signal == "single":
        doc["signals"] = [
            {"id": "s1", "coverage": [{"target": t, "prob": 1.0} for t in (1, 2, 3, 4)]}
        ]
    else:  # the five-signal system: own signal 0.6, every other 0.1
        sigs = []
        for i in range(1, 6):
            cov = []
            for t in (1, 2, 3, 4):
                p = 0.6 if i == t + 1 else 0.1
                cov.append({"target": t, "prob": p})
            sigs.append({"id": f"s{i}", "coverage": cov})
        doc["signals"] = sigs
    return doc


def line_doc(n, seed, target_frac=0.8, max_cost=2):
    r = random.Random(seed)
    edges = [[i, i + 1, r.randint(1, max_cost)] for i in range(n - 1)]
    targets = [
        {"vertex": t, "value": round(1 - r.random(), 6), "deadline": r.randint(1, 2 * n)}
        for t in range(n)
        if r.random() < target_frac
    ]
    if not targets:
        targets = [{"vertex": 0, "value": 1.0, "deadline": n}]
    return {
        "vertices": n,
        "edges": edges,
        "targets": targets,
        "signals": [
            {"id": "s1", "coverage": [{"target": t["vertex"], "prob": 1.0} for t in targets]}
        ],
    }


def cycle_doc(n, seed, target_frac=0.8, max_cost=2):
    r = random.Random(seed)
    edges = [
        [min(i, (i + 1) % n), max(i, (i + 1) % n), r.randint(1, max_cost)] for i in range(n)
    ]
    targets = [
        {"vertex": t, "value": round(1 - r.random(), 6), "deadline": r.randint(1, 2 * n)}
        for t in range(n)
        if r.random() < target_frac
    ]
    if not targets:
        targets = [{"vertex": 0, "value": 1.0, "deadline": n}]
    return {
        "vertices": n,
        "edges": edges,
        "targets": targets,
        "signals": [
            {"id": "s1", "coverage": [{"target": t["vertex"], "prob": 1.0} for t in targets]}
        ],
    }


def star_doc(n_leaves, seed, max_gamma=3, max_deadline_factor=4):
    r = random.Random(seed)
    edges = [[0, i, r.randint(1, max_gamma)] for i in range(1, n_leaves + 1)]
    targets = [
        {
            "vertex": i,
            "value": round(1 - r.random(), 6),
            "deadline": r.randint(1, max_deadline_factor * n_leaves),
        }
        for i in range(1, n_leaves + 1)
    ]
    return {
        "vertices": n_leaves + 1,
        "edges": edges,
        "targets": targets,
        "signals": [
            {"id": "s1", "coverage": [{"target": t["vertex"], "prob": 1.0} for t in targets]}
        ],
    }


@pytest.fixture(scope="session")
def fig1():
    inst = make_instance(fig1_doc())
    return inst, all_pairs_shortest_paths(inst)


@pytest.fixture(scope="session")
def fig1_multisignal():
    inst = make_instance(fig1_doc(signal="multi"))
    return inst, all_pairs_shortest_paths(inst)
