import json

import pytest

from alarm_patrol.graph_core import (
    DisconnectedGraph,
    EmptySignalCoverage,
    MalformedDocument,
    ProbabilityNotNormalized,
    all_pairs_shortest_paths,
    build_instance,
    interior_targets,
    serialize_instance,
)
from alarm_patrol.instance_gen import gen_multisignal, gen_worstcase

from conftest import fig1_doc, line_doc, make_instance


def test_fig1_builds_with_four_targets(fig1):
    inst, _ = fig1
    assert len(inst.target_ids) == 4
    assert inst.target_ids == (1, 2, 3, 4)
    assert inst.targets[1].value == 0.5
    assert inst.targets[1].deadline == 4


def test_minimal_single_vertex_instance():
    inst = make_instance(
        {
            "vertices": 1,
            "edges": [],
            "targets": [{"vertex": 0, "value": 1.0, "deadline": 1}],
            "signals": [{"id": "s1", "coverage": [{"target": 0, "prob": 1.0}]}],
        }
    )
    assert inst.num_vertices == 1


def test_unnormalized_target_probability_rejected():
    doc = fig1_doc()
    doc["signals"] = [{"id": "s1", "coverage": [{"target": t, "prob": 1.0} for t in (2, 3, 4)] + [{"target": 1, "prob": 0.5}]}]
    with pytest.raises(ProbabilityNotNormalized) as err:
        make_instance(doc)
    assert err.value.target == 1


def test_empty_signal_coverage_rejected():
    doc = fig1_doc()
    doc["signals"].append({"id": "s2", "coverage": []})
    with pytest.raises(EmptySignalCoverage):
        make_instance(doc)


def test_disconnected_graph_rejected():
    doc = fig1_doc()
    doc["vertices"] = 6
    with pytest.raises(DisconnectedGraph):
        make_instance(doc)


def test_unknown_keys_rejected():
    doc = fig1_doc()
    doc["start"] = 0
    with pytest.raises(MalformedDocument):
        make_instance(doc)


def test_bad_json_rejected():
    with pytest.raises(MalformedDocument):
        build_instance("{not json")


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d["edges"].append([0, 0, 1]),
        lambda d: d["edges"].append([0, 1, 1]),
        lambda d: d["edges"].append([0, 9, 1]),
        lambda d: d["edges"].__setitem__(0, [0, 1, 0]),
        lambda d: d["targets"].__setitem__(0, {"vertex": 1, "value": 0.0, "deadline": 4}),
        lambda d: d["targets"].__setitem__(0, {"vertex": 1, "value": 0.5, "deadline": 0}),
    ],
)
def test_malformed_structures_rejected(mutate):
    doc = fig1_doc()
    mutate(doc)
    with pytest.raises(MalformedDocument):
        make_instance(doc)


def test_fig1_distances(fig1):
    inst, dm = fig1
    assert dm.distance(1, 3) == 2
    assert dm.distance(1, 2) == 1
    assert all(dm.distance(v, v) == 0 for v in range(inst.num_vertices))


def test_two_branch_star_distance():
    inst = make_instance(
        {
            "vertices": 3,
            "edges": [[0, 1, 2], [0, 2, 3]],
            "targets": [
                {"vertex": 1, "value": 1.0, "deadline": 5},
                {"vertex": 2, "value": 1.0, "deadline": 9},
            ],
            "signals": [
                {
                    "id": "s1",
                    "coverage": [{"target": 1, "prob": 1.0}, {"target": 2, "prob": 1.0}],
                }
            ],
        }
    )
    dm = all_pairs_shortest_paths(inst)
    assert dm.distance(1, 2) == 5


def test_canonical_path_cost_matches_distance(fig1):
    inst, dm = fig1
    for u in range(5):
        for w in range(5):
            if u == w:
                continue
            path = dm.path(u, w)
            cost = sum(dm.distance(a, b) for a, b in zip(path, path[1:]))
            assert cost == dm.distance(u, w)
            assert path[0] == u and path[-1] == w


def test_canonical_path_prefers_lower_ids_on_ties():
    # Square 0-1-3 / 0-2-3: two shortest paths from 0 to 3.
    inst = make_instance(
        {
            "vertices": 4,
            "edges": [[0, 1, 1], [1, 3, 1], [0, 2, 1], [2, 3, 1]],
            "targets": [{"vertex": 3, "value": 1.0, "deadline": 2}],
            "signals": [{"id": "s1", "coverage": [{"target": 3, "prob": 1.0}]}],
        }
    )
    dm = all_pairs_shortest_paths(inst)
    assert dm.path(0, 3) == [0, 1, 3]
    assert dm.path(3, 0) == [3, 1, 0]


def test_interior_targets_fig1(fig1):
    inst, dm = fig1
    assert interior_targets(1, 2, inst, dm) == frozenset()
    assert interior_targets(1, 3, inst, dm) == frozenset()  # passes only the hub


def test_interior_targets_on_a_line():
    # t1 - t2 - v - t3 - t4 with unit edges; 0..4 left to right.
    doc = {
        "vertices": 5,
        "edges": [[0, 1, 1], [1, 2, 1], [2, 3, 1], [3, 4, 1]],
        "targets": [{"vertex": t, "value": 0.5, "deadline": 4} for t in (0, 1, 3, 4)],
        "signals": [
            {"id": "s1", "coverage": [{"target": t, "prob": 1.0} for t in (0, 1, 3, 4)]}
        ],
    }
    inst = make_instance(doc)
    dm = all_pairs_shortest_paths(inst)
    assert interior_targets(0, 3, inst, dm) == frozenset({1})
    assert interior_targets(1, 3, inst, dm) == frozenset()


def test_interior_excludes_endpoints():
    inst = make_instance(line_doc(8, seed=5, target_frac=1.0))
    dm = all_pairs_shortest_paths(inst)
    for u in range(8):
        for w in range(8):
            if u != w:
                inner = interior_targets(u, w, inst, dm)
                assert u not in inner and w not in inner


@pytest.mark.parametrize("seed", range(6))
def test_triangle_inequality_on_generated_instances(seed):
    gen = gen_worstcase(9, 0.4, seed)
    dm = all_pairs_shortest_paths(gen.instance)
    n = gen.instance.num_vertices
    for u in range(n):
        for v in range(n):
            for w in range(n):
                assert dm.distance(u, w) <= dm.distance(u, v) + dm.distance(v, w)


@pytest.mark.parametrize("seed", range(4))
def test_serialize_round_trip(seed):
    gen = gen_multisignal(7, 3, 0.5, seed)
    text = serialize_instance(gen.instance)
    again = build_instance(text)
    assert again == gen.instance
    assert serialize_instance(again) == text
