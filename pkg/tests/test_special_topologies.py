import pytest

from alarm_patrol.covering_dp import compute_cov_sets
from alarm_patrol.graph_core import all_pairs_shortest_paths
from alarm_patrol.special_topologies import (
    StartNotHub,
    WrongTopology,
    best_pure_star,
    detect_topology,
    edd_full_cover,
    solve_line_cycle,
)
from alarm_patrol.srg_solver import solve_srg_auto

from conftest import cycle_doc, line_doc, make_instance, star_doc
from oracle import star_best_pure_value, star_full_cover_exists


def _line5():
    # t1 - t2 - v - t3 - t4 with unit edges, uniform deadline 4.
    return make_instance(
        {
            "vertices": 5,
            "edges": [[0, 1, 1], [1, 2, 1], [2, 3, 1], [3, 4, 1]],
            "targets": [{"vertex": t, "value": 0.5, "deadline": 4} for t in (0, 1, 3, 4)],
            "signals": [
                {"id": "s1", "coverage": [{"target": t, "prob": 1.0} for t in (0, 1, 3, 4)]}
            ],
        }
    )


def _cycle8():
    # Eight unit edges, one non-target start, generous deadlines.
    return make_instance(
        {
            "vertices": 8,
            "edges": [[min(i, (i + 1) % 8), max(i, (i + 1) % 8), 1] for i in range(8)],
            "targets": [{"vertex": t, "value": 0.5, "deadline": 12} for t in range(1, 8)],
            "signals": [
                {"id": "s1", "coverage": [{"target": t, "prob": 1.0} for t in range(1, 8)]}
            ],
        }
    )


def _star(gammas, deadlines, values=None):
    n = len(gammas)
    values = values or [1.0] * n
    return make_instance(
        {
            "vertices": n + 1,
            "edges": [[0, i + 1, g] for i, g in enumerate(gammas)],
            "targets": [
                {"vertex": i + 1, "value": values[i], "deadline": deadlines[i]}
                for i in range(n)
            ],
            "signals": [
                {
                    "id": "s1",
                    "coverage": [{"target": i + 1, "prob": 1.0} for i in range(n)],
                }
            ],
        }
    )


def test_detect_topology_classes(fig1):
    inst, _ = fig1
    assert detect_topology(_line5()).kind == "linear"
    assert detect_topology(_cycle8()).kind == "cycle"
    assert detect_topology(inst).kind == "arbitrary"
    star = detect_topology(_star([1, 1, 1], [2, 2, 2]))
    assert star.kind == "star" and star.hub == 0
    tree = make_instance(
        {
            "vertices": 6,
            "edges": [[0, 1, 1], [0, 2, 1], [1, 3, 1], [1, 4, 1], [2, 5, 1]],
            "targets": [{"vertex": 5, "value": 1.0, "deadline": 9}],
            "signals": [{"id": "s1", "coverage": [{"target": 5, "prob": 1.0}]}],
        }
    )
    got = detect_topology(tree)
    assert got.kind == "tree" and got.leaf_count == 3


def test_line_solver_matches_dp_on_the_fig_line():
    inst = _line5()
    dm = all_pairs_shortest_paths(inst)
    fast = {r.targets: r.cost for r in solve_line_cycle(2, "s1", inst, dm)}
    slow = {r.targets: r.cost for r in compute_cov_sets(2, "s1", inst, dm)}
    assert fast == slow
    # Both one-target-away extremes are coverable both ways around.
    assert frozenset({1, 3}) in fast


def test_degenerate_line_single_target():
    inst = make_instance(
        {
            "vertices": 3,
            "edges": [[0, 1, 1], [1, 2, 1]],
            "targets": [{"vertex": 2, "value": 1.0, "deadline": 2}],
            "signals": [{"id": "s1", "coverage": [{"target": 2, "prob": 1.0}]}],
        }
    )
    results = solve_line_cycle(0, "s1", inst)
    assert [(set(r.targets), r.cost) for r in results] == [({2}, 2)]


def test_cycle_full_sweep_present():
    inst = _cycle8()
    results = solve_line_cycle(0, "s1", inst)
    full = [r for r in results if r.targets == frozenset(range(1, 8))]
    assert full and full[0].cost == 7


def test_wrong_topology_rejected(fig1):
    inst, dm = fig1
    with pytest.raises(WrongTopology):
        solve_line_cycle(0, "s1", inst, dm)
    with pytest.raises(WrongTopology):
        edd_full_cover(0, "s1", inst)
    with pytest.raises(WrongTopology):
        best_pure_star(0, "s1", inst)


@pytest.mark.parametrize("seed", range(8))
@pytest.mark.parametrize("shape", ["line", "cycle"])
def test_line_cycle_agrees_with_dp_randomized(shape, seed):
    import random

    rng = random.Random(seed)
    n = rng.randint(3, 12)
    doc = line_doc(n, 100 + seed) if shape == "line" else cycle_doc(n, 100 + seed)
    inst = make_instance(doc)
    dm = all_pairs_shortest_paths(inst)
    v = rng.randrange(n)
    fast = {r.targets: r.cost for r in solve_line_cycle(v, "s1", inst, dm)}
    slow = {r.targets: r.cost for r in compute_cov_sets(v, "s1", inst, dm)}
    assert fast == slow
    universe = len([t for t in inst.signal("s1").targets() if t != v])
    assert len(fast) <= max(1, (universe + 1) ** 2)


def test_line_cycle_game_value_matches_generic(fig1):
    inst = _line5()
    dm = all_pairs_shortest_paths(inst)
    fast = solve_srg_auto(2, "dp", inst, dm, auto_topology=True)
    slow = solve_srg_auto(2, "dp", inst, dm, auto_topology=False)
    assert fast.game_value == pytest.approx(slow.game_value, abs=1e-6)
    assert fast.diagnostics.get("topology_fast_path") == "linear"


def test_edd_two_task_schedule():
    inst = _star([1, 1], [2, 4])
    route = edd_full_cover(0, "s1", inst)
    assert route is not None
    assert route.targets == (1, 2)
    assert route.arrivals == (1, 3)


def test_edd_forced_overlap_infeasible():
    inst = _star([1, 1], [1, 1])
    assert edd_full_cover(0, "s1", inst) is None


@pytest.mark.parametrize("gamma,deadline,feasible", [(1, 1, True), (2, 1, False), (3, 3, True)])
def test_edd_single_branch(gamma, deadline, feasible):
    inst = _star([gamma], [deadline])
    route = edd_full_cover(0, "s1", inst)
    assert (route is not None) == feasible


def test_edd_requires_hub_start():
    inst = _star([1, 1, 1], [9, 9, 9])
    with pytest.raises(StartNotHub):
        edd_full_cover(1, "s1", inst)


def test_best_pure_star_no_removals():
    inst = _star([1, 1], [2, 4], values=[0.3, 0.9])
    route, value = best_pure_star(0, "s1", inst)
    assert set(route.targets) == {1, 2}
    assert value == 0.0


def test_best_pure_star_one_removal():
    inst = _star([1, 1], [1, 1], values=[0.3, 0.9])
    route, value = best_pure_star(0, "s1", inst)
    assert route.targets == (2,)
    assert value == pytest.approx(0.3)


@pytest.mark.parametrize("seed", range(10))
def test_star_solvers_match_brute_force(seed):
    import random

    rng = random.Random(seed)
    inst = make_instance(star_doc(rng.randint(3, 6), 900 + seed))
    dm = all_pairs_shortest_paths(inst)
    assert (edd_full_cover(0, "s1", inst) is not None) == star_full_cover_exists(
        inst, dm, 0, "s1"
    )
    _, value = best_pure_star(0, "s1", inst)
    assert value == pytest.approx(star_best_pure_value(inst, dm, 0, "s1"), abs=1e-12)
