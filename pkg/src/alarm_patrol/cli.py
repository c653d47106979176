"""Command-line interface: solve, placement, gen, bench, serve."""

from __future__ import annotations

import json
import sys

import click

from . import __version__
from .bench import BenchRun, rows_to_csv, run_bench
from .covering_dp import results_to_documents
from .graph_core import InstanceError, all_pairs_shortest_paths, build_instance, serialize_instance
from .instance_gen import (
    GenError,
    gen_from_hampath,
    gen_multisignal,
    gen_s2lstar,
    gen_worstcase,
)
from .placement import best_placement
from .special_topologies import detect_topology, solve_line_cycle
from .srg_solver import ALGORITHMS, LPNumericalFailure, solve_srg_auto
from .covering_dp import compute_cov_sets

EXIT_BAD_INPUT = 1
EXIT_SOLVER_FAILURE = 2


def _fail(message: str, code: int) -> None:
    click.echo(f"error: {message}", err=True)
    raise SystemExit(code)


def _load_instance(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return build_instance(fh.read())
    except OSError as exc:
        _fail(f"cannot read instance file: {exc}", EXIT_BAD_INPUT)
    except InstanceError as exc:
        _fail(str(exc), EXIT_BAD_INPUT)


@click.group()
@click.version_option(version=__version__, prog_name="alarm-patrol")
def main() -> None:
    """Solvers for patrolling games with a spatially uncertain alarm system."""


@main.command()
@click.option("--instance", "instance_path", required=True, type=click.Path(), help="Instance file.")
@click.option("--vertex", type=int, default=None, help="Start vertex of the responder.")
@click.option("--algo", type=click.Choice(ALGORITHMS), default="dp", show_default=True)
@click.option("--rho", type=float, default=1.0, show_default=True, help="Backtracking limit for approx-bnb.")
@click.option("--delta", type=float, default=2.0, show_default=True, help="Tight/large deadline threshold.")
@click.option("--rand-orders", type=int, default=10, show_default=True, help="Random restarts for approx-dp.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--dump-covsets", "dump_path", type=click.Path(), default=None, help="Write the enumerated covering sets (dp only).")
@click.option("--auto-topology/--force-generic", default=False, help="Use the fast path on path/cycle graphs.")
@click.option("-o", "--output", type=click.Path(), default=None, help="Write the solution document here instead of stdout.")
def solve(instance_path, vertex, algo, rho, delta, rand_orders, seed, dump_path, auto_topology, output):
    """Compute the optimal signal-response strategy from one vertex."""
    inst = _load_instance(instance_path)
    if vertex is None:
        _fail("--vertex is required", EXIT_BAD_INPUT)
    if not 0 <= vertex < inst.num_vertices:
        _fail(f"vertex {vertex} out of range", EXIT_BAD_INPUT)
    if dump_path is not None and algo != "dp":
        _fail("--dump-covsets requires --algo dp", EXIT_BAD_INPUT)
    if not 0.0 <= rho <= 1.0:
        _fail("--rho must lie in [0, 1]", EXIT_BAD_INPUT)
    try:
        dm = all_pairs_shortest_paths(inst)
        sol = solve_srg_auto(
            vertex,
            algo,
            inst,
            dm,
            rho=rho,
            delta=delta,
            rand_orders=rand_orders,
            seed=seed,
            auto_topology=auto_topology,
        )
        if dump_path is not None:
            use_fast = auto_topology and detect_topology(inst).kind in ("linear", "cycle")
            docs = []
            for s in inst.signals:
                results = (
                    solve_line_cycle(vertex, s.id, inst, dm)
                    if use_fast
                    else compute_cov_sets(vertex, s.id, inst, dm)
                )
                docs.append({"signal": s.id, "covsets": results_to_documents(results)})
            with open(dump_path, "w", encoding="utf-8") as fh:
                json.dump(docs, fh, indent=2)
    except LPNumericalFailure as exc:
        _fail(str(exc), EXIT_SOLVER_FAILURE)
    text = json.dumps(sol.to_document(), indent=2)
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        click.echo(text)


@main.command()
@click.option("--instance", "instance_path", required=True, type=click.Path())
@click.option("--algo", type=click.Choice(ALGORITHMS), default="dp", show_default=True)
@click.option("--rho", type=float, default=1.0, show_default=True)
@click.option("--delta", type=float, default=2.0, show_default=True)
@click.option("--rand-orders", type=int, default=10, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--alpha", type=float, default=None, help="Check the placement against this missed-detection rate.")
@click.option("-o", "--output", type=click.Path(), default=None, help="Write the per-vertex CSV here.")
def placement(instance_path, algo, rho, delta, rand_orders, seed, alpha, output):
    """Game value of every placement, the best vertex, and the alpha bound."""
    inst = _load_instance(instance_path)
    try:
        report = best_placement(
            inst,
            algo,
            all_pairs_shortest_paths(inst),
            rho=rho,
            delta=delta,
            rand_orders=rand_orders,
            seed=seed,
        )
    except LPNumericalFailure as exc:
        _fail(str(exc), EXIT_SOLVER_FAILURE)
    lines = ["vertex,g_v"]
    lines += [f"{v},{report.game_values[v]}" for v in sorted(report.game_values)]
    csv_text = "\n".join(lines) + "\n"
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(csv_text)
    else:
        click.echo(csv_text, nl=False)
    bound = "n/a" if report.alpha_bound is None else f"{report.alpha_bound:.6f}"
    click.echo(
        f"best_vertex={report.best_vertex} g={report.best_value:.6f} "
        f"second_vertex={report.second_vertex} alpha_bound={bound}"
    )
    if alpha is not None:
        if report.alpha_bound is not None and alpha < report.alpha_bound:
            click.echo(f"placement remains optimal at missed-detection rate {alpha}")
        else:
            click.echo(
                f"placement not justified by the sufficient condition at rate {alpha}"
            )


def _write_generated(gen, output) -> None:
    text = serialize_instance(gen.instance)
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)
    click.echo(f"start_vertex={gen.start}", err=True)


@main.group()
def gen() -> None:
    """Instance generators (deterministic for a fixed seed)."""


@gen.command()
@click.option("--targets", "n_targets", type=int, required=True)
@click.option("--eps", type=float, required=True, help="Edge density in (0, 1].")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("-o", "--output", type=click.Path(), default=None)
def worstcase(n_targets, eps, seed, output):
    """Every vertex a target, unit costs, deadlines |T|-1, one signal."""
    try:
        _write_generated(gen_worstcase(n_targets, eps, seed), output)
    except GenError as exc:
        _fail(str(exc), EXIT_BAD_INPUT)


@gen.command()
@click.option("--gamma", required=True, help="Comma-separated branch weights, e.g. 1,2,3.")
@click.option("-o", "--output", type=click.Path(), default=None)
def s2lstar(gamma, output):
    """Two-level star whose full cover encodes an equal-halves partition."""
    try:
        weights = [int(x) for x in gamma.split(",") if x.strip()]
    except ValueError:
        _fail("--gamma must be a comma-separated list of integers", EXIT_BAD_INPUT)
    try:
        _write_generated(gen_s2lstar(weights), output)
    except GenError as exc:
        _fail(str(exc), EXIT_BAD_INPUT)


@gen.command()
@click.option("--targets", "n_targets", type=int, required=True)
@click.option("--signals", "m", type=int, required=True)
@click.option("--eps", type=float, required=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("-o", "--output", type=click.Path(), default=None)
def multisignal(n_targets, m, eps, seed, output):
    """Worst-case graph with m randomly assigned, normalized signals."""
    try:
        _write_generated(gen_multisignal(n_targets, m, eps, seed), output)
    except GenError as exc:
        _fail(str(exc), EXIT_BAD_INPUT)


@gen.command()
@click.option("--input", "input_path", required=True, type=click.Path(), help="Adjacency list file: one 'u: v w ...' line per vertex.")
@click.option("-o", "--output", type=click.Path(), default=None)
def hampath(input_path, output):
    """Reduction instance: game value 0 iff the graph has a Hamiltonian path."""
    try:
        with open(input_path, "r", encoding="utf-8") as fh:
            lines = [ln.strip() for ln in fh if ln.strip()]
        adjacency: dict[int, list[int]] = {}
        for ln in lines:
            head, _, rest = ln.partition(":")
            adjacency[int(head)] = [int(x) for x in rest.split()]
        n = max(adjacency) + 1 if adjacency else 0
        adj = [adjacency.get(i, []) for i in range(n)]
    except (OSError, ValueError) as exc:
        _fail(f"cannot parse adjacency list: {exc}", EXIT_BAD_INPUT)
    try:
        _write_generated(gen_from_hampath(adj), output)
    except GenError as exc:
        _fail(str(exc), EXIT_BAD_INPUT)


@main.command()
@click.option("--targets-list", required=True, help="Comma-separated target counts, e.g. 6,8,10.")
@click.option("--eps-list", required=True, help="Comma-separated densities, e.g. 0.25,1.0.")
@click.option("--instances-per-cell", type=int, default=10, show_default=True)
@click.option("--algos", default="dp", show_default=True, help="Comma-separated algorithms.")
@click.option("--timeout", type=float, default=300.0, show_default=True, help="Per-solve timeout in seconds.")
@click.option("--seed", type=int, default=0, show_default=True, help="Base seed; instance i uses seed+i.")
@click.option("--rho", type=float, default=1.0, show_default=True)
@click.option("--delta", type=float, default=2.0, show_default=True)
@click.option("--rand-orders", type=int, default=10, show_default=True)
@click.option("--serial", is_flag=True, default=False, help="Run solver calls one at a time.")
@click.option("-o", "--output", type=click.Path(), default=None, help="CSV output path (stdout otherwise).")
def bench(targets_list, eps_list, instances_per_cell, algos, timeout, seed, rho, delta, rand_orders, serial, output):
    """Run a solver grid over generated instances and emit CSV rows."""
    try:
        t_list = [int(x) for x in targets_list.split(",") if x.strip()]
        e_list = [float(x) for x in eps_list.split(",") if x.strip()]
    except ValueError:
        _fail("--targets-list and --eps-list must be comma-separated numbers", EXIT_BAD_INPUT)
    algo_list = [a.strip() for a in algos.split(",") if a.strip()]
    for a in algo_list:
        if a not in ALGORITHMS:
            _fail(f"unknown algorithm {a!r}", EXIT_BAD_INPUT)
    run = BenchRun(
        targets_list=t_list,
        eps_list=e_list,
        instances_per_cell=instances_per_cell,
        algos=algo_list,
        timeout=timeout,
        base_seed=seed,
        rho=rho,
        delta=delta,
        rand_orders=rand_orders,
    )
    rows = run_bench(run, serial=serial)
    text = rows_to_csv(rows)
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host, port):
    """Run the HTTP service (FastAPI over uvicorn)."""
    import uvicorn

    uvicorn.run("alarm_patrol.service:app", host=host, port=port)


if __name__ == "__main__":
    main()
