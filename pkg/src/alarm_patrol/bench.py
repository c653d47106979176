"""Benchmark harness: solver grids over generated instances, as CSV.

One row per (cell, instance, algorithm). Rows record wall-clock solve
time (menu generation plus the LP; shortest-path precomputation and
instance generation are excluded), the game value, the approximation
ratio against the exact value when a ``dp`` row for the same instance
finished, and the covering-set counts behind the dominance ratios.

Each solver call runs in its own process so a per-instance timeout can
kill it cleanly; the pool width honors the ALARM_PATROL_THREADS
environment variable and the ``serial`` flag forces one at a time for
clean timings.
"""

from __future__ import annotations

import csv
import io
import multiprocessing as mp
import os
import time
from dataclasses import dataclass, field
from typing import Sequence

from .graph_core import all_pairs_shortest_paths
from .instance_gen import gen_worstcase
from .srg_solver import solve_srg_auto

__all__ = ["BenchRun", "BenchTask", "run_bench", "rows_to_csv", "CSV_COLUMNS"]

CSV_COLUMNS = (
    "targets",
    "eps",
    "seed",
    "algo",
    "params",
    "runtime_ms",
    "g_v",
    "ratio",
    "covsets_total",
    "covsets_nondominated",
    "timeout",
)


@dataclass(frozen=True)
class BenchTask:
    targets: int
    eps: float
    seed: int
    algo: str
    rho: float = 1.0
    delta: float = 2.0
    rand_orders: int = 10

    def params_label(self) -> str:
        if self.algo == "approx-dp":
            return f"rand_orders={self.rand_orders}"
        if self.algo == "approx-bnb":
            return f"rho={self.rho};delta={self.delta}"
        if self.algo == "bnb":
            return f"delta={self.delta}"
        return ""


@dataclass
class BenchRun:
    """Grid description plus collected rows."""

    targets_list: Sequence[int]
    eps_list: Sequence[float]
    instances_per_cell: int
    algos: Sequence[str]
    timeout: float = 300.0
    base_seed: int = 0
    rho: float = 1.0
    delta: float = 2.0
    rand_orders: int = 10
    rows: list[dict] = field(default_factory=list)

    def tasks(self) -> list[BenchTask]:
        out = []
        for t in self.targets_list:
            for eps in self.eps_list:
                for i in range(self.instances_per_cell):
                    for algo in self.algos:
                        out.append(
                            BenchTask(
                                targets=t,
                                eps=eps,
                                seed=self.base_seed + i,
                                algo=algo,
                                rho=self.rho,
                                delta=self.delta,
                                rand_orders=self.rand_orders,
                            )
                        )
        return out


def _solve_task(task: BenchTask, conn) -> None:
    gen = gen_worstcase(task.targets, task.eps, task.seed)
    inst, start = gen.instance, gen.start
    dm = all_pairs_shortest_paths(inst)
    t0 = time.perf_counter()
    sol = solve_srg_auto(
        start,
        task.algo,
        inst,
        dm,
        rho=task.rho,
        delta=task.delta,
        rand_orders=task.rand_orders,
        seed=task.seed,
    )
    runtime_ms = (time.perf_counter() - t0) * 1000.0
    conn.send(
        {
            "runtime_ms": runtime_ms,
            "g_v": sol.game_value,
            "covsets_total": sol.diagnostics.get("covsets_total", ""),
            "covsets_nondominated": sol.diagnostics.get("covsets_nondominated", ""),
        }
    )
    conn.close()


def _pool_width(serial: bool) -> int:
    if serial:
        return 1
    cap = os.environ.get("ALARM_PATROL_THREADS")
    width = os.cpu_count() or 1
    if cap:
        width = min(width, max(1, int(cap)))
    return max(1, width)


def run_bench(run: BenchRun, serial: bool = False) -> list[dict]:
    """Execute the grid; returns rows sorted by (cell, seed, algo)."""
    ctx = mp.get_context("fork")
    tasks = run.tasks()
    width = _pool_width(serial)
    pending = list(reversed(tasks))
    running: list[tuple] = []
    raw: dict[BenchTask, dict] = {}

    def harvest(slot) -> None:
        proc, conn, task, _ = slot
        payload = None
        if conn.poll():
            payload = conn.recv()
        conn.close()
        if proc.is_alive():
            proc.terminate()
        proc.join()
        if payload is None:
            raw[task] = {"timeout": True}
        else:
            payload["timeout"] = False
            raw[task] = payload

    while pending or running:
        while pending and len(running) < width:
            task = pending.pop()
            parent, child = ctx.Pipe(duplex=False)
            proc = ctx.Process(target=_solve_task, args=(task, child), daemon=True)
            proc.start()
            child.close()
            running.append((proc, parent, task, time.monotonic()))
        still = []
        for slot in running:
            proc, conn, task, started = slot
            if conn.poll(0.0) or not proc.is_alive():
                harvest(slot)
            elif time.monotonic() - started > run.timeout:
                harvest(slot)
            else:
                still.append(slot)
        running = still
        if running:
            time.sleep(0.005)

    exact: dict[tuple[int, float, int], float] = {}
    for task, payload in raw.items():
        if task.algo == "dp" and not payload["timeout"]:
            exact[(task.targets, task.eps, task.seed)] = payload["g_v"]

    rows = []
    for task in tasks:
        payload = raw[task]
        row = {c: "" for c in CSV_COLUMNS}
        row.update(
            targets=task.targets,
            eps=task.eps,
            seed=task.seed,
            algo=task.algo,
            params=task.params_label(),
            timeout=payload["timeout"],
        )
        if not payload["timeout"]:
            row["runtime_ms"] = round(payload["runtime_ms"], 3)
            row["g_v"] = payload["g_v"]
            row["covsets_total"] = payload["covsets_total"]
            row["covsets_nondominated"] = payload["covsets_nondominated"]
            g_exact = exact.get((task.targets, task.eps, task.seed))
            if g_exact is not None and g_exact < 1.0:
                row["ratio"] = (1.0 - payload["g_v"]) / (1.0 - g_exact)
        rows.append(row)
    rows.sort(key=lambda r: (r["targets"], r["eps"], r["seed"], r["algo"]))
    run.rows = rows
    return rows


def rows_to_csv(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS)
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()
