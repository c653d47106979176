"""HTTP facade over the solvers for long-running, multi-client use.

Every endpoint is stateless: the instance travels with the request, in
the same schema the instance files use. Run it with
``alarm-patrol serve`` or ``uvicorn alarm_patrol.service:app``.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from . import __version__
from .graph_core import InstanceError, all_pairs_shortest_paths
from .instance_gen import (
    GenError,
    gen_from_hampath,
    gen_multisignal,
    gen_s2lstar,
    gen_worstcase,
)
from .placement import best_placement
from .schemas import (
    GenerateRequest,
    GenerateResponse,
    InstanceModel,
    PlacementRequest,
    PlacementResponse,
    SolveRequest,
    SolveResponse,
)
from .srg_solver import LPNumericalFailure, solve_srg_auto

__all__ = ["app", "create_app"]


def create_app() -> FastAPI:
    app = FastAPI(
        title="alarm-patrol",
        version=__version__,
        description="Signal-response and placement solvers for alarm-assisted patrolling games.",
    )

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "version": __version__}

    @app.post("/solve", response_model=SolveResponse)
    def solve(req: SolveRequest) -> SolveResponse:
        try:
            inst = req.instance.to_instance()
        except InstanceError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        if not 0 <= req.vertex < inst.num_vertices:
            raise HTTPException(status_code=400, detail=f"vertex {req.vertex} out of range")
        try:
            sol = solve_srg_auto(
                req.vertex,
                req.algo,
                inst,
                rho=req.rho,
                delta=req.delta,
                rand_orders=req.rand_orders,
                seed=req.seed,
                auto_topology=req.auto_topology,
            )
        except LPNumericalFailure as exc:
            raise HTTPException(status_code=500, detail=str(exc)) from exc
        return SolveResponse.model_validate(sol.to_document() | {"vertex": req.vertex})

    @app.post("/placement", response_model=PlacementResponse)
    def placement(req: PlacementRequest) -> PlacementResponse:
        try:
            inst = req.instance.to_instance()
        except InstanceError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        try:
            report = best_placement(
                inst,
                req.algo,
                all_pairs_shortest_paths(inst),
                rho=req.rho,
                delta=req.delta,
                rand_orders=req.rand_orders,
                seed=req.seed,
            )
        except LPNumericalFailure as exc:
            raise HTTPException(status_code=500, detail=str(exc)) from exc
        return PlacementResponse(
            g_v=dict(report.game_values),
            best_vertex=report.best_vertex,
            second_vertex=report.second_vertex,
            alpha_bound=report.alpha_bound,
        )

    @app.post("/generate", response_model=GenerateResponse)
    def generate(req: GenerateRequest) -> GenerateResponse:
        try:
            if req.kind == "worstcase":
                if req.worstcase is None:
                    raise HTTPException(status_code=400, detail="missing worstcase params")
                gen = gen_worstcase(req.worstcase.n_targets, req.worstcase.eps, req.seed)
            elif req.kind == "s2lstar":
                if req.s2lstar is None:
                    raise HTTPException(status_code=400, detail="missing s2lstar params")
                gen = gen_s2lstar(req.s2lstar.gamma)
            elif req.kind == "multisignal":
                if req.multisignal is None:
                    raise HTTPException(status_code=400, detail="missing multisignal params")
                gen = gen_multisignal(
                    req.multisignal.n_targets, req.multisignal.m, req.multisignal.eps, req.seed
                )
            else:
                if req.hampath is None:
                    raise HTTPException(status_code=400, detail="missing hampath params")
                gen = gen_from_hampath(req.hampath.adjacency)
        except GenError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return GenerateResponse(
            instance=InstanceModel.from_instance(gen.instance), start=gen.start
        )

    return app


app = create_app()
