"""Pydantic request/response models for the HTTP service.

The instance model mirrors the on-disk JSON schema one to one, so a
file accepted by the CLI is accepted by the API verbatim.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from .graph_core import Instance, instance_from_mapping, instance_to_mapping


class CoverageEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")
    target: int
    prob: float


class SignalModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    id: str
    coverage: list[CoverageEntry]


class TargetModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    vertex: int
    value: float
    deadline: int


class InstanceModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    vertices: int
    edges: list[tuple[int, int, int]]
    targets: list[TargetModel]
    signals: list[SignalModel]

    def to_instance(self) -> Instance:
        return instance_from_mapping(self.model_dump(mode="json"))

    @classmethod
    def from_instance(cls, inst: Instance) -> "InstanceModel":
        return cls.model_validate(instance_to_mapping(inst))


class SolveRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    instance: InstanceModel
    vertex: int
    algo: Literal["dp", "bnb", "approx-dp", "approx-bnb"] = "dp"
    rho: float = Field(default=1.0, ge=0.0, le=1.0)
    delta: float = Field(default=2.0, gt=0.0)
    rand_orders: int = Field(default=10, ge=0)
    seed: int = 0
    auto_topology: bool = False


class RouteChoice(BaseModel):
    route: list[int]
    arrivals: list[int]
    prob: float


class SignalStrategy(BaseModel):
    signal: str
    strategy: list[RouteChoice]


class SolveResponse(BaseModel):
    vertex: int
    g_v: float
    defender_value: float
    signals: list[SignalStrategy]
    best_responses: list[int]
    diagnostics: dict = Field(default_factory=dict)


class PlacementRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    instance: InstanceModel
    algo: Literal["dp", "bnb", "approx-dp", "approx-bnb"] = "dp"
    rho: float = Field(default=1.0, ge=0.0, le=1.0)
    delta: float = Field(default=2.0, gt=0.0)
    rand_orders: int = Field(default=10, ge=0)
    seed: int = 0


class PlacementResponse(BaseModel):
    g_v: dict[int, float]
    best_vertex: int
    second_vertex: Optional[int]
    alpha_bound: Optional[float]


class WorstcaseParams(BaseModel):
    model_config = ConfigDict(extra="forbid")
    n_targets: int = Field(ge=2)
    eps: float = Field(gt=0.0, le=1.0)


class S2LStarParams(BaseModel):
    model_config = ConfigDict(extra="forbid")
    gamma: list[int] = Field(min_length=2)


class MultisignalParams(BaseModel):
    model_config = ConfigDict(extra="forbid")
    n_targets: int = Field(ge=2)
    m: int = Field(ge=1)
    eps: float = Field(gt=0.0, le=1.0)


class HampathParams(BaseModel):
    model_config = ConfigDict(extra="forbid")
    adjacency: list[list[int]]


class GenerateRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    kind: Literal["worstcase", "s2lstar", "multisignal", "hampath-reduction"]
    seed: int = 0
    worstcase: Optional[WorstcaseParams] = None
    s2lstar: Optional[S2LStarParams] = None
    multisignal: Optional[MultisignalParams] = None
    hampath: Optional[HampathParams] = None


class GenerateResponse(BaseModel):
    instance: InstanceModel
    start: int
