# hermclust/schemas/reports.py
from __future__ import annotations

from typing import Dict, Optional

from pydantic import BaseModel, Field

EPSILON0_NOTE = "unspecified absolute constant"


class FinalParams(BaseModel):
    p: float
    q: float
    eta: float


class RunReport(BaseModel):
    """What `cluster` writes next to its labels file."""

    method: str
    k: int
    seed: int
    n: int
    edges: int
    normalized: bool = False
    init: Optional[str] = None
    iterations: int = 0
    eigen_iterations: int = 0
    eigen_converged: bool = True
    final_params: Optional[FinalParams] = None
    ari: Optional[float] = None
    error: Optional[int] = None
    error_rate: Optional[float] = None
    wall_time: float
    stage_seconds: Dict[str, float] = Field(default_factory=dict)
    labels_path: Optional[str] = None


class BenchmarkRow(BaseModel):
    """One (grid point, method, replicate) cell of a benchmark sweep."""

    point: int
    p: float
    q: float
    eta: float
    method: str
    replicate: int
    seed: int
    status: str = "ok"
    detail: str = ""
    n: int = 0
    edges: int = 0
    ari: Optional[float] = None
    error: Optional[int] = None
    error_rate: Optional[float] = None
    outer_iterations: int = 0
    eigen_iterations: int = 0
    runtime: float = 0.0
    eigen_seconds: float = 0.0
    eigen_time_per_iter: float = 0.0


# columns whose values vary run to run
RUNTIME_COLUMNS = ("runtime", "eigen_seconds", "eigen_time_per_iter")
BENCHMARK_COLUMNS = list(BenchmarkRow.model_fields)


class PopulationSummary(BaseModel):
    """Closed-form population quantities for a two-community DSBM."""

    n1: int
    n2: int
    p: float
    q: float
    eta: float
    w_r: float
    w_i: float
    w_c: float
    lambda1: float
    lambda2: float
    delta: float = Field(ge=0.0)
    centroid_distance: float = Field(ge=0.0)
    concentration: float
    epsilon: float
    l_eta: float
    error_bound: float
    epsilon0: str = EPSILON0_NOTE
