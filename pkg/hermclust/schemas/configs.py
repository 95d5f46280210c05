# hermclust/schemas/configs.py
from __future__ import annotations

from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, PositiveInt, field_validator, model_validator

from hermclust.schemas.params import DsbmParams

InitStrategy = str  # see LescConfig.init

FIXED_INITS = ("random-params", "flow-matrix", "total-flow-matrix", "net-flow-matrix", "warm-labels")
BASELINE_NAMES = ("sym", "bibsym", "herm")


class EigenConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    tol: PositiveFloat = 1e-8
    max_iter: PositiveInt = 5000
    seed: int = 0
    select: Literal["largest-signed", "largest-magnitude"] = "largest-signed"


class KmeansConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    restarts: PositiveInt = 10
    max_iter: PositiveInt = 100
    seed: int = 0
    tol: PositiveFloat = 1e-10


class SpectralConfig(BaseModel):
    """
    Settings shared by every spectral bipartition. ``seed`` is the master
    seed: inside a clustering run the eigen start vectors and k-means seeds
    are derived from it per split and iteration, and the ``seed`` fields of
    ``eigen``/``kmeans`` only apply when those solvers are called directly.
    """

    model_config = ConfigDict(frozen=True)

    eigen: EigenConfig = Field(default_factory=EigenConfig)
    kmeans: KmeansConfig = Field(default_factory=KmeansConfig)
    seed: int = 0


class LescConfig(SpectralConfig):
    """
    ``init`` is one of random-params, flow-matrix, total-flow-matrix,
    net-flow-matrix, warm-labels (needs ``warm_labels``, two-valued) or
    ``baseline:<sym|bibsym|herm>``. random-params draws ``random_starts``
    parameter sets around the observed edge density and starts from the
    best-scoring one.
    """

    max_outer_iter: PositiveInt = Field(default=20, description="T, outer iterations per bipartition")
    init: InitStrategy = "flow-matrix"
    warm_labels: Optional[List[int]] = None
    random_starts: PositiveInt = Field(default=8, description="parameter draws tried by random-params")

    @field_validator("init")
    @classmethod
    def _known_init(cls, v: str) -> str:
        if v in FIXED_INITS:
            return v
        if v.startswith("baseline:") and v.split(":", 1)[1] in BASELINE_NAMES:
            return v
        raise ValueError(f"unknown init strategy {v!r}")

    @model_validator(mode="after")
    def _warm_labels_present(self) -> "LescConfig":
        if self.init == "warm-labels" and not self.warm_labels:
            raise ValueError("init 'warm-labels' needs warm_labels")
        if self.warm_labels and not set(self.warm_labels) <= {0, 1}:
            raise ValueError("warm_labels must be a 0/1 bipartition")
        return self


class BenchmarkConfig(BaseModel):
    """One sweep: every (p, q, eta) grid point x method x replicate."""

    sizes: List[PositiveInt] = Field(min_length=2)
    meta: Optional[str] = Field(default=None, description="meta-graph preset name or JSON path; default orients 0->1")
    p_grid: List[float] = Field(min_length=1)
    q_grid: List[float] = Field(min_length=1)
    eta_grid: List[float] = Field(min_length=1)
    methods: List[str] = Field(default_factory=lambda: ["lesc"], min_length=1)
    k: Optional[PositiveInt] = None
    replicates: PositiveInt = 10
    base_seed: int = 0
    shuffle: bool = False
    output: str = "benchmark.csv"
    lesc: LescConfig = Field(default_factory=LescConfig)

    @model_validator(mode="after")
    def _check_grid(self) -> "BenchmarkConfig":
        # every point must be a valid model; fail early rather than per replicate
        for point in self.points():
            DsbmParams(sizes=self.sizes, p=point[0], q=point[1], eta=point[2])
        if self.meta is None and len(self.sizes) != 2:
            raise ValueError("more than two communities need a meta-graph")
        return self

    @property
    def clusters(self) -> int:
        return self.k or len(self.sizes)

    def points(self) -> List[tuple[float, float, float]]:
        return [(p, q, eta) for p in self.p_grid for q in self.q_grid for eta in self.eta_grid]
