# hermclust/services/baselines.py
from __future__ import annotations

import logging
from enum import Enum

import numpy as np
import scipy.sparse as sp

from hermclust.core.errors import BadParams, UnimplementedMethod
from hermclust.schemas.configs import SpectralConfig
from hermclust.services.eigen import top_eigenpair
from hermclust.services.graph import DirectedGraph, Labeling
from hermclust.services.kmeans import kmeans_plane, plane_points
from hermclust.services.mle import HermitianLike, HermitianOperator
from hermclust.services.partition import recursive_bipartition, solver_configs

logger = logging.getLogger(__name__)


class BaselineMethod(str, Enum):
    SYM = "sym"
    BIBSYM = "bibsym"
    HERM = "herm"


# recognised names that are not shipped
UNIMPLEMENTED_METHODS = {
    "disim": "DI-SIM",
    "dscore": "D-SCORE",
    "simpherm": "SimpHerm",
    "herm-rw": "Herm(RW)",
}


def parse_baseline(name: str) -> BaselineMethod:
    key = name.strip().lower()
    if key in UNIMPLEMENTED_METHODS:
        raise UnimplementedMethod(f"baseline {UNIMPLEMENTED_METHODS[key]} ({key}) is not implemented")
    try:
        return BaselineMethod(key)
    except ValueError:
        raise BadParams(f"unknown method {name!r}") from None


class BibliometricOperator:
    """A A^T + A^T A applied as two chained sparse products per term."""

    def __init__(self, g: DirectedGraph):
        self.n = g.n
        self._a = g.adj
        self._at = g.adj_t

    def apply(self, x: np.ndarray) -> np.ndarray:
        return self._a @ (self._at @ x) + self._at @ (self._a @ x)

    def row_abs_bound(self) -> float:
        # entries are nonnegative, so row sums of |M| are M @ 1
        ones = np.ones(self.n)
        rows = self.apply(ones)
        return float(rows.max()) if rows.size else 0.0


class DeflatedOperator:
    """P H P with P = I - v v*, which maps v to zero and keeps the rest of the spectrum."""

    def __init__(self, op: HermitianLike, v: np.ndarray):
        self.n = op.n
        self._op = op
        self._v = v / np.linalg.norm(v)

    def _project(self, x: np.ndarray) -> np.ndarray:
        return x - self._v * np.vdot(self._v, x)

    def apply(self, x: np.ndarray) -> np.ndarray:
        return self._project(self._op.apply(self._project(x)))

    def row_abs_bound(self) -> float:
        # ||P H P|| <= ||H||, which the row bound of H already dominates
        return self._op.row_abs_bound()


def baseline_operator(g: DirectedGraph, method: BaselineMethod) -> HermitianLike:
    empty = sp.csr_matrix((g.n, g.n))
    if method is BaselineMethod.SYM:
        return HermitianOperator(g.n, sym=g.adj + g.adj_t, skew=empty)
    if method is BaselineMethod.BIBSYM:
        return BibliometricOperator(g)
    return HermitianOperator(g.n, sym=empty, skew=g.adj - g.adj_t)


def baseline_bipartition(g: DirectedGraph, method: BaselineMethod, cfg: SpectralConfig | None = None, split: int = 0) -> Labeling:
    """
    One fixed-operator spectral split: top eigenvector, then 2-means on [Re, Im].

    Sym and BibSym are nonnegative, so their top eigenvector is the Perron
    vector, which follows degrees rather than communities. For those two the
    Perron vector is projected out first and the split uses the next one.
    """
    cfg = cfg or SpectralConfig()
    eigen_cfg, kmeans_cfg = solver_configs(cfg, split)
    op = baseline_operator(g, method)

    result = top_eigenpair(op, eigen_cfg)
    if method is not BaselineMethod.HERM and not result.zero_operator:
        result = top_eigenpair(DeflatedOperator(op, result.vector), eigen_cfg)
    if result.zero_operator:
        logger.warning("%s operator on %d vertices is zero; split follows the random start vector", method.value, g.n)

    labels, _, _ = kmeans_plane(plane_points(result.vector), 2, kmeans_cfg)
    return labels.canonical()


def baseline_cluster(g: DirectedGraph, method: BaselineMethod | str, k: int, cfg: SpectralConfig | None = None) -> Labeling:
    """k clusters by recursively bipartitioning the largest cluster with a baseline operator."""
    method = method if isinstance(method, BaselineMethod) else parse_baseline(method)
    cfg = cfg or SpectralConfig()
    return recursive_bipartition(g, k, lambda sub, index, _members: baseline_bipartition(sub, method, cfg, index))
