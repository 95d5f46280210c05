# hermclust/services/kmeans.py
from __future__ import annotations

import logging
import warnings

import numpy as np
from sklearn.cluster import KMeans
from sklearn.exceptions import ConvergenceWarning

from hermclust.core.errors import SizeMismatch, TooFewPoints
from hermclust.schemas.configs import KmeansConfig
from hermclust.services.graph import Labeling
from hermclust.services.seeding import stage_seed

logger = logging.getLogger(__name__)


def plane_points(v: np.ndarray, scale: bool = True) -> np.ndarray:
    """Complex vector -> (N, 2) array of [Re, Im], optionally scaled by sqrt(N)."""
    v = np.asarray(v)
    if scale:
        v = v * np.sqrt(v.size)
    return np.column_stack([v.real, v.imag]).astype(np.float64)


def kmeans_plane(points: np.ndarray, k: int, cfg: KmeansConfig | None = None) -> tuple[Labeling, np.ndarray, float]:
    """
    Best-of-restarts k-means (k-means++ seeding, Lloyd iterations) on points
    in the plane. Returns (labels, centroids, cost) with cost the summed
    squared distance to the assigned centroid.
    """
    cfg = cfg or KmeansConfig()
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise SizeMismatch(f"expected an (N, 2) array of points, got shape {pts.shape}")
    if k < 1:
        raise SizeMismatch(f"k must be positive, got {k}")
    if k > pts.shape[0]:
        raise TooFewPoints(f"cannot form {k} clusters from {pts.shape[0]} points")

    model = KMeans(
        n_clusters=k,
        init="k-means++",
        n_init=cfg.restarts,
        max_iter=cfg.max_iter,
        tol=cfg.tol,
        algorithm="lloyd",
        random_state=stage_seed(cfg.seed, "kmeans"),
    )
    with warnings.catch_warnings():
        # fewer distinct points than k leaves a cluster empty; callers check sizes
        warnings.simplefilter("ignore", ConvergenceWarning)
        model.fit(pts)

    labels = Labeling(model.labels_.astype(np.int64), k)
    cost = float(max(model.inertia_, 0.0))
    logger.debug("k-means k=%d n=%d cost=%.6g iters=%d", k, pts.shape[0], cost, model.n_iter_)
    return labels, model.cluster_centers_.copy(), cost
