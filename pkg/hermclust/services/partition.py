# hermclust/services/partition.py
"""Recursive bipartitioning shared by LE-SC and the baselines."""
from __future__ import annotations

import logging
from typing import Callable

import numpy as np

from hermclust.core.errors import GraphTooSmall, SizeMismatch, UnsplittableCluster
from hermclust.schemas.configs import EigenConfig, KmeansConfig, SpectralConfig
from hermclust.services.graph import DirectedGraph, Labeling, induced_subgraph
from hermclust.services.seeding import stage_seed

logger = logging.getLogger(__name__)

# (subgraph, split index, global vertex ids of the subgraph) -> two-community labeling
SplitFn = Callable[[DirectedGraph, int, np.ndarray], Labeling]


def solver_configs(cfg: SpectralConfig, split: int, step: int = 0) -> tuple[EigenConfig, KmeansConfig]:
    """Eigen and k-means configs for one (split, step), seeded from the master seed."""
    return (
        cfg.eigen.model_copy(update={"seed": stage_seed(cfg.seed, "eigen", split, step)}),
        cfg.kmeans.model_copy(update={"seed": stage_seed(cfg.seed, "kmeans", split, step)}),
    )


def _pick_largest(clusters: list[np.ndarray]) -> int:
    # size first, then the smallest contained vertex id
    return min(range(len(clusters)), key=lambda i: (-clusters[i].size, int(clusters[i].min())))


def recursive_bipartition(g: DirectedGraph, k: int, split: SplitFn) -> Labeling:
    """
    Split the largest current cluster until ``k`` clusters exist.

    When cluster c is split, its community-0 half keeps id c and its
    community-1 half takes the next free id, so ids follow creation order
    and k=2 returns the single split unchanged.
    """
    if k < 2:
        raise SizeMismatch(f"need at least two clusters, got k={k}")
    if g.n < k:
        raise GraphTooSmall(f"cannot form {k} clusters from {g.n} vertices")

    clusters = [np.arange(g.n)]
    for index in range(k - 1):
        target = _pick_largest(clusters)
        members = clusters[target]
        if members.size < 2:
            raise UnsplittableCluster(f"cluster {target} has a single vertex; k={k} is too large")

        part = split(induced_subgraph(g, members), index, members)
        left, right = members[part.mask(0)], members[part.mask(1)]
        if left.size == 0 or right.size == 0:
            raise UnsplittableCluster(f"split {index} of cluster {target} ({members.size} vertices) left one side empty")
        logger.debug("split %d: cluster %d (%d) -> %d + %d", index, target, members.size, left.size, right.size)
        clusters[target] = left
        clusters.append(right)

    assignments = np.empty(g.n, dtype=np.int64)
    for cid, members in enumerate(clusters):
        assignments[members] = cid
    return Labeling(assignments, k)
