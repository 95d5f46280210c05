# hermclust/services/dsbm.py
"""
DSBM sampling.

Pairs are visited in lexicographic order (u < v). Row u owns the random
substream ``stage_rng(seed, "sample-row", u)`` and draws two uniforms per
pair (u, v), v = u+1..N-1: one for presence, one for orientation. Since no
row reads another row's stream, the sample is identical however rows are
scheduled.
"""
from __future__ import annotations

import logging

import numpy as np

from hermclust.core.errors import BadParams, MetaMismatch
from hermclust.schemas.params import DsbmParams, MetaGraph
from hermclust.services.graph import DirectedGraph, Labeling, build_graph_arrays
from hermclust.services.seeding import stage_rng

logger = logging.getLogger(__name__)

TWO_COMMUNITY_META = MetaGraph(k=2, oriented_pairs=[(0, 1)])


def _sample_rows(params: DsbmParams, orientation: np.ndarray, seed: int) -> tuple[np.ndarray, np.ndarray]:
    n = params.n
    comm = params.planted()
    # edge probability and forward-orientation probability per community pair
    density = np.full((params.k, params.k), params.q)
    np.fill_diagonal(density, params.p)

    src_parts: list[np.ndarray] = []
    dst_parts: list[np.ndarray] = []
    for u in range(n - 1):
        rng = stage_rng(seed, "sample-row", u)
        v = np.arange(u + 1, n)
        cu, cv = comm[u], comm[v]
        present = rng.random(v.size) < density[cu, cv]
        forward = rng.random(v.size) < orientation[cu, cv]
        if not present.any():
            continue
        v, forward = v[present], forward[present]
        src_parts.append(np.where(forward, u, v))
        dst_parts.append(np.where(forward, v, u))

    if not src_parts:
        return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
    return np.concatenate(src_parts), np.concatenate(dst_parts)


def sample_dsbm_meta(params: DsbmParams, meta: MetaGraph, seed: int) -> tuple[DirectedGraph, Labeling]:
    """Sample a k-community DSBM whose cross-edge orientations follow ``meta``."""
    if meta.k != params.k:
        raise MetaMismatch(f"meta-graph has {meta.k} communities, params have {params.k}")
    src, dst = _sample_rows(params, meta.orientation(params.eta), seed)
    g = build_graph_arrays(params.n, src, dst)
    logger.debug("sampled DSBM sizes=%s p=%g q=%g eta=%g seed=%d: %d edges", params.sizes, params.p, params.q, params.eta, seed, g.num_edges)
    return g, Labeling(params.planted(), params.k)


def sample_dsbm2(params: DsbmParams, seed: int) -> tuple[DirectedGraph, Labeling]:
    """Two-community DSBM: community 0 is the source, community 1 the sink."""
    if params.k != 2:
        raise BadParams(f"two-community DSBM needs exactly two sizes, got {params.k}")
    return sample_dsbm_meta(params, TWO_COMMUNITY_META, seed)


def shuffle_vertices(g: DirectedGraph, labels: Labeling, seed: int) -> tuple[DirectedGraph, Labeling]:
    """Relabel vertex u as perm[u] for a seeded permutation; labels follow their vertex."""
    perm = stage_rng(seed, "shuffle").permutation(g.n)
    s, d, w = g.edges()
    shuffled = build_graph_arrays(g.n, perm[s], perm[d], w)
    assignments = np.empty(g.n, dtype=np.int64)
    assignments[perm] = labels.assignments
    return shuffled, Labeling(assignments, labels.k)
