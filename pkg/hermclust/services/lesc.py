# hermclust/services/lesc.py
"""
LE-SC: alternate a spectral bipartition under the Hermitian likelihood
matrix with method-of-moments re-estimation of (p, q, eta), and split
recursively for more than two clusters.
"""
from __future__ import annotations

import logging
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import NamedTuple, Optional

import numpy as np

from hermclust.core.config import ETA_MIN
from hermclust.core.errors import EmptyCluster, GraphTooSmall, SizeMismatch
from hermclust.schemas.configs import LescConfig
from hermclust.services.baselines import BaselineMethod, baseline_bipartition
from hermclust.services.eigen import top_eigenpair
from hermclust.services.graph import DirectedGraph, Labeling, directed_count, weak_components
from hermclust.services.graph_io import write_csv
from hermclust.services.kmeans import kmeans_plane, plane_points
from hermclust.services.mle import (
    MleWeights,
    build_operator,
    clamp_params,
    count_log_likelihood,
    mle_weights,
    probability_floor,
)
from hermclust.services.partition import recursive_bipartition, solver_configs
from hermclust.services.seeding import stage_rng

logger = logging.getLogger(__name__)

# fixed starting operators: flow, total flow and net flow matrices
START_WEIGHTS = {
    "flow-matrix": MleWeights(w_r=1.0, w_i=1.0, w_c=0.0),
    "total-flow-matrix": MleWeights(w_r=1.0, w_i=0.0, w_c=0.0),
    "net-flow-matrix": MleWeights(w_r=0.0, w_i=1.0, w_c=0.0),
}

# random-params: p, q drawn log-uniformly in [density / 3, 3 * density]
DENSITY_SPREAD = 3.0
START_EIGEN_ITER = 500


@dataclass(frozen=True)
class ModelEstimate:
    p: float
    q: float
    eta: float


@dataclass
class LescIteration:
    """
    One outer iteration. ``w_*`` built this iteration's operator; ``p, q, eta``
    were estimated from the labels it produced and feed the next iteration.
    """

    split: int
    iteration: int
    p: float
    q: float
    eta: float
    w_r: float
    w_i: float
    w_c: float
    eigenvalue: float
    kmeans_cost: float
    label_changes: int
    forward_flow: float
    backward_flow: float
    eigen_iterations: int
    eigen_converged: bool
    t_build: float
    t_eigen: float
    t_kmeans: float
    t_update: float


TRACE_FIELDS = list(LescIteration.__dataclass_fields__)


@dataclass
class LescTrace:
    init: str
    iterations: list[LescIteration] = field(default_factory=list)
    stopped_early: bool = False

    def __len__(self) -> int:
        return len(self.iterations)

    def rows(self) -> list[dict]:
        return [asdict(it) for it in self.iterations]

    @property
    def eigen_iterations(self) -> int:
        return sum(it.eigen_iterations for it in self.iterations)

    @property
    def all_converged(self) -> bool:
        return all(it.eigen_converged for it in self.iterations)

    def stage_seconds(self) -> dict[str, float]:
        return {
            stage: float(sum(getattr(it, f"t_{stage}") for it in self.iterations))
            for stage in ("build", "eigen", "kmeans", "update")
        }

    def extend(self, other: "LescTrace") -> None:
        self.iterations.extend(other.iterations)
        self.stopped_early = self.stopped_early or other.stopped_early


class LescResult(NamedTuple):
    labels: Labeling
    params: ModelEstimate
    trace: LescTrace


def write_trace(path: str | Path, trace: LescTrace) -> Path:
    return write_csv(path, TRACE_FIELDS, trace.rows())


# ---------------------------------------------------------------- parameters

def _side_counts(g: DirectedGraph, part: Labeling) -> tuple[float, float]:
    c1, c2 = part.mask(0), part.mask(1)
    return directed_count(g, c1, c2), directed_count(g, c2, c1)


def estimate_params(g: DirectedGraph, part: Labeling) -> ModelEstimate:
    """Edge densities within and between the two clusters, and the direction noise."""
    if part.k != 2 or len(part) != g.n:
        raise SizeMismatch(f"need a two-community labeling of {g.n} vertices")
    n1, n2 = (int(s) for s in part.sizes())
    if n1 == 0 or n2 == 0:
        raise EmptyCluster("both clusters must be nonempty to estimate parameters")

    fwd, bwd = _side_counts(g, part)
    tf = fwd + bwd
    intra_pairs = n1 * (n1 - 1) // 2 + n2 * (n2 - 1) // 2
    p = (g.total_weight - tf) / intra_pairs if intra_pairs else 0.0
    q = tf / (n1 * n2)
    eta = min(fwd, bwd) / tf if tf > 0 else 0.5
    return ModelEstimate(*clamp_params(p, q, eta, g.n))


def _orient(g: DirectedGraph, part: Labeling) -> Labeling:
    """Put the source side (more outgoing cross weight) in community 0."""
    fwd, bwd = _side_counts(g, part)
    if bwd > fwd:
        return part.swapped()
    if fwd == bwd:
        return part.canonical()
    return part


# ---------------------------------------------------------------- initial state

def _warm_start(g: DirectedGraph, cfg: LescConfig, vertices: Optional[np.ndarray]) -> Optional[Labeling]:
    labels = np.asarray(cfg.warm_labels, dtype=np.int64)
    if vertices is None:
        if labels.size != g.n:
            raise SizeMismatch(f"warm labels cover {labels.size} vertices, graph has {g.n}")
    else:
        labels = labels[vertices]
    part = Labeling(labels, 2)
    if part.sizes().min() == 0:
        return None
    return part


def _initial_weights(g: DirectedGraph, cfg: LescConfig, split: int, vertices: Optional[np.ndarray]) -> tuple[MleWeights, Optional[Labeling]]:
    init = cfg.init
    if init in START_WEIGHTS:
        return START_WEIGHTS[init], None

    start: Optional[Labeling] = None
    if init == "warm-labels":
        start = _warm_start(g, cfg, vertices)
        if start is None:
            logger.info("warm labels are constant on split %d; drawing random parameters", split)
    elif init.startswith("baseline:"):
        method = BaselineMethod(init.split(":", 1)[1])
        start = baseline_bipartition(g, method, cfg, split)
        if start.sizes().min() == 0:
            start = None

    if start is not None:
        est = estimate_params(g, start)
        return mle_weights(est.p, est.q, est.eta, g.n), _orient(g, start)
    return _random_start(g, cfg, split)


def _random_start(g: DirectedGraph, cfg: LescConfig, split: int) -> tuple[MleWeights, Optional[Labeling]]:
    """
    Draw ``cfg.random_starts`` parameter sets with p and q within a factor
    DENSITY_SPREAD of the observed edge density and bipartition once under
    each with a short eigen run. The labeling whose re-estimated parameters
    give the highest likelihood is kept.
    """
    rng = stage_rng(cfg.seed, "init", split)
    lo = probability_floor(g.n)
    pairs = g.n * (g.n - 1) / 2
    density = min(max(g.total_weight / pairs, lo), 0.5)
    spread = np.log(DENSITY_SPREAD)

    eigen_cfg, kmeans_cfg = solver_configs(cfg, split, 0)
    eigen_cfg = eigen_cfg.model_copy(update={"max_iter": min(eigen_cfg.max_iter, START_EIGEN_ITER)})

    first: Optional[MleWeights] = None
    best: Optional[tuple[float, ModelEstimate, Labeling]] = None
    for draw in range(cfg.random_starts):
        p, q = density * np.exp(rng.uniform(-spread, spread, size=2))
        eta = rng.uniform(ETA_MIN, 0.5)
        weights = mle_weights(p, q, eta, g.n)
        if first is None:
            first = weights

        eig = top_eigenpair(build_operator(g, weights), eigen_cfg)
        raw, _, _ = kmeans_plane(plane_points(eig.vector), 2, kmeans_cfg)
        if raw.sizes().min() == 0:
            continue
        part = _orient(g, raw)
        est = estimate_params(g, part)
        score = count_log_likelihood(g, part, est.p, est.q, est.eta)
        logger.debug("split %d start %d: p=%.4g q=%.4g eta=%.4g -> loglik %.6g", split, draw, p, q, eta, score)
        if best is None or score > best[0]:
            best = (score, est, part)

    if best is None:
        return first, None
    _, est, part = best
    return mle_weights(est.p, est.q, est.eta, g.n), part


# ---------------------------------------------------------------- bipartition

def _spectral_step(g: DirectedGraph, weights: MleWeights, cfg: LescConfig, split: int, step: int):
    eigen_cfg, kmeans_cfg = solver_configs(cfg, split, step)

    t0 = time.perf_counter()
    op = build_operator(g, weights)
    t1 = time.perf_counter()
    eig = top_eigenpair(op, eigen_cfg)
    t2 = time.perf_counter()
    labels, _, cost = kmeans_plane(plane_points(eig.vector), 2, kmeans_cfg)
    t3 = time.perf_counter()

    if eig.no_convergence:
        logger.warning("split %d iteration %d: eigensolver did not converge (residual %.3e)", split, step, eig.residual)
    return eig, labels, cost, (t1 - t0, t2 - t1, t3 - t2)


def _bipartition(g: DirectedGraph, cfg: LescConfig, split: int, vertices: Optional[np.ndarray]) -> LescResult:
    if g.n < 2:
        raise GraphTooSmall(f"bipartition needs at least two vertices, got {g.n}")

    weights, previous = _initial_weights(g, cfg, split, vertices)
    trace = LescTrace(init=cfg.init)
    estimate: Optional[ModelEstimate] = None
    labels: Optional[Labeling] = None

    for step in range(1, cfg.max_outer_iter + 1):
        eig, raw, cost, (t_build, t_eigen, t_kmeans) = _spectral_step(g, weights, cfg, split, step)

        if raw.sizes().min() == 0:
            if labels is None:
                raise EmptyCluster(f"split {split}: k-means put every vertex on one side")
            logger.warning("split %d iteration %d: k-means left a side empty; keeping the previous labels", split, step)
            trace.stopped_early = True
            break

        t0 = time.perf_counter()
        current = _orient(g, raw)
        estimate = estimate_params(g, current)
        fwd, bwd = _side_counts(g, current)
        t_update = time.perf_counter() - t0

        changes = int(np.sum(current.assignments != previous.assignments)) if previous is not None else g.n
        trace.iterations.append(
            LescIteration(
                split=split, iteration=step,
                p=estimate.p, q=estimate.q, eta=estimate.eta,
                w_r=weights.w_r, w_i=weights.w_i, w_c=weights.w_c,
                eigenvalue=eig.value, kmeans_cost=cost, label_changes=changes,
                forward_flow=fwd, backward_flow=bwd,
                eigen_iterations=eig.iterations, eigen_converged=not eig.no_convergence,
                t_build=t_build, t_eigen=t_eigen, t_kmeans=t_kmeans, t_update=t_update,
            )
        )
        logger.debug(
            "split %d iter %d: p=%.4g q=%.4g eta=%.4g lambda=%.6g changes=%d",
            split, step, estimate.p, estimate.q, estimate.eta, eig.value, changes,
        )

        labels = current
        if changes == 0:
            trace.stopped_early = True
            break
        previous = current
        weights = mle_weights(estimate.p, estimate.q, estimate.eta, g.n)
        if weights.w_r < 0:
            logger.warning("split %d iteration %d: learned parameters give w_r=%.4g < 0", split, step, weights.w_r)

    return LescResult(labels, estimate, trace)


def lesc_bipartition(g: DirectedGraph, cfg: LescConfig | None = None, split: int = 0) -> LescResult:
    """Two-community LE-SC. Community 0 of the result is the source side."""
    return _bipartition(g, cfg or LescConfig(), split, None)


def lesc_oracle(g: DirectedGraph, params: ModelEstimate, cfg: LescConfig | None = None, split: int = 0) -> LescResult:
    """One spectral bipartition with the true (p, q, eta); no parameter learning."""
    cfg = cfg or LescConfig()
    if g.n < 2:
        raise GraphTooSmall(f"bipartition needs at least two vertices, got {g.n}")
    weights = mle_weights(params.p, params.q, params.eta, g.n)
    eig, raw, cost, (t_build, t_eigen, t_kmeans) = _spectral_step(g, weights, cfg, split, 1)
    if raw.sizes().min() == 0:
        raise EmptyCluster(f"split {split}: k-means put every vertex on one side")

    t0 = time.perf_counter()
    labels = _orient(g, raw)
    fwd, bwd = _side_counts(g, labels)
    t_update = time.perf_counter() - t0

    p, q, eta = clamp_params(params.p, params.q, params.eta, g.n)
    trace = LescTrace(init="oracle")
    trace.iterations.append(
        LescIteration(
            split=split, iteration=1, p=p, q=q, eta=eta,
            w_r=weights.w_r, w_i=weights.w_i, w_c=weights.w_c,
            eigenvalue=eig.value, kmeans_cost=cost, label_changes=g.n,
            forward_flow=fwd, backward_flow=bwd,
            eigen_iterations=eig.iterations, eigen_converged=not eig.no_convergence,
            t_build=t_build, t_eigen=t_eigen, t_kmeans=t_kmeans, t_update=t_update,
        )
    )
    return LescResult(labels, ModelEstimate(p, q, eta), trace)


# ---------------------------------------------------------------- k clusters

def component_split(g: DirectedGraph) -> Optional[Labeling]:
    """
    The largest weak component that carries an edge against everything else,
    or None when at most one component carries edges. Isolated vertices stay
    with the rest.
    """
    comp = weak_components(g)
    src, _, _ = g.edges()
    with_edges = np.unique(comp[src])
    if with_edges.size < 2:
        return None
    sizes = np.bincount(comp)[with_edges]
    keep = with_edges[int(np.argmax(sizes))]
    return Labeling((comp != keep).astype(np.int64), 2).canonical()


def lesc_k(
    g: DirectedGraph,
    k: int,
    cfg: LescConfig | None = None,
    *,
    oracle: Optional[ModelEstimate] = None,
    trace: Optional[LescTrace] = None,
) -> Labeling:
    """
    k clusters by repeatedly running LE-SC on the largest cluster. With
    ``oracle`` set, every split uses those fixed parameters instead of
    learning them. Per-split iterations are appended to ``trace`` if given.

    A cluster whose induced subgraph falls apart into several edge-carrying
    components is split along them first, so no cluster mixes components.
    """
    cfg = cfg or LescConfig()
    if cfg.init == "warm-labels" and len(cfg.warm_labels) != g.n:
        raise SizeMismatch(f"warm labels cover {len(cfg.warm_labels)} vertices, graph has {g.n}")
    collected = trace if trace is not None else LescTrace(init="oracle" if oracle else cfg.init)

    def split(sub: DirectedGraph, index: int, members: np.ndarray) -> Labeling:
        by_component = component_split(sub)
        if by_component is not None:
            logger.info("split %d: %d vertices in disconnected parts; splitting along components", index, sub.n)
            return by_component
        if oracle is not None:
            result = lesc_oracle(sub, oracle, cfg, index)
        else:
            result = _bipartition(sub, cfg, index, members)
        collected.extend(result.trace)
        return result.labels

    return recursive_bipartition(g, k, split)
