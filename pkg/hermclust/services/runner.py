# hermclust/services/runner.py
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional

from hermclust.core.errors import BadParams
from hermclust.schemas.configs import LescConfig
from hermclust.services.baselines import baseline_cluster, parse_baseline
from hermclust.services.graph import DirectedGraph, Labeling
from hermclust.services.lesc import LescTrace, ModelEstimate, lesc_bipartition, lesc_k, lesc_oracle

METHODS = ("lesc", "lesc-oracle", "sym", "bibsym", "herm")


@dataclass
class MethodRun:
    method: str
    labels: Labeling
    seconds: float
    trace: Optional[LescTrace] = None
    params: Optional[ModelEstimate] = None

    @property
    def outer_iterations(self) -> int:
        return len(self.trace) if self.trace is not None else 0

    @property
    def eigen_iterations(self) -> int:
        return self.trace.eigen_iterations if self.trace is not None else 0

    @property
    def eigen_seconds(self) -> float:
        return self.trace.stage_seconds()["eigen"] if self.trace is not None else 0.0


def run_method(
    g: DirectedGraph,
    method: str,
    k: int,
    cfg: LescConfig | None = None,
    oracle: Optional[ModelEstimate] = None,
) -> MethodRun:
    """Cluster ``g`` into ``k`` groups with a method named as on the command line."""
    cfg = cfg or LescConfig()
    name = method.strip().lower()
    start = time.perf_counter()

    if name == "lesc":
        if k == 2:
            labels, params, trace = lesc_bipartition(g, cfg)
        else:
            trace = LescTrace(init=cfg.init)
            labels, params = lesc_k(g, k, cfg, trace=trace), None
        return MethodRun(name, labels, time.perf_counter() - start, trace, params)

    if name == "lesc-oracle":
        if oracle is None:
            raise BadParams("method lesc-oracle needs the true model parameters")
        if k == 2:
            labels, params, trace = lesc_oracle(g, oracle, cfg)
        else:
            trace = LescTrace(init="oracle")
            labels, params = lesc_k(g, k, cfg, oracle=oracle, trace=trace), None
        return MethodRun(name, labels, time.perf_counter() - start, trace, params)

    baseline = parse_baseline(name)
    labels = baseline_cluster(g, baseline, k, cfg)
    return MethodRun(name, labels, time.perf_counter() - start)
