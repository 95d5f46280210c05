# hermclust/background/tasks.py
from __future__ import annotations

import logging
import math
import traceback
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor, as_completed
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
from celery import group
from celery.utils.log import get_task_logger
from scipy.stats import spearmanr
from tqdm import tqdm

from hermclust.core.celery_app import celery_app
from hermclust.core.config import BENCHMARK_BACKEND, MAX_WORKERS
from hermclust.core.errors import HermclustError
from hermclust.schemas.configs import BenchmarkConfig
from hermclust.schemas.params import DsbmParams
from hermclust.schemas.reports import BENCHMARK_COLUMNS, BenchmarkRow
from hermclust.services.dsbm import TWO_COMMUNITY_META, sample_dsbm_meta, shuffle_vertices
from hermclust.services.graph_io import read_meta_graph, write_csv, write_json
from hermclust.services.lesc import ModelEstimate
from hermclust.services.metrics import ari, error_rate, misclustering_error
from hermclust.services.runner import run_method
from hermclust.services.seeding import stage_seed

logger = logging.getLogger(__name__)
task_logger = get_task_logger(__name__)

AGGREGATE_COLUMNS = [
    "point", "p", "q", "eta", "method", "replicates", "ok",
    "mean_ari", "std_ari", "mean_error_rate", "mean_runtime", "mean_eigen_time_per_iter",
]


def _trim(s: str, limit: int = 500) -> str:
    s = s or ""
    return (s[: limit - 3] + "...") if len(s) > limit else s


def replicate_seed(base_seed: int, point: int, replicate: int) -> int:
    """Graph and algorithm seed for one replicate; every method sees the same graph."""
    return stage_seed(base_seed, "replicate", point, replicate)


def run_replicate_cell(payload: Dict[str, Any]) -> Dict[str, Any]:
    """
    One (grid point, method, replicate) cell. Failures come back as a row
    whose ``status`` names the error, so a sweep never aborts halfway.
    """
    cfg = BenchmarkConfig.model_validate(payload["config"])
    point, method, replicate = payload["point"], payload["method"], payload["replicate"]
    p, q, eta = cfg.points()[point]
    seed = replicate_seed(cfg.base_seed, point, replicate)
    row = BenchmarkRow(point=point, p=p, q=q, eta=eta, method=method, replicate=replicate, seed=seed)

    try:
        params = DsbmParams.checked(sizes=cfg.sizes, p=p, q=q, eta=eta)
        meta = read_meta_graph(cfg.meta) if cfg.meta else TWO_COMMUNITY_META
        g, truth = sample_dsbm_meta(params, meta, seed)
        if cfg.shuffle:
            g, truth = shuffle_vertices(g, truth, seed)
        row.n, row.edges = g.n, g.num_edges

        run = run_method(g, method, cfg.clusters, cfg.lesc.model_copy(update={"seed": seed}), oracle=ModelEstimate(p, q, eta))
        row.ari = ari(truth, run.labels)
        row.error = misclustering_error(truth, run.labels)
        row.error_rate = error_rate(truth, run.labels)
        row.outer_iterations = run.outer_iterations
        row.eigen_iterations = run.eigen_iterations
        row.runtime = run.seconds
        row.eigen_seconds = run.eigen_seconds
        row.eigen_time_per_iter = run.eigen_seconds / run.eigen_iterations if run.eigen_iterations else 0.0
    except HermclustError as exc:
        row.status = exc.__class__.__name__
        row.detail = _trim(exc.detail)
    except Exception as exc:  # noqa: BLE001 - recorded in the row, the sweep goes on
        row.status = exc.__class__.__name__
        row.detail = _trim(f"{exc}\n{traceback.format_exc()}")
        logger.exception("replicate point=%d method=%s replicate=%d failed", point, method, replicate)
    return row.model_dump(mode="json")


@celery_app.task(name="hermclust.background.tasks.run_replicate", bind=True)
def run_replicate(self, payload: Dict[str, Any]) -> Dict[str, Any]:
    """Celery entrypoint for one benchmark cell."""
    task_logger.info("replicate point=%s method=%s replicate=%s", payload["point"], payload["method"], payload["replicate"])
    return run_replicate_cell(payload)


# ---------------------------------------------------------------- orchestration

def build_payloads(cfg: BenchmarkConfig) -> List[Dict[str, Any]]:
    config = cfg.model_dump(mode="json")
    return [
        {"config": config, "point": point, "method": method, "replicate": replicate}
        for point in range(len(cfg.points()))
        for method in cfg.methods
        for replicate in range(cfg.replicates)
    ]


def _run_local(payloads: List[Dict[str, Any]], workers: int, progress: bool) -> List[Dict[str, Any]]:
    bar = tqdm(total=len(payloads), desc="benchmark", unit="run", disable=not progress)
    rows: List[Dict[str, Any]] = []
    try:
        if workers <= 1:
            for payload in payloads:
                rows.append(run_replicate_cell(payload))
                bar.update(1)
            return rows
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(run_replicate_cell, payload) for payload in payloads]
            for future in as_completed(futures):
                rows.append(future.result())
                bar.update(1)
        return rows
    finally:
        bar.close()


def _run_celery(payloads: List[Dict[str, Any]]) -> List[Dict[str, Any]]:
    job = group(run_replicate.s(payload) for payload in payloads).apply_async()
    return job.get()


def _sort_rows(rows: List[Dict[str, Any]], methods: List[str]) -> List[Dict[str, Any]]:
    order = {m: i for i, m in enumerate(methods)}
    return sorted(rows, key=lambda r: (r["point"], order[r["method"]], r["replicate"]))


def aggregate(rows: List[Dict[str, Any]], methods: List[str]) -> List[Dict[str, Any]]:
    """Per (point, method) means over the successful replicates."""
    cells: Dict[tuple, List[Dict[str, Any]]] = defaultdict(list)
    for row in rows:
        cells[(row["point"], row["method"])].append(row)

    order = {m: i for i, m in enumerate(methods)}
    out = []
    for (point, method), group_rows in sorted(cells.items(), key=lambda kv: (kv[0][0], order[kv[0][1]])):
        ok = [r for r in group_rows if r["status"] == "ok"]
        aris = np.array([r["ari"] for r in ok], dtype=float)
        first = group_rows[0]
        out.append({
            "point": point, "p": first["p"], "q": first["q"], "eta": first["eta"], "method": method,
            "replicates": len(group_rows), "ok": len(ok),
            "mean_ari": float(aris.mean()) if ok else math.nan,
            "std_ari": float(aris.std()) if ok else math.nan,
            "mean_error_rate": float(np.mean([r["error_rate"] for r in ok])) if ok else math.nan,
            "mean_runtime": float(np.mean([r["runtime"] for r in ok])) if ok else math.nan,
            "mean_eigen_time_per_iter": float(np.mean([r["eigen_time_per_iter"] for r in ok])) if ok else math.nan,
        })
    return out


def eta_trends(agg: List[Dict[str, Any]]) -> List[Dict[str, Any]]:
    """Spearman correlation of mean ARI against eta, per method and (p, q)."""
    series: Dict[tuple, List[tuple[float, float]]] = defaultdict(list)
    for row in agg:
        if not math.isnan(row["mean_ari"]):
            series[(row["method"], row["p"], row["q"])].append((row["eta"], row["mean_ari"]))

    trends = []
    for (method, p, q), pts in series.items():
        etas = [e for e, _ in pts]
        means = [m for _, m in pts]
        rho: Optional[float] = None
        if len(set(etas)) >= 2 and len(set(means)) >= 2:
            rho = float(spearmanr(etas, means).statistic)
        trends.append({"method": method, "p": p, "q": q, "points": len(pts), "spearman_ari_eta": rho})
    return trends


def run_benchmark(
    cfg: BenchmarkConfig,
    output: Optional[Path] = None,
    *,
    backend: Optional[str] = None,
    workers: Optional[int] = None,
    progress: bool = True,
) -> Dict[str, Any]:
    """
    Run a sweep and write ``<output>`` (one row per cell),
    ``<output stem>-aggregate.csv`` and ``<output stem>-summary.json``.
    Row order is fixed, so the files do not depend on backend or worker count.
    """
    output = Path(output or cfg.output)
    backend = (backend or BENCHMARK_BACKEND).lower()
    workers = workers or MAX_WORKERS
    payloads = build_payloads(cfg)
    logger.info("benchmark: %d cells on %s backend (%d workers)", len(payloads), backend, workers)

    if backend == "celery":
        rows = _run_celery(payloads)
    else:
        rows = _run_local(payloads, workers, progress)
    rows = _sort_rows(rows, cfg.methods)

    failed = sum(1 for r in rows if r["status"] != "ok")
    if failed:
        logger.warning("benchmark: %d of %d cells failed; see the status column", failed, len(rows))

    agg = aggregate(rows, cfg.methods)
    trends = eta_trends(agg)
    results_path = write_csv(output, BENCHMARK_COLUMNS, rows)
    aggregate_path = write_csv(output.with_name(f"{output.stem}-aggregate.csv"), AGGREGATE_COLUMNS, agg)
    summary_path = write_json(output.with_name(f"{output.stem}-summary.json"), {"cells": len(rows), "failed": failed, "trends": trends})
    return {
        "results": results_path,
        "aggregate": aggregate_path,
        "summary": summary_path,
        "rows": rows,
        "aggregate_rows": agg,
        "trends": trends,
    }
