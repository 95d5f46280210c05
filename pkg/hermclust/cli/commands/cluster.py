# hermclust/cli/commands/cluster.py
import logging
import time
from pathlib import Path

import click

from hermclust.core.errors import BadParams
from hermclust.schemas.configs import EigenConfig, KmeansConfig, LescConfig
from hermclust.schemas.params import DsbmParams
from hermclust.schemas.reports import FinalParams, RunReport
from hermclust.services.graph import symmetric_normalize
from hermclust.services.graph_io import default_run_path, read_edge_list, read_labels, write_json, write_labels
from hermclust.services.lesc import ModelEstimate, write_trace
from hermclust.services.metrics import ari, error_rate, misclustering_error
from hermclust.services.runner import run_method

logger = logging.getLogger(__name__)


@click.command()
@click.argument("graph", type=click.Path(dir_okay=False, path_type=Path))
@click.option("--method", default="lesc", show_default=True, help="lesc, lesc-oracle, sym, bibsym or herm")
@click.option("--k", type=int, default=2, show_default=True, help="number of clusters")
@click.option("--n", "n_vertices", type=int, default=None, help="vertex count, if the file has no n= header")
@click.option("--normalize", is_flag=True, help="cluster D^-1/2 A D^-1/2 instead of A")
@click.option("--truth", type=click.Path(dir_okay=False, path_type=Path), default=None, help="labels file; adds ARI to the report")
@click.option("--labels-out", type=click.Path(dir_okay=False, path_type=Path), default=None)
@click.option("--report", "report_out", type=click.Path(dir_okay=False, path_type=Path), default=None, help="JSON run report (default: <labels-out>.report.json)")
@click.option("--trace", "trace_out", type=click.Path(dir_okay=False, path_type=Path), default=None, help="per-iteration LE-SC trace CSV")
@click.option("--init", default="flow-matrix", show_default=True, help="LE-SC start: random-params, flow-matrix, total-flow-matrix, net-flow-matrix, warm-labels, baseline:<sym|bibsym|herm>")
@click.option("--warm-labels", type=click.Path(dir_okay=False, path_type=Path), default=None, help="labels file for --init warm-labels")
@click.option("--max-iter", type=int, default=20, show_default=True, help="LE-SC outer iterations T")
@click.option("--tol", type=float, default=1e-8, show_default=True, help="eigensolver tolerance")
@click.option("--restarts", type=int, default=10, show_default=True, help="k-means restarts")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--p", "p", type=float, default=None, help="true p (lesc-oracle)")
@click.option("--q", "q", type=float, default=None, help="true q (lesc-oracle)")
@click.option("--eta", type=float, default=None, help="true eta (lesc-oracle)")
def command(graph, method, k, n_vertices, normalize, truth, labels_out, report_out, trace_out, init, warm_labels, max_iter, tol, restarts, seed, p, q, eta):
    """Cluster an edge-list graph and write labels plus a JSON report."""
    started = time.perf_counter()
    g = read_edge_list(graph, n_vertices)
    if normalize:
        g = symmetric_normalize(g)

    warm = read_labels(warm_labels).to_list() if warm_labels else None
    cfg = LescConfig(
        max_outer_iter=max_iter,
        init=init,
        warm_labels=warm,
        eigen=EigenConfig(tol=tol),
        kmeans=KmeansConfig(restarts=restarts),
        seed=seed,
    )

    oracle = None
    if method.strip().lower() == "lesc-oracle":
        if None in (p, q, eta):
            raise BadParams("lesc-oracle needs --p, --q and --eta")
        checked = DsbmParams.checked(sizes=[g.n], p=p, q=q, eta=eta)
        oracle = ModelEstimate(checked.p, checked.q, checked.eta)

    run = run_method(g, method, k, cfg, oracle=oracle)
    logger.info("%s on %s: %d vertices, %d edges, %.3fs", run.method, graph, g.n, g.num_edges, run.seconds)

    labels_out = labels_out or default_run_path(Path(graph).stem, ".labels")
    report_out = report_out or labels_out.with_suffix(".report.json")
    write_labels(labels_out, run.labels)
    if trace_out and run.trace is not None:
        write_trace(trace_out, run.trace)

    report = RunReport(
        method=run.method,
        k=k,
        seed=seed,
        n=g.n,
        edges=g.num_edges,
        normalized=normalize,
        init=init if run.trace is not None else None,
        iterations=run.outer_iterations,
        eigen_iterations=run.eigen_iterations,
        eigen_converged=run.trace.all_converged if run.trace is not None else True,
        final_params=FinalParams(p=run.params.p, q=run.params.q, eta=run.params.eta) if run.params else None,
        wall_time=time.perf_counter() - started,
        stage_seconds=run.trace.stage_seconds() if run.trace is not None else {"total": run.seconds},
        labels_path=str(labels_out),
    )
    if truth:
        truth_labels = read_labels(truth)
        report.ari = ari(truth_labels, run.labels)
        report.error = misclustering_error(truth_labels, run.labels)
        report.error_rate = error_rate(truth_labels, run.labels)

    write_json(report_out, report.model_dump(mode="json"))
    summary = f"method={run.method} k={k} n={g.n} iterations={report.iterations}"
    if report.ari is not None:
        summary += f" ari={report.ari:.4f}"
    click.echo(f"{summary} labels={labels_out} report={report_out}")
