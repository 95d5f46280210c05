# hermclust/cli/commands/benchmark.py
from pathlib import Path

import click

from hermclust.background.tasks import run_benchmark
from hermclust.schemas.configs import BenchmarkConfig
from hermclust.services.baselines import parse_baseline
from hermclust.services.graph_io import read_json, read_meta_graph
from hermclust.services.runner import METHODS


@click.command()
@click.argument("config", type=click.Path(dir_okay=False, path_type=Path))
@click.option("--output", type=click.Path(dir_okay=False, path_type=Path), default=None, help="results CSV (overrides the config)")
@click.option("--backend", type=click.Choice(["local", "celery"]), default=None, help="default from HERMCLUST_BENCHMARK_BACKEND")
@click.option("--workers", type=int, default=None, help="local worker processes (default from HERMCLUST_MAX_WORKERS)")
@click.option("--no-progress", is_flag=True, help="hide the progress bar")
def command(config, output, backend, workers, no_progress):
    """Run a DSBM sweep from a JSON config and write results, aggregate and summary files."""
    cfg = BenchmarkConfig.model_validate(read_json(config))
    for method in cfg.methods:
        if method not in METHODS:
            parse_baseline(method)  # raises for unknown or unimplemented names
    if cfg.meta:
        read_meta_graph(cfg.meta)

    out = run_benchmark(cfg, output, backend=backend, workers=workers, progress=not no_progress)
    failed = sum(1 for r in out["rows"] if r["status"] != "ok")
    click.echo(f"cells={len(out['rows'])} failed={failed} results={out['results']} aggregate={out['aggregate']}")
    for trend in out["trends"]:
        rho = trend["spearman_ari_eta"]
        if rho is not None:
            click.echo(f"  {trend['method']} p={trend['p']} q={trend['q']}: spearman(ARI, eta)={rho:.3f}")
