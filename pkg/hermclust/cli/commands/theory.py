# hermclust/cli/commands/theory.py
import logging
import math
from pathlib import Path

import click
import numpy as np

from hermclust.core.errors import BadParams, DegenerateCore
from hermclust.services.graph_io import default_run_path, write_csv
from hermclust.services.theory import centroid_distance, eigengap_delta, error_bound, l_eta, population_eigenvalues

logger = logging.getLogger(__name__)

COLUMNS = ["eta", "l_eta", "delta", "centroid_distance", "error_bound", "lambda1", "lambda2"]


@click.command()
@click.option("--n1", type=int, default=1000, show_default=True)
@click.option("--n2", type=int, default=1000, show_default=True)
@click.option("--p", "p", type=float, default=0.01, show_default=True)
@click.option("--q", "q", type=float, default=0.01, show_default=True)
@click.option("--eta-min", type=float, default=0.0, show_default=True)
@click.option("--eta-max", type=float, default=0.5, show_default=True)
@click.option("--points", type=int, default=51, show_default=True, help="grid size")
@click.option("--epsilon", type=float, default=1.0, show_default=True, help="k-means approximation factor")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None)
def command(n1, n2, p, q, eta_min, eta_max, points, epsilon, out):
    """Population curves over an eta grid: L(eta), eigengap, centroid distance, error bound."""
    if points < 1:
        raise BadParams("--points must be at least 1")
    if not (0.0 <= eta_min <= eta_max <= 0.5):
        raise BadParams("need 0 <= eta-min <= eta-max <= 0.5")
    if n1 < 1 or n2 < 1 or not (0.0 <= p <= 1.0 and 0.0 <= q <= 1.0):
        raise BadParams("sizes must be positive and p, q in [0, 1]")
    if epsilon <= 0:
        raise BadParams("--epsilon must be positive")

    rows = []
    for eta in np.linspace(eta_min, eta_max, points):
        eta = float(eta)
        lam1, lam2 = population_eigenvalues(n1, n2, p, q, eta)
        try:
            d = centroid_distance(n1, n2, p, q, eta)
            bound = error_bound(n1, n2, p, q, eta, epsilon)
        except DegenerateCore as exc:
            logger.warning("eta=%g: %s", eta, exc.detail)
            d = bound = math.nan
        rows.append({
            "eta": eta,
            "l_eta": l_eta(eta),
            "delta": eigengap_delta(n1, n2, p, q, eta),
            "centroid_distance": d,
            "error_bound": bound,
            "lambda1": lam1,
            "lambda2": lam2,
        })

    out = out or default_run_path("theory", ".csv")
    write_csv(out, COLUMNS, rows)
    click.echo(f"rows={len(rows)} out={out}")
