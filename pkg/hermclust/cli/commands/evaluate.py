# hermclust/cli/commands/evaluate.py
from pathlib import Path

import click

from hermclust.services.graph_io import read_labels, write_json
from hermclust.services.metrics import ari, error_rate, misclustering_error


@click.command()
@click.argument("truth", type=click.Path(dir_okay=False, path_type=Path))
@click.argument("pred", type=click.Path(dir_okay=False, path_type=Path))
@click.option("--json", "json_out", type=click.Path(dir_okay=False, path_type=Path), default=None, help="also write the scores as JSON")
def command(truth, pred, json_out):
    """Compare a predicted labels file with the ground truth."""
    t, y = read_labels(truth), read_labels(pred)
    scores = {
        "n": len(t),
        "ari": ari(t, y),
        "error": misclustering_error(t, y),
        "error_rate": error_rate(t, y),
    }
    if json_out:
        write_json(json_out, scores)
    click.echo(f"n={scores['n']} ari={scores['ari']:.6f} error={scores['error']} error_rate={scores['error_rate']:.6f}")
