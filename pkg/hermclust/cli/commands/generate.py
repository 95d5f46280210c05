# hermclust/cli/commands/generate.py
from pathlib import Path
from typing import Optional

import click

from hermclust.schemas.params import DsbmParams, MetaGraph
from hermclust.services.dsbm import sample_dsbm2, sample_dsbm_meta, shuffle_vertices
from hermclust.services.graph import DirectedGraph, Labeling
from hermclust.services.graph_io import default_run_path, read_meta_graph, write_edge_list, write_labels


def _parse_sizes(value: str) -> list[int]:
    try:
        return [int(x) for x in value.split(",") if x.strip()]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated integers, got {value!r}") from None


def _write(g: DirectedGraph, labels: Labeling, out: Optional[Path], labels_out: Optional[Path], stem: str, note: str) -> None:
    out = out or default_run_path(stem, ".edges")
    labels_out = labels_out or out.with_suffix(".labels")
    write_edge_list(out, g, comments=[note])
    write_labels(labels_out, labels)
    click.echo(f"N={g.n} |E|={g.num_edges} graph={out} labels={labels_out}")


def _model_options(fn):
    for opt in reversed([
        click.option("--p", "p", type=float, required=True, help="intra-community edge probability"),
        click.option("--q", "q", type=float, required=True, help="inter-community edge probability"),
        click.option("--eta", type=float, required=True, help="direction noise in [0, 0.5]"),
        click.option("--seed", type=int, default=0, show_default=True),
        click.option("--shuffle", is_flag=True, help="apply a seeded permutation to vertex ids"),
        click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None, help="edge-list path"),
        click.option("--labels-out", type=click.Path(dir_okay=False, path_type=Path), default=None, help="labels path (default: <out>.labels)"),
    ]):
        fn = opt(fn)
    return fn


@click.group()
def command():
    """Sample a DSBM graph and its planted labels."""


@command.command("dsbm2")
@click.option("--n1", type=int, required=True, help="size of the source community")
@click.option("--n2", type=int, required=True, help="size of the sink community")
@_model_options
def dsbm2(n1, n2, p, q, eta, seed, shuffle, out, labels_out):
    """Two communities; cross edges point 0 -> 1 with probability 1 - eta."""
    params = DsbmParams.checked(sizes=[n1, n2], p=p, q=q, eta=eta)
    g, labels = sample_dsbm2(params, seed)
    if shuffle:
        g, labels = shuffle_vertices(g, labels, seed)
    note = f"dsbm2 sizes={n1},{n2} p={p!r} q={q!r} eta={eta!r} seed={seed} shuffle={int(shuffle)}"
    _write(g, labels, out, labels_out, "dsbm2", note)


@command.command("meta")
@click.option("--sizes", required=True, help="comma-separated community sizes, e.g. 300,300,300")
@click.option("--meta", "meta_source", required=True, help="preset (path3, diamond4, star4, cycle3, cycle5, hierarchy5) or JSON file")
@_model_options
def meta(sizes, meta_source, p, q, eta, seed, shuffle, out, labels_out):
    """k communities; a meta-graph fixes which community pairs are oriented."""
    params = DsbmParams.checked(sizes=_parse_sizes(sizes), p=p, q=q, eta=eta)
    meta_graph: MetaGraph = read_meta_graph(meta_source)
    g, labels = sample_dsbm_meta(params, meta_graph, seed)
    if shuffle:
        g, labels = shuffle_vertices(g, labels, seed)
    note = f"meta={meta_source} sizes={sizes} p={p!r} q={q!r} eta={eta!r} seed={seed} shuffle={int(shuffle)}"
    _write(g, labels, out, labels_out, "meta", note)
