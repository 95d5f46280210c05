# hermclust/services/graph_io.py
from __future__ import annotations

import csv
import json
import re
import uuid
from pathlib import Path
from typing import IO, Iterable, Sequence, Union

import numpy as np

from hermclust.core.config import OUTPUT_DIR  # OUTPUT_DIR is a Path and mkdir is done in config
from hermclust.core.errors import FileFormatError, HermclustError
from hermclust.schemas.params import MetaGraph, meta_preset
from hermclust.services.graph import DirectedGraph, Labeling, build_graph_arrays

PathLike = Union[str, Path]

_N_HEADER = re.compile(r"\bn=(\d+)")


def default_run_path(stem: str, suffix: str) -> Path:
    """Fresh file path under OUTPUT_DIR for outputs the caller did not name."""
    return OUTPUT_DIR / f"{stem}-{uuid.uuid4().hex[:12]}{suffix}"


def _open_text(path: PathLike, mode: str) -> IO[str]:
    try:
        return Path(path).open(mode, encoding="utf-8", newline="")
    except OSError as exc:
        raise FileFormatError(f"cannot open {path}: {exc.strerror}") from exc


def read_edge_list(path: PathLike, n: int | None = None) -> DirectedGraph:
    """
    Parse "src dst [weight]" lines; '#' lines are comments.
    The vertex count comes from ``n``, else an "n=<int>" header comment,
    else the largest index + 1.
    """
    src: list[int] = []
    dst: list[int] = []
    weight: list[float] = []
    header_n = None
    with _open_text(path, "r") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                m = _N_HEADER.search(line)
                if m and header_n is None:
                    header_n = int(m.group(1))
                continue
            parts = line.split()
            if len(parts) not in (2, 3):
                raise FileFormatError(f"{path}:{lineno}: expected 'src dst [weight]', got {line!r}")
            try:
                src.append(int(parts[0]))
                dst.append(int(parts[1]))
                weight.append(float(parts[2]) if len(parts) == 3 else 1.0)
            except ValueError as exc:
                raise FileFormatError(f"{path}:{lineno}: {exc}") from exc

    resolved = n or header_n
    if resolved is None:
        resolved = (max(max(src), max(dst)) + 1) if src else 1
    try:
        return build_graph_arrays(resolved, np.asarray(src), np.asarray(dst), np.asarray(weight))
    except HermclustError as exc:
        raise FileFormatError(f"{path}: {exc.detail}") from exc


def _format_weight(w: float) -> str:
    return "" if w == 1.0 else f" {w!r}"


def write_edge_list(path: PathLike, g: DirectedGraph, comments: Sequence[str] = ()) -> Path:
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    s, d, w = g.edges()
    with _open_text(out, "w") as fh:
        fh.write(f"# hermclust edge list n={g.n} edges={g.num_edges}\n")
        for c in comments:
            fh.write(f"# {c}\n")
        for u, v, x in zip(s.tolist(), d.tolist(), w.tolist()):
            fh.write(f"{u} {v}{_format_weight(x)}\n")
    return out


def read_labels(path: PathLike, k: int | None = None) -> Labeling:
    values: list[int] = []
    with _open_text(path, "r") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                values.append(int(line.split()[0]))
            except ValueError as exc:
                raise FileFormatError(f"{path}:{lineno}: {exc}") from exc
    if not values:
        raise FileFormatError(f"{path}: no labels found")
    try:
        return Labeling.from_sequence(values, k)
    except HermclustError as exc:
        raise FileFormatError(f"{path}: {exc.detail}") from exc


def write_labels(path: PathLike, labels: Labeling) -> Path:
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    with _open_text(out, "w") as fh:
        fh.writelines(f"{c}\n" for c in labels.to_list())
    return out


def read_json(path: PathLike) -> dict:
    try:
        with _open_text(path, "r") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{path}: invalid JSON ({exc.msg})") from exc


def read_meta_graph(source: str) -> MetaGraph:
    """Accept a preset name (e.g. ``path3``) or a path to a meta-graph JSON."""
    preset = meta_preset(source)
    if preset is not None:
        return preset
    return MetaGraph.model_validate(read_json(source))


def write_json(path: PathLike, payload: dict) -> Path:
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    with _open_text(out, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return out


def write_csv(path: PathLike, fieldnames: Sequence[str], rows: Iterable[dict]) -> Path:
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    with _open_text(out, "w") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(fieldnames), lineterminator="\n", extrasaction="ignore")
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
    return out
