# hermclust/services/graph.py
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from hermclust.core.errors import (
    IndexOutOfRange,
    NegativeWeight,
    OverlappingSets,
    SelfLoop,
    SizeMismatch,
)

EdgeTriple = Sequence[float]


class DirectedGraph:
    """Immutable weighted directed graph without self-loops.

    Out-edges live in ``adj`` (CSR, row u = edges leaving u) and in-edges in
    ``adj_t`` (CSR of the transpose, row v = edges entering v). Duplicate
    (src, dst) pairs are summed by :func:`build_graph`.
    """

    __slots__ = ("_n", "_adj", "_adj_t")

    def __init__(self, n: int, adj: sp.csr_matrix):
        self._n = int(n)
        adj = sp.csr_matrix(adj, dtype=np.float64)
        adj.sort_indices()
        adj_t = adj.T.tocsr()
        adj_t.sort_indices()
        for m in (adj, adj_t):
            m.data.flags.writeable = False
            m.indices.flags.writeable = False
            m.indptr.flags.writeable = False
        self._adj = adj
        self._adj_t = adj_t

    @property
    def n(self) -> int:
        return self._n

    @property
    def adj(self) -> sp.csr_matrix:
        return self._adj

    @property
    def adj_t(self) -> sp.csr_matrix:
        return self._adj_t

    @property
    def num_edges(self) -> int:
        return int(self._adj.nnz)

    @property
    def total_weight(self) -> float:
        return float(self._adj.data.sum())

    def edges(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(src, dst, weight) arrays in row-major order."""
        coo = self._adj.tocoo()
        return coo.row.astype(np.int64), coo.col.astype(np.int64), coo.data.copy()

    def out_degree(self) -> np.ndarray:
        return np.asarray(self._adj.sum(axis=1)).ravel()

    def in_degree(self) -> np.ndarray:
        return np.asarray(self._adj_t.sum(axis=1)).ravel()

    def is_binary(self) -> bool:
        return bool(np.all(self._adj.data == 1.0))

    def has_reciprocal(self) -> bool:
        both = self._adj.multiply(self._adj_t)
        return bool(both.count_nonzero() > 0)

    def __repr__(self) -> str:
        return f"DirectedGraph(n={self._n}, edges={self.num_edges})"


@dataclass(frozen=True)
class Labeling:
    """Per-vertex community ids in 0..k-1."""

    assignments: np.ndarray
    k: int

    def __post_init__(self):
        arr = np.asarray(self.assignments, dtype=np.int64).copy()
        arr.flags.writeable = False
        object.__setattr__(self, "assignments", arr)
        if self.k < 1:
            raise SizeMismatch(f"k must be positive, got {self.k}")
        if arr.size and (arr.min() < 0 or arr.max() >= self.k):
            raise IndexOutOfRange(f"community ids must lie in 0..{self.k - 1}")

    @classmethod
    def from_sequence(cls, values: Iterable[int], k: int | None = None) -> "Labeling":
        arr = np.asarray(list(values), dtype=np.int64)
        inferred = int(arr.max()) + 1 if arr.size else 1
        return cls(arr, k if k is not None else inferred)

    def __len__(self) -> int:
        return int(self.assignments.size)

    def sizes(self) -> np.ndarray:
        return np.bincount(self.assignments, minlength=self.k)

    def members(self, community: int) -> np.ndarray:
        return np.flatnonzero(self.assignments == community)

    def mask(self, community: int) -> np.ndarray:
        return self.assignments == community

    def canonical(self) -> "Labeling":
        """Relabel communities in order of first appearance (vertex 0 gets 0)."""
        _, first, inverse = np.unique(self.assignments, return_index=True, return_inverse=True)
        order = np.argsort(first, kind="stable")
        remap = np.empty_like(order)
        remap[order] = np.arange(order.size)
        return Labeling(remap[inverse], self.k)

    def swapped(self) -> "Labeling":
        if self.k != 2:
            raise SizeMismatch("swap is defined for two communities")
        return Labeling(1 - self.assignments, 2)

    def to_list(self) -> list[int]:
        return self.assignments.tolist()


def build_graph(n: int, edges: Iterable[EdgeTriple]) -> DirectedGraph:
    """Build a graph from (src, dst[, weight]) triples, summing duplicates."""
    if n < 1:
        raise IndexOutOfRange(f"vertex count must be positive, got {n}")

    rows: list[int] = []
    cols: list[int] = []
    vals: list[float] = []
    for edge in edges:
        if len(edge) not in (2, 3):
            raise SizeMismatch(f"edge must be (src, dst) or (src, dst, weight), got {edge!r}")
        rows.append(int(edge[0]))
        cols.append(int(edge[1]))
        vals.append(float(edge[2]) if len(edge) == 3 else 1.0)
    return build_graph_arrays(n, np.asarray(rows, dtype=np.int64), np.asarray(cols, dtype=np.int64), np.asarray(vals, dtype=np.float64))


def build_graph_arrays(n: int, src: np.ndarray, dst: np.ndarray, weight: np.ndarray | None = None) -> DirectedGraph:
    """Vectorized :func:`build_graph` for callers that already hold arrays."""
    src = np.asarray(src, dtype=np.int64)
    dst = np.asarray(dst, dtype=np.int64)
    weight = np.ones(src.size) if weight is None else np.asarray(weight, dtype=np.float64)
    if not (src.size == dst.size == weight.size):
        raise SizeMismatch("src, dst and weight must have equal length")

    if src.size:
        if src.min() < 0 or dst.min() < 0 or src.max() >= n or dst.max() >= n:
            raise IndexOutOfRange(f"vertex index outside 0..{n - 1}")
        loops = np.flatnonzero(src == dst)
        if loops.size:
            raise SelfLoop(f"self-loop at vertex {int(src[loops[0]])}")
        if not np.all(np.isfinite(weight)):
            raise NegativeWeight("weights must be finite")
        if np.any(weight < 0):
            raise NegativeWeight("weights must be nonnegative")

    # coo -> csr sums duplicate entries
    adj = sp.coo_matrix((weight, (src, dst)), shape=(n, n)).tocsr()
    adj.sum_duplicates()
    return DirectedGraph(n, adj)


def _check_bipartition(g: DirectedGraph, part: Labeling) -> None:
    if part.k != 2:
        raise SizeMismatch(f"expected a two-community labeling, got k={part.k}")
    if len(part) != g.n:
        raise SizeMismatch(f"labeling has {len(part)} entries for {g.n} vertices")


def _as_mask(g: DirectedGraph, vertices: Iterable[int] | np.ndarray) -> np.ndarray:
    arr = np.asarray(vertices)
    if arr.dtype == bool:
        if arr.size != g.n:
            raise SizeMismatch("vertex mask length differs from vertex count")
        return arr
    idx = arr.astype(np.int64).ravel()
    if idx.size and (idx.min() < 0 or idx.max() >= g.n):
        raise IndexOutOfRange(f"vertex index outside 0..{g.n - 1}")
    mask = np.zeros(g.n, dtype=bool)
    mask[idx] = True
    return mask


def directed_count(g: DirectedGraph, source: Iterable[int], target: Iterable[int]) -> float:
    """Total weight of edges leaving ``source`` and entering ``target``."""
    src = _as_mask(g, source)
    dst = _as_mask(g, target)
    if np.any(src & dst):
        raise OverlappingSets("source and target vertex sets overlap")
    into_target = g.adj @ dst.astype(np.float64)
    return float(into_target[src].sum())


def total_flow(g: DirectedGraph, part: Labeling) -> float:
    _check_bipartition(g, part)
    c1, c2 = part.mask(0), part.mask(1)
    return directed_count(g, c1, c2) + directed_count(g, c2, c1)


def net_flow(g: DirectedGraph, part: Labeling) -> float:
    _check_bipartition(g, part)
    c1, c2 = part.mask(0), part.mask(1)
    return directed_count(g, c1, c2) - directed_count(g, c2, c1)


def symmetric_normalize(g: DirectedGraph) -> DirectedGraph:
    """Return D^{-1/2} A D^{-1/2} with D the in-plus-out weighted degree."""
    deg = g.out_degree() + g.in_degree()
    scale = np.zeros_like(deg)
    nz = deg > 0
    scale[nz] = 1.0 / np.sqrt(deg[nz])
    d = sp.diags(scale)
    return DirectedGraph(g.n, (d @ g.adj @ d).tocsr())


def induced_subgraph(g: DirectedGraph, vertices: np.ndarray) -> DirectedGraph:
    """Subgraph on ``vertices`` (in the given order), reindexed 0..len-1."""
    idx = np.asarray(vertices, dtype=np.int64)
    sub = g.adj[idx][:, idx].tocsr()
    return DirectedGraph(idx.size, sub)


def weak_components(g: DirectedGraph) -> np.ndarray:
    """Weakly connected component id of every vertex, numbered from vertex 0 upward."""
    _, labels = connected_components(g.adj, directed=True, connection="weak")
    _, first, inverse = np.unique(labels, return_index=True, return_inverse=True)
    return np.argsort(np.argsort(first)).astype(np.int64)[inverse]
