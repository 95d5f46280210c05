# hermclust/services/mle.py
"""
Likelihood side of the two-community DSBM.

The log-likelihood of a labeling is, up to a labeling-independent constant
and a factor of 4, the quadratic form x* H x with

    H = w_r (A + A^T) + i w_i (A - A^T) + w_c (J - I)

and x_u = i on community 0 (source), x_u = 1 on community 1 (sink).
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterator, Protocol

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import LinearOperator

from hermclust.core.config import ETA_MIN, EXHAUSTIVE_MAX_N, P_FLOOR
from hermclust.core.errors import ReciprocalEdge, SizeMismatch, TooLarge, WeightedGraph
from hermclust.schemas.params import DsbmParams
from hermclust.services.graph import DirectedGraph, Labeling, directed_count, net_flow, total_flow

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------- weights

@dataclass(frozen=True)
class MleWeights:
    w_r: float
    w_i: float
    w_c: float


def probability_floor(n: int | None) -> float:
    """One expected edge over all ordered pairs; P_FLOOR when n is unknown."""
    if n is None or n < 2:
        return P_FLOOR
    return min(0.5, 1.0 / (n * (n - 1)))


def clamp_params(p: float, q: float, eta: float, n: int | None = None) -> tuple[float, float, float]:
    lo = probability_floor(n)
    clip = lambda x: float(min(max(x, lo), 1.0 - lo))  # noqa: E731
    return clip(p), clip(q), float(min(max(eta, ETA_MIN), 0.5))


def mle_weights(p: float, q: float, eta: float, n: int | None = None) -> MleWeights:
    p, q, eta = clamp_params(p, q, eta, n)
    w_i = math.log((1.0 - eta) / eta)
    w_r = (
        2.0 * math.log(p / q)
        + 2.0 * math.log1p(-q)
        - 2.0 * math.log1p(-p)
        - math.log(4.0 * eta * (1.0 - eta))
    )
    w_c = 2.0 * (math.log1p(-p) - math.log1p(-q))
    return MleWeights(w_r=w_r, w_i=w_i, w_c=w_c)


# ---------------------------------------------------------------- operators

class HermitianLike(Protocol):
    """What the eigensolver needs from an operator."""

    n: int

    def apply(self, x: np.ndarray) -> np.ndarray: ...

    def row_abs_bound(self) -> float: ...


class HermitianOperator:
    """
    Matrix-free H = sym + i*skew + ones_coeff*J + diag_shift*I.

    ``sym`` is real symmetric and ``skew`` real skew-symmetric, both CSR.
    A product costs O(|E| + N): the sparse parts touch stored entries and the
    all-ones part needs only sum(x).
    """

    def __init__(self, n: int, sym: sp.csr_matrix, skew: sp.csr_matrix, ones_coeff: float = 0.0, diag_shift: float = 0.0):
        self.n = int(n)
        self.sym = sp.csr_matrix(sym, dtype=np.float64)
        self.skew = sp.csr_matrix(skew, dtype=np.float64)
        self.ones_coeff = float(ones_coeff)
        self.diag_shift = float(diag_shift)
        # sparse part fused once; CSR rows are summed in stored index order
        self._sparse = (self.sym + 1j * self.skew).tocsr()
        self._sparse.sort_indices()

    def apply(self, x: np.ndarray) -> np.ndarray:
        y = self._sparse @ x
        if self.ones_coeff != 0.0:
            y = y + self.ones_coeff * np.sum(x)
        if self.diag_shift != 0.0:
            y = y + self.diag_shift * x
        return y

    def row_abs_bound(self) -> float:
        """Gershgorin bound: the largest absolute row sum of H."""
        sparse_rows = np.asarray(abs(self._sparse).sum(axis=1)).ravel()
        off = abs(self.ones_coeff) * (self.n - 1)
        diag = abs(self.ones_coeff + self.diag_shift)
        return float((sparse_rows.max() if sparse_rows.size else 0.0) + off + diag)

    def to_dense(self) -> np.ndarray:
        dense = self._sparse.toarray()
        dense += self.ones_coeff * np.ones((self.n, self.n))
        dense += self.diag_shift * np.eye(self.n)
        return dense

    def as_linear_operator(self) -> LinearOperator:
        return LinearOperator((self.n, self.n), matvec=self.apply, dtype=np.complex128)

    def __repr__(self) -> str:
        return f"HermitianOperator(n={self.n}, nnz={self._sparse.nnz}, ones={self.ones_coeff:.4g}, shift={self.diag_shift:.4g})"


def build_operator(g: DirectedGraph, w: MleWeights) -> HermitianOperator:
    a, at = g.adj, g.adj_t
    return HermitianOperator(
        g.n,
        sym=w.w_r * (a + at),
        skew=w.w_i * (a - at),
        ones_coeff=w.w_c,
        diag_shift=-w.w_c,
    )


def apply_operator(op: HermitianLike, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.complex128)
    if x.shape != (op.n,):
        raise SizeMismatch(f"vector of shape {x.shape} for an operator of size {op.n}")
    return op.apply(x)


# ---------------------------------------------------------------- objectives

def indicator_vector(part: Labeling) -> np.ndarray:
    """x_u = i on community 0, 1 on community 1."""
    return np.where(part.assignments == 0, 1j, 1.0 + 0j)


def quadratic_form(g: DirectedGraph, w: MleWeights, part: Labeling) -> float:
    if part.k != 2 or len(part) != g.n:
        raise SizeMismatch(f"need a two-community labeling of {g.n} vertices")
    x = indicator_vector(part)
    return float(np.real(np.vdot(x, build_operator(g, w).apply(x))))


def quadratic_form_closed(g: DirectedGraph, w: MleWeights, part: Labeling) -> float:
    """w_r (2|E| - 2TF) + 2 w_i NF + w_c (|C1|^2 + |C2|^2 - N)."""
    tf = total_flow(g, part)
    nf = net_flow(g, part)
    n1, n2 = part.sizes()
    return w.w_r * (2.0 * g.total_weight - 2.0 * tf) + 2.0 * w.w_i * nf + w.w_c * (n1 * n1 + n2 * n2 - g.n)


def _check_binary(g: DirectedGraph) -> None:
    if not g.is_binary():
        raise WeightedGraph("the DSBM likelihood is defined for unweighted graphs only")
    if g.has_reciprocal():
        raise ReciprocalEdge("the DSBM never generates both u->v and v->u")


def _log_terms(p: float, q: float, eta: float) -> tuple[float, float, float, float, float]:
    return (
        math.log(p / 2.0),
        math.log1p(-p),
        math.log((1.0 - eta) * q),
        math.log(eta * q),
        math.log1p(-q),
    )


def log_likelihood(g: DirectedGraph, part: Labeling, params: DsbmParams) -> float:
    """Sum over u < v of log P(A_uv | labels), community 0 as the source."""
    _check_binary(g)
    return count_log_likelihood(g, part, params.p, params.q, params.eta)


def count_log_likelihood(g: DirectedGraph, part: Labeling, p: float, q: float, eta: float) -> float:
    """
    The same sum computed from the intra/forward/backward edge counts alone.
    Edge weights count as multiplicities, so it also scores weighted graphs.
    """
    if part.k != 2 or len(part) != g.n:
        raise SizeMismatch(f"need a two-community labeling of {g.n} vertices")
    p, q, eta = clamp_params(p, q, eta, g.n)
    l_edge_in, l_none_in, l_fwd, l_bwd, l_none_out = _log_terms(p, q, eta)

    n1, n2 = (int(s) for s in part.sizes())
    c1, c2 = part.mask(0), part.mask(1)
    fwd = directed_count(g, c1, c2)
    bwd = directed_count(g, c2, c1)
    intra_edges = g.total_weight - fwd - bwd
    intra_pairs = n1 * (n1 - 1) // 2 + n2 * (n2 - 1) // 2
    inter_pairs = n1 * n2

    return (
        intra_edges * l_edge_in
        + (intra_pairs - intra_edges) * l_none_in
        + fwd * l_fwd
        + bwd * l_bwd
        + (inter_pairs - fwd - bwd) * l_none_out
    )


def likelihood_offset(g: DirectedGraph, params: DsbmParams) -> float:
    """The labeling-independent c with 4*log_likelihood = x* H x + c."""
    _check_binary(g)
    p, q, eta = clamp_params(params.p, params.q, params.eta, g.n)
    e = g.total_weight
    return 2.0 * e * math.log(eta * (1.0 - eta) * q * q) + 2.0 * math.log1p(-q) * (g.n * (g.n - 1) - 2.0 * e)


def _labeling_chunks(n: int, chunk: int = 1 << 14) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Yield (codes, community matrix) for all 2^n labelings; bit u of code = community of u."""
    bits = np.arange(n, dtype=np.int64)
    total = 1 << n
    for start in range(0, total, chunk):
        codes = np.arange(start, min(start + chunk, total), dtype=np.int64)
        yield codes, ((codes[:, None] >> bits[None, :]) & 1).astype(bool)


def exhaustive_mle(g: DirectedGraph, params: DsbmParams) -> Labeling:
    """Brute-force likelihood maximizer over all 2^n labelings (n <= 20)."""
    if g.n > EXHAUSTIVE_MAX_N:
        raise TooLarge(f"exhaustive search is limited to {EXHAUSTIVE_MAX_N} vertices, got {g.n}")
    _check_binary(g)
    p, q, eta = clamp_params(params.p, params.q, params.eta, g.n)
    l_edge_in, l_none_in, l_fwd, l_bwd, l_none_out = _log_terms(p, q, eta)
    src, dst, _ = g.edges()
    n = g.n

    best_codes: list[np.ndarray] = []
    best_scores: list[np.ndarray] = []
    for codes, in_c2 in _labeling_chunks(n):
        n2 = in_c2.sum(axis=1)
        n1 = n - n2
        s_side, d_side = in_c2[:, src], in_c2[:, dst]
        fwd = np.sum(~s_side & d_side, axis=1)
        bwd = np.sum(s_side & ~d_side, axis=1)
        intra_edges = src.size - fwd - bwd
        intra_pairs = n1 * (n1 - 1) // 2 + n2 * (n2 - 1) // 2
        inter_pairs = n1 * n2
        scores = (
            intra_edges * l_edge_in
            + (intra_pairs - intra_edges) * l_none_in
            + fwd * l_fwd
            + bwd * l_bwd
            + (inter_pairs - fwd - bwd) * l_none_out
        )
        best_codes.append(codes)
        best_scores.append(scores)

    codes = np.concatenate(best_codes)
    scores = np.concatenate(best_scores)
    top = scores.max()
    # ties within rounding go to the smallest code
    winner = int(codes[np.flatnonzero(scores >= top - 1e-9 * max(1.0, abs(top)))[0]])
    assignments = (winner >> np.arange(n)) & 1
    return Labeling(assignments, 2).canonical()
