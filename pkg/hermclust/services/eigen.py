# hermclust/services/eigen.py
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from hermclust.core.config import DENSE_MAX_N
from hermclust.core.errors import NotHermitian, SizeMismatch, TooLarge
from hermclust.schemas.configs import EigenConfig
from hermclust.services.mle import HermitianLike
from hermclust.services.seeding import stage_rng

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EigenResult:
    value: float
    vector: np.ndarray
    iterations: int
    converged: bool
    residual: float
    shift: float
    zero_operator: bool = False

    @property
    def no_convergence(self) -> bool:
        return not self.converged and not self.zero_operator


class DenseOperator:
    """Dense Hermitian matrix behind the operator interface; small problems and tests."""

    def __init__(self, matrix: np.ndarray):
        self.matrix = np.asarray(matrix, dtype=np.complex128)
        if self.matrix.ndim != 2 or self.matrix.shape[0] != self.matrix.shape[1]:
            raise SizeMismatch(f"expected a square matrix, got shape {self.matrix.shape}")
        self.n = self.matrix.shape[0]

    def apply(self, x: np.ndarray) -> np.ndarray:
        return self.matrix @ x

    def row_abs_bound(self) -> float:
        return float(np.abs(self.matrix).sum(axis=1).max()) if self.n else 0.0

    def to_dense(self) -> np.ndarray:
        return self.matrix.copy()


def align_phase(v: np.ndarray) -> np.ndarray:
    """Rotate v so its largest-magnitude entry (first on ties) is real positive."""
    idx = int(np.argmax(np.abs(v)))
    if v[idx] == 0:
        return v
    return v * (np.conj(v[idx]) / abs(v[idx]))


def phase_distance(a: np.ndarray, b: np.ndarray) -> float:
    """min over phi of ||b - e^{i phi} a|| for unit vectors a, b."""
    overlap = np.vdot(a, b)
    mag = abs(overlap)
    phase = overlap / mag if mag > 0 else 1.0
    return float(np.linalg.norm(b - phase * a))


def top_eigenpair(op: HermitianLike, cfg: EigenConfig | None = None) -> EigenResult:
    """
    Leading eigenpair by power iteration.

    In ``largest-signed`` mode the iteration runs on H + sI with s the
    largest absolute row sum of H, which makes the spectrum nonnegative so
    the dominant direction is the largest signed eigenvalue.
    ``largest-magnitude`` iterates on H itself.
    """
    cfg = cfg or EigenConfig()
    n = op.n
    if n < 1:
        raise SizeMismatch("operator has no rows")

    rng = stage_rng(cfg.seed, "eigen")
    b = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    b /= np.linalg.norm(b)

    bound = op.row_abs_bound()
    if bound == 0.0:
        logger.warning("zero operator; returning the start vector")
        return EigenResult(0.0, align_phase(b), 0, converged=False, residual=0.0, shift=0.0, zero_operator=True)

    shift = bound if cfg.select == "largest-signed" else 0.0
    target = 10.0 * cfg.tol * bound

    best = (np.inf, 0.0, b)
    step = np.inf
    for it in range(1, cfg.max_iter + 1):
        hb = op.apply(b)
        lam = float(np.real(np.vdot(b, hb)))
        residual = float(np.linalg.norm(hb - lam * b))
        if residual < best[0]:
            best = (residual, lam, b)
        if step <= cfg.tol and residual <= target:
            return EigenResult(lam, align_phase(b), it, converged=True, residual=residual, shift=shift)

        y = hb + shift * b
        norm = np.linalg.norm(y)
        if norm == 0.0:
            # b spans the null space of the iterated matrix; it is an eigenvector
            return EigenResult(lam, align_phase(b), it, converged=residual <= target, residual=residual, shift=shift)
        nxt = y / norm
        step = phase_distance(b, nxt)
        b = nxt

    residual, lam, b = best
    logger.warning("power iteration hit max_iter=%d (residual %.3e > %.3e)", cfg.max_iter, residual, target)
    return EigenResult(lam, align_phase(b), cfg.max_iter, converged=False, residual=residual, shift=shift)


def dense_top_eigenpair(matrix: np.ndarray, select: str = "largest-signed") -> tuple[float, np.ndarray]:
    """Exact selected eigenpair from a full Hermitian eigendecomposition."""
    m = np.asarray(matrix, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise SizeMismatch(f"expected a square matrix, got shape {m.shape}")
    n = m.shape[0]
    if n > DENSE_MAX_N:
        raise TooLarge(f"dense eigendecomposition is limited to {DENSE_MAX_N} rows, got {n}")
    scale = max(1.0, float(np.abs(m).max())) if n else 1.0
    if n and float(np.abs(m - m.conj().T).max()) > 1e-10 * scale:
        raise NotHermitian("matrix differs from its conjugate transpose")

    values, vectors = scipy.linalg.eigh(m)
    if select == "largest-signed":
        idx = n - 1
    elif select == "largest-magnitude":
        # positive eigenvalue wins a magnitude tie
        hi, lo = values[-1], values[0]
        idx = n - 1 if abs(hi) >= abs(lo) - 1e-12 * scale else 0
    else:
        raise ValueError(f"unknown selection {select!r}")
    return float(values[idx]), align_phase(vectors[:, idx])
