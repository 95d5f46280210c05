# hermclust/services/theory.py
"""
Closed-form population quantities of the two-community DSBM under the
Hermitian likelihood matrix.

With community indicator M (N x 2), the expected matrix is

    E[H] = M Q M^T - a I,   Q = [[a, b], [conj(b), a]]
    a = w_r p + w_c,        b = w_r q + w_c + i w_i (1 - 2 eta) q

so its spectrum is {mu_+ - a, mu_- - a, -a (N - 2 times)} where mu_+- are
the eigenvalues of the 2 x 2 core D Q D, D = diag(sqrt(n1), sqrt(n2)).
Every function takes raw parameters and clamps them like the likelihood does.
"""
from __future__ import annotations

import math

import numpy as np

from hermclust.core.config import DENSE_MAX_N, ETA_MIN
from hermclust.core.errors import BadParams, DegenerateCore, TooLarge
from hermclust.schemas.reports import PopulationSummary
from hermclust.services.mle import MleWeights, clamp_params, mle_weights


def _core(n1: int, n2: int, p: float, q: float, eta: float) -> tuple[float, complex, MleWeights, tuple[float, float, float]]:
    if n1 < 1 or n2 < 1:
        raise BadParams(f"community sizes must be positive, got ({n1}, {n2})")
    n = n1 + n2
    p, q, eta = clamp_params(p, q, eta, n)
    w = mle_weights(p, q, eta, n)
    a = w.w_r * p + w.w_c
    b = complex(w.w_r * q + w.w_c, w.w_i * (1.0 - 2.0 * eta) * q)
    return a, b, w, (p, q, eta)


def population_matrix(n1: int, n2: int, p: float, q: float, eta: float) -> np.ndarray:
    """Dense E[H] with community 0 (the source) on the first n1 rows."""
    if n1 + n2 > DENSE_MAX_N:
        raise TooLarge(f"population matrix is dense; N={n1 + n2} exceeds {DENSE_MAX_N}")
    a, b, _, _ = _core(n1, n2, p, q, eta)
    q_core = np.array([[a, b], [np.conj(b), a]], dtype=np.complex128)
    m = np.zeros((n1 + n2, 2))
    m[:n1, 0] = 1.0
    m[n1:, 1] = 1.0
    return m @ q_core @ m.T - a * np.eye(n1 + n2)


def eigengap_delta(n1: int, n2: int, p: float, q: float, eta: float) -> float:
    """Half the gap between the two core eigenvalues; lower-bounds lambda1 - lambda2."""
    a, b, _, _ = _core(n1, n2, p, q, eta)
    n = n1 + n2
    inner = n * n * a * a - 4.0 * n1 * n2 * (a * a - abs(b) ** 2)
    return 0.5 * math.sqrt(max(inner, 0.0))


def population_eigenvalues(n1: int, n2: int, p: float, q: float, eta: float) -> tuple[float, float]:
    """
    The two largest eigenvalues of E[H]: the two core eigenvalues shifted by
    -a, and -a itself with multiplicity N - 2.
    """
    a, _, _, _ = _core(n1, n2, p, q, eta)
    delta = eigengap_delta(n1, n2, p, q, eta)
    mid = 0.5 * (n1 + n2) * a
    candidates = [mid + delta - a, mid - delta - a]
    if n1 + n2 > 2:
        candidates.append(-a)
    lam1, lam2 = sorted(candidates, reverse=True)[:2]
    return lam1, lam2


def _core_top_vector(n1: int, n2: int, a: float, b: complex) -> tuple[complex, complex]:
    alpha, gamma = n1 * a, n2 * a
    beta = math.sqrt(n1 * n2) * b
    mu = 0.5 * (alpha + gamma) + math.sqrt(0.25 * (alpha - gamma) ** 2 + abs(beta) ** 2)
    if abs(beta) > 0.0:
        x = np.array([beta, mu - alpha], dtype=np.complex128)
    elif alpha == 0.0 and gamma == 0.0:
        # zero expectation: no signal, the two centroids coincide
        x = np.array([math.sqrt(n1), math.sqrt(n2)], dtype=np.complex128)
    elif alpha > gamma:
        x = np.array([1.0, 0.0], dtype=np.complex128)
    elif gamma > alpha:
        x = np.array([0.0, 1.0], dtype=np.complex128)
    else:
        raise DegenerateCore("the 2x2 core has a repeated top eigenvalue; its eigenvector is not unique")
    x /= np.linalg.norm(x)
    return complex(x[0]), complex(x[1])


def centroid_distance(n1: int, n2: int, p: float, q: float, eta: float) -> float:
    """|x1/sqrt(n1) - x2/sqrt(n2)| for the top eigenvector (x1, x2) of the core."""
    a, b, _, _ = _core(n1, n2, p, q, eta)
    x1, x2 = _core_top_vector(n1, n2, a, b)
    return abs(x1 / math.sqrt(n1) - x2 / math.sqrt(n2))


def l_eta(eta: float) -> float:
    """
    Direction-signal factor of the balanced error rate; 0 at eta = 0.5.

    With s = 1 - 2 eta the log ratios become log1p(-s^2) and 2 atanh(s),
    which stay accurate as s -> 0.
    """
    eta = float(min(max(eta, ETA_MIN), 0.5))
    s = 1.0 - 2.0 * eta
    if s == 0.0:
        return 0.0
    r = math.log1p(-s * s) / (2.0 * math.atanh(s))
    norm2 = s * s + r * r
    return norm2 * (1.0 - r / math.sqrt(norm2))


def concentration_constant(n1: int, n2: int, p: float, q: float, eta: float, epsilon: float = 1.0) -> float:
    """C = (2 + eps) sqrt(w_r^2 + w_i^2) (log N / (N p_max) + 1)."""
    _, _, w, (p, q, _) = _core(n1, n2, p, q, eta)
    n = n1 + n2
    p_max = max(p, q)
    return (2.0 + epsilon) * math.hypot(w.w_r, w.w_i) * (math.log(n) / (n * p_max) + 1.0)


def error_bound(n1: int, n2: int, p: float, q: float, eta: float, epsilon: float = 1.0) -> float:
    """
    Misclustering-rate bound 64 (2 + eps) C^2 p_max log N / (d^2 Delta^2).
    Infinite where the centroids or the eigengap collapse.
    """
    if epsilon <= 0:
        raise BadParams(f"epsilon must be positive, got {epsilon}")
    _, _, _, (cp, cq, _) = _core(n1, n2, p, q, eta)
    n = n1 + n2
    c = concentration_constant(n1, n2, p, q, eta, epsilon)
    d = centroid_distance(n1, n2, p, q, eta)
    delta = eigengap_delta(n1, n2, p, q, eta)
    denom = d * d * delta * delta
    if denom == 0.0:
        return math.inf
    return 64.0 * (2.0 + epsilon) * c * c * max(cp, cq) * math.log(n) / denom


def population_summary(n1: int, n2: int, p: float, q: float, eta: float, epsilon: float = 1.0) -> PopulationSummary:
    _, _, w, (cp, cq, ceta) = _core(n1, n2, p, q, eta)
    lam1, lam2 = population_eigenvalues(n1, n2, p, q, eta)
    return PopulationSummary(
        n1=n1, n2=n2, p=cp, q=cq, eta=ceta,
        w_r=w.w_r, w_i=w.w_i, w_c=w.w_c,
        lambda1=lam1, lambda2=lam2,
        delta=eigengap_delta(n1, n2, p, q, eta),
        centroid_distance=centroid_distance(n1, n2, p, q, eta),
        concentration=concentration_constant(n1, n2, p, q, eta, epsilon),
        epsilon=epsilon,
        l_eta=l_eta(eta),
        error_bound=error_bound(n1, n2, p, q, eta, epsilon),
    )
