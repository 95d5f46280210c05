# hermclust/services/metrics.py
from __future__ import annotations

from itertools import permutations

import numpy as np
from scipy.optimize import linear_sum_assignment
from sklearn.metrics import adjusted_rand_score

from hermclust.core.errors import SizeMismatch
from hermclust.services.graph import Labeling

PERMUTATION_MAX_K = 8


def _check_lengths(truth: Labeling, pred: Labeling) -> None:
    if len(truth) != len(pred):
        raise SizeMismatch(f"labelings have {len(truth)} and {len(pred)} entries")


def ari(truth: Labeling, pred: Labeling) -> float:
    """Adjusted Rand index; 1 when both labelings are constant, 0 when exactly one is."""
    _check_lengths(truth, pred)
    const_t = np.unique(truth.assignments).size <= 1
    const_p = np.unique(pred.assignments).size <= 1
    if const_t and const_p:
        return 1.0
    if const_t or const_p:
        return 0.0
    return float(adjusted_rand_score(truth.assignments, pred.assignments))


def confusion(truth: Labeling, pred: Labeling) -> np.ndarray:
    """Square k x k counts, k = max of both label ranges; rows truth, columns pred."""
    _check_lengths(truth, pred)
    k = max(truth.k, pred.k)
    table = np.zeros((k, k), dtype=np.int64)
    np.add.at(table, (truth.assignments, pred.assignments), 1)
    return table


def misclustering_error(truth: Labeling, pred: Labeling) -> int:
    """Smallest Hamming distance between ``truth`` and a relabeling of ``pred``."""
    table = confusion(truth, pred)
    k = table.shape[0]
    if k <= PERMUTATION_MAX_K:
        cols = np.arange(k)
        best = max(int(table[list(perm), cols].sum()) for perm in permutations(range(k)))
    else:
        rows, cols = linear_sum_assignment(table, maximize=True)
        best = int(table[rows, cols].sum())
    return len(truth) - best


def error_rate(truth: Labeling, pred: Labeling) -> float:
    n = len(truth)
    return misclustering_error(truth, pred) / n if n else 0.0
