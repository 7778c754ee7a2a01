"""Cover/packing result type and the greedy algorithms."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .errors import InvalidArgument


@dataclass(frozen=True)
class CoverResult:
    """Covering (closed balls) or packing (strict separation) at ``radius``."""
    radius: float
    centers: Tuple[int, ...]
    method: str  # "exact" or "greedy"
    kind: str  # "covering" or "packing"

    @property
    def size(self) -> int:
        return len(self.centers)


def as_distance_matrix(dist) -> np.ndarray:
    """Validate a square, symmetric, finite matrix and return it as float64."""
    D = np.asarray(dist, dtype=float)
    if D.ndim != 2 or D.shape[0] != D.shape[1] or D.shape[0] == 0:
        raise InvalidArgument("distance matrix must be square and nonempty")
    if not np.all(np.isfinite(D)):
        raise InvalidArgument("distance matrix must be finite")
    if not np.array_equal(D, D.T):
        raise InvalidArgument("distance matrix must be symmetric")
    return D


def ball_matrix(D: np.ndarray, eps: float) -> np.ndarray:
    """Boolean matrix of closed-ball membership; every point lies in its own ball."""
    B = D <= eps
    np.fill_diagonal(B, True)
    return B


def greedy_cover(dist, eps: float) -> CoverResult:
    """Greedy set cover by closed balls centered at the points.

    Each step takes the ball holding the most uncovered points, ties going to
    the smallest center index. Ball counts are updated incrementally, so a
    run costs ``O(n^2)``.
    """
    D = as_distance_matrix(dist)
    if eps < 0:
        raise InvalidArgument("eps must be nonnegative")
    B = ball_matrix(D, eps)
    counts = B.sum(axis=0, dtype=np.int64)
    uncovered = np.ones(D.shape[0], dtype=bool)
    centers = []
    while uncovered.any():
        c = int(np.argmax(counts))
        newly = uncovered & B[c]
        counts -= B[newly].sum(axis=0, dtype=np.int64)
        uncovered &= ~B[c]
        centers.append(c)
    return CoverResult(float(eps), tuple(centers), "greedy", "covering")


def greedy_packing(dist, eps: float) -> CoverResult:
    """Maximal packing found by scanning points in index order.

    A point is kept iff it is strictly farther than ``eps`` from every kept
    point, so the result is a valid lower bound on the packing number.
    """
    D = as_distance_matrix(dist)
    if eps < 0:
        raise InvalidArgument("eps must be nonnegative")
    n = D.shape[0]
    blocked = np.zeros(n, dtype=bool)
    kept = []
    for i in range(n):
        if not blocked[i]:
            kept.append(i)
            blocked |= D[i] <= eps
    return CoverResult(float(eps), tuple(kept), "greedy", "packing")


def is_cover(dist, result: CoverResult) -> bool:
    D = np.asarray(dist, dtype=float)
    if not result.centers:
        return D.shape[0] == 0
    B = ball_matrix(D, result.radius)
    return bool(B[list(result.centers)].any(axis=0).all())


def is_packing(dist, result: CoverResult) -> bool:
    D = np.asarray(dist, dtype=float)
    idx = list(result.centers)
    if len(set(idx)) != len(idx):
        return False
    sub = D[np.ix_(idx, idx)]
    off = ~np.eye(len(idx), dtype=bool)
    return bool(np.all(sub[off] > result.radius))
