"""Plug-in covering numbers, dimension estimates, radius sweeps and the
correlation integral."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp
from scipy.sparse import csr_matrix

from .covering import CoverResult, as_distance_matrix, ball_matrix, greedy_cover
from .distance import DistanceEstimate
from .errors import InvalidArgument, RadiusOutOfRange
from .ground_truth import EXACT_THRESHOLD, exact_covering_number
from .io import write_csv

PLATEAU_TOL = 0.1
PLATEAU_MIN_RUN = 5
MILP_TIME_LIMIT = 60.0


def default_grid() -> np.ndarray:
    """Radii ``0.005 + 0.005 k`` for ``k = 0..100``."""
    return np.array([0.005 + k * 0.005 for k in range(101)])


def parse_grid(text: str) -> np.ndarray:
    """Parse ``start:step:count`` into ``start + k * step``."""
    try:
        start, step, count = text.split(":")
        start, step, count = float(start), float(step), int(count)
    except ValueError:
        raise InvalidArgument(f"grid must be start:step:count, got {text!r}") from None
    if count < 1 or step <= 0:
        raise InvalidArgument("grid needs count >= 1 and step > 0")
    return np.array([start + k * step for k in range(count)])


def milp_cover(dist, eps: float, time_limit: float = MILP_TIME_LIMIT) -> Optional[CoverResult]:
    """Minimum cover as a 0/1 program; ``None`` if not proven optimal in time."""
    B = ball_matrix(as_distance_matrix(dist), eps)
    n = B.shape[0]
    res = milp(c=np.ones(n), constraints=LinearConstraint(csr_matrix(B.astype(float)), lb=1.0),
               integrality=np.ones(n), bounds=Bounds(0, 1),
               options={"time_limit": time_limit, "presolve": True})
    if res.status != 0 or res.x is None:
        return None
    centers = tuple(int(i) for i in np.flatnonzero(res.x > 0.5))
    return CoverResult(float(eps), centers, "exact", "covering")


def cover_distances(dist, eps: float, mode: str = "auto",
                    exact_threshold: int = EXACT_THRESHOLD) -> CoverResult:
    """Covering number of a distance matrix in the requested mode.

    ``exact`` and ``auto`` use branch and bound up to ``exact_threshold``
    points and an integer program above it; if the program is not solved to
    optimality within its time limit the greedy cover is returned instead.
    """
    if eps <= 0:
        raise InvalidArgument("eps must be positive")
    if mode not in ("exact", "greedy", "auto"):
        raise InvalidArgument(f"unknown covering mode {mode!r}")
    D = as_distance_matrix(dist)
    if mode == "greedy":
        return greedy_cover(D, eps)
    if D.shape[0] <= exact_threshold:
        return exact_covering_number(D, eps, exact_threshold)
    greedy = greedy_cover(D, eps)
    if greedy.size == 1:
        return CoverResult(greedy.radius, greedy.centers, "exact", "covering")
    return milp_cover(D, eps) or greedy


def covering_estimate(est: DistanceEstimate, eps: float, mode: str = "auto",
                      exact_threshold: int = EXACT_THRESHOLD) -> CoverResult:
    """Plug-in covering number on ``est.distances()``."""
    return cover_distances(est.distances(), eps, mode, exact_threshold)


def dimension_radius(n: int, D_cap: float, c: float = 1.0) -> float:
    """``c (log n / n)^(1 / max(4, 2 D_cap))``."""
    if n < 3 or D_cap <= 0 or c <= 0:
        raise InvalidArgument("need n >= 3, D_cap > 0 and c > 0")
    return c * (math.log(n) / n) ** (1.0 / max(4.0, 2.0 * D_cap))


def dimension_radius_sparse(n: int, D_cap: float, rho: float, c: float = 1.0) -> float:
    """Radius for the sparse model, the larger of the two rate terms."""
    if not 0.0 < rho <= 1.0:
        raise InvalidArgument("rho must lie in (0,1]")
    if n < 3 or D_cap <= 0 or c <= 0:
        raise InvalidArgument("need n >= 3, D_cap > 0 and c > 0")
    q = math.log(n) / n
    return c * max(q ** (1.0 / (2.0 * D_cap)), q ** 0.25 / math.sqrt(rho))


def dimension_error_term(n: int, d: float, alpha: float = 1.0, rho: float = 1.0) -> float:
    """Rate term controlling the dimension error at size ``n``."""
    q = math.log(n) / n
    return q ** 0.25 / math.sqrt(rho) + (2.0 * q / alpha) ** (1.0 / (2.0 * d))


@dataclass(frozen=True)
class DimensionEstimate:
    value: float
    radius_used: float
    cov_estimate: int
    n: int
    D_cap: float
    sparse_rho: Optional[float]
    c: float = 1.0
    method: str = "exact"


def estimate_dimension(est: DistanceEstimate, D_cap: float, c: float = 1.0,
                       mode: str = "auto") -> DimensionEstimate:
    """``log N(eps) / (-log eps)`` at the rate-optimal radius."""
    n = est.n
    if n < 3:
        raise InvalidArgument("n must be at least 3")
    sparse = est.rho < 1.0
    eps = (dimension_radius_sparse(n, D_cap, est.rho, c) if sparse
           else dimension_radius(n, D_cap, c))
    if eps >= 1.0:
        raise RadiusOutOfRange(f"radius {eps:.4g} >= 1, dimension formula undefined")
    cover = covering_estimate(est, eps, mode)
    value = math.log(cover.size) / -math.log(eps)
    return DimensionEstimate(value=value, radius_used=eps, cov_estimate=cover.size, n=n,
                             D_cap=float(D_cap), sparse_rho=est.rho if sparse else None,
                             c=float(c), method=cover.method)


@dataclass(frozen=True)
class Plateau:
    start: int
    end: int  # inclusive
    start_eps: float
    end_eps: float
    mean: float


@dataclass(frozen=True, eq=False)
class RadiusSweep:
    eps: np.ndarray
    cov_size: np.ndarray
    dim_value: np.ndarray
    method: str
    plateau: Optional[Plateau]

    def rows(self):
        return list(zip(self.eps.tolist(), self.cov_size.tolist(), self.dim_value.tolist()))

    def to_csv(self, path) -> None:
        comments = [f"method={self.method}"]
        p = self.plateau
        if p is not None:
            comments.append(f"plateau start_eps={p.start_eps!r} end_eps={p.end_eps!r} mean={p.mean!r}")
        write_csv(path, ["eps", "cov_size", "dim_value"], self.rows(), comments)


def detect_plateau(eps: np.ndarray, dim: np.ndarray, cov: np.ndarray, n: int,
                   tol: float = PLATEAU_TOL, min_run: int = PLATEAU_MIN_RUN) -> Optional[Plateau]:
    """Longest run of grid points whose consecutive dimensions differ by < tol.

    Saturated points (a single ball, or one ball per point) are excluded so a
    trivially flat tail is never reported. The earliest longest run wins.
    """
    live = (cov > 1) & (cov < n)
    best = None
    k = 0
    m = len(dim)
    while k < m:
        if not live[k]:
            k += 1
            continue
        j = k
        while j + 1 < m and live[j + 1] and abs(dim[j + 1] - dim[j]) < tol:
            j += 1
        if j - k + 1 >= min_run and (best is None or j - k > best[1] - best[0]):
            best = (k, j)
        k = j + 1
    if best is None:
        return None
    a, b = best
    return Plateau(a, b, float(eps[a]), float(eps[b]), float(np.mean(dim[a:b + 1])))


def sweep_distances(dist, eps_grid: Optional[Sequence[float]] = None,
                    mode: str = "greedy") -> RadiusSweep:
    """Covering number and dimension value at each radius of a grid."""
    grid = default_grid() if eps_grid is None else np.asarray(eps_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise InvalidArgument("eps grid must be a nonempty sequence")
    if np.any(np.diff(grid) <= 0) or grid[0] <= 0 or grid[-1] >= 1:
        raise InvalidArgument("eps grid must be strictly increasing within (0,1)")
    D = as_distance_matrix(dist)
    cov = np.array([cover_distances(D, e, mode).size for e in grid], dtype=np.int64)
    dim = np.log(cov) / -np.log(grid)
    return RadiusSweep(grid, cov, dim, mode, detect_plateau(grid, dim, cov, D.shape[0]))


def sweep_dimension_curve(est: DistanceEstimate,
                          eps_grid: Optional[Sequence[float]] = None) -> RadiusSweep:
    """Greedy covering sweep over ``est.distances()``; defaults to the standard grid."""
    return sweep_distances(est.distances(), eps_grid, "greedy")


def correlation_integral(dist, eps: float) -> float:
    """Fraction of ordered pairs ``i != j`` at distance strictly below ``eps``."""
    D = as_distance_matrix(dist)
    n = D.shape[0]
    if eps <= 0 or n < 2:
        raise InvalidArgument("need eps > 0 and n >= 2")
    close = D < eps
    count = int(close.sum()) - int(np.trace(close))
    return count / (n * (n - 1))
