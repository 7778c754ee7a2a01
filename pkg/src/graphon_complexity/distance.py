"""Estimation of neighborhood distances from one adjacency matrix.

All quantities are computed from the integer co-degree matrix
``C = A @ A`` so the proxy and its argmin are exact; division by ``n`` only
happens when a real-valued output is produced.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import _kernels
from .errors import DegenerateInstance, InvalidArgument
from .io import fmt, write_csv
from .model import AdjacencyMatrix

THEORY_MIN_N = 6


@dataclass(frozen=True, eq=False)
class InnerProductMatrix:
    """``<A_i, A_j>_n`` stored as integer counts ``C`` with ``values = C / n``."""
    counts: np.ndarray

    @property
    def n(self) -> int:
        return self.counts.shape[0]

    @property
    def values(self) -> np.ndarray:
        return self.counts / self.n


@dataclass(frozen=True, eq=False)
class NeighborIndex:
    m_hat: np.ndarray
    f_hat_at_min: np.ndarray


@dataclass(frozen=True, eq=False)
class DistanceEstimate:
    sq_standard: np.ndarray
    sq_conservative: np.ndarray
    rho: float
    neighbor: NeighborIndex
    below_theory_scale: bool = False
    rho_admissible: bool = True

    @property
    def n(self) -> int:
        return self.sq_standard.shape[0]

    def distances(self, rescale: bool = True) -> np.ndarray:
        """Clamped lengths ``sqrt(max(0, sq_standard))``.

        With ``rescale`` the lengths are divided by ``rho`` so that sparse
        estimates target ``r_W`` rather than ``rho * r_W``.
        """
        r = np.sqrt(np.maximum(self.sq_standard, 0.0))
        if rescale and self.rho != 1.0:
            r = r / self.rho
        return r

    def conservative_distances(self) -> np.ndarray:
        return np.sqrt(self.sq_conservative)

    def to_csv(self, path, conservative: bool = True) -> None:
        n = self.n
        iu, ju = np.triu_indices(n, 1)
        cols = [iu.tolist(), ju.tolist(), self.sq_standard[iu, ju].tolist()]
        names = ["i", "j", "sq_standard"]
        if conservative:
            cols.append(self.sq_conservative[iu, ju].tolist())
            names.append("sq_conservative")
        write_csv(path, names, zip(*cols),
                  comments=[f"n={n} rho={fmt(self.rho)} t_n={fmt(t_n(n))}"])


@dataclass(frozen=True)
class ErrorBudget:
    t_n: float
    hoeffding_band: float
    b_sup: Optional[float] = None
    s_omega: Optional[float] = None
    e_sup: Optional[float] = None
    max_bias: Optional[float] = None


def t_n(n: int) -> float:
    """Radius inflation ``12 sqrt(log n / n)`` of the packing test."""
    return 12.0 * math.sqrt(math.log(n) / n)


def hoeffding_band(n: int) -> float:
    return 3.0 * math.sqrt(math.log(n) / n)


def row_inner_products(A: AdjacencyMatrix) -> InnerProductMatrix:
    """Exact Gram matrix of the rows of ``A`` divided by ``n``."""
    n = A.n
    if n < 2:
        raise InvalidArgument("n must be at least 2")
    # float32 sums of 0/1 products are exact below 2^24
    dtype = np.float32 if n < (1 << 24) else np.float64
    X = A.bits.astype(dtype)
    C = (X @ X).astype(np.int64)
    C.setflags(write=False)
    return InnerProductMatrix(C)


def proxy_f_hat(ip: InnerProductMatrix, i: int, j: int) -> float:
    """``max_{k not in {i,j}} |ip(k,i) - ip(k,j)|``."""
    n = ip.n
    if i == j:
        raise InvalidArgument("proxy needs i != j")
    if n <= 2:
        raise DegenerateInstance("proxy is an empty maximum for n = 2")
    keep = np.ones(n, dtype=bool)
    keep[[i, j]] = False
    diff = np.abs(ip.counts[keep, i] - ip.counts[keep, j])
    return float(diff.max()) / n


def nearest_neighbor_index(ip: InnerProductMatrix) -> NeighborIndex:
    """Proxy argmin ``m_hat(i)`` for every node, smallest index on ties."""
    if ip.n < 3:
        raise DegenerateInstance("nearest-neighbor index needs n >= 3")
    m, best = _kernels.nearest_neighbor_counts(ip.counts)
    return NeighborIndex(m_hat=m, f_hat_at_min=best / ip.n)


def sparse_threshold(n: int) -> float:
    return 2.0 * math.sqrt(math.log(n) / (n - 2))


def sparse_rho_check(n: int, rho: float) -> bool:
    """Whether ``rho`` is above the admissible sparsity level for size ``n``."""
    if n < 3:
        raise InvalidArgument("n must be at least 3")
    return rho >= sparse_threshold(n)


def estimate_distances(A: AdjacencyMatrix) -> DistanceEstimate:
    """Standard and conservative squared-distance estimates."""
    n = A.n
    if n < 3:
        raise DegenerateInstance("distance estimation needs n >= 3")
    ip = row_inner_products(A)
    nb = nearest_neighbor_index(ip)
    C = ip.counts
    m = nb.m_hat
    quad = C[np.arange(n), m]
    sq = ((quad[:, None] + quad[None, :]) - 2 * C) / n
    np.fill_diagonal(sq, 0.0)
    cons = np.maximum(_kernels.conservative_counts(C, m), 0) / n
    return DistanceEstimate(sq_standard=sq, sq_conservative=cons, rho=A.rho,
                            neighbor=nb, below_theory_scale=n < THEORY_MIN_N,
                            rho_admissible=A.rho == 1.0 or sparse_rho_check(n, A.rho))


def error_budget(n: int, oracle=None, est: Optional[DistanceEstimate] = None,
                 spec=None, latents=None) -> ErrorBudget:
    """Error bookkeeping for the distance estimator.

    ``b_sup`` needs the oracle nearest-neighbor distances; for a sparse
    estimate it uses the rescaled band ``60/rho sqrt(log n / n)``. ``s_omega``
    is filled when ``spec`` is finite-latent and ``latents`` are supplied.
    ``e_sup`` compares the oracle with ``est.distances()``.
    """
    if n < 2:
        raise InvalidArgument("n must be at least 2")
    root = math.sqrt(math.log(n) / n)
    b_sup = e_sup = s_omega = max_bias = None
    if oracle is not None:
        max_bias = float(oracle.nearest_neighbor_bias().max())
        rho = est.rho if est is not None else 1.0
        band = 36.0 * root if rho == 1.0 else 60.0 / rho * root
        b_sup = math.sqrt(6.0 * max_bias + band)
        if est is not None:
            e_sup = float(np.max(np.abs(oracle.values - est.distances())))
    if spec is not None and latents is not None and spec.finite:
        from .ground_truth import community_distance_matrix
        R = community_distance_matrix(spec)
        hit = np.unique(latents.points)
        live = np.flatnonzero(spec.weights > 0)
        s_omega = float(R[np.ix_(live, hit)].min(axis=1).max())
    return ErrorBudget(t_n=t_n(n), hoeffding_band=3.0 * root, b_sup=b_sup,
                       s_omega=s_omega, e_sup=e_sup, max_bias=max_bias)
