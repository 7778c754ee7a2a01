"""Oracle quantities: true neighborhood distances, reference dimensions,
exact covering/packing numbers and step-graphon approximations."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .covering import (CoverResult, as_distance_matrix, ball_matrix,
                       greedy_cover, greedy_packing)
from .errors import InvalidArgument, TooLargeForExact, UnsupportedOracle
from .io import fmt, write_csv
from .kernels import get_kernel
from .model import (SBM, ErdosRenyi, FiniteSpec, GeometricGraph, GraphonSpec,
                    HolderCube, LatentSample, _TAG_QUADRATURE, philox)
from .special import betainc, betainc_array, unit_ball_volume

EXACT_THRESHOLD = 16
MAX_GRID_CELLS = 4096


@dataclass(frozen=True)
class QuadratureConfig:
    """Numerical integration settings for kernels without a closed form."""
    mc_samples: int = 100_000
    grid_points: int = 128
    seed: int = 0

    def __post_init__(self):
        if self.mc_samples < 10_000:
            raise InvalidArgument("mc_samples must be at least 1e4")
        if self.grid_points < 64:
            raise InvalidArgument("grid_points must be at least 64")


@dataclass(frozen=True, eq=False)
class TrueDistanceMatrix:
    values: np.ndarray
    method: str  # analytic | closed_form | quadrature | monte_carlo
    integration_error: float = 0.0

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def nearest_neighbor_bias(self) -> np.ndarray:
        """``r_W(w_i, w_m(i))`` with ``m(i)`` the oracle nearest sample point."""
        D = self.values.copy()
        np.fill_diagonal(D, np.inf)
        return D.min(axis=1)

    def to_csv(self, path) -> None:
        iu, ju = np.triu_indices(self.n, 1)
        write_csv(path, ["i", "j", "r"],
                  zip(iu.tolist(), ju.tolist(), self.values[iu, ju].tolist()),
                  comments=[f"method={self.method} integration_error={fmt(self.integration_error)}"])


# ------------------------------------------------------------ distances

def community_distance_matrix(spec: FiniteSpec) -> np.ndarray:
    """``r_W`` between communities of a finite-latent spec (exact finite sum)."""
    w = spec.weights
    P = spec.block_probs
    diff = P[:, None, :] - P[None, :, :]
    R = np.sqrt(np.einsum("l,abl->ab", w, diff * diff))
    np.fill_diagonal(R, 0.0)
    return R


def rgg_distance(d: int, delta: float, e: float) -> float:
    """Squared neighborhood distance of the geometric graph at separation ``e``.

    Boundary effects of the unit cube are neglected: the value is the volume
    of the symmetric difference of two radius-``delta`` balls in ``R^d``.
    """
    if int(d) != d or d < 1:
        raise InvalidArgument("d must be a positive integer")
    if not 0.0 < delta < 1.0:
        raise InvalidArgument("delta must lie in (0,1)")
    if e < 0:
        raise InvalidArgument("e must be nonnegative")
    full = 2.0 * unit_ball_volume(d) * delta ** d
    if e > 2.0 * delta:
        return full
    return full * betainc(0.5, (d + 1) / 2.0, (e / (2.0 * delta)) ** 2)


def rgg_distance_array(d: int, delta: float, e) -> np.ndarray:
    """Vectorized :func:`rgg_distance` over separations ``e``."""
    e = np.asarray(e, dtype=float)
    full = 2.0 * unit_ball_volume(d) * delta ** d
    x = np.minimum(e / (2.0 * delta), 1.0) ** 2
    return np.where(e > 2.0 * delta, full, full * betainc_array(0.5, (d + 1) / 2.0, x))


def rgg_distance_mc(d: int, delta: float, e: float, samples: int,
                    rng: np.random.Generator) -> tuple:
    """Monte-Carlo volume of the symmetric difference of two balls.

    Returns ``(estimate, standard_error)`` of the squared distance.
    """
    lo = np.full(d, -delta)
    hi = np.full(d, delta)
    hi[0] += e
    vol = float(np.prod(hi - lo))
    z = lo + (hi - lo) * rng.random((samples, d))
    in_x = (z * z).sum(axis=1) <= delta * delta
    z[:, 0] -= e
    in_y = (z * z).sum(axis=1) <= delta * delta
    hit = (in_x != in_y).astype(float)
    p = hit.mean()
    return vol * p, vol * math.sqrt(max(p * (1 - p), 0.0) / samples)


def _pairwise_rows(K: np.ndarray, cell_volume: float) -> np.ndarray:
    """``sqrt(sum_g (K_ig - K_jg)^2 * cell_volume)`` for all row pairs."""
    sq = (K * K).sum(axis=1)
    G = sq[:, None] + sq[None, :] - 2.0 * (K @ K.T)
    G *= cell_volume
    np.maximum(G, 0.0, out=G)
    np.fill_diagonal(G, 0.0)
    R = np.sqrt(G)
    return np.minimum((R + R.T) / 2.0, 1.0)


def midpoint_grid(d: int, m: int) -> np.ndarray:
    axis = (np.arange(m) + 0.5) / m
    mesh = np.meshgrid(*([axis] * d), indexing="ij")
    return np.stack([g.ravel() for g in mesh], axis=1)


def _quadrature(spec: GraphonSpec, points: np.ndarray, m: int) -> np.ndarray:
    grid = midpoint_grid(spec.d, m)
    return _pairwise_rows(spec.kernel(points, grid), 1.0 / len(grid))


def true_distance_matrix(spec: GraphonSpec, latents: LatentSample,
                         cfg: Optional[QuadratureConfig] = None,
                         method: str = "auto") -> TrueDistanceMatrix:
    """Oracle matrix ``r_W(w_i, w_j)`` for a latent sample.

    ``method`` selects the computation for continuous families: ``auto``
    (closed form for geometric graphs, quadrature for d <= 2, Monte-Carlo
    otherwise), ``closed_form``, ``quadrature`` or ``monte_carlo``. For
    geometric graphs ``quadrature`` integrates over the unit cube and so
    includes the boundary effect the closed form neglects.
    """
    cfg = cfg or QuadratureConfig()
    if latents.spec != spec:
        raise InvalidArgument("latents were drawn from a different spec")
    pts = latents.points
    if spec.finite:
        R = community_distance_matrix(spec)
        return TrueDistanceMatrix(R[pts][:, pts], "analytic", 0.0)

    if method == "auto":
        if isinstance(spec, GeometricGraph):
            method = "closed_form"
        else:
            method = "quadrature" if spec.d <= 2 else "monte_carlo"

    if method == "closed_form":
        if not isinstance(spec, GeometricGraph):
            raise UnsupportedOracle("closed form only available for geometric graphs")
        diff = pts[:, None, :] - pts[None, :, :]
        e = np.sqrt((diff * diff).sum(axis=2))
        R = np.sqrt(rgg_distance_array(spec.d, spec.delta, e))
        np.fill_diagonal(R, 0.0)
        return TrueDistanceMatrix(np.minimum(R, 1.0), "closed_form", 0.0)

    if method == "quadrature":
        if spec.d > 2:
            raise UnsupportedOracle("tensor quadrature supports d <= 2 only")
        R = _quadrature(spec, pts, cfg.grid_points)
        coarse = _quadrature(spec, pts, cfg.grid_points // 2)
        return TrueDistanceMatrix(R, "quadrature", float(np.max(np.abs(R - coarse))))

    if method == "monte_carlo":
        n = len(pts)
        if isinstance(spec, GeometricGraph):
            # per-pair integral of the boundary-free symmetric difference
            R = np.zeros((n, n))
            se = 0.0
            for i in range(n):
                for j in range(i + 1, n):
                    e = float(np.linalg.norm(pts[i] - pts[j]))
                    rng = philox(cfg.seed, _TAG_QUADRATURE, i * n + j)
                    r2, s = rgg_distance_mc(spec.d, spec.delta, e, cfg.mc_samples, rng)
                    R[i, j] = R[j, i] = math.sqrt(r2)
                    se = max(se, s / max(2.0 * math.sqrt(r2), 1e-300) if r2 > 0 else math.sqrt(s))
            return TrueDistanceMatrix(R, "monte_carlo", se)
        rng = philox(cfg.seed, _TAG_QUADRATURE)
        z = rng.random((cfg.mc_samples, spec.d))
        K = spec.kernel(pts, z)
        R = _pairwise_rows(K, 1.0 / cfg.mc_samples)
        # standard error of the squared distance, propagated to r
        se = 0.0
        for i in range(n):
            diff2 = (K[i] - K[i + 1:]) ** 2
            if len(diff2) == 0:
                continue
            s2 = diff2.std(axis=1) / math.sqrt(cfg.mc_samples)
            r = np.maximum(R[i, i + 1:], 1e-12)
            se = max(se, float(np.max(np.minimum(s2 / (2 * r), np.sqrt(s2)))))
        return TrueDistanceMatrix(R, "monte_carlo", se)

    raise InvalidArgument(f"unknown oracle method {method!r}")


def slice_sq_norms(spec: GraphonSpec, latents: LatentSample,
                   cfg: Optional[QuadratureConfig] = None) -> np.ndarray:
    """Oracle ``||W(w_i, .)||^2`` for every sampled point."""
    cfg = cfg or QuadratureConfig()
    pts = latents.points
    if spec.finite:
        norms = spec.block_probs ** 2 @ spec.weights
        return norms[pts]
    if isinstance(spec, GeometricGraph):
        # boundary-free, consistent with the closed-form distance
        return np.full(len(pts), unit_ball_volume(spec.d) * spec.delta ** spec.d)
    if spec.d > 2:
        raise UnsupportedOracle("slice norms need quadrature (d <= 2)")
    grid = midpoint_grid(spec.d, cfg.grid_points)
    K = spec.kernel(pts, grid)
    return (K * K).mean(axis=1)


def reference_dimension(spec: GraphonSpec) -> Optional[float]:
    """Known Minkowski dimension of the latent metric space, if any."""
    if spec.finite:
        return 0.0
    if isinstance(spec, GeometricGraph):
        return 2.0 * spec.d
    if isinstance(spec, HolderCube):
        alpha = get_kernel(spec.kernel_id).two_sided_alpha
        if alpha is None or alpha != spec.alpha:
            return None
        return spec.d / alpha
    return None


# ------------------------------------------------------ exact coverings

def _check_exact(D: np.ndarray, eps: float, exact_threshold: int) -> None:
    if D.shape[0] > exact_threshold:
        raise TooLargeForExact(f"n={D.shape[0]} exceeds exact threshold {exact_threshold}")
    if eps < 0:
        raise InvalidArgument("eps must be nonnegative")


def exact_covering_number(dist, eps: float, exact_threshold: int = EXACT_THRESHOLD) -> CoverResult:
    """Minimum closed-ball cover with centers at the points (branch and bound)."""
    D = as_distance_matrix(dist)
    _check_exact(D, eps, exact_threshold)
    n = D.shape[0]
    B = ball_matrix(D, eps)
    balls = [sum(1 << j for j in np.flatnonzero(B[c]).tolist()) for c in range(n)]
    covers = [np.flatnonzero(B[:, e]).tolist() for e in range(n)]
    max_ball = max(b.bit_count() for b in balls)
    full = (1 << n) - 1
    best = list(greedy_cover(D, eps).centers)
    chosen: list = []

    def search(covered: int) -> None:
        nonlocal best
        if covered == full:
            if len(chosen) < len(best):
                best = sorted(chosen)
            return
        rem = full & ~covered
        if len(chosen) + -(-rem.bit_count() // max_ball) >= len(best):
            return
        first = (rem & -rem).bit_length() - 1
        for c in covers[first]:
            chosen.append(c)
            search(covered | balls[c])
            chosen.pop()

    search(0)
    return CoverResult(float(eps), tuple(best), "exact", "covering")


def exact_packing_number(dist, eps: float, exact_threshold: int = EXACT_THRESHOLD) -> CoverResult:
    """Largest subset with pairwise distances strictly above ``eps``."""
    D = as_distance_matrix(dist)
    _check_exact(D, eps, exact_threshold)
    n = D.shape[0]
    sep = D > eps
    compat = [sum(1 << j for j in np.flatnonzero(sep[v]).tolist() if j != v) for v in range(n)]
    best = list(greedy_packing(D, eps).centers)
    chosen: list = []

    def search(cand: int) -> None:
        nonlocal best
        if cand == 0:
            if len(chosen) > len(best):
                best = list(chosen)
            return
        if len(chosen) + cand.bit_count() <= len(best):
            return
        v = (cand & -cand).bit_length() - 1
        chosen.append(v)
        search(cand & compat[v])
        chosen.pop()
        search(cand & ~(1 << v))

    search((1 << n) - 1)
    return CoverResult(float(eps), tuple(best), "exact", "packing")


# ------------------------------------------------- step approximation

def _step_approximation(K: np.ndarray, R: np.ndarray, mass: np.ndarray, eps: float):
    """Voronoi-averaged step kernel over an eps-cover of weighted atoms."""
    support = np.flatnonzero(mass > 0)
    Rs = R[np.ix_(support, support)]
    if len(support) <= EXACT_THRESHOLD:
        cover = exact_covering_number(Rs, eps)
    else:
        cover = greedy_cover(Rs, eps)
    centers = np.sort(support[list(cover.centers)])
    # argmin returns the first minimum, i.e. the smallest center index
    cell = np.argmin(R[:, centers], axis=1)
    k = len(centers)
    onehot = np.zeros((len(mass), k))
    onehot[np.arange(len(mass)), cell] = mass
    cell_mass = onehot.sum(axis=0)
    # normalize per cell first so singleton cells reproduce K exactly
    avg = onehot / cell_mass
    P = avg.T @ K @ avg
    P = np.clip((P + P.T) / 2.0, 0.0, 1.0)
    resid = K - P[cell][:, cell]
    err = math.sqrt(float(mass @ (resid * resid) @ mass))
    return cell_mass / cell_mass.sum(), P, err, centers


def sbm_approximation(spec: GraphonSpec, eps: float,
                      cfg: Optional[QuadratureConfig] = None,
                      return_centers: bool = False):
    """Step graphon averaged over the Voronoi cells of an ``eps``-cover.

    Returns ``(sbm, l2_error)``; with ``return_centers`` the cover centers
    (community labels or grid coordinates) are appended.
    """
    if eps <= 0:
        raise InvalidArgument("eps must be positive")
    cfg = cfg or QuadratureConfig()
    if spec.finite:
        K = spec.block_probs
        mass = spec.weights
        R = community_distance_matrix(spec)
        w, P, err, centers = _step_approximation(K, R, mass, eps)
        out = (SBM(w, P), err)
        return out + (centers,) if return_centers else out
    if spec.d > 2 or cfg.grid_points ** spec.d > MAX_GRID_CELLS:
        raise UnsupportedOracle("step approximation needs a grid of at most "
                                f"{MAX_GRID_CELLS} cells")
    grid = midpoint_grid(spec.d, cfg.grid_points)
    g = len(grid)
    K = spec.kernel(grid, grid)
    R = _pairwise_rows(K, 1.0 / g)
    w, P, err, centers = _step_approximation(K, R, np.full(g, 1.0 / g), eps)
    out = (SBM(w / w.sum(), P), err)
    return out + (grid[centers],) if return_centers else out
