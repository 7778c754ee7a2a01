"""Graphon families, latent sampling, graph sampling and sparse thinning.

Randomness comes from counter-based Philox streams. Each stream key packs the
user seed, a purpose tag and a row index, so the edges of row ``i`` depend
only on ``(seed, i)`` and can be generated in any order or partition.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from .errors import DoubleSparsification, InvalidArgument
from .kernels import get_kernel

_TAG_LATENT = 1
_TAG_EDGE = 2
_TAG_SPARSIFY = 3
_TAG_QUADRATURE = 4


def philox(seed: int, tag: int, index: int = 0) -> np.random.Generator:
    """Generator on the stream keyed by ``(seed, tag, index)``."""
    seed = int(seed)
    if seed < 0 or seed >= 1 << 64:
        raise InvalidArgument("seed must be a 64-bit unsigned integer")
    key = (seed << 64) | (int(tag) << 48) | int(index)
    return np.random.Generator(np.random.Philox(key=key))


class GraphonSpec:
    """Base class of the supported graphon families."""

    #: latent space is a finite set of communities
    finite: bool = False

    def kernel(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Matrix ``W(x_a, y_b)`` for two batches of latent points."""
        raise NotImplementedError


class FiniteSpec(GraphonSpec):
    finite = True

    @property
    def weights(self) -> np.ndarray:
        raise NotImplementedError

    @property
    def block_probs(self) -> np.ndarray:
        raise NotImplementedError

    def kernel(self, x, y):
        return self.block_probs[np.asarray(x)][:, np.asarray(y)]


@dataclass(frozen=True)
class SBM(FiniteSpec):
    """Stochastic block model; ``weights`` and ``block_probs`` stored as tuples."""
    weights_: Tuple[float, ...]
    block_probs_: Tuple[Tuple[float, ...], ...]

    def __init__(self, weights, block_probs):
        w = np.asarray(weights, dtype=float)
        p = np.asarray(block_probs, dtype=float)
        if w.ndim != 1 or w.size == 0:
            raise InvalidArgument("weights must be a nonempty vector")
        if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
            raise InvalidArgument("weights must be a probability vector")
        if p.shape != (w.size, w.size):
            raise InvalidArgument("block_probs must be K x K")
        if not np.array_equal(p, p.T) or np.any(p < 0) or np.any(p > 1):
            raise InvalidArgument("block_probs must be symmetric with entries in [0,1]")
        object.__setattr__(self, "weights_", tuple(w.tolist()))
        object.__setattr__(self, "block_probs_", tuple(map(tuple, p.tolist())))

    @property
    def weights(self):
        return np.array(self.weights_)

    @property
    def block_probs(self):
        return np.array(self.block_probs_)


@dataclass(frozen=True)
class ErdosRenyi(FiniteSpec):
    p: float

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise InvalidArgument("p must lie in [0,1]")

    @property
    def weights(self):
        return np.ones(1)

    @property
    def block_probs(self):
        return np.full((1, 1), float(self.p))


@dataclass(frozen=True)
class LowerBoundSBM(FiniteSpec):
    """Five-community construction used in the minimax lower bound.

    ``strict`` additionally enforces the lower end ``delta > sqrt(8/(n_ref-2))``
    of the nominal domain, which is empty unless ``n_ref`` exceeds 12802.
    """
    delta: float
    n_ref: int
    strict: bool = field(default=False, compare=False)

    def __post_init__(self):
        if int(self.n_ref) != self.n_ref or self.n_ref < 10:
            raise InvalidArgument("n_ref must be an integer >= 10")
        if not 0.0 < self.delta < 1.0 / 40.0:
            raise InvalidArgument("delta must lie in (0, 1/40)")
        if self.strict and self.delta <= math.sqrt(8.0 / (self.n_ref - 2)):
            raise InvalidArgument("delta must exceed sqrt(8/(n_ref-2))")

    @property
    def eta(self) -> float:
        return 2.0 / (self.n_ref - 2)

    @property
    def weights(self):
        eta = self.eta
        return np.array([(1 - 2 * eta) / 2, (1 - 2 * eta) / 2, eta, eta / 2, eta / 2])

    @property
    def block_probs(self):
        d = self.delta
        p = np.full((5, 5), 0.5)
        corner = np.array([[0.5 + math.sqrt(d / 2), 0.5 + d, 1.0],
                           [0.5 - math.sqrt(d / 2), 0.5 - d, 0.0]])
        p[:2, 2:] = corner
        p[2:, :2] = corner.T
        return p


@dataclass(frozen=True)
class GeometricGraph(GraphonSpec):
    """Random geometric graph on the unit cube with connection radius ``delta``."""
    d: int
    delta: float

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 1:
            raise InvalidArgument("d must be a positive integer")
        if not 0.0 < self.delta < 1.0:
            raise InvalidArgument("delta must lie in (0,1)")

    def kernel(self, x, y):
        x = np.asarray(x, dtype=float).reshape(len(x), self.d)
        y = np.asarray(y, dtype=float).reshape(len(y), self.d)
        diff = x[:, None, :] - y[None, :, :]
        return (np.sqrt((diff * diff).sum(axis=2)) <= self.delta).astype(float)


@dataclass(frozen=True)
class HolderCube(GraphonSpec):
    d: int
    kernel_id: str
    alpha: float = 1.0

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 1:
            raise InvalidArgument("d must be a positive integer")
        if self.alpha <= 0:
            raise InvalidArgument("alpha must be positive")
        get_kernel(self.kernel_id)

    def kernel(self, x, y):
        x = np.asarray(x, dtype=float).reshape(len(x), self.d)
        y = np.asarray(y, dtype=float).reshape(len(y), self.d)
        return get_kernel(self.kernel_id).evaluate(x, y)


def lower_bound_sbm(n_ref: int, delta: float, strict: bool = False) -> LowerBoundSBM:
    """Five-community SBM of the lower-bound construction."""
    return LowerBoundSBM(delta=float(delta), n_ref=int(n_ref), strict=strict)


def latent_dim(spec: GraphonSpec) -> int:
    """Coordinate dimension of continuous specs, 0 for finite ones."""
    return 0 if spec.finite else int(spec.d)


@dataclass(frozen=True, eq=False)
class LatentSample:
    spec: GraphonSpec
    points: np.ndarray
    seed: int

    def __post_init__(self):
        if len(self.points) < 2:
            raise InvalidArgument("a latent sample needs n >= 2 points")

    @property
    def n(self) -> int:
        return len(self.points)


@dataclass(frozen=True, eq=False)
class AdjacencyMatrix:
    """Symmetric 0/1 matrix with zero diagonal, stored as ``uint8``."""
    bits: np.ndarray
    rho: float = 1.0

    def __post_init__(self):
        b = np.ascontiguousarray(self.bits, dtype=np.uint8)
        if b.ndim != 2 or b.shape[0] != b.shape[1]:
            raise InvalidArgument("adjacency matrix must be square")
        if np.any(b > 1):
            raise InvalidArgument("adjacency matrix must be binary")
        if not np.array_equal(b, b.T):
            raise InvalidArgument("adjacency matrix must be symmetric")
        if np.any(np.diag(b)):
            raise InvalidArgument("adjacency matrix must have a zero diagonal")
        if not 0.0 < self.rho <= 1.0:
            raise InvalidArgument("rho must lie in (0,1]")
        b.setflags(write=False)
        object.__setattr__(self, "bits", b)
        object.__setattr__(self, "rho", float(self.rho))

    @property
    def n(self) -> int:
        return self.bits.shape[0]

    def __eq__(self, other):
        return (isinstance(other, AdjacencyMatrix) and self.rho == other.rho
                and np.array_equal(self.bits, other.bits))

    __hash__ = None


def sample_latents(spec: GraphonSpec, n: int, seed: int) -> LatentSample:
    """Draw ``n`` i.i.d. latent points from the spec's measure."""
    if int(n) != n or n < 2:
        raise InvalidArgument("n must be an integer >= 2")
    n = int(n)
    rng = philox(seed, _TAG_LATENT)
    if spec.finite:
        w = spec.weights
        # inverse-cdf draw keeps labels exact and independent of numpy's choice()
        cdf = np.cumsum(w)
        cdf[-1] = 1.0
        pts = np.searchsorted(cdf, rng.random(n), side="right").astype(np.int64)
        pts = np.minimum(pts, len(w) - 1)
    else:
        pts = rng.random((n, spec.d))
    pts.setflags(write=False)
    return LatentSample(spec=spec, points=pts, seed=int(seed))


def _row_uniforms(seed: int, tag: int, i: int, count: int) -> np.ndarray:
    return philox(seed, tag, i).random(count)


def sample_graph(spec: GraphonSpec, latents: LatentSample, seed: int) -> AdjacencyMatrix:
    """Bernoulli edges ``A_ij ~ W(w_i, w_j)`` drawn independently for ``i < j``."""
    if latents.spec != spec:
        raise InvalidArgument("latents were drawn from a different spec")
    pts = latents.points
    n = latents.n
    bits = np.zeros((n, n), dtype=np.uint8)
    for i in range(n - 1):
        probs = spec.kernel(pts[i:i + 1], pts[i + 1:])[0]
        u = _row_uniforms(seed, _TAG_EDGE, i, n - i - 1)
        bits[i, i + 1:] = u < probs
    bits |= bits.T
    return AdjacencyMatrix(bits=bits, rho=1.0)


def sparsify(A: AdjacencyMatrix, rho: float, seed: int) -> AdjacencyMatrix:
    """Keep every edge independently with probability ``rho``."""
    if not 0.0 < rho <= 1.0:
        raise InvalidArgument("rho must lie in (0,1]")
    if A.rho != 1.0:
        raise DoubleSparsification("matrix is already sparsified")
    n = A.n
    bits = np.triu(A.bits, 1).copy()
    for i in range(n - 1):
        u = _row_uniforms(seed, _TAG_SPARSIFY, i, n - i - 1)
        bits[i, i + 1:] &= (u < rho)
    bits |= bits.T
    return AdjacencyMatrix(bits=bits, rho=float(rho))
