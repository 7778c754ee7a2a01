"""Closed registry of kernels for the HolderCube family.

Every entry is a symmetric map ``[0,1]^d x [0,1]^d -> [0,1]`` evaluated on
batches of points, together with the Holder exponent for which the two-sided
condition holds (``None`` when only the upper condition holds) and a closed
form of the squared neighborhood distance used as a test oracle.
"""
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np


@dataclass(frozen=True)
class Kernel:
    name: str
    evaluate: Callable[[np.ndarray, np.ndarray], np.ndarray]
    sq_distance: Callable[[np.ndarray, np.ndarray], np.ndarray]
    # exponent of the two-sided Holder condition, None if only one-sided
    two_sided_alpha: Optional[float]
    description: str


def _inner_product(x, y):
    d = x.shape[1]
    return x @ y.T / (2.0 * d) + 0.25


def _inner_product_sq(x, x2):
    # E[y y^T] for y uniform on the cube is 11^T/4 + I/12
    d = x.shape[1]
    delta = x - x2
    s = delta.sum(axis=1)
    return (0.25 * s * s + (delta * delta).sum(axis=1) / 12.0) / (4.0 * d * d)


def _cos_profile(x):
    return np.prod(np.cos(np.pi * x), axis=1)


def _product_cosine(x, y):
    return 0.5 + 0.5 * np.outer(_cos_profile(x), _cos_profile(y))


def _product_cosine_sq(x, x2):
    d = x.shape[1]
    g = _cos_profile(x) - _cos_profile(x2)
    return 0.25 * g * g * 0.5 ** d


KERNELS = {
    "inner_product": Kernel(
        "inner_product", _inner_product, _inner_product_sq, 1.0,
        "x.y/(2d) + 1/4, bi-Lipschitz distance to the Euclidean one"),
    "product_cosine": Kernel(
        "product_cosine", _product_cosine, _product_cosine_sq, None,
        "1/2 + prod cos(pi x_k) cos(pi y_k) / 2, distance collapses to one coordinate"),
}


def get_kernel(name: str) -> Kernel:
    try:
        return KERNELS[name]
    except KeyError:
        from .errors import InvalidArgument
        raise InvalidArgument(f"unknown kernel {name!r}; known: {sorted(KERNELS)}") from None
