"""Special functions used by the closed-form geometric-graph oracle."""
import math

import numpy as np

_TINY = 1e-300


def _beta_cf(a: float, b: float, x: float, rtol: float, max_iter: int) -> float:
    # modified Lentz evaluation of the incomplete beta continued fraction
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < rtol:
            return h
    raise ArithmeticError("incomplete beta continued fraction did not converge")


def betainc(a: float, b: float, x: float, rtol: float = 1e-14, max_iter: int = 10_000) -> float:
    """Regularized incomplete beta function ``I_x(a, b)``.

    Parameters
    ----------
    a, b : float
        Positive shape parameters.
    x : float
        Evaluation point in [0, 1].
    rtol : float
        Convergence tolerance of the continued fraction.

    Returns
    -------
    float
        ``I_x(a, b)`` accurate to roughly ``1e-12`` relative error.
    """
    if a <= 0 or b <= 0:
        raise ValueError("shape parameters must be positive")
    if not 0.0 <= x <= 1.0:
        raise ValueError("x must lie in [0, 1]")
    if x == 0.0 or x == 1.0:
        return x
    log_front = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                 + a * math.log(x) + b * math.log1p(-x))
    front = math.exp(log_front)
    # the fraction converges fast only on one side of the mean
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_cf(a, b, x, rtol, max_iter) / a
    return 1.0 - front * _beta_cf(b, a, 1.0 - x, rtol, max_iter) / b


def unit_ball_volume(d: int) -> float:
    """Lebesgue volume of the Euclidean unit ball in ``R^d``."""
    if d < 1:
        raise ValueError("d must be positive")
    # V_d = 2 pi V_{d-2} / d, exact for d = 1
    v = 2.0 if d % 2 else 1.0
    for k in range(2 + d % 2, d + 1, 2):
        v *= 2.0 * math.pi / k
    return v


def _beta_cf_array(a: float, b: float, x: np.ndarray, rtol: float, max_iter: int) -> np.ndarray:
    qab, qap, qam = a + b, a + 1.0, a - 1.0

    def clamp(v):
        return np.where(np.abs(v) < _TINY, _TINY, v)

    c = np.ones_like(x)
    d = 1.0 / clamp(1.0 - qab * x / qap)
    h = d.copy()
    done = np.zeros(x.shape, dtype=bool)
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 / clamp(1.0 + aa * d)
        c = clamp(1.0 + aa / c)
        step1 = d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 / clamp(1.0 + aa * d)
        c = clamp(1.0 + aa / c)
        delta = d * c
        # freeze converged entries so extra iterations cannot perturb them
        h = np.where(done, h, h * step1 * delta)
        done |= np.abs(delta - 1.0) < rtol
        if done.all():
            return h
    raise ArithmeticError("incomplete beta continued fraction did not converge")


def betainc_array(a: float, b: float, x, rtol: float = 1e-14, max_iter: int = 10_000) -> np.ndarray:
    """Vectorized :func:`betainc` over ``x`` for fixed shape parameters."""
    if a <= 0 or b <= 0:
        raise ValueError("shape parameters must be positive")
    x = np.asarray(x, dtype=float)
    if np.any((x < 0) | (x > 1)):
        raise ValueError("x must lie in [0, 1]")
    out = np.array(x, dtype=float, copy=True)
    inner = (x > 0) & (x < 1)
    if not inner.any():
        return out
    xi = x[inner]
    log_front = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                 + a * np.log(xi) + b * np.log1p(-xi))
    front = np.exp(log_front)
    low = xi < (a + 1.0) / (a + b + 2.0)
    res = np.empty_like(xi)
    if low.any():
        res[low] = front[low] * _beta_cf_array(a, b, xi[low], rtol, max_iter) / a
    if (~low).any():
        res[~low] = 1.0 - front[~low] * _beta_cf_array(b, a, 1.0 - xi[~low], rtol, max_iter) / b
    out[inner] = res
    return out
