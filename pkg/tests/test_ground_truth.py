import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from graphon_complexity import (SBM, ErdosRenyi, GeometricGraph, HolderCube, LatentSample,
                                QuadratureConfig, TooLargeForExact, UnsupportedOracle,
                                exact_covering_number, exact_packing_number,
                                reference_dimension, rgg_distance, sbm_approximation,
                                true_distance_matrix)
from graphon_complexity.covering import is_cover, is_packing
from graphon_complexity.ground_truth import (rgg_distance_array, rgg_distance_mc,
                                             slice_sq_norms)
from graphon_complexity.io import read_csv
from graphon_complexity.kernels import KERNELS
from graphon_complexity.model import lower_bound_sbm, philox, sample_latents


def brute_cover(D, eps):
    n = len(D)
    for k in range(1, n + 1):
        for sub in itertools.combinations(range(n), k):
            if np.all((D[list(sub)] <= eps).any(axis=0)):
                return k


def brute_pack(D, eps):
    n = len(D)
    for k in range(n, 0, -1):
        for sub in itertools.combinations(range(n), k):
            if all(D[a, b] > eps for a, b in itertools.combinations(sub, 2)):
                return k


def test_er_distances_zero():
    spec = ErdosRenyi(0.37)
    t = true_distance_matrix(spec, sample_latents(spec, 10, 0))
    assert t.method == "analytic" and t.integration_error == 0 and not t.values.any()


def test_two_block_distance():
    spec = SBM([0.5, 0.5], [[0.8, 0.2], [0.2, 0.8]])
    t = true_distance_matrix(spec, LatentSample(spec, np.array([0, 1, 0]), 0))
    assert math.isclose(t.values[0, 1], 0.6) and t.values[0, 2] == 0


def test_rgg_d3_closed_form():
    got = rgg_distance(3, 0.1, 0.05)
    closed = 2 * math.pi * (0.01 - 0.0025 / 12) * 0.05
    assert math.isclose(got, 3.0761e-3, rel_tol=1e-4)
    assert abs(got - closed) <= 1e-10


def test_rgg_branches():
    assert rgg_distance(2, 0.1, 0.0) == 0.0
    assert rgg_distance(1, 0.1, 0.5) == 0.4
    assert rgg_distance(4, 0.2, 0.41) == 2 * (math.pi ** 2 / 2) * 0.2 ** 4
    # d = 1: symmetric difference of two intervals is 2e
    for e in (0.01, 0.05, 0.13, 0.2):
        assert math.isclose(rgg_distance(1, 0.1, e), 2 * e, rel_tol=1e-12)


@given(st.integers(1, 6), st.floats(0.01, 0.99), st.floats(0, 1), st.floats(0, 1))
def test_rgg_monotone(d, delta, a, b):
    e1, e2 = sorted((a * 3 * delta, b * 3 * delta))
    assert rgg_distance(d, delta, e1) <= rgg_distance(d, delta, e2) + 1e-15
    if e1 >= 2 * delta:
        assert rgg_distance(d, delta, e1) == rgg_distance(d, delta, e2)


def test_rgg_array_matches_scalar():
    e = np.linspace(0, 0.5, 101)
    for d in (1, 2, 3, 7):
        np.testing.assert_allclose(rgg_distance_array(d, 0.15, e),
                                   [rgg_distance(d, 0.15, v) for v in e], rtol=1e-13)


def test_rgg_monte_carlo_cross_check():
    rng = philox(5, 9)
    est, se = rgg_distance_mc(3, 0.1, 0.05, 200_000, rng)
    assert abs(est - rgg_distance(3, 0.1, 0.05)) < 1e-4
    assert se < 2e-5


def test_monte_carlo_rms_shrinks_with_samples():
    # doubling the draws should reduce the RMS deviation by about sqrt(2)
    def rms(samples):
        dev = []
        for k in range(400):
            e = 0.02 + 0.15 * (k % 20) / 20
            val, _ = rgg_distance_mc(2, 0.1, e, samples, philox(samples, 7, k))
            dev.append(val - rgg_distance(2, 0.1, e))
        return math.sqrt(np.mean(np.square(dev)))
    ratio = rms(10_000) / rms(20_000)
    assert 1.15 < ratio < 1.75


def test_geometric_oracle_methods_agree_in_interior():
    spec = GeometricGraph(1, 0.1)
    lat = LatentSample(spec, np.array([[0.4], [0.45], [0.52], [0.6]]), 0)
    closed = true_distance_matrix(spec, lat)
    quad = true_distance_matrix(spec, lat, QuadratureConfig(grid_points=4096), method="quadrature")
    assert closed.method == "closed_form" and quad.method == "quadrature"
    np.testing.assert_allclose(closed.values, quad.values, atol=2e-2)


def test_geometric_quadrature_sees_boundary():
    spec = GeometricGraph(1, 0.1)
    lat = LatentSample(spec, np.array([[0.0], [0.05]]), 0)
    closed = true_distance_matrix(spec, lat).values[0, 1]
    quad = true_distance_matrix(spec, lat, QuadratureConfig(grid_points=2048),
                                method="quadrature").values[0, 1]
    # near the edge the interval [0, 0.1] vs [0, 0.15]: r^2 = 0.05
    assert math.isclose(closed ** 2, 0.1, rel_tol=1e-12)
    assert abs(quad ** 2 - 0.05) < 2e-3


@pytest.mark.parametrize("name", sorted(KERNELS))
@pytest.mark.parametrize("d", [1, 2])
def test_holder_quadrature_matches_closed_form(name, d):
    spec = HolderCube(d, name)
    lat = sample_latents(spec, 12, 1)
    t = true_distance_matrix(spec, lat, QuadratureConfig(grid_points=256))
    assert t.method == "quadrature"
    iu = np.triu_indices(12, 1)
    closed = np.sqrt(KERNELS[name].sq_distance(lat.points[iu[0]], lat.points[iu[1]]))
    np.testing.assert_allclose(t.values[iu], closed, atol=5e-4)
    assert t.integration_error < 5e-3


def test_holder_monte_carlo_high_dim():
    spec = HolderCube(3, "inner_product")
    lat = sample_latents(spec, 8, 2)
    t = true_distance_matrix(spec, lat, QuadratureConfig(mc_samples=200_000))
    assert t.method == "monte_carlo" and t.integration_error > 0
    iu = np.triu_indices(8, 1)
    closed = np.sqrt(KERNELS["inner_product"].sq_distance(lat.points[iu[0]], lat.points[iu[1]]))
    assert np.max(np.abs(t.values[iu] - closed)) < 6 * t.integration_error + 1e-3


@pytest.mark.parametrize("spec", [
    SBM([0.2, 0.3, 0.5], [[0.9, 0.2, 0.4], [0.2, 0.1, 0.6], [0.4, 0.6, 0.3]]),
    lower_bound_sbm(102, 0.02), GeometricGraph(2, 0.2), HolderCube(1, "inner_product")])
def test_oracle_matrix_is_metric(spec):
    t = true_distance_matrix(spec, sample_latents(spec, 25, 4))
    R = t.values
    assert np.array_equal(R, R.T) and not np.diag(R).any()
    assert R.min() >= 0 and R.max() <= 1
    tri = R[:, None, :] <= R[:, :, None] + R[None, :, :].transpose(1, 0, 2) + 2 * t.integration_error + 1e-12
    assert tri.all()


def test_unsupported_oracle():
    spec = HolderCube(3, "inner_product")
    lat = sample_latents(spec, 5, 0)
    with pytest.raises(UnsupportedOracle):
        true_distance_matrix(spec, lat, method="quadrature")
    with pytest.raises(UnsupportedOracle):
        sbm_approximation(spec, 0.2)


def test_slice_norms():
    spec = SBM([0.5, 0.5], [[0.8, 0.2], [0.2, 0.8]])
    lat = LatentSample(spec, np.array([0, 1]), 0)
    np.testing.assert_allclose(slice_sq_norms(spec, lat), [0.34, 0.34])
    g = GeometricGraph(1, 0.1)
    assert slice_sq_norms(g, sample_latents(g, 3, 0))[0] == pytest.approx(0.2)


def test_reference_dimension():
    assert reference_dimension(ErdosRenyi(0.3)) == 0
    assert reference_dimension(SBM([1.0], [[0.5]])) == 0
    assert reference_dimension(HolderCube(2, "inner_product", 1.0)) == 2
    assert reference_dimension(GeometricGraph(1, 0.1)) == 2
    assert reference_dimension(HolderCube(2, "product_cosine", 1.0)) is None
    assert reference_dimension(HolderCube(2, "inner_product", 0.5)) is None


def test_exact_line_instance(line4):
    cov = exact_covering_number(line4, 0.3)
    assert cov.size == 2 and cov.method == "exact" and is_cover(line4, cov)
    pack = exact_packing_number(line4, 0.3)
    assert pack.size == 2 and is_packing(line4, pack)
    assert exact_covering_number(line4, 0.15).size == 4
    assert exact_covering_number(line4, 0.9).size == 1
    assert exact_covering_number(line4, 0.29).size == 4
    assert exact_packing_number(line4, 0.0).size == 4


def test_exact_threshold():
    D = np.zeros((17, 17))
    with pytest.raises(TooLargeForExact):
        exact_covering_number(D, 0.1)
    with pytest.raises(TooLargeForExact):
        exact_packing_number(D, 0.1)


def random_metric(seed, n, d=2):
    rng = np.random.default_rng(seed)
    x = rng.random((n, d))
    return np.sqrt(((x[:, None] - x[None]) ** 2).sum(-1))


@given(st.integers(0, 10**6), st.integers(1, 8), st.floats(0.01, 1.2))
def test_exact_matches_brute_force(seed, n, eps):
    D = random_metric(seed, n)
    assert exact_covering_number(D, eps).size == brute_cover(D, eps)
    assert exact_packing_number(D, eps).size == brute_pack(D, eps)


@given(st.integers(0, 10**6), st.integers(2, 10), st.data())
def test_exact_permutation_invariant(seed, n, data):
    D = random_metric(seed, n)
    perm = np.array(data.draw(st.permutations(range(n))))
    Dp = D[np.ix_(perm, perm)]
    for eps in (0.1, 0.3, 0.6):
        assert exact_covering_number(D, eps).size == exact_covering_number(Dp, eps).size
        assert exact_packing_number(D, eps).size == exact_packing_number(Dp, eps).size


@given(st.integers(0, 10**6), st.integers(2, 10))
def test_exact_covering_monotone_right_continuous(seed, n):
    D = random_metric(seed, n)
    vals = np.unique(D)
    sizes = [exact_covering_number(D, e).size for e in vals[1:]]
    assert all(a >= b for a, b in zip(sizes, sizes[1:]))
    # constant on [d_k, d_{k+1}): the value at d_k equals the value just above it
    for e, s in zip(vals[1:], sizes):
        assert exact_covering_number(D, e + 1e-12).size == s


def test_sbm_approximation_constant():
    spec, err = sbm_approximation(ErdosRenyi(0.4), 0.1)
    assert len(spec.weights_) == 1 and err == 0


def test_sbm_approximation_separated_sbm_unchanged():
    sbm = SBM([0.3, 0.3, 0.4], [[0.9, 0.1, 0.2], [0.1, 0.8, 0.1], [0.2, 0.1, 0.7]])
    out, err = sbm_approximation(sbm, 0.1)
    assert out == sbm and err == 0


def test_sbm_approximation_merges_close_communities():
    sbm = SBM([0.25, 0.25, 0.5], [[0.5, 0.5, 0.1], [0.5, 0.52, 0.1], [0.1, 0.1, 0.9]])
    out, err, centers = sbm_approximation(sbm, 0.1, return_centers=True)
    assert len(out.weights_) == 2 and centers.tolist() == [0, 2]
    assert 0 < err <= 0.4


def _interval_sq_dist(x, c, delta):
    # boundary-aware |I(x) symmetric-difference I(c)| with I(x) = [x-d, x+d] cut to [0,1]
    lo1, hi1 = np.clip(x - delta, 0, 1), np.clip(x + delta, 0, 1)
    lo2, hi2 = np.clip(c - delta, 0, 1), np.clip(c + delta, 0, 1)
    inter = np.clip(np.minimum(hi1, hi2) - np.maximum(lo1, lo2), 0, None)
    return (hi1 - lo1) + (hi2 - lo2) - 2 * inter


def verify_step_error(spec, eps, fine=4000):
    """Independent midpoint-rule L2 error of the returned step graphon."""
    approx, err, centers = sbm_approximation(spec, eps, return_centers=True)
    x = (np.arange(fine) + 0.5) / fine
    c = centers[:, 0]
    d2 = _interval_sq_dist(x[:, None], c[None, :], spec.delta)
    cell = np.argmin(d2, axis=1)
    W = (np.abs(x[:, None] - x[None, :]) <= spec.delta).astype(float)
    Wbar = approx.block_probs[cell][:, cell]
    return err, math.sqrt(np.mean((W - Wbar) ** 2))


@pytest.mark.parametrize("eps", [0.1, 0.2, 0.3])
def test_sbm_approximation_geometric_bound(eps):
    err, check = verify_step_error(GeometricGraph(1, 0.1), eps)
    assert err <= 4 * eps and check <= 4 * eps
    assert abs(err - check) < 0.05


def test_true_distance_csv(tmp_path):
    spec = SBM([0.5, 0.5], [[0.8, 0.2], [0.2, 0.8]])
    t = true_distance_matrix(spec, LatentSample(spec, np.array([0, 1, 1]), 0))
    p = tmp_path / "t.csv"
    t.to_csv(p)
    comments, cols, rows = read_csv(p)
    assert comments == ["method=analytic integration_error=0.0"]
    assert cols == ["i", "j", "r"] and len(rows) == 3
