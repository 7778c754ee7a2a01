"""Compiled inner loops."""
import numba
import numpy as np

# prefer OpenMP so an outdated TBB install is never probed
numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]


@numba.njit(parallel=True, cache=True)
def nearest_neighbor_counts(C):
    """Row-wise argmin of the proxy on integer co-degree counts.

    ``C[i, k]`` holds ``n * <A_i, A_k>_n``. For each ``i`` the proxy to ``j``
    is ``max_{k not in {i,j}} |C[k,i] - C[k,j]|``; the scan over ``k`` stops
    as soon as the running max cannot beat the best ``j`` so far. Ties go to
    the smallest ``j``.
    """
    n = C.shape[0]
    m = np.empty(n, np.int64)
    best = np.empty(n, np.int64)
    for i in numba.prange(n):
        b = np.int64(1) << 62
        bj = -1
        for j in range(n):
            if j == i:
                continue
            cur = np.int64(0)
            for k in range(n):
                if k == i or k == j:
                    continue
                d = np.int64(C[i, k]) - np.int64(C[j, k])
                if d < 0:
                    d = -d
                if d > cur:
                    cur = d
                    if cur >= b:
                        break
            if cur < b:
                b = cur
                bj = j
        m[i] = bj
        best[i] = b
    return m, best


@numba.njit(parallel=True, cache=True)
def conservative_counts(C, m):
    """Integer numerator of the conservative squared distance.

    Returns ``n * r_new^2`` before the clamp, with zeros when the pairs
    ``{i, m(i)}`` and ``{j, m(j)}`` intersect and on the diagonal.
    """
    n = C.shape[0]
    out = np.zeros((n, n), np.int64)
    for i in numba.prange(n):
        mi = m[i]
        for j in range(n):
            mj = m[j]
            if i == j or i == mj or mi == j or mi == mj:
                continue
            mx = max(max(C[i, j], C[i, mj]), max(C[mi, j], C[mi, mj]))
            out[i, j] = np.int64(C[i, mi]) + np.int64(C[j, mj]) - 2 * np.int64(mx)
    return out
