"""Compiled pairwise-indicator kernels.

Every kernel returns integer counts. Integer accumulation is exact, so the
results do not depend on thread count or scheduling; floating point only
enters afterwards, in fixed index order, in the calling module.

Indicators use the strict inequality ``|u - v| < eps`` under the maximum norm.
"""

import os

import numba
import numpy as np

if "NUMBA_THREADING_LAYER" not in os.environ:
    # the probe for an outdated TBB emits a warning on every import
    numba.config.THREADING_LAYER = "omp"


@numba.njit(cache=True)
def bds_counts(x, eps, max_dim):
    """Pair counts needed for the BDS statistic at one radius.

    Walks each diagonal ``t - s = d`` of the indicator matrix once, tracking
    the length of the current run of consecutive matches; an m-history pair
    ending at ``(s, t)`` matches iff that run length is at least ``m``.

    Returns
    -------
    pairs_m : int64[max_dim + 1]
        ``pairs_m[m]`` = matching m-history pairs ``s < t`` (histories
        ending at indices ``>= m - 1``).
    pairs_1_tail : int64[max_dim + 1]
        ``pairs_1_tail[m]`` = matching scalar pairs restricted to indices
        ``>= m - 1``, i.e. the 1-dimensional count on the same points the
        m-dimensional count uses.
    degree : int64[n]
        Row sums of the scalar indicator matrix without the diagonal.
    """
    n = x.shape[0]
    run_hist = np.zeros(max_dim + 1, dtype=np.int64)
    start_hist = np.zeros(max_dim + 1, dtype=np.int64)
    degree = np.zeros(n, dtype=np.int64)
    for d in range(1, n):
        run = 0
        for s in range(n - d):
            t = s + d
            if abs(x[s] - x[t]) < eps:
                run += 1
                degree[s] += 1
                degree[t] += 1
                run_hist[min(run, max_dim)] += 1
                start_hist[min(s + 1, max_dim)] += 1
            else:
                run = 0
    pairs_m = np.zeros(max_dim + 1, dtype=np.int64)
    pairs_1_tail = np.zeros(max_dim + 1, dtype=np.int64)
    acc_run = 0
    acc_start = 0
    for m in range(max_dim, 0, -1):
        acc_run += run_hist[m]
        acc_start += start_hist[m]
        pairs_m[m] = acc_run
        pairs_1_tail[m] = acc_start
    return pairs_m, pairs_1_tail, degree


@numba.njit(inline="always")
def _close(a, i, j, eps):
    for s in range(a.shape[1]):
        if not abs(a[i, s] - a[j, s]) < eps:
            return False
    return True


@numba.njit(cache=True, parallel=True)
def dp_counts(xe, ye, z, eps):
    """Per-point neighbour counts for the conditional-independence statistic.

    ``xe`` and ``ye`` are the delay-embedded past of the two series (one row
    per time point), ``z`` the one-step-ahead value of the second series.

    Returns ``(cy, cxy, cyz, cxyz, b)``, all int64 arrays of length n, where
    ``cU[i] = #{j != i : ||U_i - U_j|| < eps}`` and
    ``b[i] = sum_{j != i} (Ixyz_ij cy_j + Iy_ij cxyz_j - Ixy_ij cyz_j - Iyz_ij cxy_j)``
    is the cross term of the first-order projection of the symmetrised kernel.
    """
    n = z.shape[0]
    cy = np.zeros(n, dtype=np.int64)
    cxy = np.zeros(n, dtype=np.int64)
    cyz = np.zeros(n, dtype=np.int64)
    cxyz = np.zeros(n, dtype=np.int64)
    for i in numba.prange(n):
        a_y = 0
        a_xy = 0
        a_yz = 0
        a_xyz = 0
        for j in range(n):
            if j == i or not _close(ye, i, j, eps):
                continue
            a_y += 1
            iz = abs(z[i] - z[j]) < eps
            ix = _close(xe, i, j, eps)
            if iz:
                a_yz += 1
            if ix:
                a_xy += 1
                if iz:
                    a_xyz += 1
        cy[i] = a_y
        cxy[i] = a_xy
        cyz[i] = a_yz
        cxyz[i] = a_xyz

    b = np.zeros(n, dtype=np.int64)
    for i in numba.prange(n):
        acc = 0
        for j in range(n):
            if j == i or not _close(ye, i, j, eps):
                continue
            iz = abs(z[i] - z[j]) < eps
            ix = _close(xe, i, j, eps)
            acc += cxyz[j]
            if iz:
                acc -= cxy[j]
            if ix:
                acc -= cyz[j]
                if iz:
                    acc += cy[j]
        b[i] = acc
    return cy, cxy, cyz, cxyz, b
