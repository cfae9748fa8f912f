"""Nonparametric Granger non-causality test (Diks-Panchenko).

The null "x does not Granger-cause y" is tested as conditional independence
of ``Z = y[t+1]`` and the past of x given the past of y.  With delay vectors
of length ``l`` for both series the statistic is

    T_n = c / (n (n-1) (n-2)) * sum_i (Cxyz_i Cy_i - Cxy_i Cyz_i),
    c   = (2 eps) ** -(3 l + 1),

where ``CU_i`` counts neighbours ``j != i`` of point i in the U-subspace
under the maximum norm with radius ``eps`` (strict inequality).

Standard error
--------------
T_n is a third-order U-statistic in ``W_t = (X_t, Y_t, Z_t)``.  Writing
``K1_i`` for the sample first-order projection of its symmetrised kernel,

    K1_i = c (A_i + B_i) / (3 (n-1) (n-2)),
    A_i  = Cxyz_i Cy_i - Cxy_i Cyz_i,
    B_i  = sum_{j != i} (Ixyz_ij Cy_j + Iy_ij Cxyz_j - Ixy_ij Cyz_j - Iyz_ij Cxy_j),

the mean of ``K1_i`` equals T_n and the asymptotic variance of
``sqrt(n) (T_n - q)`` is ``9`` times the long-run variance of ``K1``.  It is
estimated with Bartlett weights and truncation ``K = floor(n ** 0.25)``:

    S_n^2 = 9 * (g_0 + 2 sum_{k=1}^{K-1} (1 - k/K) g_k),
    g_k   = (1/n) sum_{i >= k} (K1_i - T_n) (K1_{i-k} - T_n).

The test is one-sided: ``z = sqrt(n) T_n / S_n`` and ``p = 1 - Phi(z)``.
"""

from dataclasses import dataclass

import numpy as np
from scipy import stats
from sklearn.base import BaseEstimator

from ._kernels import dp_counts
from ._validation import check_pair, check_positive
from .exceptions import (
    DegenerateBandwidthError,
    DegenerateSeriesError,
    InsufficientSampleError,
    NumericalDegeneracyError,
)

#: Bandwidth rule exponent used by default.
DEFAULT_BETA = 2.0 / 7.0
#: Rule constant fitted so that a 1517-observation window gets eps = 1.15.
DEFAULT_C = 1.15 * 1517 ** DEFAULT_BETA
MIN_EFFECTIVE_SAMPLE = 50


@dataclass(frozen=True)
class DpOutcome:
    t_n: float
    s_n: float
    z: float
    p: float
    n_eff: int
    epsilon: float
    lag: int


def bandwidth(n, C=DEFAULT_C, beta=DEFAULT_BETA, floor=None, cap=None):
    """Sample-size dependent radius ``clamp(C * n ** -beta, floor, cap)``."""
    if n < MIN_EFFECTIVE_SAMPLE:
        raise InsufficientSampleError(f"bandwidth rule needs n >= {MIN_EFFECTIVE_SAMPLE}, got {n}")
    check_positive(C, "C")
    if not 0.25 < beta < 1.0 / 3.0:
        raise ValueError(f"beta must lie in (1/4, 1/3), got {beta}")
    eps = C * float(n) ** (-beta)
    if floor is not None:
        eps = max(eps, floor)
    if cap is not None:
        eps = min(eps, cap)
    return eps


def local_density(points, i, eps):
    """Indicator-kernel density estimate at ``points[i]`` from the other points."""
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts[:, None]
    n, d = pts.shape
    if n < 2:
        raise ValueError("need at least two points")
    check_positive(eps, "eps")
    close = np.all(np.abs(pts - pts[i]) < eps, axis=1)
    close[i] = False
    return float(close.sum()) / ((2.0 * eps) ** d * (n - 1))


def embed(x, y, lag):
    """Delay vectors ``(x[t-lag+1..t], y[t-lag+1..t], y[t+1])``.

    Rows are ordered by t; column s of the lag blocks holds the value ``s``
    steps back.  Returns ``(xe, ye, z)`` with ``len(x) - lag`` rows.
    """
    n_eff = len(x) - lag
    idx = np.arange(lag - 1, lag - 1 + n_eff)
    back = np.arange(lag)
    xe = np.ascontiguousarray(x[idx[:, None] - back])
    ye = np.ascontiguousarray(y[idx[:, None] - back])
    z = np.ascontiguousarray(y[idx + 1])
    return xe, ye, z


def long_run_variance(h):
    """Bartlett-weighted long-run variance of a centred series."""
    n = h.shape[0]
    K = int(np.floor(n ** 0.25))
    var = float(np.dot(h, h)) / n
    for k in range(1, K):
        var += 2.0 * (1.0 - k / K) * float(np.dot(h[k:], h[:-k])) / n
    return var


def _finish(cy, cxy, cyz, cxyz, b, eps, lag):
    """T_n, S_n from the neighbour counts (shared with the reference oracle)."""
    n = cy.shape[0]
    if int(cy.sum()) == 0:
        raise DegenerateBandwidthError(f"no neighbour pairs within eps={eps:g}")
    scale = (2.0 * eps) ** -(3 * lag + 1)
    a = cxyz * cy - cxy * cyz
    t_n = scale * float(a.sum()) / (n * (n - 1.0) * (n - 2.0))
    k1 = scale * (a + b).astype(np.float64) / (3.0 * (n - 1.0) * (n - 2.0))
    var = 9.0 * long_run_variance(k1 - t_n)
    if not var > 0:
        raise NumericalDegeneracyError(f"variance estimate {var!r} is not positive")
    return t_n, float(np.sqrt(var))


def dp_statistic(x, y, lag=1, epsilon=None, standardize=True, C=DEFAULT_C,
                 beta=DEFAULT_BETA, floor=None, cap=None,
                 min_effective_sample=MIN_EFFECTIVE_SAMPLE):
    """Test "x does not Granger-cause y" at embedding lag ``lag``.

    Parameters
    ----------
    x, y : array-like
        Equal-length (residual) series.
    lag : int
        Delay-vector length used for both series.
    epsilon : float, optional
        Explicit kernel radius.  When omitted the bandwidth rule is applied
        to ``len(x)``.
    standardize : bool
        Rescale both series to unit sample variance first, so that
        ``epsilon`` is in standard-deviation units.
    min_effective_sample : int
        Guard on ``len(x) - lag``; the normal approximation is poor below 50.
        Lower it only for exact-arithmetic checks.

    Returns
    -------
    DpOutcome
    """
    if int(lag) != lag or lag < 1:
        raise ValueError(f"lag must be a positive integer, got {lag!r}")
    lag = int(lag)
    x, y = check_pair(x, y, min_length=lag + 1)
    n_eff = len(x) - lag
    if n_eff < max(min_effective_sample, 3):
        raise InsufficientSampleError(
            f"effective sample {n_eff} below minimum {min_effective_sample}"
        )
    if epsilon is None:
        epsilon = bandwidth(len(x), C, beta, floor, cap)
    check_positive(epsilon, "epsilon")
    if standardize:
        x, y = _standardize(x, "x"), _standardize(y, "y")
    xe, ye, z = embed(x, y, lag)
    counts = dp_counts(xe, ye, z, float(epsilon))
    t_n, s_n = _finish(*counts, epsilon, lag)
    zscore = np.sqrt(n_eff) * t_n / s_n
    return DpOutcome(
        t_n=t_n,
        s_n=s_n,
        z=float(zscore),
        p=float(stats.norm.sf(zscore)),
        n_eff=n_eff,
        epsilon=float(epsilon),
        lag=lag,
    )


def _standardize(x, name):
    sd = np.std(x, ddof=1)
    if not sd > 0:
        raise DegenerateSeriesError(f"{name} is constant")
    return (x - x.mean()) / sd


DIRECTIONS = ("x->y", "y->x")


def dp_direction_battery(x, y, lags=(1, 2, 3, 4, 5), epsilon=None, standardize=True,
                         C=DEFAULT_C, beta=DEFAULT_BETA, floor=None, cap=None):
    """Both directions at every lag with one shared radius.

    Returns ``{(direction, lag): DpOutcome}`` with direction ``"x->y"`` or
    ``"y->x"``.  Without an explicit ``epsilon`` the radius comes from the
    bandwidth rule at ``len(x)``.
    """
    lags = list(lags)
    if not lags:
        raise ValueError("need at least one lag")
    if epsilon is None:
        epsilon = bandwidth(len(x), C, beta, floor, cap)
    out = {}
    for lag in lags:
        out[("x->y", lag)] = dp_statistic(x, y, lag, epsilon, standardize)
        out[("y->x", lag)] = dp_statistic(y, x, lag, epsilon, standardize)
    return out


class DiksPanchenkoTest(BaseEstimator):
    """Estimator wrapper around :func:`dp_statistic`.

    ``fit(x, y)`` tests whether x Granger-causes y.

    Attributes
    ----------
    result_ : DpOutcome
    statistic_, std_error_, zscore_, pvalue_ : float
    epsilon_ : float
        Radius actually used.
    n_eff_ : int
    """

    def __init__(self, lag=1, epsilon=None, C=DEFAULT_C, beta=DEFAULT_BETA,
                 floor=None, cap=None, standardize=True):
        self.lag = lag
        self.epsilon = epsilon
        self.C = C
        self.beta = beta
        self.floor = floor
        self.cap = cap
        self.standardize = standardize

    def fit(self, x, y):
        res = dp_statistic(x, y, lag=self.lag, epsilon=self.epsilon,
                           standardize=self.standardize, C=self.C, beta=self.beta,
                           floor=self.floor, cap=self.cap)
        self.result_ = res
        self.statistic_ = res.t_n
        self.std_error_ = res.s_n
        self.zscore_ = res.z
        self.pvalue_ = res.p
        self.epsilon_ = res.epsilon
        self.n_eff_ = res.n_eff
        return self
