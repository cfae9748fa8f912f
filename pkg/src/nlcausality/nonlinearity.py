"""Univariate nonlinearity screening: AR pre-whitening, BDS and Tsay tests."""

from dataclasses import dataclass

import numpy as np
from scipy import stats
from sklearn.base import BaseEstimator, TransformerMixin

from ._kernels import bds_counts
from ._ols import bic, lagmat, ols
from ._validation import check_nonneg_int, check_positive, check_series
from .exceptions import (
    DegenerateBandwidthError,
    DegenerateSeriesError,
    EstimationError,
    InsufficientSampleError,
    NumericalDegeneracyError,
)

DEFAULT_MULTIPLIERS = (0.5, 1.0, 1.5, 2.0)


# ---------------------------------------------------------------------------
# pre-whitening
# ---------------------------------------------------------------------------

def _ar_design(x, k, start):
    rows = np.arange(start, len(x))
    X = np.column_stack([np.ones(rows.size)] + [x[rows - i] for i in range(1, k + 1)])
    return x[rows], X


def select_ar_order(x, max_lag=10):
    """BIC-minimising AR order (with intercept) on a common sample."""
    best_k, best = 0, np.inf
    for k in range(max_lag + 1):
        y, X = _ar_design(x, k, max_lag)
        crit = bic(ols(y, X).ssr, len(y), X.shape[1])
        if crit < best - 1e-12:
            best_k, best = k, crit
    return best_k


class ARPrewhitener(BaseEstimator, TransformerMixin):
    """AR(k) least-squares fit with k chosen by BIC; ``transform`` gives residuals.

    Parameters
    ----------
    max_lag : int
        Largest order considered.
    order : int, optional
        Fixed order; skips the BIC search.

    Attributes
    ----------
    order_ : int
    coef_ : ndarray of shape (order_ + 1,)
        Intercept followed by the lag coefficients.
    """

    def __init__(self, max_lag=10, order=None):
        self.max_lag = max_lag
        self.order = order

    def fit(self, x, y=None):
        x = check_series(x, "x", min_length=50)
        if not np.ptp(x) > 0:
            raise DegenerateSeriesError("cannot pre-whiten a constant series")
        max_lag = check_nonneg_int(self.max_lag, "max_lag")
        k = self.order if self.order is not None else select_ar_order(x, max_lag)
        yy, X = _ar_design(x, k, k)
        self.order_ = k
        self.coef_ = ols(yy, X).params
        return self

    def transform(self, x):
        """Residuals ``x_t - fitted_t`` for ``t >= order_`` (length ``n - order_``)."""
        x = check_series(x, "x", min_length=self.order_ + 1)
        yy, X = _ar_design(x, self.order_, self.order_)
        return yy - X @ self.coef_


def prewhiten(r, max_lag=10):
    """Residuals of the BIC-selected AR fit; returns ``(residuals, order)``."""
    values = getattr(r, "values", r)
    pw = ARPrewhitener(max_lag=max_lag).fit(values)
    return pw.transform(values), pw.order_


# ---------------------------------------------------------------------------
# BDS
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BdsOutcome:
    """Grid of BDS statistics; rows are dimensions, columns radii."""

    dims: tuple
    multipliers: tuple
    epsilons: tuple
    statistic: np.ndarray
    pvalue: np.ndarray

    def cells(self):
        for a, m in enumerate(self.dims):
            for b, mult in enumerate(self.multipliers):
                yield m, mult, float(self.statistic[a, b]), float(self.pvalue[a, b])


def correlation_integral(x, eps, m, n_points=None):
    """Fraction of pairs of m-histories closer than ``eps`` in the maximum norm.

    Uses the ``n_points`` most recent histories (default: all ``n - m + 1``).
    """
    x = check_series(x, "x")
    full = len(x) - m + 1
    n_points = full if n_points is None else n_points
    if not 2 <= n_points <= full:
        raise ValueError(f"n_points must lie in [2, {full}]")
    tail = x[len(x) - (n_points + m - 1):]
    pairs, _, _ = bds_counts(tail, float(eps), m)
    return pairs[m] / (n_points * (n_points - 1) / 2.0)


def _bds_cell(x, eps, dims):
    N = len(x)
    pairs_m, pairs_1_tail, degree = bds_counts(x, float(eps), max(dims))
    if pairs_1_tail[1] == 0:
        raise DegenerateBandwidthError(f"no pairs closer than eps={eps:g}")
    c = pairs_1_tail[1] / (N * (N - 1) / 2.0)
    k = float(np.sum(degree * (degree - 1))) / (N * (N - 1.0) * (N - 2.0))
    out = []
    for m in dims:
        n = N - m + 1
        npairs = n * (n - 1) / 2.0
        cm = pairs_m[m] / npairs
        c1 = pairs_1_tail[m] / npairs
        cross = sum(k ** (m - j) * c ** (2 * j) for j in range(1, m))
        var = 4.0 * (k ** m + 2.0 * cross + (m - 1) ** 2 * c ** (2 * m)
                     - m ** 2 * k * c ** (2 * m - 2))
        if not var > 0:
            raise NumericalDegeneracyError(f"BDS variance {var!r} at m={m} is not positive")
        out.append(np.sqrt(n) * (cm - c1 ** m) / np.sqrt(var))
    return out


def bds_test(e, max_dim=4, eps_multipliers=DEFAULT_MULTIPLIERS, min_n=200):
    """BDS test of the iid hypothesis for embedding dimensions ``2..max_dim``.

    Radii are ``multiplier * sd(e)``.  The m-dimensional correlation integral
    and the matching 1-dimensional one are computed on the same
    ``n - m + 1`` points; ``c`` and ``k`` in the variance use the full sample.
    P-values are two-sided.
    """
    e = check_series(e, "e", min_length=min_n)
    if max_dim < 2:
        raise ValueError("max_dim must be at least 2")
    mults = tuple(float(check_positive(m, "eps multiplier")) for m in eps_multipliers)
    sd = np.std(e, ddof=1)
    if not sd > 0:
        raise DegenerateSeriesError("BDS needs a non-constant series")
    dims = tuple(range(2, max_dim + 1))
    epsilons = tuple(mult * sd for mult in mults)
    stat = np.empty((len(dims), len(mults)))
    for b, eps in enumerate(epsilons):
        stat[:, b] = _bds_cell(e, eps, dims)
    return BdsOutcome(dims, mults, epsilons, stat, 2.0 * stats.norm.sf(np.abs(stat)))


class BDSTest(BaseEstimator):
    """Estimator form of :func:`bds_test`; grid in ``statistic_`` / ``pvalue_``."""

    def __init__(self, max_dim=4, eps_multipliers=DEFAULT_MULTIPLIERS, min_n=200):
        self.max_dim = max_dim
        self.eps_multipliers = eps_multipliers
        self.min_n = min_n

    def fit(self, e, y=None):
        self.result_ = bds_test(e, self.max_dim, self.eps_multipliers, self.min_n)
        self.statistic_ = self.result_.statistic
        self.pvalue_ = self.result_.pvalue
        return self


# ---------------------------------------------------------------------------
# Tsay
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TsayOutcome:
    lag: int
    f_stat: float
    pvalue: float
    df_num: int
    df_den: int


def tsay_test(r, lag):
    """Tsay's F-test for quadratic serial dependence at order ``lag``.

    The first-stage AR(lag) residuals are regressed on the cross-products
    ``r_{t-i} r_{t-j}`` (``1 <= i <= j <= lag``) after the latter are
    orthogonalised against the AR regressors.
    """
    x = check_series(getattr(r, "values", r), "r")
    lag = int(lag)
    if lag < 1:
        raise ValueError("lag must be at least 1")
    if len(x) < 20 * lag:
        raise InsufficientSampleError(f"Tsay test at lag {lag} needs {20 * lag} observations")
    lags = lagmat(x, lag)
    y = x[lag:]
    X = np.column_stack([np.ones(len(y)), lags])
    first = ols(y, X)
    iu, ju = np.triu_indices(lag)
    cross = lags[:, iu] * lags[:, ju]
    try:
        ortho = np.column_stack([ols(cross[:, c], X).resid for c in range(cross.shape[1])])
        second = ols(first.resid, ortho)
    except EstimationError as exc:
        raise EstimationError(f"cross-products are collinear: {exc}") from None
    q = cross.shape[1]
    df_den = len(y) - lag - q - 1
    if df_den <= 0:
        raise InsufficientSampleError("not enough observations for the Tsay F-test")
    f = ((first.ssr - second.ssr) / q) / (second.ssr / df_den)
    f = max(f, 0.0)
    return TsayOutcome(lag, float(f), float(stats.f.sf(f, q, df_den)), q, df_den)


class TsayTest(BaseEstimator):
    """Estimator form of :func:`tsay_test` at one or several lags."""

    def __init__(self, lags=(1, 2, 3, 4, 5, 6, 7)):
        self.lags = lags

    def fit(self, r, y=None):
        lags = [self.lags] if np.isscalar(self.lags) else list(self.lags)
        self.results_ = [tsay_test(r, k) for k in lags]
        self.statistic_ = np.array([o.f_stat for o in self.results_])
        self.pvalue_ = np.array([o.pvalue for o in self.results_])
        return self
