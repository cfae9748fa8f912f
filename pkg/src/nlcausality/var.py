"""Bivariate VAR delinearisation.

A VAR(p) with intercept is fitted equation by equation; its residuals carry
no linear predictability from the included lags, so any remaining
cross-predictability between them is nonlinear.
"""

from dataclasses import dataclass

import numpy as np
from scipy import stats
from sklearn.base import BaseEstimator, TransformerMixin

from ._ols import lagmat, ols
from ._validation import check_matrix, check_nonneg_int, check_pair
from .exceptions import EstimationError, InsufficientSampleError


def _design(Y, p, start):
    """Intercept plus ``p`` lags of every column, rows ``start..n-1``."""
    n = Y.shape[0]
    rows = np.arange(start, n)
    cols = [np.ones(rows.size)]
    for i in range(1, p + 1):
        cols.extend(Y[rows - i, c] for c in range(Y.shape[1]))
    return Y[rows], np.column_stack(cols)


def _fit(Y, p, start):
    target, X = _design(Y, p, start)
    if target.shape[0] <= X.shape[1]:
        raise InsufficientSampleError(f"too few observations for VAR({p})")
    q, r = np.linalg.qr(X)
    diag = np.abs(np.diag(r))
    if diag.min() <= 1e-10 * diag.max():
        raise EstimationError(f"singular VAR({p}) design")
    B = np.linalg.solve(r, q.T @ target)
    return B, target - X @ B, X


def var_bic(Y, p, start):
    _, resid, X = _fit(Y, p, start)
    T, K = resid.shape
    sign, logdet = np.linalg.slogdet(resid.T @ resid / T)
    if sign <= 0:
        raise EstimationError("residual covariance is singular")
    return logdet + (p * K * K + K) * np.log(T) / T


def select_var_lag(x, y, pmax=10):
    """Order in ``0..pmax`` minimising the system BIC on a common sample."""
    pmax = check_nonneg_int(pmax, "pmax")
    x, y = check_pair(x, y, min_length=max(20 * pmax, 3))
    Y = np.column_stack([x, y])
    crit = [var_bic(Y, p, pmax) for p in range(pmax + 1)]
    return int(np.argmin(crit))


class VARFilter(BaseEstimator, TransformerMixin):
    """Least-squares VAR with BIC order selection; ``transform`` gives residuals.

    Parameters
    ----------
    max_lag : int
        Largest order searched by BIC.
    lag : int, optional
        Fixed order, bypassing the search.

    Attributes
    ----------
    lag_ : int
    intercept_ : ndarray of shape (k,)
    coef_ : ndarray of shape (lag_, k, k)
        ``coef_[i-1][a, b]`` is the effect of series b at lag i on series a.
    bic_ : ndarray or None
        Criterion per candidate order when the order was searched.
    """

    def __init__(self, max_lag=10, lag=None):
        self.max_lag = max_lag
        self.lag = lag

    def fit(self, X, y=None):
        X = check_matrix(X, min_rows=3)
        if self.lag is None:
            pmax = check_nonneg_int(self.max_lag, "max_lag")
            if X.shape[0] < 20 * pmax:
                raise InsufficientSampleError(
                    f"lag search up to {pmax} needs {20 * pmax} observations")
            self.bic_ = np.array([var_bic(X, p, pmax) for p in range(pmax + 1)])
            p = int(np.argmin(self.bic_))
        else:
            p = check_nonneg_int(self.lag, "lag")
            self.bic_ = None
        B, _, _ = _fit(X, p, p)
        k = X.shape[1]
        self.lag_ = p
        self.intercept_ = B[0]
        self.coef_ = B[1:].reshape(p, k, k).transpose(0, 2, 1)
        self.n_features_in_ = k
        return self

    def _fitted(self, X):
        X = check_matrix(X, n_columns=self.n_features_in_, min_rows=self.lag_ + 1)
        target, D = _design(X, self.lag_, self.lag_)
        B = np.vstack([self.intercept_[None, :]] +
                      [self.coef_[i].T for i in range(self.lag_)])
        return target, D @ B

    def predict(self, X):
        """One-step fitted values for rows ``lag_..n-1``."""
        return self._fitted(X)[1]

    def transform(self, X):
        """Residuals for rows ``lag_..n-1``, shape ``(n - lag_, k)``."""
        target, fitted = self._fitted(X)
        return target - fitted


def var_filter(x, y, p):
    """Residual pair of a VAR(p) fitted to ``(x, y)``."""
    x, y = check_pair(x, y)
    resid = VARFilter(lag=p).fit_transform(np.column_stack([x, y]))
    return resid[:, 0], resid[:, 1]


@dataclass(frozen=True)
class GrangerFTest:
    f_stat: float
    pvalue: float
    df_num: int
    df_den: int


def linear_granger_test(x, y, lags=1):
    """F-test that ``lags`` lags of x add nothing to an AR(lags) for y."""
    x, y = check_pair(x, y, min_length=lags + 10)
    target = y[lags:]
    own = np.column_stack([np.ones(len(target)), lagmat(y, lags)])
    full = np.column_stack([own, lagmat(x, lags)])
    r = ols(target, own)
    u = ols(target, full)
    df_den = len(target) - full.shape[1]
    f = ((r.ssr - u.ssr) / lags) / (u.ssr / df_den)
    return GrangerFTest(float(f), float(stats.f.sf(f, lags, df_den)), lags, df_den)
