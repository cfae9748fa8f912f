"""Least-squares plumbing shared by the regression-based tests."""

from dataclasses import dataclass

import numpy as np

from .exceptions import EstimationError


@dataclass
class OLSResult:
    params: np.ndarray
    resid: np.ndarray
    ssr: float
    nobs: int
    bse: np.ndarray

    @property
    def sigma2_ml(self):
        return self.ssr / self.nobs

    def tvalue(self, j):
        return self.params[j] / self.bse[j]


def lagmat(x, maxlag):
    """Columns ``x[t-1], ..., x[t-maxlag]`` for ``t = maxlag .. n-1``."""
    n = len(x)
    if maxlag == 0:
        return np.empty((n, 0))
    return np.column_stack([x[maxlag - i: n - i] for i in range(1, maxlag + 1)])


def ols(y, X, rcond=None):
    """Ordinary least squares via a rank-checked QR decomposition.

    Raises :class:`EstimationError` when ``X`` is rank deficient.
    """
    y = np.asarray(y, dtype=float)
    X = np.asarray(X, dtype=float)
    nobs, k = X.shape
    if k == 0:
        return OLSResult(np.empty(0), y.copy(), float(y @ y), nobs, np.empty(0))
    if nobs <= k:
        raise EstimationError(f"{nobs} observations for {k} regressors")
    q, r = np.linalg.qr(X)
    diag = np.abs(np.diag(r))
    tol = (rcond if rcond is not None else 1e-10) * max(diag.max(), 1e-300)
    if diag.min() <= tol:
        raise EstimationError("regressor matrix is singular or collinear")
    beta = np.linalg.solve(r, q.T @ y)
    resid = y - X @ beta
    ssr = float(resid @ resid)
    rinv = np.linalg.inv(r)
    cov_unscaled = rinv @ rinv.T
    s2 = ssr / (nobs - k)
    bse = np.sqrt(np.maximum(np.diag(cov_unscaled) * s2, 0.0))
    return OLSResult(beta, resid, ssr, nobs, bse)


def bic(ssr, nobs, nparams):
    """Gaussian BIC up to a constant: ``ln(ssr/nobs) + nparams ln(nobs) / nobs``."""
    if not ssr > 0:
        return -np.inf
    return np.log(ssr / nobs) + nparams * np.log(nobs) / nobs
