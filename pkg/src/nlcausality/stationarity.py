"""Unit-root tests: augmented Dickey-Fuller and its RALS refinement.

Both tests regress ``dx_t`` on deterministic terms, ``x_{t-1}`` and ``k``
lagged differences, with ``k`` chosen by BIC on a common sample.  The RALS
variant adds the centred second and third powers of the first-stage
residuals as regressors, which sharpens the test when errors are
non-Gaussian.

Critical values live in ``data/``:

- ``adf_response_surface.txt``: MacKinnon (2010) finite-sample response
  surfaces for the Dickey-Fuller tau statistic.
- ``rals_critical_values.txt``: quantiles of the RALS limit law
  ``rho * tau_DF + sqrt(1 - rho^2) * N(0, 1)`` on a grid of ``rho^2``,
  produced by :func:`simulate_rals_table` (see ``scripts/make_rals_table.py``).
"""

from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

import numpy as np
from sklearn.base import BaseEstimator

from ._ols import bic, ols
from ._validation import check_nonneg_int, check_series
from .exceptions import EstimationError, NumericalDegeneracyError

DETERMINISTIC = ("trend_and_intercept", "drift")
LEVELS = (0.01, 0.05, 0.10)


def schwert_max_lag(n):
    return int(np.floor(12.0 * (n / 100.0) ** 0.25))


@dataclass(frozen=True)
class UnitRootSpec:
    deterministic: str = "drift"
    max_lag: int | None = None
    criterion: str = "BIC"

    def __post_init__(self):
        if self.deterministic not in DETERMINISTIC:
            raise ValueError(f"deterministic must be one of {DETERMINISTIC}")
        if self.max_lag is not None:
            check_nonneg_int(self.max_lag, "max_lag")
        if self.criterion != "BIC":
            raise ValueError("only BIC lag selection is supported")


@dataclass(frozen=True)
class UnitRootOutcome:
    t_stat: float
    selected_lag: int
    reject_at: float | None
    variant: str
    rho2: float | None = None
    critical_values: dict = field(default_factory=dict)
    nobs: int = 0


@lru_cache(maxsize=None)
def _load_table(name):
    text = resources.files("nlcausality").joinpath("data", name).read_text(encoding="utf-8")
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            rows.append(line.split())
    return rows


def adf_critical_values(deterministic, nobs):
    """``{level: critical value}`` from the response surface at sample size ``nobs``."""
    out = {}
    for row in _load_table("adf_response_surface.txt"):
        if row[0] == deterministic:
            level = float(row[1])
            b0, b1, b2, b3 = map(float, row[2:6])
            out[level] = b0 + b1 / nobs + b2 / nobs ** 2 + b3 / nobs ** 3
    return out


def rals_critical_values(deterministic, rho2):
    """``{level: critical value}`` interpolated linearly in ``rho2``."""
    grid = {}
    for row in _load_table("rals_critical_values.txt"):
        if row[0] == deterministic:
            grid.setdefault(float(row[1]), []).append((float(row[2]), float(row[3])))
    out = {}
    for level, pts in grid.items():
        pts.sort()
        r, cv = np.array(pts).T
        out[level] = float(np.interp(rho2, r, cv))
    return out


def _reject_level(t_stat, cvs):
    hits = [lvl for lvl in sorted(cvs) if t_stat < cvs[lvl]]
    return hits[0] if hits else None


def _design(x, k, deterministic, start):
    """ADF regression rows from ``start`` (index into the differenced series)."""
    dx = np.diff(x)
    rows = np.arange(start, len(dx))
    cols = [np.ones(rows.size)]
    if deterministic == "trend_and_intercept":
        cols.append(rows + 1.0)
    cols.append(x[rows])
    for i in range(1, k + 1):
        cols.append(dx[rows - i])
    return dx[rows], np.column_stack(cols)


def _rho_index(deterministic):
    return 2 if deterministic == "trend_and_intercept" else 1


def select_adf_lag(x, deterministic="drift", max_lag=None):
    """BIC-minimising number of lagged differences on a common sample."""
    x = check_series(x, "x")
    if max_lag is None:
        max_lag = schwert_max_lag(len(x))
    best_k, best = 0, np.inf
    for k in range(max_lag + 1):
        y, X = _design(x, k, deterministic, max_lag)
        res = ols(y, X)
        crit = bic(res.ssr, res.nobs, X.shape[1])
        if crit < best - 1e-12:
            best_k, best = k, crit
    return best_k


def _prepare(x, spec):
    x = check_series(x, "x")
    max_lag = spec.max_lag if spec.max_lag is not None else schwert_max_lag(len(x))
    if len(x) < 25 + max_lag:
        raise ValueError(f"need at least {25 + max_lag} observations, got {len(x)}")
    if not np.ptp(x) > 0:
        raise EstimationError("series is constant")
    k = select_adf_lag(x, spec.deterministic, max_lag)
    return x, k


def adf_test(x, spec=UnitRootSpec()):
    """Augmented Dickey-Fuller t-test of a unit root.

    Returns
    -------
    UnitRootOutcome
        ``reject_at`` is the smallest of 1%, 5%, 10% at which the t-ratio
        falls below its critical value, or None.
    """
    x, k = _prepare(x, spec)
    y, X = _design(x, k, spec.deterministic, k)
    res = ols(y, X)
    t = float(res.tvalue(_rho_index(spec.deterministic)))
    cvs = adf_critical_values(spec.deterministic, res.nobs)
    return UnitRootOutcome(t, k, _reject_level(t, cvs), "ADF", None, cvs, res.nobs)


def rals_adf_test(x, spec=UnitRootSpec()):
    """Residual-augmented least squares version of :func:`adf_test`.

    ``rho2`` is the ratio of augmented to unaugmented residual sums of
    squares; critical values are interpolated in it.
    """
    x, k = _prepare(x, spec)
    y, X = _design(x, k, spec.deterministic, k)
    base = ols(y, X)
    e = base.resid
    m2 = np.mean(e ** 2)
    m3 = np.mean(e ** 3)
    w = np.column_stack([e ** 2 - m2, e ** 3 - m3 - 3.0 * m2 * e])
    aug = ols(y, np.hstack([X, w]))
    rho2 = aug.ssr / base.ssr
    if not (0.0 < rho2 <= 1.0 + 1e-12) or not np.isfinite(rho2):
        raise NumericalDegeneracyError(f"rho^2 = {rho2!r} outside (0, 1]")
    rho2 = min(rho2, 1.0)
    t = float(aug.tvalue(_rho_index(spec.deterministic)))
    cvs = rals_critical_values(spec.deterministic, rho2)
    return UnitRootOutcome(t, k, _reject_level(t, cvs), "RALS", float(rho2), cvs, aug.nobs)


class _UnitRootEstimator(BaseEstimator):
    _test = None

    def __init__(self, deterministic="drift", max_lag=None):
        self.deterministic = deterministic
        self.max_lag = max_lag

    def fit(self, x, y=None):
        spec = UnitRootSpec(self.deterministic, self.max_lag)
        self.result_ = type(self)._test(x, spec)
        self.statistic_ = self.result_.t_stat
        self.lag_ = self.result_.selected_lag
        self.reject_at_ = self.result_.reject_at
        return self


class ADFTest(_UnitRootEstimator):
    """Estimator form of :func:`adf_test`; results in ``result_``."""

    _test = staticmethod(adf_test)


class RALSTest(_UnitRootEstimator):
    """Estimator form of :func:`rals_adf_test`; also sets ``rho2_``."""

    _test = staticmethod(rals_adf_test)

    def fit(self, x, y=None):
        super().fit(x)
        self.rho2_ = self.result_.rho2
        return self


def _df_tau_draws(deterministic, reps, T, rng, chunk=5000):
    """Dickey-Fuller t-ratios from Gaussian random walks of length ``T + 1``."""
    out = []
    trend = deterministic == "trend_and_intercept"
    t_idx = np.arange(1.0, T + 1)
    D = np.column_stack([np.ones(T), t_idx]) if trend else np.ones((T, 1))
    proj = D @ np.linalg.pinv(D)
    while sum(len(o) for o in out) < reps:
        m = min(chunk, reps - sum(len(o) for o in out))
        e = rng.standard_normal((m, T))
        walk = np.concatenate([np.zeros((m, 1)), np.cumsum(e, axis=1)], axis=1)
        dy = e
        lagged = walk[:, :-1]
        dy_r = dy - dy @ proj.T
        lag_r = lagged - lagged @ proj.T
        sxx = np.einsum("ij,ij->i", lag_r, lag_r)
        rho = np.einsum("ij,ij->i", lag_r, dy_r) / sxx
        resid = dy_r - rho[:, None] * lag_r
        s2 = np.einsum("ij,ij->i", resid, resid) / (T - D.shape[1] - 1)
        out.append(rho / np.sqrt(s2 / sxx))
    return np.concatenate(out)


def simulate_rals_table(reps=200_000, T=1000, seed=20140101,
                        grid=np.round(np.arange(0.0, 1.0001, 0.05), 2)):
    """Critical values of ``rho tau_DF + sqrt(1 - rho^2) Z`` over a ``rho^2`` grid.

    Returns rows ``(deterministic, level, rho2, critical value)``.
    """
    rng = np.random.default_rng(seed)
    rows = []
    for det in DETERMINISTIC:
        tau = _df_tau_draws(det, reps, T, rng)
        z = rng.standard_normal(reps)
        for r2 in grid:
            draws = np.sqrt(r2) * tau + np.sqrt(1.0 - r2) * z
            qs = np.quantile(draws, LEVELS)
            for level, q in zip(LEVELS, qs):
                rows.append((det, level, float(r2), float(q)))
    return rows
