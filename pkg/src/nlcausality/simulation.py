"""Seeded process generators, rejection-rate estimation and reference oracles.

Seeding
-------
Replication ``r`` of a run with master seed ``s`` draws from
``numpy.random.SeedSequence(s, spawn_key=(r,))``.  The spawn key acts as a
counter, so replications are independent streams that can be generated in
any order or on any worker and still reproduce exactly.
"""

from dataclasses import dataclass, field

import numpy as np
from joblib import Parallel, delayed
from scipy import stats

from .causality import long_run_variance
from .exceptions import ConfigError, DegenerateBandwidthError, NumericalDegeneracyError

KINDS = (
    "iid_normal",
    "random_walk",
    "ar",
    "var",
    "bilinear",
    "nonlinear_causal",
    "logistic_map",
    "student_t",
)
BURN_IN = 200


def replication_rng(seed, rep):
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(rep,)))


def _spectral_radius(mats):
    """Largest modulus among the roots of a VAR/AR companion matrix."""
    mats = [np.atleast_2d(np.asarray(a, dtype=float)) for a in mats]
    if not mats:
        return 0.0
    k = mats[0].shape[0]
    p = len(mats)
    comp = np.zeros((k * p, k * p))
    comp[:k, :] = np.hstack(mats)
    comp[k:, :-k] = np.eye(k * (p - 1))
    return float(np.max(np.abs(np.linalg.eigvals(comp))))


@dataclass(frozen=True)
class ProcessSpec:
    """A data-generating process.

    ``params`` per kind:

    - ``iid_normal``: ``sigma`` (1.0); ``k`` columns (1)
    - ``random_walk``: ``sigma`` (1.0), ``drift`` (0.0), ``x0`` (0.0)
    - ``ar``: ``phi`` (list), ``const`` (0.0), ``df`` (None: normal innovations;
      otherwise Student-t with that many degrees of freedom)
    - ``var``: ``coefs`` (list of k x k matrices), ``const`` (zeros), ``cov`` (identity)
    - ``bilinear``: ``b`` (0.7) in ``y_t = b y_{t-1} e_{t-1} + e_t``
    - ``nonlinear_causal``: ``a`` (0.5) in ``y_t = a x_{t-1}^2 + e_t``, x iid normal
    - ``logistic_map``: ``x0`` (0.3), ``r`` (4.0)
    - ``student_t``: ``df`` (3), ``k`` columns (1)
    """

    kind: str
    n: int
    seed: int = 0
    params: dict = field(default_factory=dict)
    burn_in: int = BURN_IN

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown process kind {self.kind!r}")
        if self.n < 1:
            raise ConfigError("n must be positive")
        p = self.params
        if self.kind == "ar":
            phi = list(p.get("phi", []))
            if phi and _spectral_radius([[[c]] for c in phi]) >= 1.0:
                raise ConfigError(f"AR coefficients {phi} are not stationary")
        elif self.kind == "var":
            coefs = p.get("coefs", [])
            if coefs and _spectral_radius(coefs) >= 1.0:
                raise ConfigError("VAR coefficients are not stable")
        elif self.kind == "bilinear":
            if abs(p.get("b", 0.7)) >= 1.0:
                raise ConfigError("bilinear coefficient must satisfy |b| < 1")
        elif self.kind == "logistic_map":
            if not 0.0 < p.get("x0", 0.3) < 1.0 or not 0.0 < p.get("r", 4.0) <= 4.0:
                raise ConfigError("logistic map needs x0 in (0, 1) and r in (0, 4]")
        elif self.kind == "student_t":
            if p.get("df", 3) <= 2:
                raise ConfigError("student_t needs df > 2 (finite variance)")

    def with_seed(self, seed):
        return ProcessSpec(self.kind, self.n, seed, self.params, self.burn_in)


def _innovations(rng, size, df=None):
    if df is None:
        return rng.standard_normal(size)
    return rng.standard_t(df, size)


def simulate(spec, rng=None):
    """Draw one realisation; shape ``(n,)`` or ``(n, k)`` for pairs/systems."""
    rng = rng if rng is not None else np.random.default_rng(spec.seed)
    p = spec.params
    n, burn = spec.n, spec.burn_in
    kind = spec.kind

    if kind == "iid_normal":
        k = p.get("k", 1)
        out = p.get("sigma", 1.0) * rng.standard_normal((n, k) if k > 1 else n)
        return out
    if kind == "student_t":
        k = p.get("k", 1)
        return rng.standard_t(p.get("df", 3), (n, k) if k > 1 else n)
    if kind == "random_walk":
        steps = p.get("drift", 0.0) + p.get("sigma", 1.0) * _innovations(rng, n, p.get("df"))
        return p.get("x0", 0.0) + np.cumsum(steps)
    if kind == "ar":
        phi = np.asarray(p.get("phi", []), dtype=float)
        e = _innovations(rng, n + burn, p.get("df"))
        y = np.zeros(n + burn)
        c = p.get("const", 0.0)
        for t in range(n + burn):
            acc = c + e[t]
            for i, ph in enumerate(phi, start=1):
                if t - i >= 0:
                    acc += ph * y[t - i]
            y[t] = acc
        return y[burn:]
    if kind == "var":
        coefs = [np.asarray(a, dtype=float) for a in p.get("coefs", [])]
        k = coefs[0].shape[0] if coefs else p.get("k", 2)
        const = np.asarray(p.get("const", np.zeros(k)), dtype=float)
        chol = np.linalg.cholesky(np.asarray(p.get("cov", np.eye(k)), dtype=float))
        e = rng.standard_normal((n + burn, k)) @ chol.T
        y = np.zeros((n + burn, k))
        for t in range(n + burn):
            acc = const + e[t]
            for i, a in enumerate(coefs, start=1):
                if t - i >= 0:
                    acc = acc + a @ y[t - i]
            y[t] = acc
        return y[burn:]
    if kind == "bilinear":
        b = p.get("b", 0.7)
        e = rng.standard_normal(n + burn)
        y = np.zeros(n + burn)
        for t in range(1, n + burn):
            y[t] = b * y[t - 1] * e[t - 1] + e[t]
        return y[burn:]
    if kind == "nonlinear_causal":
        a = p.get("a", 0.5)
        x = rng.standard_normal(n + 1)
        e = rng.standard_normal(n + 1)
        y = np.empty(n + 1)
        y[0] = e[0]
        y[1:] = a * x[:-1] ** 2 + e[1:]
        return np.column_stack([x[1:], y[1:]])
    if kind == "logistic_map":
        r = p.get("r", 4.0)
        x = np.empty(n + burn)
        x[0] = p.get("x0", 0.3)
        for t in range(1, n + burn):
            x[t] = r * x[t - 1] * (1.0 - x[t - 1])
        return x[burn:]
    raise ConfigError(f"unknown process kind {kind!r}")  # pragma: no cover


@dataclass(frozen=True)
class SizePowerReport:
    test_id: str
    level: float
    replications: int
    rejections: int
    rate: float
    half_width: float

    def __str__(self):
        return (f"{self.test_id}: rate {self.rate:.3f} +/- {self.half_width:.3f} "
                f"({self.rejections}/{self.replications} at {self.level:.0%})")


def _one_rep(pvalue_fn, spec, rep):
    data = simulate(spec, replication_rng(spec.seed, rep))
    return pvalue_fn(data)


def size_power(test_id, pvalue_fn, spec, level=0.05, reps=500, n_jobs=1):
    """Monte Carlo rejection rate of ``pvalue_fn`` on draws from ``spec``.

    ``pvalue_fn`` maps one simulated sample to a p-value.  The half-width is
    that of the exact (Clopper-Pearson) 95% binomial interval.
    """
    if reps < 100:
        raise ConfigError("size/power estimation needs at least 100 replications")
    if n_jobs == 1:
        pvals = [_one_rep(pvalue_fn, spec, r) for r in range(reps)]
    else:
        pvals = Parallel(n_jobs=n_jobs)(
            delayed(_one_rep)(pvalue_fn, spec, r) for r in range(reps))
    k = int(np.sum(np.asarray(pvals) < level))
    ci = stats.binomtest(k, reps).proportion_ci(confidence_level=0.95, method="exact")
    return SizePowerReport(test_id, level, reps, k, k / reps, (ci.high - ci.low) / 2.0)


def _indicator_matrix(u, eps):
    u = u[:, None] if u.ndim == 1 else u
    return np.all(np.abs(u[:, None, :] - u[None, :, :]) < eps, axis=2).astype(np.int64)


def dp_oracle(x, y, lag=1, epsilon=1.0):
    """Reference T_n and S_n by literal summation over index triples.

    No standardisation is applied; pass the series exactly as given to the
    optimised routine with ``standardize=False``.  Cost is O(n^3); meant for
    n up to a few hundred.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) > 500:
        raise ValueError("oracle is restricted to n <= 500")
    n = len(x) - lag
    t_idx = np.arange(lag - 1, lag - 1 + n)
    X = np.stack([x[t_idx - s] for s in range(lag)], axis=1)
    Y = np.stack([y[t_idx - s] for s in range(lag)], axis=1)
    Z = y[t_idx + 1]
    iy = _indicator_matrix(Y, epsilon)
    ixy = _indicator_matrix(np.hstack([X, Y]), epsilon)
    iyz = _indicator_matrix(np.hstack([Y, Z[:, None]]), epsilon)
    ixyz = _indicator_matrix(np.hstack([X, Y, Z[:, None]]), epsilon)
    scale = (2.0 * epsilon) ** -(3 * lag + 1)

    if sum(iy[i, j] for i in range(n) for j in range(n) if i != j) == 0:
        raise DegenerateBandwidthError(f"no neighbour pairs within eps={epsilon:g}")

    total = 0
    k1 = np.empty(n)
    for i in range(n):
        others = np.ones(n, dtype=bool)
        others[i] = False
        # literal sum over k != i, j != i of the unsymmetrised kernel
        m = np.outer(ixyz[i], iy[i]) - np.outer(ixy[i], iyz[i])
        total += int(m[np.ix_(others, others)].sum())

        # symmetrised kernel over distinct (j, k), both different from i
        ci = (np.outer(ixyz[i], iy[i]) + np.outer(iy[i], ixyz[i])
              - np.outer(ixy[i], iyz[i]) - np.outer(iyz[i], ixy[i]))
        cj = (ixyz[:, i][:, None] * iy + ixyz * iy[:, i][:, None]
              - ixy[:, i][:, None] * iyz - ixy * iyz[:, i][:, None])
        ker = ci + cj + cj.T
        mask = np.outer(others, others)
        np.fill_diagonal(mask, False)
        k1[i] = scale * ker[mask].sum() / 6.0 / ((n - 1.0) * (n - 2.0))
    t_n = scale * total / (n * (n - 1.0) * (n - 2.0))
    var = 9.0 * long_run_variance(k1 - t_n)
    if not var > 0:
        raise NumericalDegeneracyError(f"variance estimate {var!r} is not positive")
    return t_n, float(np.sqrt(var))


def synthetic_prices(start="2000-01-03", end="2009-12-31", seed=0, tickers=("AAA", "BBB", "CCC"),
                     drop_fraction=0.01):
    """Business-day price paths with linear and nonlinear cross-dependence.

    The first series drives the second through its lagged square and the
    third through its lagged level.  The last series trades on a slightly
    different calendar: a random ``drop_fraction`` of its days is missing, so
    alignment has something to do.

    Returns
    -------
    list of (ticker, dates, prices)
    """
    if len(tickers) != 3:
        raise ConfigError("synthetic_prices generates exactly three tickers")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    dates = np.arange(np.datetime64(start, "D"), np.datetime64(end, "D") + 1)
    dates = dates[np.is_busday(dates)]
    n = dates.size
    vol = np.exp(0.3 * np.sin(np.arange(n) / 250.0))
    x = vol * rng.standard_t(5, n) * 0.8
    y = np.empty(n)
    z = np.empty(n)
    y[0], z[0] = rng.standard_normal(2)
    e = rng.standard_normal((n, 2))
    y[1:] = 0.2 * (x[:-1] ** 2 - np.mean(x ** 2)) + 1.5 * e[1:, 0]
    z[1:] = 0.1 * x[:-1] + 0.8 * e[1:, 1]
    out = []
    for ticker, r, p0 in zip(tickers, (x, y, z), (100.0, 20.0, 400.0)):
        out.append([ticker, dates, p0 * np.exp(np.cumsum(r) / 100.0)])
    keep = rng.random(n) >= drop_fraction
    keep[0] = keep[-1] = True
    out[2][1], out[2][2] = dates[keep], out[2][2][keep]
    return [tuple(o) for o in out]
