import numpy as np
import pytest
from numpy.testing import assert_allclose

from nlcausality.exceptions import DegenerateSeriesError, InsufficientSampleError
from nlcausality.nonlinearity import (ARPrewhitener, BDSTest, TsayTest, bds_test,
                                      correlation_integral, prewhiten, tsay_test)


def naive_bds(x, eps, m):
    """Double-loop BDS statistic written straight from the definitions."""
    N = len(x)
    close = lambda i, j: abs(x[i] - x[j]) < eps  # noqa: E731
    deg = np.zeros(N)
    c_pairs = 0
    for i in range(N):
        for j in range(i + 1, N):
            if close(i, j):
                c_pairs += 1
                deg[i] += 1
                deg[j] += 1
    c = c_pairs / (N * (N - 1) / 2)
    k = np.sum(deg * (deg - 1)) / (N * (N - 1) * (N - 2))
    n = N - m + 1
    cm = c1 = 0
    for s in range(m - 1, N):
        for t in range(s + 1, N):
            c1 += close(s, t)
            cm += all(close(s - l, t - l) for l in range(m))
    cm /= n * (n - 1) / 2
    c1 /= n * (n - 1) / 2
    var = 4 * (k ** m + 2 * sum(k ** (m - j) * c ** (2 * j) for j in range(1, m))
               + (m - 1) ** 2 * c ** (2 * m) - m ** 2 * k * c ** (2 * m - 2))
    return np.sqrt(n) * (cm - c1 ** m) / np.sqrt(var)


def _bilinear(rng, n, b=0.7):
    e = rng.standard_normal(n + 1)
    y = np.zeros(n + 1)
    for t in range(1, n + 1):
        y[t] = b * y[t - 1] * e[t - 1] + e[t]
    return y[1:]


class TestBDS:
    @pytest.mark.parametrize("n", [200, 300])
    def test_matches_naive_oracle(self, rng, n):
        x = rng.standard_normal(n)
        out = bds_test(x, max_dim=4, eps_multipliers=(0.5, 1.5))
        for a, m in enumerate(out.dims):
            for b, eps in enumerate(out.epsilons):
                assert_allclose(out.statistic[a, b], naive_bds(x, eps, m), rtol=1e-10)

    def test_matches_statsmodels(self, rng):
        smt = pytest.importorskip("statsmodels.tsa.stattools")
        x = rng.standard_normal(800)
        ours = bds_test(x, max_dim=5, eps_multipliers=(1.5,))
        stat, pval = smt.bds(x, max_dim=5, epsilon=1.5 * np.std(x, ddof=1))
        assert_allclose(ours.statistic[:, 0], stat, rtol=1e-10)
        assert_allclose(ours.pvalue[:, 0], pval, rtol=1e-8)

    def test_logistic_map_is_flagged(self):
        x = np.empty(1200)
        x[0] = 0.3
        for t in range(1, 1200):
            x[t] = 4 * x[t - 1] * (1 - x[t - 1])
        out = bds_test(x[200:], max_dim=2, eps_multipliers=(1.0,))
        assert out.statistic[0, 0] > 10

    def test_shape_and_cells(self, rng):
        out = bds_test(rng.standard_normal(300))
        assert out.statistic.shape == (3, 4)
        assert len(list(out.cells())) == 12

    def test_scale_invariance(self, rng):
        x = rng.standard_normal(400)
        assert_allclose(bds_test(x).statistic, bds_test(3 * x + 1).statistic, rtol=1e-9)

    def test_short(self, rng):
        with pytest.raises(ValueError):
            bds_test(rng.standard_normal(100))

    def test_constant(self):
        with pytest.raises(DegenerateSeriesError):
            bds_test(np.zeros(300))

    def test_estimator(self, rng):
        x = rng.standard_normal(300)
        est = BDSTest(max_dim=3).fit(x)
        assert est.statistic_.shape == (2, 4)


class TestCorrelationIntegral:
    def test_monotone_in_dimension(self, rng):
        x = rng.standard_normal(400)
        vals = [correlation_integral(x, 1.0, m, n_points=390) for m in range(1, 6)]
        assert np.all(np.diff(vals) <= 0)

    def test_monotone_in_radius(self, rng):
        x = rng.standard_normal(300)
        vals = [correlation_integral(x, e, 2) for e in (0.2, 0.5, 1.0, 2.0)]
        assert np.all(np.diff(vals) >= 0)

    def test_bounds(self, rng):
        x = rng.standard_normal(100)
        assert correlation_integral(x, 1e3, 3) == 1.0
        assert correlation_integral(x, 1e-12, 3) == 0.0

    def test_n_points_range(self, rng):
        with pytest.raises(ValueError):
            correlation_integral(rng.standard_normal(50), 1.0, 2, n_points=60)


class TestPrewhitening:
    def test_recovers_ar2(self, rng):
        e = rng.standard_normal(3000)
        x = np.zeros(3000)
        for t in range(2, 3000):
            x[t] = 0.5 * x[t - 1] - 0.3 * x[t - 2] + e[t]
        pw = ARPrewhitener().fit(x)
        assert pw.order_ == 2
        assert_allclose(pw.coef_[1:], [0.5, -0.3], atol=0.05)
        assert pw.transform(x).shape == (2998,)

    def test_white_noise_order_zero(self, rng):
        resid, order = prewhiten(rng.standard_normal(1000))
        assert order == 0
        assert resid.shape == (1000,)

    def test_constant(self):
        with pytest.raises(DegenerateSeriesError):
            ARPrewhitener().fit(np.ones(100))


class TestTsay:
    def test_affine_invariance(self, rng):
        x = _bilinear(rng, 500)
        a = tsay_test(x, 3)
        b = tsay_test(-2.5 * x + 4.0, 3)
        assert_allclose(a.f_stat, b.f_stat, rtol=1e-8)

    def test_degrees_of_freedom(self, rng):
        out = tsay_test(rng.standard_normal(500), 3)
        assert out.df_num == 6
        assert out.df_den == 500 - 3 - 3 - 6 - 1

    def test_power_on_bilinear(self, rng):
        assert tsay_test(_bilinear(rng, 1000), 2).pvalue < 0.01

    def test_matches_direct_regression(self, rng):
        # F for adding the raw cross-products to the AR regression is the same test.
        x = rng.standard_normal(300)
        k = 2
        lags = np.column_stack([x[k - i:len(x) - i] for i in range(1, k + 1)])
        y = x[k:]
        X = np.column_stack([np.ones(len(y)), lags])
        cross = np.column_stack([lags[:, 0] ** 2, lags[:, 0] * lags[:, 1], lags[:, 1] ** 2])
        ssr = lambda A: np.sum((y - A @ np.linalg.lstsq(A, y, rcond=None)[0]) ** 2)  # noqa: E731
        r, u = ssr(X), ssr(np.hstack([X, cross]))
        q, df = 3, len(y) - k - 3 - 1
        assert_allclose(tsay_test(x, k).f_stat, ((r - u) / q) / (u / df), rtol=1e-8)

    def test_short(self, rng):
        with pytest.raises(InsufficientSampleError):
            tsay_test(rng.standard_normal(50), 3)

    def test_estimator(self, rng):
        est = TsayTest(lags=(1, 2)).fit(rng.standard_normal(300))
        assert est.pvalue_.shape == (2,)
