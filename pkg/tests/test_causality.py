import numpy as np
import pytest
from numpy.testing import assert_allclose

from nlcausality.causality import (DEFAULT_C, DiksPanchenkoTest, bandwidth, dp_direction_battery,
                                   dp_statistic, embed, local_density, long_run_variance)
from nlcausality.exceptions import (DegenerateBandwidthError, DegenerateSeriesError,
                                    InsufficientSampleError)
from nlcausality.simulation import dp_oracle


class TestBandwidth:
    def test_anchor(self):
        assert_allclose(bandwidth(1517), 1.15, rtol=1e-14)

    def test_long_sample(self):
        assert round(bandwidth(7326), 2) == 0.73

    def test_strictly_decreasing(self):
        eps = np.array([bandwidth(n) for n in range(50, 5000)])
        assert np.all(np.diff(eps) < 0)

    def test_floor_and_cap(self):
        assert bandwidth(100, floor=5.0) == 5.0
        assert bandwidth(100, cap=0.1) == 0.1

    @pytest.mark.parametrize("beta", [0.25, 1 / 3, 0.5])
    def test_beta_range(self, beta):
        with pytest.raises(ValueError):
            bandwidth(500, DEFAULT_C, beta)

    def test_short_sample(self):
        with pytest.raises(InsufficientSampleError):
            bandwidth(20)


class TestLocalDensity:
    def test_isolated_point(self):
        assert local_density([0.0, 10.0, 20.0], 0, 1.0) == 0.0

    def test_all_close(self):
        pts = np.zeros((5, 2))
        assert local_density(pts, 2, 0.5) == 1.0 / (1.0 ** 2)

    def test_strict_inequality(self):
        assert local_density([0.0, 1.0], 0, 1.0) == 0.0

    def test_two_identical_points(self):
        assert local_density([0.7, 0.7], 0, 1.0) == 0.5

    def test_uniform_density_consistency(self, rng):
        est = [local_density(np.r_[0.5, rng.random(2000)], 0, 0.05) for _ in range(200)]
        se = np.std(est) / np.sqrt(len(est))
        assert abs(np.mean(est) - 1.0) < 4 * se


class TestEmbed:
    def test_layout(self):
        x = np.arange(10.0)
        y = 100 + np.arange(10.0)
        xe, ye, z = embed(x, y, 3)
        assert xe.shape == (7, 3)
        assert_allclose(xe[0], [2, 1, 0])
        assert_allclose(ye[-1], [108, 107, 106])
        assert_allclose(z, y[3:])


class TestLongRunVariance:
    def test_white_noise_close_to_variance(self, rng):
        h = rng.standard_normal(20000)
        h -= h.mean()
        assert_allclose(long_run_variance(h), np.var(h), rtol=0.05)

    def test_short_input_is_plain_variance(self):
        h = np.array([1.0, -1.0, 2.0, -2.0])
        assert long_run_variance(h) == np.mean(h * h)


class TestAgainstOracle:
    @pytest.mark.parametrize("n, lag, eps", [(30, 1, 1.5), (57, 2, 1.0), (120, 1, 0.5),
                                             (200, 2, 1.5)])
    def test_match(self, rng, n, lag, eps):
        x = rng.standard_normal(n)
        y = 0.4 * np.roll(x, 1) ** 2 + rng.standard_normal(n)
        fast = dp_statistic(x, y, lag, eps, standardize=False, min_effective_sample=3)
        t, s = dp_oracle(x, y, lag, eps)
        assert_allclose(fast.t_n, t, rtol=1e-10)
        assert_allclose(fast.s_n, s, rtol=1e-10)

    def test_n50_tight(self, rng):
        x, y = rng.standard_normal((2, 50))
        fast = dp_statistic(x, y, 1, 1.0, standardize=False, min_effective_sample=3)
        t, s = dp_oracle(x, y, 1, 1.0)
        assert_allclose([fast.t_n, fast.s_n], [t, s], rtol=1e-12)

    def test_constant_y_parity(self, rng):
        x = rng.standard_normal(80)
        y = np.full(80, 2.0)
        with pytest.raises(Exception) as fast:
            dp_statistic(x, y, 1, 1.0, standardize=False)
        with pytest.raises(Exception) as slow:
            dp_oracle(x, y, 1, 1.0)
        assert fast.type is slow.type

    def test_degenerate_bandwidth_both(self, rng):
        x, y = rng.standard_normal((2, 60)) * 100
        with pytest.raises(DegenerateBandwidthError):
            dp_statistic(x, y, 1, 1e-6, standardize=False)
        with pytest.raises(DegenerateBandwidthError):
            dp_oracle(x, y, 1, 1e-6)


class TestDpStatistic:
    def test_affine_invariance(self, rng):
        x, y = rng.standard_normal((2, 300))
        a = dp_statistic(x, y, 1, 1.0)
        b = dp_statistic(3 * x - 7, 0.5 * y + 2, 1, 1.0)
        assert_allclose([a.t_n, a.s_n], [b.t_n, b.s_n], rtol=1e-9)

    def test_pvalue_is_one_sided(self, rng):
        x, y = rng.standard_normal((2, 300))
        r = dp_statistic(x, y, 1, 1.0)
        from scipy.stats import norm
        assert_allclose(r.p, norm.sf(r.z))
        assert_allclose(r.z, np.sqrt(r.n_eff) * r.t_n / r.s_n)

    def test_detects_causality(self, rng):
        n = 1500
        x = rng.standard_normal(n)
        y = np.r_[0.0, 0.6 * x[:-1] ** 2] + rng.standard_normal(n)
        assert dp_statistic(x, y, 1).p < 0.01

    def test_constant_series(self, rng):
        with pytest.raises(DegenerateSeriesError):
            dp_statistic(np.ones(100), rng.standard_normal(100))

    def test_min_sample(self, rng):
        x, y = rng.standard_normal((2, 50))
        with pytest.raises(InsufficientSampleError):
            dp_statistic(x, y, 1, 1.0)

    def test_unequal_lengths(self, rng):
        with pytest.raises(ValueError):
            dp_statistic(rng.standard_normal(100), rng.standard_normal(99))

    @pytest.mark.slow
    def test_permuted_cause_has_nominal_size(self):
        from nlcausality.simulation import ProcessSpec, replication_rng, simulate

        spec = ProcessSpec("nonlinear_causal", 1000, seed=31)
        rejections = 0
        for rep in range(500):
            rng = replication_rng(spec.seed, rep)
            xy = simulate(spec, rng)
            rejections += dp_statistic(rng.permutation(xy[:, 0]), xy[:, 1], 1, 1.5).p < 0.05
        assert 0.02 <= rejections / 500 <= 0.09

    def test_deterministic(self, rng):
        x, y = rng.standard_normal((2, 800))
        assert dp_statistic(x, y, 2) == dp_statistic(x, y, 2)


class TestBattery:
    def test_keys_and_shared_radius(self, rng):
        x, y = rng.standard_normal((2, 400))
        out = dp_direction_battery(x, y, lags=(1, 2, 3))
        assert set(out) == {(d, l) for d in ("x->y", "y->x") for l in (1, 2, 3)}
        assert len({o.epsilon for o in out.values()}) == 1
        assert out[("y->x", 2)] == dp_statistic(y, x, 2, bandwidth(400))

    def test_empty_lags(self, rng):
        with pytest.raises(ValueError):
            dp_direction_battery(*rng.standard_normal((2, 100)), lags=())


class TestEstimator:
    def test_fit_attributes(self, rng):
        x, y = rng.standard_normal((2, 300))
        est = DiksPanchenkoTest(lag=2, epsilon=1.2).fit(x, y)
        ref = dp_statistic(x, y, 2, 1.2)
        assert est.result_ == ref
        assert est.pvalue_ == ref.p
        assert est.epsilon_ == 1.2
        assert est.get_params()["lag"] == 2

    def test_clone(self):
        from sklearn.base import clone

        est = clone(DiksPanchenkoTest(epsilon=0.9))
        assert est.epsilon == 0.9
