import numpy as np
import pytest
from numpy.testing import assert_allclose

from nlcausality.exceptions import AlignmentError, DegenerateSeriesError, IngestionError
from nlcausality.series import (PriceSeries, ReturnSeries, align, describe, read_price_csv,
                                to_returns, write_price_csv)


def _prices(values, start="2020-01-01", ticker="T"):
    dates = np.datetime64(start) + np.arange(len(values))
    return PriceSeries(ticker, dates, values)


class TestPriceSeries:
    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError, match="positive"):
            _prices([1.0, 0.0, 2.0])

    def test_rejects_nan(self):
        with pytest.raises(ValueError, match="NaN"):
            _prices([1.0, np.nan])

    def test_rejects_unsorted_dates(self):
        with pytest.raises(ValueError, match="increasing"):
            PriceSeries("T", ["2020-01-02", "2020-01-01"], [1.0, 2.0])


class TestAlign:
    def test_intersection(self):
        a = PriceSeries("A", ["2020-01-01", "2020-01-02", "2020-01-03"], [1.0, 2.0, 3.0])
        b = PriceSeries("B", ["2020-01-02", "2020-01-03", "2020-01-04"], [5.0, 6.0, 7.0])
        a2, b2 = align([a, b])
        assert list(a2.dates.astype(str)) == ["2020-01-02", "2020-01-03"]
        assert_allclose(a2.values, [2.0, 3.0])
        assert_allclose(b2.values, [5.0, 6.0])

    def test_holiday_dropped(self):
        d = np.datetime64("2020-01-01") + np.arange(6)
        a = PriceSeries("A", d, np.arange(1.0, 7.0))
        b = PriceSeries("B", np.delete(d, 3), np.arange(1.0, 6.0))
        c = PriceSeries("C", d, np.arange(2.0, 8.0))
        out = align([a, b, c])
        assert all(np.array_equal(s.dates, np.delete(d, 3)) for s in out)
        assert_allclose(out[2].values, [2, 3, 4, 6, 7])

    def test_identical_calendars_unchanged(self):
        a = _prices([1.0, 2.0, 3.0])
        b = _prices([4.0, 5.0, 6.0], ticker="B")
        a2, b2 = align([a, b])
        assert np.array_equal(a2.values, a.values) and np.array_equal(b2.dates, b.dates)

    def test_disjoint(self):
        a = PriceSeries("A", ["2020-01-01"], [1.0])
        b = PriceSeries("B", ["2021-01-01"], [1.0])
        with pytest.raises(AlignmentError):
            align([a, b])


class TestReturns:
    def test_sum_telescopes(self, rng):
        p = _prices(np.exp(np.cumsum(rng.normal(0, 0.01, 300))) * 50)
        r = to_returns(p)
        assert len(r) == len(p) - 1
        assert_allclose(r.values.sum(), 100 * np.log(p.values[-1] / p.values[0]), rtol=1e-12)

    def test_closed_forms(self):
        assert to_returns(_prices([100.0, 100.0])).values.tolist() == [0.0]
        assert_allclose(to_returns(_prices([100.0, 100.0 * np.exp(0.01)])).values, [1.0],
                        rtol=1e-12)

    def test_nonpositive_price(self):
        p = _prices([1.0, 2.0])
        object.__setattr__(p, "values", np.array([1.0, -2.0]))
        with pytest.raises(ValueError):
            to_returns(p)

    def test_dated_by_later_price(self):
        p = _prices([1.0, 2.0, 4.0])
        r = to_returns(p)
        assert r.dates[0] == p.dates[1]
        assert_allclose(r.values, 100 * np.log(2.0))

    @pytest.mark.parametrize("scale", [2.0, 0.5, 1024.0])
    def test_power_of_two_scaling_bit_identical(self, rng, scale):
        p = _prices(np.exp(rng.normal(0, 0.1, 100)) * 10)
        q = _prices(p.values * scale)
        assert np.array_equal(to_returns(p).values, to_returns(q).values)

    def test_general_scaling(self, rng):
        p = _prices(np.exp(rng.normal(0, 0.1, 100)) * 10)
        q = _prices(p.values * 3.7)
        assert_allclose(to_returns(p).values, to_returns(q).values, rtol=0, atol=1e-12)


class TestDescribe:
    def test_jb_identity(self, rng):
        d = describe(rng.standard_t(5, 1000))
        assert d.jarque_bera == d.n * (d.skewness ** 2 / 6 + (d.kurtosis - 3) ** 2 / 24)

    def test_two_point_distribution(self):
        d = describe(np.tile([-1.0, 1.0], 50))
        assert d.skewness == 0.0
        assert d.kurtosis == 1.0
        assert d.sd == 1.0
        assert_allclose(d.jarque_bera, 100 * 4 / 24)

    def test_against_scipy(self, rng):
        from scipy import stats

        x = rng.gamma(2.0, size=500)
        d = describe(x)
        assert_allclose(d.skewness, stats.skew(x), rtol=1e-12)
        assert_allclose(d.kurtosis, stats.kurtosis(x, fisher=False), rtol=1e-12)
        assert_allclose(d.jarque_bera, stats.jarque_bera(x).statistic, rtol=1e-10)

    def test_large_normal_samples(self):
        passes = 0
        for seed in range(20):
            d = describe(np.random.default_rng(seed).standard_normal(10 ** 6))
            assert abs(d.kurtosis - 3.0) < 0.05
            passes += d.jb_pvalue > 0.01
        assert passes >= 19

    def test_published_scale_jb(self):
        # Recomputing the statistic from printed moments gives the printed magnitude.
        n, s, k = 7350, -1.28, 30.90
        jb = n * (s * s / 6 + (k - 3) ** 2 / 24)
        assert 2.3e5 < jb < 2.5e5

    def test_constant_series(self):
        with pytest.raises(DegenerateSeriesError):
            describe(np.ones(20))

    def test_too_short(self):
        with pytest.raises(ValueError):
            describe(np.arange(5.0))

    def test_accepts_return_series(self):
        r = ReturnSeries("T", np.arange(10).astype("datetime64[D]"), np.arange(10.0))
        assert describe(r).n == 10


class TestCsv:
    def test_round_trip(self, tmp_path, rng):
        p = _prices(np.exp(rng.normal(0, 0.1, 20)) * 10)
        path = tmp_path / "p.csv"
        write_price_csv(path, p.dates, p.values)
        q = read_price_csv(path, "T")
        assert np.array_equal(p.values, q.values)
        assert np.array_equal(p.dates, q.dates)

    @pytest.mark.parametrize("text, match", [
        ("when,price\n2020-01-01,1\n", "header"),
        ("date,price\n2020-01-01,\n", "2"),
        ("date,price\n2020-01-01,-1\n", "invalid price"),
        ("date,price\n2020-13-01,1\n", "month"),
        ("date,price\n2020-01-02,1\n2020-01-01,2\n", "increasing"),
        ("date,price\n", "no observations"),
    ])
    def test_bad_files(self, tmp_path, text, match):
        path = tmp_path / "bad.csv"
        path.write_text(text)
        with pytest.raises(IngestionError, match=match):
            read_price_csv(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(IngestionError, match="not found"):
            read_price_csv(tmp_path / "nope.csv", "GOLD")
