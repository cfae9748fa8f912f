import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nlcausality.series import ReturnSeries
from nlcausality.windows import (PipelineSettings, WindowSpec, directions_for, enumerate_windows,
                                 run_family, run_pipeline, star_aggregate, stars)


def business_days(start, end):
    d = np.arange(np.datetime64(start), np.datetime64(end) + 1)
    return d[np.is_busday(d)]


@pytest.fixture(scope="module")
def long_dates():
    return business_days("1986-01-03", "2015-02-05")


class TestStars:
    @pytest.mark.parametrize("pvals, want", [
        ([0.001, 0.009], "***"),
        ([0.001, 0.03], "**"),
        ([0.02, 0.099], "*"),
        ([0.001, 0.10], ""),
    ])
    def test_truth_table(self, pvals, want):
        assert star_aggregate(pvals) == want

    @pytest.mark.parametrize("pvals, want", [
        ([0.005, 0.007, 0.002, 0.009, 0.001], "***"),
        ([0.005, 0.03, 0.04, 0.08, 0.009], "*"),
        ([0.005, 0.2, 0.01, 0.01, 0.01], ""),
    ])
    def test_documented_examples(self, pvals, want):
        assert star_aggregate(pvals) == want

    @given(st.lists(st.floats(0, 1), min_size=1, max_size=6), st.data())
    def test_lowering_a_pvalue_never_weakens(self, pvals, data):
        i = data.draw(st.integers(0, len(pvals) - 1))
        lower = list(pvals)
        lower[i] = data.draw(st.floats(0, pvals[i]))
        assert len(star_aggregate(lower)) >= len(star_aggregate(pvals))

    def test_thresholds_are_strict(self):
        assert stars(0.01) == "**"
        assert stars(0.05) == "*"
        assert stars(0.1) == ""

    @given(st.lists(st.floats(0, 1), min_size=1, max_size=6), st.floats(0, 1))
    def test_adding_a_lag_never_strengthens(self, pvals, extra):
        assert len(star_aggregate(pvals + [extra])) <= len(star_aggregate(pvals))

    @given(st.lists(st.floats(0, 1), min_size=1, max_size=6))
    def test_equals_weakest_lag(self, pvals):
        assert star_aggregate(pvals) == min((stars(p) for p in pvals), key=len)

    @pytest.mark.parametrize("bad", [[], [1.5], [-0.1], [float("nan")]])
    def test_rejects(self, bad):
        with pytest.raises(ValueError):
            star_aggregate(bad)


class TestEnumerate:
    def test_counts(self, long_dates):
        assert len(enumerate_windows(long_dates, "full")) == 1
        exp = enumerate_windows(long_dates, "expanding")
        anc = enumerate_windows(long_dates, "anchored_end")
        yr = enumerate_windows(long_dates, "yearly")
        assert [w.label for w in exp] == [str(y) for y in range(1991, 2015)]
        assert [w.label for w in anc] == [str(y) for y in range(1987, 2010)]
        assert [w.label for w in yr] == [str(y) for y in range(1986, 2015)]

    def test_bounds(self, long_dates):
        exp = enumerate_windows(long_dates, "expanding")
        assert exp[0].start == long_dates[0]
        assert str(exp[0].end) == "1991-12-31"
        anc = enumerate_windows(long_dates, "anchored_end")
        assert str(anc[0].start) == "1987-01-01"
        assert anc[0].end == long_dates[-1]

    def test_year_end_counts_as_complete(self):
        d = business_days("2000-01-03", "2010-12-27")
        assert enumerate_windows(d, "yearly")[-1].label == "2010"
        assert "2010" not in [w.label for w in enumerate_windows(d, "expanding")]

    def test_min_years(self, long_dates):
        exp = enumerate_windows(long_dates, "expanding", min_years=10)
        assert exp[0].label == "1996"

    def test_window_ids(self, long_dates):
        assert enumerate_windows(long_dates, "full")[0].window_id == "full"
        assert enumerate_windows(long_dates, "yearly")[0].window_id == "yearly-1986"

    def test_unknown_family(self, long_dates):
        with pytest.raises(ValueError):
            enumerate_windows(long_dates, "rolling")

    def test_window_spec_order(self):
        with pytest.raises(ValueError):
            WindowSpec("full", "full", np.datetime64("2001-01-01"), np.datetime64("2000-01-01"))


def _returns(rng, n=900):
    dates = business_days("2000-01-03", "2004-12-31")[:n]
    x = rng.standard_normal(n)
    y = np.r_[0.0, 0.6 * x[:-1] ** 2] + rng.standard_normal(n)
    z = rng.standard_normal(n)
    return {s: ReturnSeries(t, dates, v) for s, t, v in
            (("x", "A", x), ("y", "B", y), ("z", "C", z))}


class TestPipeline:
    def test_directions(self):
        assert directions_for("xyz") == [("x", "y"), ("y", "x"), ("x", "z"), ("z", "x"),
                                         ("y", "z"), ("z", "y")]

    def test_full_window(self, rng):
        ret = _returns(rng)
        settings = PipelineSettings(lags=(1, 2), var_max_lag=3)
        w = enumerate_windows(ret["x"].dates, "full")[0]
        row = run_pipeline(w, ret, settings)
        assert row.available
        assert row.cells[("x", "y")] == "***"
        assert set(row.var_lags) == {("x", "y"), ("x", "z"), ("y", "z")}
        assert len(row.outcomes) == 12

    def test_epsilon_override(self, rng):
        ret = _returns(rng)
        settings = PipelineSettings(lags=(1,), var_max_lag=2, epsilon_overrides={"full": 0.8})
        w = enumerate_windows(ret["x"].dates, "full")[0]
        row = run_pipeline(w, ret, settings)
        assert row.epsilon == 0.8
        assert all(o.epsilon == 0.8 for o in row.outcomes.values())

    def test_short_window_unavailable(self, rng):
        ret = _returns(rng)
        d = ret["x"].dates
        w = WindowSpec("yearly", "tiny", d[0], d[30])
        row = run_pipeline(w, ret, PipelineSettings(lags=(1,)))
        assert not row.available
        assert row.status.startswith("unavailable")
        assert row.cells[("x", "y")] == ""

    def test_subset_matches_full_run(self, rng):
        ret = _returns(rng)
        settings = PipelineSettings(lags=(1,), var_max_lag=2)
        full = run_family("yearly", ret, settings)
        part = run_family("yearly", ret, settings, windows=[full.rows[1].window])
        assert part.rows[0].outcomes == full.rows[1].outcomes

    def test_epsilon_nonincreasing_in_sample_size(self, rng):
        ret = _returns(rng)
        rows = run_family("yearly", ret, PipelineSettings(lags=(1,), var_max_lag=2)).rows
        rows = sorted((r for r in rows if r.available), key=lambda r: r.n)
        assert all(a.epsilon >= b.epsilon for a, b in zip(rows, rows[1:]))

    def test_family_parallel_matches_serial(self, rng):
        ret = _returns(rng)
        settings = PipelineSettings(lags=(1,), var_max_lag=2)
        a = run_family("yearly", ret, settings, n_jobs=1)
        b = run_family("yearly", ret, settings, n_jobs=2)
        assert [r.outcomes for r in a.rows] == [r.outcomes for r in b.rows]
