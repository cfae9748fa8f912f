"""End-to-end computation for a :class:`~nlcausality.config.RunConfig`.

Nothing here writes files; :mod:`nlcausality.report` renders the result.
"""

import hashlib
from dataclasses import dataclass, field

import numpy as np

from .nonlinearity import bds_test, prewhiten, tsay_test
from .series import PriceSeries, align, describe, read_price_csv, to_returns
from .stationarity import UnitRootSpec, adf_test, rals_adf_test
from .windows import SYMBOLS, PipelineSettings, run_family


@dataclass
class UnitRootRow:
    ticker: str
    series: str  # "levels" or "differences"
    deterministic: str
    outcome: object


@dataclass
class AnalysisResult:
    config: object
    data_hashes: dict
    prices: list
    returns: list
    descriptive: dict = field(default_factory=dict)
    unit_root: list = field(default_factory=list)
    bds: dict = field(default_factory=dict)
    tsay: dict = field(default_factory=dict)
    matrices: dict = field(default_factory=dict)

    @property
    def symbols(self):
        return {SYMBOLS[i]: r.ticker for i, r in enumerate(self.returns)}


def file_sha256(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def load_inputs(config):
    """Read, align and clip the configured price files."""
    prices = [read_price_csv(s.path, s.ticker) for s in config.series]
    hashes = {s.ticker: file_sha256(s.path) for s in config.series}
    prices = align(prices)
    if config.start_date or config.end_date:
        lo = np.datetime64(config.start_date or "0001-01-01", "D")
        hi = np.datetime64(config.end_date or "9999-12-31", "D")
        clipped = []
        for p in prices:
            keep = (p.dates >= lo) & (p.dates <= hi)
            clipped.append(PriceSeries(p.ticker, p.dates[keep], p.values[keep]))
        prices = clipped
    return prices, hashes


def run_analysis(config):
    prices, hashes = load_inputs(config)
    if len(prices) > len(SYMBOLS):
        raise ValueError(f"at most {len(SYMBOLS)} series are supported")
    returns = [to_returns(p) for p in prices]
    res = AnalysisResult(config, hashes, prices, returns)

    for r in returns:
        res.descriptive[r.ticker] = describe(r)

    for p, r in zip(prices, returns):
        levels = np.log(p.values) * 100.0 if config.levels == "log" else p.values
        for name, data in (("levels", levels), ("differences", r.values)):
            for det in ("trend_and_intercept", "drift"):
                spec = UnitRootSpec(det, config.unit_root_max_lag)
                res.unit_root.append(UnitRootRow(r.ticker, name, det, adf_test(data, spec)))
                res.unit_root.append(UnitRootRow(r.ticker, name, det, rals_adf_test(data, spec)))

    for r in returns:
        if config.bds_max_dim >= 2:
            resid, order = prewhiten(r, config.bds_ar_max_lag)
            res.bds[r.ticker] = (bds_test(resid, config.bds_max_dim, config.bds_multipliers),
                                 order)
        if config.tsay_lags:
            res.tsay[r.ticker] = [tsay_test(r, k) for k in config.tsay_lags]

    settings = PipelineSettings(
        lags=tuple(range(1, config.lags + 1)),
        var_max_lag=config.var_max_lag,
        C=config.bandwidth.C,
        beta=config.bandwidth.beta,
        floor=config.bandwidth.floor,
        cap=config.bandwidth.cap,
        epsilon_overrides={str(k): float(v) for k, v in config.bandwidth.overrides.items()},
    )
    named = {SYMBOLS[i]: r for i, r in enumerate(returns)}
    for family in config.families:
        res.matrices[family] = run_family(family, named, settings, config.min_years,
                                          n_jobs=config.n_jobs)
    return res
