"""Daily price series: ingestion, date alignment, log-returns and summary moments."""

import csv
import datetime as dt
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import stats

from .exceptions import AlignmentError, DegenerateSeriesError, IngestionError


def _as_dates(dates):
    return np.asarray(dates, dtype="datetime64[D]")


@dataclass(frozen=True)
class PriceSeries:
    """Positive price levels on strictly increasing calendar dates."""

    ticker: str
    dates: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        dates = _as_dates(self.dates)
        values = np.asarray(self.values, dtype=np.float64)
        if dates.ndim != 1 or values.ndim != 1 or len(dates) != len(values):
            raise ValueError(f"{self.ticker}: dates and values must be 1-d and equally long")
        if len(dates) > 1 and not np.all(dates[1:] > dates[:-1]):
            raise ValueError(f"{self.ticker}: dates must be strictly increasing")
        if not np.all(np.isfinite(values)):
            raise ValueError(f"{self.ticker}: prices contain NaN or infinite values")
        if np.any(values <= 0):
            raise ValueError(f"{self.ticker}: prices must be strictly positive")
        object.__setattr__(self, "dates", dates)
        object.__setattr__(self, "values", values)

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class ReturnSeries:
    """Percentage log-returns, dated by the later of the two prices."""

    ticker: str
    dates: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "dates", _as_dates(self.dates))
        object.__setattr__(self, "values", np.asarray(self.values, dtype=np.float64))

    def __len__(self):
        return len(self.values)

    def between(self, start, end):
        """Sub-series with ``start <= date <= end``."""
        start, end = np.datetime64(start, "D"), np.datetime64(end, "D")
        mask = (self.dates >= start) & (self.dates <= end)
        return ReturnSeries(self.ticker, self.dates[mask], self.values[mask])


@dataclass(frozen=True)
class DescriptiveStats:
    n: int
    mean: float
    min: float
    max: float
    sd: float
    skewness: float
    kurtosis: float
    jarque_bera: float
    jb_pvalue: float


def align(series):
    """Restrict every series to the dates common to all of them.

    Non-common dates are dropped, never interpolated.
    """
    series = list(series)
    if len(series) < 2:
        raise ValueError("align needs at least two series")
    for s in series:
        if len(s) == 0:
            raise AlignmentError(f"{s.ticker}: empty series")
    common = series[0].dates
    for s in series[1:]:
        common = np.intersect1d(common, s.dates, assume_unique=True)
    if common.size == 0:
        raise AlignmentError("series have no dates in common")
    out = []
    for s in series:
        keep = np.isin(s.dates, common, assume_unique=True)
        out.append(PriceSeries(s.ticker, s.dates[keep], s.values[keep]))
    return out


def to_returns(p):
    """Continuously compounded percentage returns ``100 * ln(p[t] / p[t-1])``."""
    if len(p) < 2:
        raise ValueError(f"{p.ticker}: need at least two prices")
    values = np.asarray(p.values, dtype=np.float64)
    if np.any(values <= 0):
        raise ValueError(f"{p.ticker}: log-returns need strictly positive prices")
    r = 100.0 * np.log(values[1:] / values[:-1])
    return ReturnSeries(p.ticker, p.dates[1:], r)


def describe(r):
    """Sample moments with the Jarque-Bera normality statistic.

    Moments use 1/n normalisation and kurtosis is raw (3 for a normal).
    The reported ``sd`` uses the same biased estimator.
    """
    x = np.asarray(getattr(r, "values", r), dtype=np.float64)
    n = x.shape[0]
    if n < 8:
        raise ValueError(f"describe needs at least 8 observations, got {n}")
    mean = float(np.mean(x))
    d = x - mean
    m2 = float(np.mean(d * d))
    if not m2 > 0:
        raise DegenerateSeriesError("series has zero variance")
    m3 = float(np.mean(d ** 3))
    m4 = float(np.mean(d ** 4))
    skew = m3 / m2 ** 1.5
    kurt = m4 / (m2 * m2)
    jb = n * (skew * skew / 6.0 + (kurt - 3.0) ** 2 / 24.0)
    return DescriptiveStats(
        n=n,
        mean=mean,
        min=float(np.min(x)),
        max=float(np.max(x)),
        sd=float(np.sqrt(m2)),
        skewness=skew,
        kurtosis=kurt,
        jarque_bera=jb,
        jb_pvalue=float(stats.chi2.sf(jb, 2)),
    )


def read_price_csv(path, ticker=None):
    """Load a ``date,price`` CSV (ISO dates, UTF-8) into a :class:`PriceSeries`.

    Missing or non-numeric prices are rejected rather than patched.
    """
    path = Path(path)
    ticker = ticker or path.stem
    if not path.is_file():
        raise IngestionError(f"{ticker}: file not found: {path}")
    dates, values = [], []
    try:
        with path.open(newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = [h.strip().lower() for h in next(reader, [])]
            if header[:2] != ["date", "price"]:
                raise IngestionError(f"{path}: expected header 'date,price', got {header}")
            for lineno, row in enumerate(reader, start=2):
                if not row or all(not c.strip() for c in row):
                    continue
                if len(row) < 2:
                    raise IngestionError(f"{path}:{lineno}: expected two fields")
                try:
                    day = dt.date.fromisoformat(row[0].strip())
                    price = float(row[1])
                except ValueError as exc:
                    raise IngestionError(f"{path}:{lineno}: {exc}") from None
                if not np.isfinite(price) or price <= 0:
                    raise IngestionError(f"{path}:{lineno}: invalid price {row[1]!r}")
                dates.append(day)
                values.append(price)
    except UnicodeDecodeError as exc:
        raise IngestionError(f"{path}: not UTF-8 ({exc})") from None
    if not dates:
        raise IngestionError(f"{path}: no observations")
    try:
        return PriceSeries(ticker, np.array(dates, dtype="datetime64[D]"), np.array(values))
    except ValueError as exc:
        raise IngestionError(str(exc)) from None


def write_series_csv(path, dates, values):
    """Write ``date,value`` rows (plot data for external charting)."""
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["date", "value"])
        for d, v in zip(dates, values):
            w.writerow([str(d), repr(float(v))])


def write_price_csv(path, dates, prices):
    """Write a ``date,price`` file readable by :func:`read_price_csv`."""
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["date", "price"])
        for d, p in zip(dates, prices):
            w.writerow([str(d), repr(float(p))])
