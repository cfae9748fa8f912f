"""Window families, per-window causality pipeline and star aggregation.

Four families of sample windows are supported:

``full``
    The whole aligned sample.
``expanding``
    From the first observation to the last observation of each ending year.
``anchored_end``
    From the first observation of each starting year to the last observation.
``yearly``
    One calendar year each.

Expanding and anchored windows must span at least ``min_years`` year
boundaries (``end_year - start_year >= min_years``), where for anchored
windows the end year is the last complete calendar year in the data.  The
window that would coincide with the full sample is left out of both
families.  Only complete calendar years get a yearly window; the final year
counts as complete when the data reach December 24 or later.
"""

import itertools
import logging
from dataclasses import dataclass, field

import numpy as np
from joblib import Parallel, delayed

from .causality import DEFAULT_BETA, DEFAULT_C, bandwidth, dp_direction_battery
from .exceptions import NumericalError
from .var import select_var_lag, var_filter

log = logging.getLogger(__name__)

FAMILIES = ("full", "expanding", "anchored_end", "yearly")
SYMBOLS = "xyzuvw"
LEVEL_STARS = ((0.01, "***"), (0.05, "**"), (0.10, "*"))


def stars(p):
    """Significance class of a single p-value."""
    for level, glyph in LEVEL_STARS:
        if p < level:
            return glyph
    return ""


def star_aggregate(p_values):
    """Weakest class reached simultaneously at every lag; blank if any p >= 0.10."""
    p_values = list(p_values)
    if not p_values:
        raise ValueError("need at least one p-value")
    for p in p_values:
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"p-value {p!r} outside [0, 1]")
    return stars(max(p_values))


@dataclass(frozen=True)
class WindowSpec:
    family: str
    label: str
    start: np.datetime64
    end: np.datetime64
    min_years: int = 5

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown window family {self.family!r}")
        if not self.end > self.start:
            raise ValueError("window end must come after its start")

    @property
    def window_id(self):
        return self.family if self.family == "full" else f"{self.family}-{self.label}"


def _year(d):
    return int(str(d)[:4])


def _complete_years(dates):
    years = sorted({_year(d) for d in dates})
    last = dates[-1]
    if last < np.datetime64(f"{_year(last)}-12-24"):
        years = years[:-1]
    return years


def _year_bounds(dates, year):
    sel = dates[(dates >= np.datetime64(f"{year}-01-01")) & (dates <= np.datetime64(f"{year}-12-31"))]
    return sel[0], sel[-1]


def enumerate_windows(dates, family, min_years=5):
    """Windows of one family over the (return) ``dates`` of the aligned sample."""
    dates = np.asarray(dates, dtype="datetime64[D]")
    if dates.size < 2:
        raise ValueError("need at least two dates")
    first, last = dates[0], dates[-1]
    first_year = _year(first)
    complete = _complete_years(dates)
    out = []
    if family == "full":
        return [WindowSpec("full", "full", first, last, min_years)]
    if family == "yearly":
        for y in complete:
            s, e = _year_bounds(dates, y)
            if e > s:
                out.append(WindowSpec("yearly", str(y), s, e, min_years))
        return out
    if family == "expanding":
        for y in complete:
            if y == first_year:
                continue
            _, e = _year_bounds(dates, y)
            if e == last:
                continue
            if y - first_year < min_years:
                log.warning("skipping expanding window ending %d: spans %d < %d years",
                            y, y - first_year, min_years)
                continue
            out.append(WindowSpec("expanding", str(y), first, e, min_years))
        return out
    if family == "anchored_end":
        end_year = complete[-1] if complete else _year(last)
        for y in sorted({_year(d) for d in dates}):
            if y == first_year:
                continue
            if end_year - y < min_years:
                if y <= end_year:
                    log.warning("skipping anchored window starting %d: spans %d < %d years",
                                y, end_year - y, min_years)
                continue
            s, _ = _year_bounds(dates, y)
            out.append(WindowSpec("anchored_end", str(y), s, last, min_years))
        return out
    raise ValueError(f"unknown window family {family!r}")


@dataclass(frozen=True)
class PipelineSettings:
    lags: tuple = (1, 2, 3, 4, 5)
    var_max_lag: int = 10
    C: float = DEFAULT_C
    beta: float = DEFAULT_BETA
    floor: float | None = None
    cap: float | None = None
    epsilon_overrides: dict = field(default_factory=dict)


@dataclass
class MatrixRow:
    """One window of a causality matrix."""

    window: WindowSpec
    n: int
    epsilon: float | None
    var_lags: dict
    cells: dict
    outcomes: dict
    status: str = "ok"

    @property
    def available(self):
        return self.status == "ok"


@dataclass
class CausalityMatrix:
    family: str
    symbols: dict
    directions: list
    rows: list


def directions_for(symbols):
    """``[(a, b), ...]`` in the order x->y, y->x, x->z, z->x, y->z, z->y."""
    out = []
    for a, b in itertools.combinations(symbols, 2):
        out.extend([(a, b), (b, a)])
    return out


def run_pipeline(window, returns, settings=PipelineSettings()):
    """VAR-filter every pair in the window and run the two-way test battery.

    ``returns`` maps a symbol (``"x"``, ``"y"``, ...) to an aligned
    :class:`~nlcausality.series.ReturnSeries`.
    """
    symbols = list(returns)
    sliced = {s: r.between(window.start, window.end) for s, r in returns.items()}
    n = len(sliced[symbols[0]])
    dirs = directions_for(symbols)
    try:
        eps = settings.epsilon_overrides.get(window.window_id)
        if eps is None:
            eps = bandwidth(n, settings.C, settings.beta, settings.floor, settings.cap)
        var_lags, outcomes = {}, {}
        for a, b in itertools.combinations(symbols, 2):
            ra, rb = sliced[a].values, sliced[b].values
            p = select_var_lag(ra, rb, settings.var_max_lag)
            ea, eb = var_filter(ra, rb, p)
            var_lags[(a, b)] = p
            battery = dp_direction_battery(ea, eb, settings.lags, epsilon=eps)
            for (direction, lag), res in battery.items():
                key = (a, b) if direction == "x->y" else (b, a)
                outcomes[(key, lag)] = res
    except (NumericalError, ValueError) as exc:
        log.warning("window %s unavailable: %s", window.window_id, exc)
        return MatrixRow(window, n, None, {}, {d: "" for d in dirs}, {},
                         status=f"unavailable: {exc}")
    cells = {d: star_aggregate(outcomes[(d, lag)].p for lag in settings.lags) for d in dirs}
    return MatrixRow(window, n, float(eps), var_lags, cells, outcomes)


def run_family(family, returns, settings=PipelineSettings(), min_years=5, n_jobs=1,
               windows=None):
    """Causality matrix for one window family (rows in chronological order)."""
    symbols = list(returns)
    dates = returns[symbols[0]].dates
    if windows is None:
        windows = enumerate_windows(dates, family, min_years)
    if n_jobs == 1 or len(windows) <= 1:
        rows = [run_pipeline(w, returns, settings) for w in windows]
    else:
        rows = Parallel(n_jobs=n_jobs)(delayed(run_pipeline)(w, returns, settings)
                                       for w in windows)
    return CausalityMatrix(family, {s: returns[s].ticker for s in symbols},
                           directions_for(symbols), list(rows))
