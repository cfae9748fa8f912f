"""Render an :class:`~nlcausality.analysis.AnalysisResult` to CSV and markdown.

Each table goes to ``<name>.csv`` (machine readable, p-values and star
classes side by side) and ``<name>.md`` (aligned layout with literal ``*``
glyphs).  Every file starts with a provenance block: the package version
plus digests of the configuration and of each input file.  No timestamps
are written, so identical inputs give byte-identical files.
"""

import csv
import io
from pathlib import Path

from . import __version__
from .series import write_series_csv
from .windows import stars

TABLE_FILES = {
    "descriptive": "table1_descriptive",
    "unit_root": "table2_unit_root",
    "bds": "table3_bds",
    "tsay": "table4_tsay",
    "full": "table5_dp_full",
    "expanding": "table6_dp_expanding",
    "anchored_end": "table7_dp_anchored_end",
    "yearly": "table8_dp_yearly",
}

YEARLY_CAVEAT = ("Yearly windows hold roughly 250 observations; the test relies on "
                 "an asymptotic normal approximation, so read these rows with caution.")


def _num(v):
    return "" if v is None else format(float(v), ".10g")


def provenance(result):
    cfg = result.config
    lines = [f"nlcausality {__version__}", f"config sha256: {cfg.digest()}"]
    for ticker, digest in result.data_hashes.items():
        lines.append(f"data sha256 {ticker}: {digest}")
    return lines


def _csv_text(header_lines, columns, rows):
    buf = io.StringIO()
    for line in header_lines:
        buf.write(f"# {line}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    w.writerows(rows)
    return buf.getvalue()


def _md_table(columns, rows, align=None):
    cells = [[str(c) for c in columns]] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(columns))]
    align = align or ["l"] + ["r"] * (len(columns) - 1)

    def fmt(row):
        out = []
        for i, c in enumerate(row):
            out.append(c.ljust(widths[i]) if align[i] == "l" else c.rjust(widths[i]))
        return "| " + " | ".join(out) + " |"

    sep = "|" + "|".join(("-" * (w + 1) + ":") if a == "r" else (":" + "-" * (w + 1))
                         for w, a in zip(widths, align)) + "|"
    return "\n".join([fmt(cells[0]), sep] + [fmt(r) for r in cells[1:]]) + "\n"


def _md_text(result, title, body, notes=()):
    head = "<!--\n" + "\n".join(provenance(result)) + "\n-->\n"
    text = f"{head}\n## {title}\n\n{body}"
    if notes:
        text += "\n" + "\n".join(f"{n}  " for n in notes) + "\n"
    return text


STAR_NOTE = "One/two/three asterisks: p-value below 10%, 5%, 1%."


# ---------------------------------------------------------------------------
# tables 1-4
# ---------------------------------------------------------------------------

def descriptive_table(result):
    tickers = [r.ticker for r in result.returns]
    labels = [f"{t}R" for t in tickers]
    stats_ = [result.descriptive[t] for t in tickers]
    fields = [("Mean", "mean"), ("Min", "min"), ("Max", "max"), ("Sd", "sd"),
              ("Skewness", "skewness"), ("Kurtosis", "kurtosis"),
              ("Jarque-Bera", "jarque_bera"), ("JB p-value", "jb_pvalue")]
    csv_rows = [["n_prices"] + [len(p) for p in result.prices],
                ["n_returns"] + [s.n for s in stats_]]
    md_rows = [["Prices (n)"] + [len(p) for p in result.prices],
               ["Returns (n)"] + [s.n for s in stats_]]
    for label, attr in fields:
        csv_rows.append([attr] + [_num(getattr(s, attr)) for s in stats_])
        fmt = "{:.4f}" if attr == "jb_pvalue" else "{:.2f}"
        md_rows.append([label] + [fmt.format(getattr(s, attr)) for s in stats_])
    notes = ["Moments use 1/n normalisation; kurtosis is raw (normal = 3).",
             "Statistics are computed on the returns count; the price count is one larger."]
    return (_csv_text(provenance(result), ["statistic"] + labels, csv_rows),
            _md_text(result, "Descriptive statistics of returns",
                     _md_table(["Statistic"] + labels, md_rows), notes))


def unit_root_table(result):
    csv_rows, md_rows = [], []
    tickers = [r.ticker for r in result.returns]
    by_key = {}
    for row in result.unit_root:
        o = row.outcome
        csv_rows.append([row.ticker, row.series, row.deterministic, o.variant,
                         _num(o.t_stat), o.selected_lag, _num(o.rho2),
                         _num(o.reject_at), _level_stars(o.reject_at)])
        by_key[(row.series, row.deterministic, o.variant, row.ticker)] = o
    for series, label in (("levels", "Series in levels"), ("differences", "Series in first differences")):
        md_rows.append([f"**{label}**"] + ["" for _ in tickers])
        for det, dlabel in (("trend_and_intercept", "With trend and intercept"), ("drift", "With drift")):
            md_rows.append([f"*{dlabel}*"] + ["" for _ in tickers])
            for variant in ("ADF", "RALS"):
                cells = []
                for t in tickers:
                    o = by_key[(series, det, variant, t)]
                    cells.append(f"{o.t_stat:.2f}{_level_stars(o.reject_at)} ({o.selected_lag})")
                md_rows.append([variant] + cells)
    notes = ["Null: unit root. Lag order (in parentheses) selected by BIC.",
             "Levels are 100 x log prices." if result.config.levels == "log"
             else "Levels are raw prices.",
             STAR_NOTE]
    cols = ["ticker", "series", "deterministic", "variant", "t_stat", "lag", "rho2",
            "reject_at", "stars"]
    return (_csv_text(provenance(result), cols, csv_rows),
            _md_text(result, "Unit-root tests", _md_table(["Series"] + tickers, md_rows), notes))


def _level_stars(level):
    return {0.01: "***", 0.05: "**", 0.10: "*"}.get(level, "")


def bds_table(result):
    csv_rows, md_rows = [], []
    mults = None
    for ticker, (out, order) in result.bds.items():
        mults = out.multipliers
        for m, mult, stat, p in out.cells():
            csv_rows.append([f"{ticker}R", order, m, _num(mult),
                             _num(out.epsilons[out.multipliers.index(mult)]),
                             _num(stat), _num(p), stars(p)])
        for a, m in enumerate(out.dims):
            label = f"{ticker}R (AR {order})" if a == 0 else ""
            md_rows.append([label, m] + [f"{out.statistic[a, b]:.2f}{stars(out.pvalue[a, b])}"
                                         for b in range(len(out.multipliers))])
    cols = ["series", "ar_order", "m", "eps_multiplier", "epsilon", "statistic", "pvalue", "stars"]
    md_cols = ["Series", "m / eps"] + [f"{x:g} sd" for x in (mults or ())]
    notes = ["Null: pre-whitened residuals are iid. AR order chosen by BIC.", STAR_NOTE]
    return (_csv_text(provenance(result), cols, csv_rows),
            _md_text(result, "BDS test", _md_table(md_cols, md_rows), notes))


def tsay_table(result):
    tickers = list(result.tsay)
    csv_rows = []
    for t in tickers:
        for o in result.tsay[t]:
            csv_rows.append([f"{t}R", o.lag, _num(o.f_stat), _num(o.pvalue), o.df_num,
                             o.df_den, stars(o.pvalue)])
    lags = [o.lag for o in result.tsay[tickers[0]]] if tickers else []
    md_rows = [[lag] + [f"{result.tsay[t][i].f_stat:.2f}{stars(result.tsay[t][i].pvalue)}"
                        for t in tickers] for i, lag in enumerate(lags)]
    cols = ["series", "lag", "f_stat", "pvalue", "df_num", "df_den", "stars"]
    notes = ["Null: the series is linear.", STAR_NOTE]
    return (_csv_text(provenance(result), cols, csv_rows),
            _md_text(result, "Tsay test", _md_table(["Lag"] + [f"{t}R" for t in tickers], md_rows),
                     notes))


# ---------------------------------------------------------------------------
# causality matrices
# ---------------------------------------------------------------------------

def _dir_id(d):
    return f"{d[0]}->{d[1]}"


def _dir_md(d):
    return f"{d[0]} ↛ {d[1]}"


def _var_lags(row, symbols):
    import itertools
    pairs = list(itertools.combinations(symbols, 2))
    if not row.var_lags:
        return ""
    return "(" + ",".join(str(row.var_lags[p]) for p in pairs) + ")"


def _legend(matrix):
    return ", ".join(f"{s} = {t}R" for s, t in matrix.symbols.items())


def matrix_csv(result, matrix, lags):
    dirs = matrix.directions
    cols = ["window_id", "family", "label", "start", "end", "epsilon", "n", "var_lags", "status"]
    for d in dirs:
        cols += [_dir_id(d), f"{_dir_id(d)}_pmax"] + [f"{_dir_id(d)}_p{l}" for l in lags]
    rows = []
    for row in matrix.rows:
        line = [row.window.window_id, row.window.family, row.window.label,
                str(row.window.start), str(row.window.end), _num(row.epsilon), row.n,
                _var_lags(row, list(matrix.symbols)), row.status]
        for d in dirs:
            ps = [row.outcomes[(d, l)].p for l in lags] if row.available else []
            line += [row.cells.get(d, ""), _num(max(ps)) if ps else ""]
            line += [_num(p) for p in ps] if ps else [""] * len(lags)
        rows.append(line)
    return _csv_text(provenance(result) + [f"directions: {_legend(matrix)}"], cols, rows)


def full_table_md(result, matrix, lags):
    row = matrix.rows[0]
    dirs = matrix.directions
    md_rows = []
    if row.available:
        for l in lags:
            md_rows.append([l] + [stars(row.outcomes[(d, l)].p) for d in dirs])
        md_rows.append(["all"] + [row.cells[d] for d in dirs])
    head = (f"Window {row.window.start} to {row.window.end}, n = {row.n}, "
            f"eps = {row.epsilon:.2f}, VAR lags {_var_lags(row, list(matrix.symbols))}\n\n"
            if row.available else f"Unavailable: {row.status}\n\n")
    notes = [f"Null: the VAR-filtered first series does not Granger-cause the second. {_legend(matrix)}.",
             "VAR lags listed per pair in the order (x,y), (x,z), (y,z).",
             "Row 'all' gives the weakest class reached at every lag.", STAR_NOTE]
    return _md_text(result, "Nonlinear Granger causality, full sample",
                    head + _md_table(["Lag"] + [_dir_md(d) for d in dirs], md_rows), notes)


def window_table_md(result, matrix, title, label_header, flag_years=()):
    dirs = matrix.directions
    yearly = matrix.family == "yearly"
    cols = [label_header] + ([] if yearly else ["eps", "sample size"]) + \
        [_dir_md(d) for d in dirs] + ["VAR lags"] + (["note"] if yearly else [])
    md_rows = []
    for row in matrix.rows:
        if row.available:
            cells = [row.cells[d] for d in dirs]
            lead = [] if yearly else [f"{row.epsilon:.2f}", row.n]
        else:
            cells = ["n/a"] * len(dirs)
            lead = [] if yearly else ["", row.n]
        line = [row.window.label] + lead + cells + [_var_lags(row, list(matrix.symbols))]
        if yearly:
            note = "not in reference table" if int(row.window.label) in flag_years else ""
            if not row.available:
                note = (note + "; " if note else "") + row.status
            line.append(note)
        md_rows.append(line)
    notes = [f"{_legend(matrix)}.",
             "A cell shows the weakest class reached at every lag; blank means "
             "causality fails at one or more lags.", STAR_NOTE]
    if yearly:
        notes.append(YEARLY_CAVEAT)
    align = ["l"] + ["r"] * (len(cols) - 1)
    return _md_text(result, title, _md_table(cols, md_rows, align), notes)


def dp_outcomes_csv(result):
    cols = ["window_id", "direction", "lag", "epsilon", "t_n", "s_n", "z", "p", "stars"]
    rows = []
    for family, matrix in result.matrices.items():
        for row in matrix.rows:
            if not row.available:
                continue
            for d in matrix.directions:
                for lag in sorted({k[1] for k in row.outcomes}):
                    o = row.outcomes[(d, lag)]
                    rows.append([row.window.window_id, _dir_id(d), lag, _num(o.epsilon),
                                 _num(o.t_n), _num(o.s_n), _num(o.z), _num(o.p), stars(o.p)])
    return _csv_text(provenance(result), cols, rows)


def render(result):
    """``{relative path: text}`` for every output file."""
    cfg = result.config
    lags = list(range(1, cfg.lags + 1))
    files = {}

    def put(key, pair):
        csv_text, md_text = pair
        files[TABLE_FILES[key] + ".csv"] = csv_text
        files[TABLE_FILES[key] + ".md"] = md_text

    put("descriptive", descriptive_table(result))
    put("unit_root", unit_root_table(result))
    if result.bds:
        put("bds", bds_table(result))
    if result.tsay:
        put("tsay", tsay_table(result))
    titles = {
        "expanding": ("Nonlinear Granger causality, windows from the first year to the ending year",
                      "Ending year"),
        "anchored_end": ("Nonlinear Granger causality, windows from the starting year to the end",
                         "Starting year"),
        "yearly": ("Nonlinear Granger causality by calendar year", "Year"),
    }
    for family, matrix in result.matrices.items():
        if family == "full":
            md = full_table_md(result, matrix, lags)
        else:
            title, header = titles[family]
            md = window_table_md(result, matrix, title, header, cfg.yearly_flag_years)
        put(family, (matrix_csv(result, matrix, lags), md))
    if result.matrices:
        files["dp_outcomes.csv"] = dp_outcomes_csv(result)
    return files


def write_outputs(result, out_dir):
    """Render everything, then write it (tables and plot data) under ``out_dir``."""
    files = render(result)
    out_dir = Path(out_dir)
    (out_dir / "plot_data").mkdir(parents=True, exist_ok=True)
    for name, text in files.items():
        (out_dir / name).write_text(text, encoding="utf-8", newline="\n")
    for p, r in zip(result.prices, result.returns):
        write_series_csv(out_dir / "plot_data" / f"{p.ticker}_prices.csv", p.dates, p.values)
        write_series_csv(out_dir / "plot_data" / f"{p.ticker}_returns.csv", r.dates, r.values)
    return sorted(files)
