"""Command-line interface: ``nlcausality run | validate | simulate-data``."""

import argparse
import dataclasses
import logging
import sys
from pathlib import Path

import yaml

from . import __version__
from .config import RunConfig, SeriesInput, load_config
from .exceptions import AlignmentError, ConfigError, IngestionError, NumericalError
from .windows import FAMILIES

EXIT_OK = 0
EXIT_VALIDATION_FAILED = 1
EXIT_CONFIG = 2
EXIT_INGESTION = 3
EXIT_NUMERICAL = 4


def _defaults_epilog():
    d = RunConfig(series=[])
    bw = d.bandwidth
    return f"""\
configuration defaults (YAML keys; flags override them):
  families            {", ".join(d.families)}
  lags                {d.lags} (DP embedding lags 1..L, each direction)
  min_years           {d.min_years} (shortest expanding/anchored window, in year boundaries)
  var_max_lag         {d.var_max_lag} (largest VAR order searched by BIC)
  bandwidth.C         {bw.C:.4f}  (eps = C * n^-beta, data standardised to unit variance)
  bandwidth.beta      {bw.beta:.6f} (2/7)
  bandwidth.floor/cap none
  bandwidth.overrides none (map of window id to eps, e.g. full: 0.73, yearly-2008: 1.05)
  unit_root.max_lag   floor(12 * (n/100)^(1/4)) with BIC selection
  unit_root.levels    {d.levels} (levels are 100 * log price; "none" uses raw prices)
  bds.max_dim         {d.bds_max_dim}
  bds.multipliers     {", ".join(f"{m:g}" for m in d.bds_multipliers)} (times the residual sd)
  bds.ar_max_lag      {d.bds_ar_max_lag} (AR pre-whitening order searched by BIC)
  tsay_lags           {", ".join(map(str, d.tsay_lags))}
  yearly_flag_years   {", ".join(map(str, d.yearly_flag_years))}
  output_dir          {d.output_dir}
  n_jobs              {d.n_jobs}

exit codes: 0 success, 1 validation criterion failed, 2 configuration error,
3 ingestion error, 4 numerical failure
"""


def _series_arg(text):
    ticker, sep, path = text.partition("=")
    if not sep or not ticker or not path:
        raise argparse.ArgumentTypeError("expected TICKER=PATH")
    return SeriesInput(ticker, Path(path))


def build_parser():
    fmt = argparse.RawDescriptionHelpFormatter
    p = argparse.ArgumentParser(prog="nlcausality", description=__doc__, epilog=_defaults_epilog(),
                                formatter_class=fmt)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="count", default=0, help="more log output")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the analysis and write tables",
                         epilog=_defaults_epilog(), formatter_class=fmt)
    run.add_argument("--config", type=Path, help="YAML run configuration")
    run.add_argument("--series", type=_series_arg, action="append", metavar="TICKER=PATH",
                     help="input price file (repeatable; replaces the configured series)")
    run.add_argument("--output-dir", type=Path, help="directory for tables (default: results)")
    run.add_argument("--families", nargs="+", choices=FAMILIES, help="window families to run")
    run.add_argument("--lags", type=int, help="DP lags 1..L (default: 5)")
    run.add_argument("--start-date", help="first date kept (ISO)")
    run.add_argument("--end-date", help="last date kept (ISO)")
    run.add_argument("--min-years", type=int, help="minimum window span (default: 5)")
    run.add_argument("--var-max-lag", type=int, help="largest VAR order (default: 10)")
    run.add_argument("--bandwidth-c", type=float, help="bandwidth constant C")
    run.add_argument("--bandwidth-beta", type=float, help="bandwidth exponent beta")
    run.add_argument("--n-jobs", type=int, help="parallel window workers (default: 1)")

    val = sub.add_parser("validate", help="run the acceptance criteria",
                         formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    val.add_argument("--criteria", nargs="+", metavar="ID",
                     help="subset of criteria, e.g. A1 A8 (default: all)")
    val.add_argument("--seed", type=int, default=None,
                     help="master seed (default: 20150205)")
    val.add_argument("--n-jobs", type=int, default=1, help="parallel replication workers")

    sim = sub.add_parser("simulate-data", help="write synthetic price files and a config",
                         formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    sim.add_argument("--out", type=Path, required=True, help="target directory")
    sim.add_argument("--start", default="2000-01-03", help="first business day")
    sim.add_argument("--end", default="2009-12-31", help="last calendar day")
    sim.add_argument("--seed", type=int, default=0, help="generator seed")
    return p


_RUN_OVERRIDES = {
    "output_dir": "output_dir", "families": "families", "lags": "lags",
    "start_date": "start_date", "end_date": "end_date", "min_years": "min_years",
    "var_max_lag": "var_max_lag", "n_jobs": "n_jobs",
}


def config_from_args(args):
    if args.config is not None:
        cfg = load_config(args.config)
    elif args.series:
        cfg = RunConfig(series=args.series)
    else:
        raise ConfigError("give --config or at least two --series TICKER=PATH")
    changes = {}
    if args.series:
        changes["series"] = args.series
    for arg, key in _RUN_OVERRIDES.items():
        value = getattr(args, arg)
        if value is not None:
            changes[key] = tuple(value) if key == "families" else value
    bw = {}
    if args.bandwidth_c is not None:
        bw["C"] = args.bandwidth_c
    if args.bandwidth_beta is not None:
        bw["beta"] = args.bandwidth_beta
    if bw:
        changes["bandwidth"] = dataclasses.replace(cfg.bandwidth, **bw)
    return dataclasses.replace(cfg, **changes).validate()


def cmd_run(args):
    from .analysis import run_analysis
    from .report import write_outputs

    cfg = config_from_args(args)
    result = run_analysis(cfg)
    written = write_outputs(result, cfg.output_dir)
    print(f"wrote {len(written)} files to {cfg.output_dir}")
    return EXIT_OK


def cmd_validate(args):
    from .validation import MASTER_SEED, run_criteria

    seed = MASTER_SEED if args.seed is None else args.seed
    failed = False
    try:
        for res in run_criteria(args.criteria, seed=seed, n_jobs=args.n_jobs):
            print(res.line(), flush=True)
            for rep in res.reports:
                print(f"    {rep}")
            failed |= res.status == "FAIL"
    except KeyError as exc:
        raise ConfigError(exc.args[0]) from None
    return EXIT_VALIDATION_FAILED if failed else EXIT_OK


def cmd_simulate(args):
    from .series import write_price_csv
    from .simulation import synthetic_prices

    args.out.mkdir(parents=True, exist_ok=True)
    series = []
    for ticker, dates, prices in synthetic_prices(args.start, args.end, args.seed):
        write_price_csv(args.out / f"{ticker}.csv", dates, prices)
        series.append({"ticker": ticker, "path": f"{ticker}.csv"})
    cfg = {"series": series, "output_dir": "results"}
    (args.out / "config.yaml").write_text(yaml.safe_dump(cfg, sort_keys=False), encoding="utf-8")
    print(f"wrote {len(series)} price files and config.yaml to {args.out}")
    return EXIT_OK


COMMANDS = {"run": cmd_run, "validate": cmd_validate, "simulate-data": cmd_simulate}


def main(argv=None):
    args = build_parser().parse_args(argv)
    level = logging.WARNING if args.verbose == 0 else logging.INFO if args.verbose == 1 \
        else logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s",
                        stream=sys.stderr)
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (IngestionError, AlignmentError) as exc:
        print(f"ingestion error: {exc}", file=sys.stderr)
        return EXIT_INGESTION
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
