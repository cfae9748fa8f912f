"""Run configuration: a YAML file plus command-line overrides."""

import hashlib
import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import yaml

from .causality import DEFAULT_BETA, DEFAULT_C
from .exceptions import ConfigError
from .windows import FAMILIES

DEFAULT_TSAY_LAGS = (1, 2, 3, 4, 5, 6, 7)


@dataclass
class SeriesInput:
    ticker: str
    path: Path


@dataclass
class BandwidthConfig:
    C: float = DEFAULT_C
    beta: float = DEFAULT_BETA
    floor: float | None = None
    cap: float | None = None
    overrides: dict = field(default_factory=dict)


@dataclass
class RunConfig:
    """Everything a ``run`` needs.

    ``n_jobs`` and ``output_dir`` do not influence results and are left out
    of :meth:`digest`.
    """

    series: list
    start_date: str | None = None
    end_date: str | None = None
    families: tuple = FAMILIES
    lags: int = 5
    min_years: int = 5
    var_max_lag: int = 10
    bandwidth: BandwidthConfig = field(default_factory=BandwidthConfig)
    unit_root_max_lag: int | None = None
    levels: str = "log"
    bds_max_dim: int = 4
    bds_multipliers: tuple = (0.5, 1.0, 1.5, 2.0)
    bds_ar_max_lag: int = 10
    tsay_lags: tuple = DEFAULT_TSAY_LAGS
    yearly_flag_years: tuple = (1988,)
    output_dir: Path = Path("results")
    n_jobs: int = 1

    def validate(self):
        if len(self.series) < 2:
            raise ConfigError("at least two input series are required")
        tickers = [s.ticker for s in self.series]
        if len(set(tickers)) != len(tickers):
            raise ConfigError(f"duplicate tickers: {tickers}")
        bad = set(self.families) - set(FAMILIES)
        if bad:
            raise ConfigError(f"unknown window families: {sorted(bad)}")
        if not self.families and not self.tsay_lags and self.bds_max_dim < 2:
            raise ConfigError("no analysis selected")
        if self.lags < 1:
            raise ConfigError("lags must be at least 1")
        if self.levels not in ("log", "none"):
            raise ConfigError("levels must be 'log' or 'none'")
        if self.n_jobs == 0:
            raise ConfigError("n_jobs must be nonzero")
        if not 0.25 < self.bandwidth.beta < 1.0 / 3.0:
            raise ConfigError("bandwidth beta must lie in (1/4, 1/3)")
        if self.bandwidth.C <= 0:
            raise ConfigError("bandwidth C must be positive")
        for key, eps in self.bandwidth.overrides.items():
            if not float(eps) > 0:
                raise ConfigError(f"epsilon override for {key} must be positive")
        return self

    def digest(self):
        """SHA-256 of the result-relevant settings (paths reduced to tickers)."""
        d = asdict(self)
        d.pop("output_dir")
        d.pop("n_jobs")
        d["series"] = [s["ticker"] for s in d["series"]]
        blob = json.dumps(d, sort_keys=True, default=str).encode()
        return hashlib.sha256(blob).hexdigest()


def _series_list(raw, base):
    out = []
    for item in raw or []:
        if not isinstance(item, dict) or "path" not in item:
            raise ConfigError(f"series entries need 'ticker' and 'path': {item!r}")
        path = Path(item["path"])
        if not path.is_absolute():
            path = base / path
        out.append(SeriesInput(str(item.get("ticker") or path.stem), path))
    return out


def config_from_dict(raw, base=Path(".")):
    """Build a :class:`RunConfig` from a nested mapping (the YAML layout)."""
    raw = dict(raw or {})
    known = {f.name for f in fields(RunConfig)} | {"unit_root", "bds"}
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown configuration keys: {sorted(unknown)}")
    kw = {"series": _series_list(raw.pop("series", []), base)}
    bw = raw.pop("bandwidth", None) or {}
    try:
        kw["bandwidth"] = BandwidthConfig(**bw)
    except TypeError as exc:
        raise ConfigError(f"bandwidth: {exc}") from None
    ur = raw.pop("unit_root", None) or {}
    if "max_lag" in ur:
        kw["unit_root_max_lag"] = ur["max_lag"]
    if "levels" in ur:
        kw["levels"] = ur["levels"]
    bds = raw.pop("bds", None) or {}
    for src, dst in (("max_dim", "bds_max_dim"), ("multipliers", "bds_multipliers"),
                     ("ar_max_lag", "bds_ar_max_lag")):
        if src in bds:
            kw[dst] = bds[src]
    for key in ("families", "bds_multipliers", "tsay_lags", "yearly_flag_years"):
        if key in raw:
            raw[key] = tuple(raw[key])
    if "output_dir" in raw:
        out = Path(raw["output_dir"])
        raw["output_dir"] = out if out.is_absolute() else base / out
    for key in ("bds_multipliers", "tsay_lags"):
        if key in kw:
            kw[key] = tuple(kw[key])
    kw.update(raw)
    for key in ("start_date", "end_date"):
        if kw.get(key) is not None:
            kw[key] = str(kw[key])
    return RunConfig(**kw).validate()


def load_config(path):
    path = Path(path)
    try:
        raw = yaml.safe_load(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"configuration file not found: {path}") from None
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    if raw is not None and not isinstance(raw, dict):
        raise ConfigError(f"{path}: top level must be a mapping")
    return config_from_dict(raw, base=path.parent)
