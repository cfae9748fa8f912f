"""Nonparametric Granger causality between daily asset returns.

The package bundles a Diks-Panchenko nonlinear causality test with the
preprocessing and diagnostic tests it depends on, plus a harness that runs
the whole pipeline over families of sample windows.
"""

__version__ = "0.1.0"

import logging

logging.getLogger(__name__).addHandler(logging.NullHandler())

from .causality import (DiksPanchenkoTest, DpOutcome, bandwidth, dp_direction_battery,
                        dp_statistic, local_density)
from .exceptions import (AlignmentError, ConfigError, DegenerateBandwidthError,
                         DegenerateSeriesError, EstimationError, IngestionError,
                         InsufficientSampleError, NLCausalityError, NumericalDegeneracyError,
                         NumericalError)
from .nonlinearity import (ARPrewhitener, BDSTest, BdsOutcome, TsayOutcome, TsayTest,
                           bds_test, prewhiten, tsay_test)
from .series import (DescriptiveStats, PriceSeries, ReturnSeries, align, describe,
                     read_price_csv, to_returns)
from .simulation import ProcessSpec, SizePowerReport, dp_oracle, simulate, size_power
from .stationarity import (ADFTest, RALSTest, UnitRootOutcome, UnitRootSpec, adf_test,
                           rals_adf_test)
from .var import VARFilter, select_var_lag, var_filter
from .windows import WindowSpec, enumerate_windows, run_family, run_pipeline, star_aggregate

__all__ = [
    "ADFTest", "ARPrewhitener", "AlignmentError", "BDSTest", "BdsOutcome", "ConfigError",
    "DegenerateBandwidthError", "DegenerateSeriesError", "DescriptiveStats",
    "DiksPanchenkoTest", "DpOutcome", "EstimationError", "IngestionError",
    "InsufficientSampleError", "NLCausalityError", "NumericalDegeneracyError",
    "NumericalError", "PriceSeries", "ProcessSpec", "RALSTest", "ReturnSeries",
    "SizePowerReport", "TsayOutcome", "TsayTest", "UnitRootOutcome", "UnitRootSpec",
    "VARFilter", "WindowSpec", "adf_test", "align", "bandwidth", "bds_test", "describe",
    "dp_direction_battery", "dp_oracle", "dp_statistic", "enumerate_windows",
    "local_density", "prewhiten", "rals_adf_test", "read_price_csv", "run_family",
    "run_pipeline", "select_var_lag", "simulate", "size_power", "star_aggregate",
    "to_returns", "tsay_test", "var_filter",
]
