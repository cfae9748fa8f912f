from pathlib import Path

import numpy as np
import pytest

from nlcausality.config import SeriesInput
from nlcausality.series import write_price_csv
from nlcausality.simulation import synthetic_prices


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def price_dir(tmp_path_factory):
    """Three synthetic price files covering 2000-2006 plus a config file."""
    root = tmp_path_factory.mktemp("prices")
    for ticker, dates, prices in synthetic_prices("2000-01-03", "2006-12-31", seed=3):
        write_price_csv(root / f"{ticker}.csv", dates, prices)
    (root / "config.yaml").write_text(
        "series:\n"
        "  - {ticker: AAA, path: AAA.csv}\n"
        "  - {ticker: BBB, path: BBB.csv}\n"
        "  - {ticker: CCC, path: CCC.csv}\n"
        "families: [full, yearly]\n"
        "output_dir: out\n",
        encoding="utf-8",
    )
    return root


@pytest.fixture(scope="session")
def price_inputs(price_dir):
    return [SeriesInput(t, Path(price_dir) / f"{t}.csv") for t in ("AAA", "BBB", "CCC")]


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for res in sorted(mod.RESULTS, key=lambda r: (r.cid[0], int(r.cid[1:]))):
        terminalreporter.write_line(res.line())
