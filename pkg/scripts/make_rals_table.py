"""Regenerate src/nlcausality/data/rals_critical_values.txt.

    python scripts/make_rals_table.py [--reps 200000] [--T 1000] [--seed 20140101]
"""

import argparse
from pathlib import Path

from nlcausality.stationarity import simulate_rals_table

HEADER = """\
# RALS-ADF critical values as a function of rho^2
# Limit law: rho * tau_DF + sqrt(1 - rho^2) * Z, Z ~ N(0,1) independent of tau_DF.
# tau_DF simulated from {reps} Gaussian random walks of length {T} (seed {seed});
# quantiles at each rho^2 computed from the same draws.
# Regenerate with scripts/make_rals_table.py.
# Format version: 1
# deterministic         level  rho2   critical_value
"""


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--reps", type=int, default=200_000)
    ap.add_argument("--T", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=20140101)
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parents[1]
                    / "src" / "nlcausality" / "data" / "rals_critical_values.txt")
    args = ap.parse_args()
    rows = simulate_rals_table(args.reps, args.T, args.seed)
    with args.out.open("w", encoding="utf-8") as fh:
        fh.write(HEADER.format(reps=args.reps, T=args.T, seed=args.seed))
        for det, level, r2, cv in rows:
            fh.write(f"{det:<23} {level:<6.2f} {r2:<6.2f} {cv:.4f}\n")
    print(f"wrote {len(rows)} rows to {args.out}")


if __name__ == "__main__":
    main()
