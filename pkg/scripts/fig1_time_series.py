"""Concurrence time series without and with kicks for S=1 and S=10."""
import sys
from pathlib import Path

from spinkick.cli import main

out = Path(sys.argv[1] if len(sys.argv) > 1 else "results")
out.mkdir(parents=True, exist_ok=True)

runs = {
    "s1_free": ["--spin", "1", "--t-max", "12.6"],
    "s1_kicked": ["--spin", "1", "--kicks", "1.6,3.9", "--t-max", "12.6"],
    "s10_free": ["--spin", "10", "--t-max", "20"],
    "s10_kicked": ["--spin", "10", "--kicks", "1.9,4.2", "--t-max", "20"],
}
for name, args in runs.items():
    code = main(["evolve", *args, "--out", str(out / f"fig1_{name}.csv")])
    if code:
        sys.exit(code)
    print(f"wrote {out / f'fig1_{name}.csv'}")
