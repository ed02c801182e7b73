"""Period-averaged concurrence vs spin, free and with optimized kicks (about a minute at grid 0.05)."""
import sys
from pathlib import Path

from spinkick.cli import main

out = Path(sys.argv[1] if len(sys.argv) > 1 else "results")
grid = sys.argv[2] if len(sys.argv) > 2 else "0.05"
out.mkdir(parents=True, exist_ok=True)
path = out / "fig3_sweep.csv"
sys.exit(main(["sweep", "--spins", "0.5:12", "--grid", grid, "--objective", "max", "--out", str(path), "-v"]))
