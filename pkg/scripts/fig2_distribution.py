"""Long-basis probability snapshots for S=10 before, between and after the kicks."""
import sys
from pathlib import Path

from spinkick.cli import main

out = Path(sys.argv[1] if len(sys.argv) > 1 else "results")
out.mkdir(parents=True, exist_ok=True)
path = out / "fig2_distribution_s10.csv"
sys.exit(main(["distribution", "--spin", "10", "--kicks", "1.9,4.2", "--at", "0,1.0,3.0,6.0", "--out", str(path)]))
