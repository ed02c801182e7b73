"""Optimized kick times for S=1 and S=10, printed as JSON."""
import sys

from spinkick.cli import main

for spin in ("1", "10"):
    code = main(["optimize", "--spin", spin, "--objective", "max", "--refine"])
    if code:
        sys.exit(code)
