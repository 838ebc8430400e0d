#!/usr/bin/env python3
"""Train the five baseline recipes and print their full-ensemble test errors.

Equivalent to `snapens sweep recipes/baselines --summary baseline_summary.csv`
but prints a small aligned table at the end. Run from the repository root;
outputs land in runs/.
"""
import argparse
import csv
import pathlib
import sys

from snapens.cli import main as snapens_main

REPO = pathlib.Path(__file__).resolve().parent.parent


def run(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--summary", default="baseline_summary.csv")
    args = parser.parse_args(argv)

    code = snapens_main(["sweep", str(REPO / "recipes" / "baselines"), "--summary", args.summary])
    if code != 0:
        return code

    with open(args.summary, newline="") as fh:
        rows = list(csv.DictReader(fh))
    print()
    print(f"{'config':<14} {'mode':<12} {'snapshots':>9} {'ensemble error':>15}")
    for row in rows:
        print(f"{row['config']:<14} {row['mode']:<12} {row['m']:>9} {float(row['ensemble_error']):>15.4f}")
    return 0


if __name__ == "__main__":
    sys.exit(run())
