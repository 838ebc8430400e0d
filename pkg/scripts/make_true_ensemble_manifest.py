#!/usr/bin/env python3
"""Combine the final snapshots of independent runs into one synthetic manifest.

A "true ensemble" averages fully trained models started from different seeds.
This script reads each run's manifest, takes its last snapshot, and writes a
new manifest referencing those files, ready for `snapens ensemble`:

    snapens sweep recipes/true_ensemble
    python scripts/make_true_ensemble_manifest.py runs/true_ensemble_seed*/ \
        --out runs/true_ensemble.manifest
    snapens ensemble --manifest runs/true_ensemble.manifest \
        --data runs/true_ensemble_seed101/test.csv

The digest field hashes the member filenames; member snapshots keep their own
per-run config digests.
"""
import argparse
import hashlib
import os
import sys

from snapens.store import ManifestFile, read_manifest, write_manifest


def run(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("run_dirs", nargs="+", help="run directories containing run.manifest")
    parser.add_argument("--out", required=True, help="path of the combined manifest")
    args = parser.parse_args(argv)

    out_dir = os.path.dirname(os.path.abspath(args.out)) or "."
    members = []
    for run_dir in args.run_dirs:
        manifest = read_manifest(os.path.join(run_dir, "run.manifest"))
        final = manifest.snapshot_files[-1]
        members.append(os.path.relpath(os.path.join(run_dir, final), out_dir))
    digest = hashlib.blake2b("\n".join(members).encode(), digest_size=16).digest()
    write_manifest(ManifestFile(digest, tuple(members)), args.out)
    print(f"wrote {args.out} with {len(members)} members")
    return 0


if __name__ == "__main__":
    sys.exit(run())
