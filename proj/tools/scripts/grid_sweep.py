#!/usr/bin/env python3
"""Solve one track over a list of grid sizes and print lap time against cost.

Each row runs `speedid solve` and reads the JSON summary it prints.
"""
import argparse
import csv
import json
import subprocess
import sys
import tempfile
from pathlib import Path

DEFAULT_GRIDS = ["100,50,50", "200,100,100", "400,200,200", "800,400,200"]


def parse_grid(text):
    nv, na, nu = (int(x) for x in text.split(","))
    return nv, na, nu


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--speedid", default="speedid", help="path to the speedid binary")
    ap.add_argument("--grid", action="append", type=parse_grid,
                    help="nv,na,nu (repeatable; default: %s)" % " ".join(DEFAULT_GRIDS))
    ap.add_argument("--segment-length", type=float, action="append",
                    help="segment length in m (repeatable; default 5)")
    ap.add_argument("extra", nargs=argparse.REMAINDER,
                    help="arguments passed to every solve, after --")
    args = ap.parse_args()

    grids = args.grid or [parse_grid(g) for g in DEFAULT_GRIDS]
    lengths = args.segment_length or [5.0]
    extra = [a for a in args.extra if a != "--"]

    out = csv.writer(sys.stdout)
    out.writerow(["segment_length_m", "nv", "na", "nu", "lap_time_s", "root_utility_s", "wall_ms",
                  "hard_violations"])
    with tempfile.TemporaryDirectory() as tmp:
        for s in lengths:
            for nv, na, nu in grids:
                cmd = [args.speedid, "solve", "--segment-length", str(s), "--nv", str(nv), "--na", str(na),
                       "--nu", str(nu), "--out", str(Path(tmp) / "policy.txt"), *extra]
                proc = subprocess.run(cmd, capture_output=True, text=True)
                if proc.returncode != 0:
                    sys.stderr.write(proc.stderr)
                    return proc.returncode
                summary = json.loads(proc.stdout.strip().splitlines()[-1])
                out.writerow([s, nv, na, nu, f"{summary['lap_time_s']:.3f}", f"{summary['root_utility_s']:.3f}",
                              f"{summary['wall_ms']:.1f}", summary["hard_violations"]])
                sys.stdout.flush()
    return 0


if __name__ == "__main__":
    sys.exit(main())
