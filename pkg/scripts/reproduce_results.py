#!/usr/bin/env python3
"""Regenerate the result set through the command line interface.

Runs desk-scale versions of every survey by default (a few minutes on a
laptop); pass --full for the headline lattice sizes used by the slow
acceptance checks (expect tens of minutes).  Every run leaves a CSV plus a
JSON sidecar in --outdir, which is all the plotting layer needs.
"""

import argparse
import sys
import time

from rotlat.cli import main as rotlat


def run(argv):
    print("$ rotlat " + " ".join(argv), flush=True)
    t0 = time.perf_counter()
    rc = rotlat(argv)
    print(f"  -> exit {rc} in {time.perf_counter() - t0:.1f}s", flush=True)
    if rc != 0:
        sys.exit(rc)


def desk_runs(out):
    o = ["--outdir", out]
    # mesh-refined subcritical spectrum vs the closed-form ladder
    for h in ("0.5", "0.35"):
        nx = str(int(round(20.0 / float(h))) + 1)
        run(["spectrum", "--model", "continuum", "--nx", nx, "--ny", nx,
             "--spacing", h, "--omega", "0.1", "--bigomega", "0.09",
             "--n-states", "6", *o])
    # lattice containment under size refinement (plus the escaping mesh scan)
    run(["contain", "--model", "hubbard", "--omega", "0.3", "--bigomega", "0.15",
         "--axis", "lattice_size", "--levels", "28", "36", *o])
    run(["contain", "--model", "continuum", "--nx", "41", "--ny", "41",
         "--spacing", "0.5", "--omega", "0.2", "--bigomega", "0.25",
         "--axis", "mesh", "--levels", "0.5", "0.35",
         "--eps-energy", "1e-3", "--eps-density", "5e-2", *o])
    # ground energy across the rotation sweep, through the escape threshold
    run(["sweep", "--model", "hubbard", "--nx", "28", "--ny", "28",
         "--omega", "0.4", "--bigomegas", "0.0", "0.1", "0.2", "0.3",
         "0.4", "0.45", "0.5", *o])
    run(["contain", "--model", "hubbard", "--nx", "28", "--ny", "28",
         "--omega", "0.4", "--bracket", "0.2", "0.6", "--bisect-tol", "0.05",
         *o])
    # supercritical lobes: density, currents, and both fermion regimes
    for om in ("0.09", "0.11"):
        run(["density", "--model", "hubbard", "--nx", "80", "--ny", "80",
             "--omega", "0.1", "--bigomega", om, *o])
    run(["currents", "--model", "hubbard", "--nx", "80", "--ny", "80",
         "--omega", "0.1", "--bigomega", "0.11", "--state", "0", *o])
    for om in ("0.09", "0.11"):
        run(["fermions", "--model", "hubbard", "--nx", "61", "--ny", "61",
             "--omega", "0.1", "--bigomega", om, "--n-fermions", "12", *o])


def full_runs(out):
    o = ["--outdir", out]
    for h in ("0.5", "0.35", "0.25"):
        nx = str(int(round(40.0 / float(h))) + 1)
        run(["spectrum", "--model", "continuum", "--nx", nx, "--ny", nx,
             "--spacing", h, "--omega", "0.1", "--bigomega", "0.09",
             "--n-states", "8", *o])
    run(["contain", "--model", "hubbard", "--omega", "0.1", "--bigomega", "0.11",
         "--axis", "lattice_size", "--levels", "100", "150",
         "--n-states", "8", "--tol", "1e-10", *o])
    run(["contain", "--model", "continuum", "--nx", "58", "--ny", "58",
         "--omega", "0.1", "--bigomega", "0.11", "--axis", "mesh",
         "--levels", "0.7071067811865476", "0.5", "0.25",
         "--n-states", "6", "--tol", "1e-8", *o])
    run(["sweep", "--model", "hubbard", "--omega", "0.1",
         "--bigomegas", "0.0", "0.03", "0.06", "0.09", "0.11", "0.12", *o])
    for om in ("0.09", "0.11"):
        run(["density", "--model", "hubbard", "--nx", "150", "--ny", "150",
             "--omega", "0.1", "--bigomega", om, "--tol", "1e-12", *o])
    run(["currents", "--model", "hubbard", "--nx", "150", "--ny", "150",
         "--omega", "0.1", "--bigomega", "0.11", "--state", "0",
         "--tol", "1e-12", *o])
    for om in ("0.09", "0.11"):
        run(["fermions", "--model", "hubbard", "--nx", "111", "--ny", "111",
             "--omega", "0.1", "--bigomega", om, "--n-fermions", "50", *o])


def main():
    ap = argparse.ArgumentParser(description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--outdir", default="runs", help="output directory")
    ap.add_argument("--full", action="store_true",
                    help="headline lattice sizes instead of desk-scale ones")
    args = ap.parse_args()
    t0 = time.perf_counter()
    (full_runs if args.full else desk_runs)(args.outdir)
    print(f"done in {time.perf_counter() - t0:.1f}s -> {args.outdir}/")


if __name__ == "__main__":
    main()
