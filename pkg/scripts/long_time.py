#!/usr/bin/env python3
"""Long-time behaviour: limit profiles and transient-shock exits.

Runs the Burgers long-time cases to their catalog end times. For the cases with
a predicted limit profile it prints the final L1(v) distance to that limit; for
the transient cases it prints the shock trajectory from the snapshots and
whether the shock has left the domain by the end. --with-euler appends the
Euler shock-drift case (hours of compute at its catalog resolution; downscale
with --euler-cells/--euler-t-end to preview).
"""

import argparse

import schwfv.experiments as ex

LIMIT_CASES = ("testB11", "testB12")
EXIT_CASES = ("testB9", "testB10")


def _trajectory(rep, res):
    locs = [(t, loc) for t, loc in rep["shock_locations"] if loc is not None]
    final = ex.shock_locate(res.final.v, res.grid)
    if not locs:
        return "no shock detected in any snapshot"
    tail = "gone at t_end" if final is None else f"still at r={final:.3f}"
    return f"shock r={locs[0][1]:.3f} -> {locs[-1][1]:.3f} over {len(locs)} snapshots, {tail}"


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--cells", type=int, default=None, help="override grid size")
    ap.add_argument("--with-euler", action="store_true", help="append the Euler drift case")
    ap.add_argument("--euler-amplitude", type=float, default=None)
    ap.add_argument("--euler-cells", type=int, default=None)
    ap.add_argument("--euler-t-end", type=float, default=None)
    args = ap.parse_args(argv)

    overrides = {} if args.cells is None else {"n_cells": args.cells}
    for cid in LIMIT_CASES:
        rep, _ = ex.run_case(cid, **overrides)
        print(f"{cid:<8} L1(v) to limit = {rep['errors']['v']:.4e}  "
              f"({rep['termination']}, {rep['steps']} steps)")
    for cid in EXIT_CASES:
        rep, res = ex.run_case(cid, **overrides)
        print(f"{cid:<8} L1(v) to limit = {rep['errors']['v']:.4e}  {_trajectory(rep, res)}")

    if args.with_euler:
        kw = {}
        if args.euler_amplitude is not None:
            kw["amplitude"] = args.euler_amplitude
        if args.euler_cells is not None:
            kw["n_cells"] = args.euler_cells
        if args.euler_t_end is not None:
            kw["t_end"] = args.euler_t_end
        rep, res = ex.run_case("testE7", **kw)
        disp = rep["displacement"]
        disp_s = f"{disp:.4f}" if disp is not None else "n/a"
        print(f"testE7   displacement = {disp_s}  "
              f"integral = {rep['perturbation_integral']:.5f}  {_trajectory(rep, res)}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
