#!/usr/bin/env python3
"""Stationary-preservation error tables for the smooth equilibrium cases.

Runs the Burgers cases (orders 1-3) and the Euler cases (orders 1-2), each with
the well-balanced reconstruction on and off, and prints the final L1 error
against the initial cell averages. Defaults reproduce the catalog setups;
--cells/--t-end downscale for a quick look.
"""

import argparse

import schwfv.experiments as ex

BURGERS_CASES = ("testB1", "testB2", "testB3")
EULER_CASES = ("testE1", "testE2", "testE3")


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--model", choices=("burgers", "euler", "both"), default="both")
    ap.add_argument("--cells", type=int, default=None, help="override grid size")
    ap.add_argument("--t-end", type=float, default=None, help="override end time")
    ap.add_argument("--wb-only", action="store_true", help="skip the non-WB contrast rows")
    args = ap.parse_args(argv)

    overrides = {}
    if args.cells is not None:
        overrides["n_cells"] = args.cells
    if args.t_end is not None:
        overrides["t_end"] = args.t_end
    wb_values = (True,) if args.wb_only else (True, False)

    jobs = []
    if args.model in ("burgers", "both"):
        jobs += [(cid, o, wb) for cid in BURGERS_CASES for o in (1, 2, 3) for wb in wb_values]
    if args.model in ("euler", "both"):
        jobs += [(cid, o, wb) for cid in EULER_CASES for o in (1, 2) for wb in wb_values]

    print(f"{'case':<8} {'order':>5} {'wb':>3} {'L1(v)':>12} {'L1(rho)':>12}  termination")
    for cid, order, wb in jobs:
        rep, _ = ex.run_case(cid, order=order, well_balanced=wb, **overrides)
        rho = rep["errors"]["rho"]
        rho_s = f"{rho:.4e}" if rho is not None else "-"
        print(f"{cid:<8} {order:>5} {'on' if wb else 'off':>3} "
              f"{rep['errors']['v']:>12.4e} {rho_s:>12}  {rep['termination']}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
