#!/usr/bin/env python3
"""Standing-shock displacement versus injected perturbation mass.

Sweeps the perturbation amplitude on the perturbed standing-shock case, prints
one row per amplitude (amplitude, perturbation integral, asymptotic shock
displacement), fits displacement against integral by least squares, and
optionally writes the rows as CSV.
"""

import argparse
import csv

import numpy as np

import schwfv.experiments as ex


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--case", default="testB8")
    ap.add_argument("--cells", type=int, default=256)
    ap.add_argument("--alphas", type=float, nargs="+",
                    default=[round(0.1 * i, 1) for i in range(16)])
    ap.add_argument("--out", default=None, help="optional CSV output path")
    args = ap.parse_args(argv)

    rows = []
    print(f"{'alpha':>6} {'integral':>10} {'displacement':>13}")
    for alpha in args.alphas:
        rep, _ = ex.run_case(args.case, amplitude=alpha, n_cells=args.cells)
        integral = rep["perturbation_integral"] or 0.0
        disp = rep["displacement"] if rep["displacement"] is not None else float("nan")
        rows.append((alpha, integral, disp))
        print(f"{alpha:>6.2f} {integral:>10.5f} {disp:>13.5f}")

    x = np.array([r[1] for r in rows])
    y = np.array([r[2] for r in rows])
    if len(rows) >= 2 and np.ptp(x) > 0:
        slope, intercept = np.polyfit(x, y, 1)
        resid = y - (slope * x + intercept)
        ss_tot = float(np.sum((y - y.mean()) ** 2))
        r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
        print(f"fit: displacement = {slope:.4f} * integral + {intercept:.5f}   R^2 = {r2:.5f}")

    if args.out:
        with open(args.out, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["alpha", "integral", "displacement"])
            w.writerows(rows)
        print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
