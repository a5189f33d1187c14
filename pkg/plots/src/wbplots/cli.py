"""plot: render figures from solver CSV/JSON outputs."""

import argparse
import sys

from .figures import plot_displacement, plot_profiles
from .io import PlotDataError


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="plot", description=__doc__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("profiles", help="v(r)/rho(r) panels at selected times")
    p.add_argument("csv", help="snapshots.csv from a run")
    p.add_argument("--times", type=float, nargs="+", default=None,
                   help="snapshot times to plot (default: all blocks)")
    p.add_argument("--ref", default="none",
                   help='"initial", a reference CSV path, or "none"')
    p.add_argument("--out", default="profiles.png")
    p.add_argument("--title", default=None)

    d = sub.add_parser("displacement", help="shock displacement vs perturbation mass")
    d.add_argument("report", help="suite_report.json carrying displacement rows")
    d.add_argument("--criterion", type=int, default=None,
                   help="pick one criterion's rows when several carry a table")
    d.add_argument("--out", default="displacement.png")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.cmd == "profiles":
            plot_profiles(args.csv, args.times, args.out, ref=args.ref, title=args.title)
        else:
            plot_displacement(args.report, args.out, criterion=args.criterion)
    except (PlotDataError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
