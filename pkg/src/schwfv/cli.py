"""Command-line front end: single runs, the acceptance suite, convergence studies.

Exit codes: 0 success, 1 configuration error, 2 solver abort.
CSV schema: header ``t,r,v,rho`` (rho blank for the scalar model), one block per
snapshot, blocks separated by one blank line, floats at 17 significant digits so
parsing them back reproduces the arrays bit-for-bit.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor, as_completed
from pathlib import Path

import numpy as np

from . import acceptance
from . import experiments as ex
from .grid import (
    AVERAGING_RULES,
    BURGERS_FLUXES,
    EULER_FLUXES,
    MODELS,
    RIGHT_BCS,
    ConfigError,
)

# -- CSV -------------------------------------------------------------------------------------

CSV_HEADER = "t,r,v,rho"


def write_snapshots_csv(path, result) -> None:
    """All stored snapshots as blank-line-separated blocks under one header."""
    with open(path, "w") as fh:
        fh.write(CSV_HEADER + "\n")
        for idx, snap in enumerate(result.snapshots):
            if idx:
                fh.write("\n")
            rho = snap.rho if snap.rho is not None else [None] * snap.r.size
            for r, v, d in zip(snap.r, snap.v, rho):
                tail = "" if d is None else f"{d:.17g}"
                fh.write(f"{snap.t:.17g},{r:.17g},{v:.17g},{tail}\n")


def read_snapshots_csv(path):
    """Parse the snapshots CSV back into a list of dicts with t/r/v/rho arrays."""
    blocks, rows = [], []
    with open(path) as fh:
        header = fh.readline().strip()
        if header != CSV_HEADER:
            raise ConfigError(f"unexpected CSV header {header!r}; want {CSV_HEADER!r}")
        for line in fh:
            line = line.strip()
            if not line:
                if rows:
                    blocks.append(rows)
                    rows = []
                continue
            t, r, v, rho = line.split(",")
            rows.append((float(t), float(r), float(v), float(rho) if rho else None))
    if rows:
        blocks.append(rows)
    out = []
    for rows in blocks:
        has_rho = rows[0][3] is not None
        out.append({
            "t": rows[0][0],
            "r": np.array([row[1] for row in rows]),
            "v": np.array([row[2] for row in rows]),
            "rho": np.array([row[3] for row in rows]) if has_rho else None,
        })
    return out


# -- run -------------------------------------------------------------------------------------


def cmd_run(args) -> int:
    if args.model == "euler" and args.order == 3:
        raise ConfigError("order 3 unsupported for euler")
    if not args.test:
        raise ConfigError(f"missing --test; known ids: {', '.join(ex.case_ids())}")
    case = ex.get_case(args.test)
    if args.model and args.model != case.model:
        raise ConfigError(f"{args.test} is a {case.model} case, not {args.model}")

    report, result = ex.run_case(
        args.test,
        order=args.order,
        well_balanced=args.wb,
        flux=args.flux or "",
        n_cells=args.cells,
        cfl=args.cfl,
        t_end=args.t_end,
        averaging=args.averaging or "",
        right_bc=args.right_bc,
        amplitude=args.amplitude,
    )

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_snapshots_csv(out / "snapshots.csv", result)
    with open(out / "result.json", "w") as fh:
        json.dump(report, fh, indent=2, default=float)

    print(f"{args.test}: termination={report['termination']} steps={report['steps']} "
          f"wall={report['wall_time']:.2f}s")
    if report["errors"]["v"] is not None:
        line = f"L1(v) vs {report['reference_kind']} = {report['errors']['v']:.6e}"
        if report["errors"]["rho"] is not None:
            line += f"; L1(rho) = {report['errors']['rho']:.6e}"
        print(line)
    if report["displacement"] is not None:
        print(f"displacement = {report['displacement']:.6e}")
    print(f"wrote {out / 'snapshots.csv'} and {out / 'result.json'}")
    if report["termination"] == "error":
        print(f"solver abort: {report.get('error', 'unknown')}", file=sys.stderr)
        return 2
    return 0


# -- suite -----------------------------------------------------------------------------------


def cmd_suite(args) -> int:
    nums = acceptance.criteria_for_tier(args.tier)
    jobs = args.jobs or min(len(nums), os.cpu_count() or 1)
    results: dict[int, list] = {}
    errors: dict[int, str] = {}
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = {pool.submit(acceptance.run_criterion, n): n for n in nums}
            for fut in as_completed(futures):
                n = futures[fut]
                try:
                    results[n] = fut.result()
                except Exception as exc:  # worker failure is a suite failure, not a crash
                    errors[n] = f"{type(exc).__name__}: {exc}"
    else:
        for n in nums:
            try:
                results[n] = acceptance.run_criterion(n)
            except Exception as exc:
                errors[n] = f"{type(exc).__name__}: {exc}"

    criteria_meta = acceptance.thresholds()["criteria"]
    all_ok = True
    report_rows = []
    for n in nums:
        title = criteria_meta[str(n)]["title"]
        if n in errors:
            all_ok = False
            print(f"[ERROR] {n:>2}. {title}: {errors[n]}")
            report_rows.append({"criterion": n, "title": title, "gate_ok": False,
                                "error": errors[n], "checks": []})
            continue
        rows = results[n]
        ok = all(r.gate_ok for r in rows)
        all_ok &= ok
        print(f"[{'PASS' if ok else 'FAIL'}] {n:>2}. {title}")
        for r in rows:
            print("    " + r.line())
        report_rows.append({"criterion": n, "title": title, "gate_ok": ok,
                            "error": None, "checks": [r.as_dict() for r in rows]})

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    report_path = out / "suite_report.json"
    with open(report_path, "w") as fh:
        json.dump({"tier": args.tier, "all_pass": all_ok, "criteria": report_rows},
                  fh, indent=2, default=float)
    verdict = "PASS" if all_ok else "FAIL"
    print(f"suite [{args.tier}]: {verdict} ({len(nums)} criteria); report at {report_path}")
    return 0 if all_ok else 1


# -- convergence -----------------------------------------------------------------------------


def cmd_convergence(args) -> int:
    study = ex.convergence_study(args.model, args.order, well_balanced=args.wb,
                                 meshes=args.meshes, ref_cells=args.ref_cells)
    print(f"{args.model} order {args.order} ({'WB' if args.wb else 'non-WB'}), "
          f"reference {args.ref_cells} cells")
    print(f"{'cells':>8} {'L1 error':>14} {'order':>8}")
    for i, (n, err) in enumerate(zip(study["meshes"], study["errors"])):
        order = f"{study['observed_orders'][i - 1]:8.3f}" if i else " " * 8
        print(f"{n:>8} {err:>14.6e} {order}")
    return 0


# -- parser ----------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="schwfv",
        description="Finite-volume runs of relativistic Burgers/Euler flows on a "
                    "Schwarzschild background.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one benchmark case, write CSV + JSON")
    p_run.add_argument("--test", help="benchmark id (see `suite` or the README catalog)")
    p_run.add_argument("--model", choices=MODELS, help="sanity check against the case's model")
    p_run.add_argument("--order", type=int, default=1, help="scheme order (1-3)")
    p_run.add_argument("--wb", action=argparse.BooleanOptionalAction, default=True,
                       help="well-balanced reconstruction/source (--no-wb for standard)")
    p_run.add_argument("--flux", choices=sorted(set(BURGERS_FLUXES + EULER_FLUXES)),
                       help="numerical flux (defaults per model)")
    p_run.add_argument("--cells", type=int, help="override the case's mesh size")
    p_run.add_argument("--cfl", type=float, default=0.5)
    p_run.add_argument("--t-end", type=float, help="override the case's end time")
    p_run.add_argument("--averaging", choices=AVERAGING_RULES,
                       help="cell-average rule (defaults per order)")
    p_run.add_argument("--right-bc", choices=RIGHT_BCS, help="outer-boundary ghost rule")
    p_run.add_argument("--amplitude", type=float,
                       help="perturbation amplitude for the family cases")
    p_run.add_argument("--out", default="out", help="output directory (default: out)")
    p_run.set_defaults(func=cmd_run)

    p_suite = sub.add_parser("suite", help="run the acceptance suite, write suite_report.json")
    p_suite.add_argument("--tier", choices=("fast", "full", "slow"), default="fast")
    p_suite.add_argument("--out", default="out", help="report directory (default: out)")
    p_suite.add_argument("--jobs", type=int, help="worker processes (default: cpu count)")
    p_suite.set_defaults(func=cmd_suite)

    p_conv = sub.add_parser("convergence", help="observed L1 orders on smooth data")
    p_conv.add_argument("--model", choices=MODELS, required=True)
    p_conv.add_argument("--order", type=int, required=True)
    p_conv.add_argument("--meshes", type=int, nargs="+", default=[128, 256, 512])
    p_conv.add_argument("--ref-cells", type=int, default=4096)
    p_conv.add_argument("--wb", action=argparse.BooleanOptionalAction, default=True)
    p_conv.set_defaults(func=cmd_convergence)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
