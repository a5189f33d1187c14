"""Numbered acceptance checks over the solver library.

Each ``critN_*`` function measures one numbered criterion and returns a list of
CheckResult rows; every threshold it applies is read from ``data/acceptance.json``
so the tolerances live in one machine-readable place.  A row may be marked
``expected_fail``: the measurement is known not to meet the published target,
the gap is documented, and the gate requires it to keep failing (an unexpected
pass is flagged just like a regression).
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from importlib import resources

import numpy as np

from . import experiments as ex
from .burgers import stationary_primitive_b
from .euler import prim_to_cons, roe_average, stationary_constants, stationary_profile_e, steady_shock_jump
from .grid import ConfigError

_THRESHOLDS = None


def thresholds() -> dict:
    """Parsed contents of data/acceptance.json (cached)."""
    global _THRESHOLDS
    if _THRESHOLDS is None:
        path = resources.files("schwfv").joinpath("data/acceptance.json")
        _THRESHOLDS = json.loads(path.read_text())
    return _THRESHOLDS


def _crit(n) -> dict:
    return thresholds()["criteria"][str(n)]


@dataclass
class CheckResult:
    """Outcome of one measured sub-check of a numbered criterion."""

    criterion: int
    name: str
    passed: bool
    measured: str
    require: str
    expected_fail: bool = False
    note: str = ""
    data: dict | None = field(default=None, repr=False)

    @property
    def status(self) -> str:
        if self.passed:
            return "XPASS" if self.expected_fail else "PASS"
        return "XFAIL" if self.expected_fail else "FAIL"

    @property
    def gate_ok(self) -> bool:
        """Expected-fail rows must fail; everything else must pass."""
        return self.passed != self.expected_fail

    def line(self) -> str:
        out = f"[{self.status:5s}] {self.criterion:>2}. {self.name}: {self.measured} (require {self.require})"
        if self.note:
            out += f" -- {self.note}"
        return out

    def as_dict(self) -> dict:
        d = asdict(self)
        d["status"] = self.status
        d["gate_ok"] = self.gate_ok
        return d


def _linfit(x, y):
    """Least-squares line y = a x + b -> (a, b, r_squared)."""
    a, b = np.polyfit(x, y, 1)
    pred = a * x + b
    ss_res = float(np.sum((y - pred) ** 2))
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return float(a), float(b), r2


# -- criteria --------------------------------------------------------------------------------


def crit1_burgers_preservation() -> list[CheckResult]:
    """Stationary Burgers data stays put under the WB schemes, orders 1-3."""
    c = _crit(1)
    out = []
    for cid in c["cases"]:
        for order in c["orders"]:
            rep, _ = ex.run_case(cid, order=order)
            err = rep["errors"]["v"]
            out.append(CheckResult(1, f"{cid}/o{order}", err <= c["l1_max"],
                                   f"L1={err:.3e}", f"<= {c['l1_max']:g}"))
    return out


def crit2_nonwb_contrast() -> list[CheckResult]:
    """The standard (non-WB) schemes drift off the same stationary data."""
    c = _crit(2)
    lo, hi = c["order1_range"]
    rep, _ = ex.run_case("testB1", order=1, well_balanced=False, right_bc=c["right_bc"])
    err1 = rep["errors"]["v"]
    out = [
        CheckResult(2, "nonwb-o1-departs", err1 >= lo, f"L1={err1:.3f}", f">= {lo:g}"),
        CheckResult(2, "nonwb-o1-band", err1 <= hi, f"L1={err1:.3f}", f"<= {hi:g}",
                    expected_fail=True, note=c["order1_upper_expected_fail"]),
    ]
    rep, _ = ex.run_case("testB1", order=3, well_balanced=False, right_bc=c["right_bc"])
    err3 = rep["errors"]["v"]
    out.append(CheckResult(2, "nonwb-o3-departs", err3 >= c["order3_min"],
                           f"L1={err3:.3e}", f">= {c['order3_min']:g}"))
    return out


def crit3_euler_preservation() -> list[CheckResult]:
    """Stationary Euler data stays put, orders 1-2, both numerical fluxes."""
    c = _crit(3)
    xfail = {tuple(p) for p in c["expected_fail_pairs"]}
    out = []
    for cid in c["cases"]:
        for order in c["orders"]:
            for flux in c["fluxes"]:
                rep, _ = ex.run_case(cid, order=order, flux=flux)
                err = max(rep["errors"]["v"], rep["errors"]["rho"])
                expected = (cid, flux) in xfail
                out.append(CheckResult(
                    3, f"{cid}/o{order}/{flux}", err <= c["l1_max"],
                    f"L1(v)={rep['errors']['v']:.3e} L1(rho)={rep['errors']['rho']:.3e}",
                    f"<= {c['l1_max']:g}", expected_fail=expected,
                    note=c["expected_fail_reason"] if expected else ""))
    return out


def crit4_shock_jump() -> list[CheckResult]:
    """Steady-shock jump map hits the closed-form downstream state exactly."""
    c = _crit(4)
    rho_p, v_p = steady_shock_jump(c["rho_minus"], c["v_minus"], c["k"])
    exact = rho_p == c["rho_plus"] and v_p == c["v_plus"]
    out = [CheckResult(4, "jump-exact", exact, f"({rho_p!r}, {v_p!r})",
                       f"== ({c['rho_plus']}, {c['v_plus']}) exactly")]
    M, r = 1.0, 6.0
    fam_m = stationary_constants(c["rho_minus"], c["v_minus"], r, M, c["k"])
    fam_p = stationary_constants(rho_p, v_p, r, M, c["k"])
    resid = abs(fam_m.C2 - fam_p.C2) / abs(fam_m.C2)
    out.append(CheckResult(4, "c2-continuity", resid <= c["c2_residual_max"],
                           f"rel-residual={resid:.2e}", f"<= {c['c2_residual_max']:g}"))
    return out


def crit5_displacement_table() -> list[CheckResult]:
    """Shock displacement grows linearly with the injected perturbation mass."""
    c = _crit(5)
    rows, by_alpha = [], {}
    for alpha, integral_ref, disp_ref in c["table"]:
        rep, _ = ex.run_case("testB8", amplitude=alpha, n_cells=c["n_cells"])
        integral = rep["perturbation_integral"] or 0.0
        rows.append([alpha, integral, rep["displacement"]])
        by_alpha[round(alpha, 3)] = (integral, rep["displacement"], integral_ref, disp_ref)
    out = []
    for alpha in c["integral_alphas"]:
        integral, _, integral_ref, _ = by_alpha[round(alpha, 3)]
        out.append(CheckResult(5, f"integral@{alpha:g}",
                               abs(integral - integral_ref) <= c["integral_tol"],
                               f"{integral:.5f} (ref {integral_ref})",
                               f"within {c['integral_tol']:g}"))
    for alpha in c["gated_alphas"] + c["expected_fail_alphas"]:
        _, disp, _, disp_ref = by_alpha[round(alpha, 3)]
        rel = abs(disp - disp_ref) / disp_ref
        expected = alpha in c["expected_fail_alphas"]
        out.append(CheckResult(5, f"displacement@{alpha:g}", rel <= c["rel_tol"],
                               f"{disp:.5f} (ref {disp_ref}, {100 * rel:.1f}% off)",
                               f"within {100 * c['rel_tol']:.0f}%",
                               expected_fail=expected,
                               note=c["expected_fail_reason"] if expected else ""))
    x = np.array([row[1] for row in rows])
    y = np.array([row[2] for row in rows])
    slope, intercept, r2 = _linfit(x, y)
    out.append(CheckResult(5, "linear-fit-r2", r2 >= c["r2_min"],
                           f"R2={r2:.5f} (slope {slope:.4f})", f">= {c['r2_min']}"))
    mono = bool(np.all(np.diff(y) >= -1e-12))
    out.append(CheckResult(5, "monotone", mono,
                           "non-decreasing" if mono else "decreasing step found",
                           "displacement non-decreasing in alpha"))
    out[0].data = {"rows": rows, "slope": slope, "intercept": intercept, "r2": r2}
    return out


def crit6_zero_average_restoration() -> list[CheckResult]:
    """Zero-mass perturbations leave the standing shock where it started."""
    c = _crit(6)
    out = []
    for cid in c["cases"]:
        rep, res = ex.run_case(cid)
        loc = ex.shock_locate(res.final.v, res.grid)
        tol = c["max_cells_off"] * res.grid.dr
        ok = loc is not None and abs(loc - c["shock_radius"]) <= tol
        meas = ("no shock found" if loc is None
                else f"r={loc:.4f} ({abs(loc - c['shock_radius']) / res.grid.dr:.2f} cells off)")
        out.append(CheckResult(6, cid, ok, meas,
                               f"within {c['max_cells_off']:g} cell of r={c['shock_radius']:g}",
                               data={"displacement": rep["displacement"],
                                     "termination": rep["termination"]}))
    return out


def crit7_long_time_limits() -> list[CheckResult]:
    """Long-run Burgers states land on the predicted limit profiles."""
    c = _crit(7)
    out = []
    for cid in c["limit_cases"]:
        rep, _ = ex.run_case(cid)
        err = rep["errors"]["v"]
        out.append(CheckResult(7, cid, err <= c["l1_max"], f"L1={err:.3e}", f"<= {c['l1_max']:g}"))
    for cid in c["exit_cases"]:
        rep, res = ex.run_case(cid)
        err = rep["errors"]["v"]
        out.append(CheckResult(7, cid, err <= c["l1_max"], f"L1={err:.3e}", f"<= {c['l1_max']:g}"))
        locs = [(t, loc) for t, loc in rep["shock_locations"] if loc is not None]
        final_loc = ex.shock_locate(res.final.v, res.grid)
        moved = (len(locs) >= 2
                 and all(b[1] > a[1] - 1e-12 for a, b in zip(locs, locs[1:]))
                 and locs[-1][1] > locs[0][1] + res.grid.dr)
        ok = moved and final_loc is None
        if locs:
            meas = (f"shock {locs[0][1]:.3f}->{locs[-1][1]:.3f} over {len(locs)} snapshots, "
                    + ("gone at t_end" if final_loc is None else f"still at {final_loc:.3f}"))
        else:
            meas = "no shock detected in any snapshot"
        out.append(CheckResult(7, f"{cid}-transient", ok, meas,
                               "right-moving transient shock, absent at t_end"))
    return out


def crit8_roe_properties() -> list[CheckResult]:
    """Intermediate Roe velocity: bracketing, hand value, and the defining relation."""
    c = _crit(8)
    k = 0.3
    rng = np.random.default_rng(c["seed"])
    n = c["n_pairs"]
    rho_l = 10.0 ** rng.uniform(-1.0, 1.0, n)
    rho_r = 10.0 ** rng.uniform(-1.0, 1.0, n)
    v_l = rng.uniform(-0.95, 0.95, n)
    v_r = rng.uniform(-0.95, 0.95, n)
    keep = np.abs(v_l - v_r) > 1e-6
    rho_l, rho_r, v_l, v_r = rho_l[keep], rho_r[keep], v_l[keep], v_r[keep]
    vm = np.array([roe_average((rl, vl), (rr, vr), k)
                   for rl, vl, rr, vr in zip(rho_l, v_l, rho_r, v_r)])
    lo = np.minimum(v_l, v_r)
    hi = np.maximum(v_l, v_r)
    margin = float(np.min(np.minimum(vm - lo, hi - vm)))
    out = [CheckResult(8, "bracketing", bool(np.all((vm > lo) & (vm < hi))),
                       f"{vm.size} pairs, min margin {margin:.2e}",
                       "v_m strictly inside (min(vL,vR), max(vL,vR))")]
    hand = roe_average((c["hand_pair"]["rho"], c["hand_pair"]["v_left"]),
                       (c["hand_pair"]["rho"], c["hand_pair"]["v_right"]), k)
    dev = abs(hand - (2.0 - np.sqrt(3.0)))
    out.append(CheckResult(8, "hand-value", dev <= c["hand_tol"],
                           f"v_m={hand:.15f} (dev {dev:.2e})", f"2-sqrt(3) to {c['hand_tol']:g}"))
    V_l = prim_to_cons(rho_l, v_l, k)
    V_r = prim_to_cons(rho_r, v_r, k)
    den = 1.0 - k * k * vm * vm
    lhs = ((k * k - vm * vm) / den * (V_r[:, 0] - V_l[:, 0])
           + 2.0 * (1.0 - k * k) * vm / den * (V_r[:, 1] - V_l[:, 1]))
    f2 = lambda rho, v: rho * (v * v + k * k) / (1.0 - v * v)
    resid = float(np.max(np.abs(lhs - (f2(rho_r, v_r) - f2(rho_l, v_l)))))
    out.append(CheckResult(8, "roe-relation", resid <= c["relation_residual_max"],
                           f"max residual {resid:.2e}", f"<= {c['relation_residual_max']:g}"))
    return out


def crit9_euler_displacement_slow() -> list[CheckResult]:
    """Euler shock displacement across the perturbation family (slow tier)."""
    c = _crit(9)
    out, rows, locs = [], [], {}
    for alpha, _integral_ref, disp_ref in c["table"]:
        rep, res = ex.run_case(c["case"], amplitude=alpha)
        disp = rep["displacement"]
        loc = ex.shock_locate(res.final.v, res.grid)
        rows.append([alpha, rep["perturbation_integral"], disp, loc])
        locs[alpha] = loc
        rel = abs(disp - disp_ref) / disp_ref
        out.append(CheckResult(9, f"displacement@{alpha:g}", rel <= c["rel_tol"],
                               f"{disp:.5f} (ref {disp_ref}, {100 * rel:.2f}% off)",
                               f"within {100 * c['rel_tol']:.0f}%"))
    mi = c["mesh_independence"]
    rep, res = ex.run_case(c["case"], amplitude=mi["alpha"], n_cells=mi["meshes"][0])
    loc_coarse = ex.shock_locate(res.final.v, res.grid)
    loc_fine = locs[mi["alpha"]]
    tol = mi["max_cells_off"] * res.grid.dr
    ok = loc_coarse is not None and loc_fine is not None and abs(loc_coarse - loc_fine) <= tol
    meas = (f"final shock r={loc_coarse} on {mi['meshes'][0]} cells vs r={loc_fine} "
            f"on {mi['meshes'][1]}")
    out.append(CheckResult(9, "mesh-independence", ok, meas,
                           f"within {mi['max_cells_off']:g} coarse cell"))
    out[0].data = {"rows": rows}
    return out


def crit10_convergence_orders() -> list[CheckResult]:
    """Observed L1 convergence orders on smooth data meet the per-order floors."""
    c = _crit(10)
    out = []
    for model, key in (("burgers", "burgers_min_orders"), ("euler", "euler_min_orders")):
        for order, min_order in zip((1, 2, 3), c[key]):
            study = ex.convergence_study(model, order, meshes=c["meshes"])
            got = min(study["observed_orders"])
            shown = "/".join(f"{o:.2f}" for o in study["observed_orders"])
            out.append(CheckResult(10, f"{model}/o{order}", got >= min_order,
                                   f"orders {shown}", f"each >= {min_order}", data=study))
    return out


def crit11_oracles() -> list[CheckResult]:
    """Closed forms vs independent numerics: the stationary Euler ODEs and quadrature."""
    from scipy.integrate import simpson, solve_ivp

    c = _crit(11)
    M, k = 1.0, 0.3
    fam = stationary_constants(1.0, 0.6, 10.0, M, k)
    r_eval = np.linspace(10.0, 2.2, 400)

    def rhs(r, y):
        v, rho = y
        A = (2.0 * k * k / (1.0 - k * k)) * (r - 2.0 * M) - M
        common = (1.0 - k * k) * A / (r * (r - 2.0 * M) * (v * v - k * k))
        return [v * (1.0 - v * v) * common,
                -2.0 * (r - M) * rho / (r * (r - 2.0 * M)) - rho * (1.0 + v * v) * common]

    sol = solve_ivp(rhs, (10.0, 2.2), [0.6, 1.0], t_eval=r_eval,
                    method="DOP853", rtol=1e-12, atol=1e-14)
    rho_fam, v_fam = stationary_profile_e(fam, r_eval, M, k)
    dv = float(np.max(np.abs(sol.y[0] - v_fam)))
    drho = float(np.max(np.abs(sol.y[1] - rho_fam)))
    err = max(dv, drho)
    out = [CheckResult(11, "euler-ode-oracle", bool(sol.success) and err <= c["euler_ode_tol"],
                       f"max dev {err:.2e} (v {dv:.1e}, rho {drho:.1e})",
                       f"<= {c['euler_ode_tol']:g}")]
    worst = 0.0
    for Ksq, a, b in ((0.25, 2.0, 2.015625), (0.25, 2.5, 3.7), (1.0, 2.2, 5.0), (1.3, 2.5, 6.0)):
        r = np.linspace(a, b, 8193)
        quad = simpson(np.sqrt(1.0 - Ksq * (1.0 - 2.0 * M / r)), x=r)
        closed = stationary_primitive_b(Ksq, b, M) - stationary_primitive_b(Ksq, a, M)
        worst = max(worst, abs(float(closed) - float(quad)))
    out.append(CheckResult(11, "primitive-simpson", worst <= c["primitive_simpson_tol"],
                           f"max dev {worst:.2e}", f"<= {c['primitive_simpson_tol']:g}"))
    return out


CHECKS = {
    1: crit1_burgers_preservation,
    2: crit2_nonwb_contrast,
    3: crit3_euler_preservation,
    4: crit4_shock_jump,
    5: crit5_displacement_table,
    6: crit6_zero_average_restoration,
    7: crit7_long_time_limits,
    8: crit8_roe_properties,
    9: crit9_euler_displacement_slow,
    10: crit10_convergence_orders,
    11: crit11_oracles,
}


def criteria_for_tier(tier: str) -> list[int]:
    tiers = thresholds()["tiers"]
    if tier not in tiers:
        raise ConfigError(f"unknown tier {tier!r}; choose from {', '.join(tiers)}")
    return list(tiers[tier])


def run_criterion(n: int) -> list[CheckResult]:
    """Measure one numbered criterion; returns its sub-check rows."""
    if n not in CHECKS:
        raise ConfigError(f"unknown criterion {n}; known: {sorted(CHECKS)}")
    return CHECKS[n]()
