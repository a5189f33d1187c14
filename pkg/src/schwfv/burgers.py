"""Relativistic Burgers flow on a Schwarzschild background.

Model kernels: flux/source/wave speed, Godunov flux, the one-parameter family of
stationary solutions v(r) = ±sqrt(1 - Ksq*(1 - 2M/r)), stationary fits matching a
cell average under each averaging rule, well-balanced reconstruction of orders
1-3, and the semi-discrete right-hand side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grid import GAUSS2_OFFSETS, SolverAbort, metric
from .reconstruct import cweno3_coeffs, minmod3, muscl_slope, poly2_eval

SQRT_GUARD = 1e-14  # tolerated negative roundoff in sqrt arguments


class DomainError(ValueError):
    """Stationary solution evaluated outside its domain of definition."""


def flux_b(v, r, M):
    """F(v, r) = (1 - 2M/r)(v^2 - 1)/2."""
    v = np.asarray(v, dtype=float)
    return 0.5 * metric(r, M) * (v * v - 1.0)


def source_b(v, r, M):
    """S(v, r) = (2M/r^2)(v^2 - 1)."""
    v = np.asarray(v, dtype=float)
    r = np.asarray(r, dtype=float)
    return 2.0 * M / (r * r) * (v * v - 1.0)


def wave_speed_b(v, r, M):
    """Characteristic speed (1 - 2M/r) v."""
    return metric(r, M) * np.asarray(v, dtype=float)


def godunov_flux_b(v_left, v_right, r, M):
    """Exact-Riemann (Godunov) flux for the quadratic flux in v.

    Shock (v_left > v_right): upwind by the shock speed sign, i.e. by v_left + v_right.
    Rarefaction: v_left if positive, v_right if negative, else the sonic state 0.
    """
    vl = np.asarray(v_left, dtype=float)
    vr = np.asarray(v_right, dtype=float)
    q_shock = np.where(vl + vr > 0.0, vl, vr)
    q_rare = np.where(vl > 0.0, vl, np.where(vr < 0.0, vr, 0.0))
    q = np.where(vl > vr, q_shock, q_rare)
    return flux_b(q, r, M)


def sign_pm(v):
    """Sign with sign(0) := +1."""
    return np.where(np.asarray(v, dtype=float) >= 0.0, 1.0, -1.0)


@dataclass(frozen=True)
class BurgersStationary:
    """Stationary branch v(r) = branch * sqrt(1 - Ksq*(1 - 2M/r))."""

    Ksq: float
    branch: float  # +1.0 or -1.0


def fit_point_b(v, r, M) -> BurgersStationary:
    """Stationary branch through the point value (v at radius r); requires |v| <= 1."""
    return BurgersStationary(Ksq=float((1.0 - v * v) / metric(r, M)), branch=float(sign_pm(v)))


def stationary_domain_sup_b(Ksq, M) -> float:
    """Right end of D_K = {r >= 2M : 1 - Ksq*(1 - 2M/r) >= 0}."""
    return math.inf if Ksq <= 1.0 else 2.0 * M * Ksq / (Ksq - 1.0)


def stationary_eval_b(stat: BurgersStationary, r, M):
    """Evaluate the stationary branch at r; raises DomainError outside D_K."""
    arg = 1.0 - stat.Ksq * metric(r, M)
    if np.any(np.asarray(arg) < -SQRT_GUARD):
        raise DomainError(f"radius outside the stationary domain (Ksq={stat.Ksq})")
    return stat.branch * np.sqrt(np.maximum(arg, 0.0))


# -- exact antiderivative of sqrt(1 - x*(1 - 2M/r)) in r ---------------------------------


def stationary_primitive_b(Ksq, r, M):
    """Antiderivative f(Ksq, r) of sqrt(1 - Ksq*(1 - 2M/r)) with respect to r.

    Three branches (Ksq < 1, = 1, > 1); the Ksq < 1 logarithm is evaluated through
    the exact split B = M + (1-Ksq)(r-M) + sqrt(1-Ksq)*r*sqrt(A) and log1p, so it
    stays accurate as Ksq -> 1.
    """
    x = np.asarray(Ksq, dtype=float)
    r = np.asarray(r, dtype=float)
    x, r = np.broadcast_arrays(x, r)
    A = 1.0 - x * (1.0 - 2.0 * M / r)
    if np.any(A < -SQRT_GUARD):
        raise DomainError("radius outside the stationary domain")
    rootA = np.sqrt(np.maximum(A, 0.0))
    near1 = np.abs(x - 1.0) <= 1e-13
    lt1 = x < 1.0
    s = np.sqrt(np.where(lt1 & ~near1, 1.0 - x, 1.0))
    delta = (1.0 - x) * (r - M) + s * r * rootA
    ratio = np.where(lt1 & ~near1, delta / M, 0.0)  # other lanes are masked below
    f_lt = r * rootA + (x * M / s) * (math.log(M) + np.log1p(ratio))
    f_eq = 2.0 * np.sqrt(2.0 * M * r)
    sq = np.sqrt(np.where(~lt1 & ~near1, x - 1.0, 1.0))
    f_gt = r * rootA - (2.0 * x * M / sq) * np.arctan(rootA / sq)
    out = np.where(near1, f_eq, np.where(lt1, f_lt, f_gt))
    return out if out.ndim else float(out)


def stationary_cell_avg_b(Ksq, r_lo, r_hi, M):
    """Exact average of sqrt(1 - Ksq*(1 - 2M/r)) over [r_lo, r_hi]."""
    return (stationary_primitive_b(Ksq, r_hi, M) - stationary_primitive_b(Ksq, r_lo, M)) / (
        np.asarray(r_hi, dtype=float) - np.asarray(r_lo, dtype=float)
    )


# -- stationary fits matching a cell average ----------------------------------------------


def _gauss2_radii(r_lo, r_hi):
    dr = np.asarray(r_hi, dtype=float) - np.asarray(r_lo, dtype=float)
    return r_lo + GAUSS2_OFFSETS[0] * dr, r_lo + GAUSS2_OFFSETS[1] * dr


def _bisect_newton(fun, dfun, lo, hi, flo, fhi, tol, maxit):
    """Scalar decreasing-function root on [lo, hi]; bisection with Newton polish."""
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    x = 0.5 * (lo + hi)
    for _ in range(maxit):
        fx = fun(x)
        if fx > 0.0:
            lo = x
        elif fx < 0.0:
            hi = x
        else:
            return x
        x_new = 0.5 * (lo + hi)
        if dfun is not None:
            d = dfun(x)
            if d != 0.0 and math.isfinite(d):
                trial = x - fx / d
                if lo < trial < hi:
                    x_new = trial
        if abs(fx) <= tol and abs(x_new - x) <= 8.0 * np.finfo(float).eps * max(1.0, abs(x)):
            return x_new
        x = x_new
    return x


def fit_gauss2_b(v, r_lo, r_hi, M, tol=1e-14, maxit=200):
    """Stationary branch whose two-point Gauss average over the cell equals v.

    Returns None when no branch matches: |v| above 1 (no stationary state is
    superluminal) or below the attainable minimum set by the constraint that the
    upper Gauss node stays inside the domain.
    """
    n0, n1 = _gauss2_radii(r_lo, r_hi)
    x0, x1 = metric(n0, M), metric(n1, M)
    if x1 <= 0.0:
        return None
    target = abs(float(v))

    def g2(K):
        return 0.5 * (
            math.sqrt(max(1.0 - K * x0, 0.0)) + math.sqrt(max(1.0 - K * x1, 0.0))
        ) - target

    def dg2(K):
        a0, a1 = 1.0 - K * x0, 1.0 - K * x1
        if a0 <= 0.0 or a1 <= 0.0:
            return math.inf
        return -0.25 * (x0 / math.sqrt(a0) + x1 / math.sqrt(a1))

    cap = 1.0 / x1
    lo = 0.0
    flo, fhi = g2(lo), g2(cap)
    if fhi > 0.0:  # even the domain-limited minimum exceeds the target
        return None
    if flo < 0.0:
        return None
    Ksq = _bisect_newton(g2, dg2, lo, cap, flo, fhi, tol, maxit)
    return BurgersStationary(Ksq=float(Ksq), branch=float(sign_pm(v)))


def fit_exact_avg_b(v, r_lo, r_hi, M, tol=1e-14, maxit=200):
    """Stationary branch whose exact cell average over [r_lo, r_hi] equals v."""
    x_hi = metric(r_hi, M)
    if x_hi <= 0.0:
        return None
    target = abs(float(v))

    def ge(K):
        return float(stationary_cell_avg_b(K, r_lo, r_hi, M)) - target

    cap = 1.0 / x_hi
    lo = 0.0
    flo, fhi = ge(lo), ge(cap)
    if fhi > 0.0 or flo < 0.0:
        return None
    Ksq = _bisect_newton(ge, None, lo, cap, flo, fhi, tol, maxit)
    return BurgersStationary(Ksq=float(Ksq), branch=float(sign_pm(v)))


def fit_b(v, r_lo, r_hi, M, averaging, tol=1e-14, maxit=200):
    """Stationary fit matching the cell average under the given rule."""
    if averaging == "midpoint":
        return fit_point_b(v, 0.5 * (r_lo + r_hi), M)
    if averaging == "gauss2":
        return fit_gauss2_b(v, r_lo, r_hi, M, tol, maxit)
    if averaging == "exact":
        return fit_exact_avg_b(v, r_lo, r_hi, M, tol, maxit)
    raise ValueError(f"unknown averaging rule {averaging!r}")


def stationary_rule_avg_b(stat: BurgersStationary, r_lo, r_hi, M, averaging):
    """Average of the stationary branch over a cell under the given rule."""
    if averaging == "midpoint":
        return stationary_eval_b(stat, 0.5 * (r_lo + r_hi), M)
    if averaging == "gauss2":
        n0, n1 = _gauss2_radii(r_lo, r_hi)
        return 0.5 * (stationary_eval_b(stat, n0, M) + stationary_eval_b(stat, n1, M))
    if averaging == "exact":
        return stat.branch * stationary_cell_avg_b(stat.Ksq, r_lo, r_hi, M)
    raise ValueError(f"unknown averaging rule {averaging!r}")


# -- vectorized fits (per-cell arrays) -----------------------------------------------------


def _vec_g2(K, x0, x1):
    return 0.5 * (np.sqrt(np.maximum(1.0 - K * x0, 0.0)) + np.sqrt(np.maximum(1.0 - K * x1, 0.0)))


def _fit_gauss2_vec(vabs, x0, x1):
    """Vectorized gauss2 fit: returns (Ksq, solvable)."""
    valid = x1 > 0.0
    x0s = np.where(valid, x0, 0.5)
    x1s = np.where(valid, x1, 1.0)
    cap = 1.0 / x1s
    lo = np.zeros_like(cap)
    solvable = valid & (_vec_g2(cap, x0s, x1s) <= vabs) & (vabs <= 1.0)
    hi = cap
    eps = np.finfo(float).eps
    for _ in range(64):
        mid = 0.5 * (lo + hi)
        f = _vec_g2(mid, x0s, x1s) - vabs
        lo = np.where(f > 0.0, mid, lo)
        hi = np.where(f <= 0.0, mid, hi)
        if np.all(hi - lo <= 8.0 * eps * np.maximum(1.0, np.abs(mid))):
            break
    K = 0.5 * (lo + hi)
    for _ in range(3):  # Newton polish, clamped to the bracket
        a0 = np.maximum(1.0 - K * x0s, 1e-300)
        a1 = np.maximum(1.0 - K * x1s, 1e-300)
        d = -0.25 * (x0s / np.sqrt(a0) + x1s / np.sqrt(a1))
        f = _vec_g2(K, x0s, x1s) - vabs
        trial = K - f / d
        K = np.where((trial > lo) & (trial < hi), trial, K)
    return K, solvable


def _fit_exact_vec(vabs, r_lo, r_hi, M):
    """Vectorized exact-average fit: returns (Ksq, solvable)."""
    x_hi = metric(r_hi, M)
    valid = x_hi > 0.0
    x_his = np.where(valid, x_hi, 1.0)
    r_los = np.where(valid, r_lo, 2.5 * M)
    r_his = np.where(valid, r_hi, 3.0 * M)
    cap = 1.0 / x_his

    def ge(K):
        return stationary_cell_avg_b(K, r_los, r_his, M)

    lo = np.zeros_like(cap)
    solvable = valid & (ge(cap) <= vabs) & (vabs <= 1.0)
    hi = cap
    eps = np.finfo(float).eps
    for _ in range(110):
        mid = 0.5 * (lo + hi)
        f = ge(mid) - vabs
        lo = np.where(f > 0.0, mid, lo)
        hi = np.where(f <= 0.0, mid, hi)
        if np.all(hi - lo <= 8.0 * eps * np.maximum(1.0, np.abs(mid))):
            break
    return 0.5 * (lo + hi), solvable


# -- well-balanced reconstruction ----------------------------------------------------------


@dataclass
class BurgersRecon:
    """Per-cell reconstruction: interface trace values and cell-integrated source."""

    wb: np.ndarray  # bool, WB branch taken
    Ksq: np.ndarray
    branch: np.ndarray
    v_minus: np.ndarray  # trace at the cell's left interface
    v_plus: np.ndarray  # trace at the cell's right interface
    source: np.ndarray  # cell integral of the source term


def _rule_avg_abs_vec(Ksq, r_lo, r_hi, M, averaging):
    """|stationary| averaged over cells [r_lo, r_hi] under the rule (vectorized)."""
    if averaging == "midpoint":
        arg = 1.0 - Ksq * metric(0.5 * (r_lo + r_hi), M)
        return np.sqrt(np.maximum(arg, 0.0))
    if averaging == "gauss2":
        n0, n1 = _gauss2_radii(r_lo, r_hi)
        a0 = 1.0 - Ksq * metric(n0, M)
        a1 = 1.0 - Ksq * metric(n1, M)
        return 0.5 * (np.sqrt(np.maximum(a0, 0.0)) + np.sqrt(np.maximum(a1, 0.0)))
    # exact rule; clamp guard happens inside the primitive via domain masking upstream
    lo_ok = 1.0 - Ksq * metric(r_lo, M) >= -SQRT_GUARD
    hi_ok = 1.0 - Ksq * metric(r_hi, M) >= -SQRT_GUARD
    ok = lo_ok & hi_ok
    Ks = np.where(ok, Ksq, 0.0)
    return np.where(ok, stationary_cell_avg_b(Ks, r_lo, r_hi, M), 0.0)


def reconstruct_b(values, centers, dr, order, averaging, M, well_balanced=True):
    """Reconstruct target cells values[1:-1]; values/centers carry one neighbor each side.

    Returns a BurgersRecon for the m = len(values) - 2 target cells. The WB branch
    fits a stationary solution to each target cell average, reconstructs the
    fluctuations (which vanish identically on matching stationary data), and
    integrates the source as the exact flux difference of the fitted stationary
    state plus (order 3) a Gauss-2 correction. Cells where no fit exists or where
    the stencil leaves the stationary domain fall back to the standard scheme.
    """
    v = np.asarray(values, dtype=float)
    c = np.asarray(centers, dtype=float)
    m = v.size - 2
    v0, vm1, vp1 = v[1:-1], v[:-2], v[2:]
    c0 = c[1:-1]
    if_lo = c0 - 0.5 * dr
    if_hi = c0 + 0.5 * dr

    # stationary fit per target cell
    if averaging == "midpoint":
        x_c = metric(c0, M)
        Ksq = (1.0 - v0 * v0) / x_c
        solvable = np.isfinite(Ksq) & (x_c > 0.0) & (np.abs(v0) <= 1.0)
    elif averaging == "gauss2":
        n0, n1 = _gauss2_radii(if_lo, if_hi)
        Ksq, solvable = _fit_gauss2_vec(np.abs(v0), metric(n0, M), metric(n1, M))
    else:
        Ksq, solvable = _fit_exact_vec(np.abs(v0), if_lo, if_hi, M)
    branch = sign_pm(v0)

    # domain condition at the largest radius used by the stencil
    if order == 1:
        r_need = if_hi
    elif averaging == "midpoint":
        r_need = c0 + dr
    elif averaging == "gauss2":
        r_need = if_hi + GAUSS2_OFFSETS[1] * dr
    else:
        r_need = if_hi + dr
    Ksq_safe = np.where(solvable, Ksq, 0.0)
    domain_ok = 1.0 - Ksq_safe * metric(r_need, M) >= -SQRT_GUARD
    wb = solvable & domain_ok & np.array(well_balanced)

    Kw = np.where(wb, Ksq_safe, 0.0)
    star_lo = branch * np.sqrt(np.maximum(1.0 - Kw * metric(if_lo, M), 0.0))
    star_hi = branch * np.sqrt(np.maximum(1.0 - Kw * metric(if_hi, M), 0.0))
    src_wb = flux_b(star_hi, if_hi, M) - flux_b(star_lo, if_lo, M)

    if order == 1:
        v_minus = np.where(wb, star_lo, v0)
        v_plus = np.where(wb, star_hi, v0)
        source = np.where(wb, src_wb, dr * source_b(v0, c0, M))
        return BurgersRecon(wb, Ksq, branch, v_minus, v_plus, source)

    # fluctuations of the neighbors under this cell's fit (own fluctuation is 0 exactly)
    w_m = vm1 - sign_pm(vm1) * _rule_avg_abs_vec(Kw, if_lo - dr, if_lo, M, averaging)
    w_p = vp1 - sign_pm(vp1) * _rule_avg_abs_vec(Kw, if_hi, if_hi + dr, M, averaging)

    if order == 2:
        sigma = minmod3(w_p / dr, (w_p - w_m) / (2.0 * dr), -w_m / dr)
        vm_wb = star_lo - 0.5 * dr * sigma
        vp_wb = star_hi + 0.5 * dr * sigma
        sig_std = muscl_slope(vm1, v0, vp1, dr)
        v_minus = np.where(wb, vm_wb, v0 - 0.5 * dr * sig_std)
        v_plus = np.where(wb, vp_wb, v0 + 0.5 * dr * sig_std)
        source = np.where(wb, src_wb, dr * source_b(v0, c0, M))
        return BurgersRecon(wb, Ksq, branch, v_minus, v_plus, source)

    if order != 3:
        raise ValueError(f"unsupported order {order}")

    g0, g1 = _gauss2_radii(if_lo, if_hi)
    zeros = np.zeros(m)
    a0w, a1w, a2w = cweno3_coeffs(w_m, zeros, w_p, dr)
    star_g0 = branch * np.sqrt(np.maximum(1.0 - Kw * metric(g0, M), 0.0))
    star_g1 = branch * np.sqrt(np.maximum(1.0 - Kw * metric(g1, M), 0.0))
    vm_wb = star_lo + poly2_eval(a0w, a1w, a2w, -0.5 * dr)
    vp_wb = star_hi + poly2_eval(a0w, a1w, a2w, 0.5 * dr)
    corr = 0.5 * dr * (
        source_b(star_g0 + poly2_eval(a0w, a1w, a2w, g0 - c0), g0, M)
        - source_b(star_g0, g0, M)
        + source_b(star_g1 + poly2_eval(a0w, a1w, a2w, g1 - c0), g1, M)
        - source_b(star_g1, g1, M)
    )
    a0s, a1s, a2s = cweno3_coeffs(vm1, v0, vp1, dr)
    vm_std = poly2_eval(a0s, a1s, a2s, -0.5 * dr)
    vp_std = poly2_eval(a0s, a1s, a2s, 0.5 * dr)
    src_std = 0.5 * dr * (
        source_b(poly2_eval(a0s, a1s, a2s, g0 - c0), g0, M)
        + source_b(poly2_eval(a0s, a1s, a2s, g1 - c0), g1, M)
    )
    v_minus = np.where(wb, vm_wb, vm_std)
    v_plus = np.where(wb, vp_wb, vp_std)
    source = np.where(wb, src_wb + corr, src_std)
    return BurgersRecon(wb, Ksq, branch, v_minus, v_plus, source)


def wb_reconstruct_b(v_stencil, r_center, dr, order, averaging, M):
    """Single-cell reference reconstruction; v_stencil = (v_{i-1}, v_i, v_{i+1})."""
    vm1, v0, vp1 = (float(x) for x in v_stencil)
    values = np.array([vm1, v0, vp1])
    centers = np.array([r_center - dr, r_center, r_center + dr])
    rec = reconstruct_b(values, centers, dr, order, averaging, M)
    return BurgersRecon(
        wb=bool(rec.wb[0]),
        Ksq=float(rec.Ksq[0]),
        branch=float(rec.branch[0]),
        v_minus=float(rec.v_minus[0]),
        v_plus=float(rec.v_plus[0]),
        source=float(rec.source[0]),
    )


@dataclass(frozen=True)
class PiecewiseStationaryB:
    """Piecewise stationary datum: pieces[j] applies on (edges[j-1], edges[j]].

    edges are the interior breakpoints (increasing); len(pieces) = len(edges) + 1.
    Supports exact cell averaging through the antiderivative, splitting cells that
    contain a breakpoint.
    """

    pieces: tuple
    edges: tuple = ()

    def __post_init__(self):
        if len(self.pieces) != len(self.edges) + 1:
            raise ValueError("need len(pieces) == len(edges) + 1")
        if any(b <= a for a, b in zip(self.edges, self.edges[1:])):
            raise ValueError("edges must be strictly increasing")

    def eval(self, r, M):
        r = np.atleast_1d(np.asarray(r, dtype=float))
        idx = np.searchsorted(np.asarray(self.edges), r, side="right")
        out = np.empty_like(r)
        for j, stat in enumerate(self.pieces):
            mask = idx == j
            if np.any(mask):
                out[mask] = stationary_eval_b(stat, r[mask], M)
        return out

    def cell_averages(self, grid, averaging):
        if averaging == "midpoint":
            return self.eval(grid.centers, grid.M)
        if averaging == "gauss2":
            nodes = grid.gauss_nodes()
            return 0.5 * (self.eval(nodes[:, 0], grid.M) + self.eval(nodes[:, 1], grid.M))
        if averaging != "exact":
            raise ValueError(f"unknown averaging rule {averaging!r}")
        out = np.empty(grid.n)
        edges = list(self.edges)
        for i in range(grid.n):
            lo = grid.interfaces[i]
            hi = grid.interfaces[i + 1]
            cuts = [lo] + [e for e in edges if lo < e < hi] + [hi]
            total = 0.0
            for a, b in zip(cuts, cuts[1:]):
                j = int(np.searchsorted(np.asarray(self.edges), 0.5 * (a + b), side="right"))
                stat = self.pieces[j]
                total += stat.branch * (
                    stationary_primitive_b(stat.Ksq, b, grid.M)
                    - stationary_primitive_b(stat.Ksq, a, grid.M)
                )
            out[i] = total / grid.dr
        return out


# -- ghost filling and right-hand side -----------------------------------------------------


def _ghost_values_b(v, grid, cfg):
    """Two ghost values per side; stationary_extension refits from the boundary cell."""
    dr = grid.dr
    left = np.array([v[0], v[0]])
    right = np.array([v[-1], v[-1]])
    if cfg.right_bc == "stationary_extension":
        stat_l = fit_b(v[0], grid.interfaces[0], grid.interfaces[1], grid.M, cfg.averaging)
        if stat_l is not None:
            lo = grid.interfaces[0]
            try:
                left = np.array(
                    [
                        stationary_rule_avg_b(stat_l, lo - 2 * dr, lo - dr, grid.M, cfg.averaging),
                        stationary_rule_avg_b(stat_l, lo - dr, lo, grid.M, cfg.averaging),
                    ]
                )
            except DomainError:
                pass
        stat_r = fit_b(v[-1], grid.interfaces[-2], grid.interfaces[-1], grid.M, cfg.averaging)
        if stat_r is not None:
            hi = grid.interfaces[-1]
            try:
                right = np.array(
                    [
                        stationary_rule_avg_b(stat_r, hi, hi + dr, grid.M, cfg.averaging),
                        stationary_rule_avg_b(stat_r, hi + dr, hi + 2 * dr, grid.M, cfg.averaging),
                    ]
                )
            except DomainError:
                pass
    return left, right


def rhs_burgers(v, grid, cfg, dt=None):
    """Semi-discrete right-hand side dv/dt on the interior cells.

    The hard boundary condition F_{-1/2} = 0 holds at the horizon (where the metric
    factor vanishes); the right boundary follows cfg.right_bc via ghost cells that
    are reconstructed like interior cells.
    """
    left, right = _ghost_values_b(v, grid, cfg)
    ve = np.concatenate([left, v, right])
    ce = grid.extended_centers(2)
    rec = reconstruct_b(ve, ce, grid.dr, cfg.order, cfg.averaging, grid.M, cfg.well_balanced)
    F = godunov_flux_b(rec.v_plus[:-1], rec.v_minus[1:], grid.interfaces, grid.M)
    F[0] = 0.0
    out = -(F[1:] - F[:-1] - rec.source[1:-1]) / grid.dr
    if not np.all(np.isfinite(out)):
        cell = int(np.argmin(np.isfinite(out)))
        raise SolverAbort("non-finite right-hand side", cell=cell)
    return out


def max_wave_speed_b(v, grid):
    s = np.max(np.abs(wave_speed_b(v, grid.centers, grid.M)))
    return float(s)
