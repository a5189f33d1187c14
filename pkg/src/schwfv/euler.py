"""Relativistic Euler flow (isothermal, sound speed k) on a Schwarzschild background.

Conserved state V = (V0, V1) with V0 = rho(1+k^2 v^2)/(1-v^2), V1 = rho v(1+k^2)/(1-v^2).
Provides state conversions, flux/source/eigenvalues, the two-constant implicit family
of stationary solutions (C1, C2) with sub/supersonic branch selection, steady-shock
jump relations, Roe-type and Lax-Friedrichs fluxes, well-balanced reconstruction of
orders 1-2, and the semi-discrete right-hand side.

Evaluations along stationary solutions avoid the 1/(1-v^2) amplification entirely:
traces use V0* = C2(1+k^2 vhat^2)/(vhat r(r-2M)), V1* = C2(1+k^2)/(r(r-2M)) and the
stationary fluxes F1* = (1+k^2)C2/r^2, F2* = C2(vhat^2+k^2)/(vhat r^2), which keeps
well-balancing noise at the 1e-12 level even with the dissipative flux.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .grid import SolverAbort, metric
from .reconstruct import minmod3, muscl_slope

V_MIN = 1e-10  # |v| at or below this is degenerate for the stationary family
SONIC_EPS = 1e-12


class DegenerateStateError(ValueError):
    """Velocity too close to zero for the stationary family (C2-based rho recovery)."""


def _q_exponents(k):
    q = 2.0 * k * k / (1.0 - k * k)
    return q, 2.0 * q


# -- state conversions ----------------------------------------------------------------------


def prim_to_cons(rho, v, k):
    """Conserved (V0, V1) from primitive (rho, v); stacked on the last axis."""
    rho = np.asarray(rho, dtype=float)
    v = np.asarray(v, dtype=float)
    one_m = 1.0 - v * v
    V0 = rho * (1.0 + k * k * v * v) / one_m
    V1 = rho * v * (1.0 + k * k) / one_m
    return np.stack([V0, V1], axis=-1)


def state_valid(V, k):
    """Componentwise validity: V0 > 0 and the recovery discriminant is nonnegative."""
    V = np.asarray(V, dtype=float)
    V0, V1 = V[..., 0], V[..., 1]
    pos = V0 > 0.0
    u = V1 / np.where(pos, V0, 1.0)
    opk = 1.0 + k * k
    return pos & (opk * opk - 4.0 * k * k * u * u >= 0.0)


def cons_to_prim(V, k, cell_offset=0):
    """Primitive (rho, v) from conserved V; raises SolverAbort naming the first bad cell.

    v is recovered through the cancellation-free form of the quadratic root,
    v = 2u / (1 + k^2 + sqrt((1+k^2)^2 - 4 k^2 u^2)) with u = V1/V0, which is exact
    at u = 0; |V1| < 1e-14 V0 short-circuits to v = 0, rho = V0.
    """
    V = np.asarray(V, dtype=float)
    V0, V1 = V[..., 0], V[..., 1]
    ok = state_valid(V, k)
    if not np.all(ok):
        cell = int(np.argmin(ok)) - cell_offset
        raise SolverAbort("invalid conserved state (rho <= 0 or negative discriminant)", cell=cell)
    opk = 1.0 + k * k
    u = V1 / V0
    disc = opk * opk - 4.0 * k * k * u * u
    v = 2.0 * u / (opk + np.sqrt(np.maximum(disc, 0.0)))
    tiny = np.abs(V1) < 1e-14 * V0
    v = np.where(tiny, 0.0, v)
    v_safe = np.where(tiny, 1.0, v)
    rho = np.where(tiny, V0, V1 * (1.0 - v * v) / (v_safe * opk))
    return rho, v


# -- flux, source, eigenvalues --------------------------------------------------------------


def flux_e(V, r, M, k):
    """F(V, r) evaluated without 1/(1-v^2): F1 = m(r) V1, F2 = m(r) V0 (v^2+k^2)/(1+k^2 v^2)."""
    V = np.asarray(V, dtype=float)
    _, v = cons_to_prim(V, k)
    m = metric(r, M)
    F1 = m * V[..., 1]
    F2 = m * V[..., 0] * (v * v + k * k) / (1.0 + k * k * v * v)
    return np.stack([F1, F2], axis=-1)


def source_e(V, r, M, k):
    """Geometric source S(V, r), grouped exactly as in the model statement."""
    V = np.asarray(V, dtype=float)
    r = np.asarray(r, dtype=float)
    rho, v = cons_to_prim(V, k)
    m = metric(r, M)
    V0 = V[..., 0]
    mom = V0 * (v * v + k * k) / (1.0 + k * k * v * v)  # rho (v^2+k^2)/(1-v^2)
    S1 = -2.0 / r * m * V[..., 1]
    S2 = (-2.0 * r + 5.0 * M) / (r * r) * mom - M / (r * r) * V0 + 2.0 * (r - 2.0 * M) / (
        r * r
    ) * k * k * rho
    return np.stack([S1, S2], axis=-1)


def eigenvalues_e(v, r, M, k):
    """mu_-+ = (1 - 2M/r)(v -+ k)/(1 -+ k^2 v)."""
    v = np.asarray(v, dtype=float)
    m = metric(r, M)
    mu_minus = m * (v - k) / (1.0 - k * k * v)
    mu_plus = m * (v + k) / (1.0 + k * k * v)
    return mu_minus, mu_plus


def max_wave_speed_e(V, grid, k):
    _, v = cons_to_prim(V, k)
    mu_m, mu_p = eigenvalues_e(v, grid.centers, grid.M, k)
    return float(np.max(np.maximum(np.abs(mu_m), np.abs(mu_p))))


def regime_of(v, k, sonic_eps=SONIC_EPS):
    """'subsonic', 'sonic', or 'supersonic' by |v| against k."""
    a = abs(float(v))
    if abs(a - k) <= sonic_eps:
        return "sonic"
    return "supersonic" if a > k else "subsonic"


# -- stationary family ----------------------------------------------------------------------


def g_of_v(v, k):
    """g(v) = sign(v)(1 - v^2)|v|^{2k^2/(1-k^2)}; maximum over [0, 1] at v = k."""
    v = np.asarray(v, dtype=float)
    q, _ = _q_exponents(k)
    return np.sign(v) * (1.0 - v * v) * np.abs(v) ** q


def g_max(k):
    """g(k) = (1 - k^2) k^{2k^2/(1-k^2)}."""
    q, _ = _q_exponents(k)
    return (1.0 - k * k) * k**q


def _bisect_g(t, lo, hi, q, increasing, iters=90):
    """Vectorized bisection for (1-w^2)w^q = t on [lo, hi]; collapses to machine width."""
    lo = lo.copy()
    hi = hi.copy()
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        G = (1.0 - mid * mid) * mid**q - t
        root_right = (G > 0.0) ^ increasing
        lo = np.where(root_right, mid, lo)
        hi = np.where(root_right, hi, mid)
        if np.all(hi - lo <= 4.0 * np.finfo(float).eps * np.maximum(np.abs(mid), 1e-3)):
            break
    return 0.5 * (lo + hi)


def _solve_g_abs(t, supersonic, k, w0=None, sonic_eps=SONIC_EPS):
    """Roots w >= 0 of (1-w^2)w^q = t on the requested branch (vectorized).

    t must satisfy t <= g_max(k)(1 + 1e-12); values inside the sonic band return k.
    Newton from the warm start w0 (typically the cell's own |v|), with bisection
    for near-sonic targets and any cell Newton fails to converge.
    """
    q, _ = _q_exponents(k)
    gk = g_max(k)
    t = np.minimum(np.asarray(t, dtype=float), gk)
    supersonic = np.asarray(supersonic, dtype=bool)
    lo = np.where(supersonic, k, 0.0)
    hi = np.where(supersonic, 1.0, k)
    w = np.clip(w0 if w0 is not None else 0.5 * (lo + hi), lo, hi)
    eps = np.finfo(float).eps
    near_sonic = np.abs(t - gk) <= 1e-8
    done = near_sonic.copy()
    for _ in range(40):
        G = (1.0 - w * w) * w**q - t
        ws = np.maximum(w, 1e-300)
        dG = ws ** (q - 1.0) * (q - (q + 2.0) * w * w)
        step = np.where(np.isfinite(dG) & (dG != 0.0), G / dG, 0.0)
        w_new = np.clip(w - step, lo, hi)
        newly = (np.abs(w_new - w) <= 2.0 * eps * np.maximum(w_new, 1e-2)) & (
            np.abs(G) <= 1e-14
        )
        w = np.where(done, w, w_new)
        done = done | newly
        if np.all(done):
            break
    hard = np.nonzero(~done | near_sonic)[0]
    if hard.size:
        w_hard = _bisect_g(t[hard], lo[hard], hi[hard], q, increasing=~supersonic[hard])
        w = w.copy()
        w[hard] = w_hard
    sonic = np.abs(t - gk) <= sonic_eps
    return np.where(sonic, k, w)


def solve_g(Ka, regime, k, sonic_eps=SONIC_EPS):
    """Velocity v with g(v) = Ka on the requested branch; None when |Ka| > g(k)(1+1e-12)."""
    if regime not in ("subsonic", "supersonic"):
        raise ValueError(f"unknown regime {regime!r}")
    gk = g_max(k)
    t = abs(float(Ka))
    if t > gk * (1.0 + 1e-12):
        return None
    w = _solve_g_abs(np.array([t]), np.array([regime == "supersonic"]), k, sonic_eps=sonic_eps)
    return float(math.copysign(w[0], Ka)) if Ka != 0.0 else float(w[0])


@dataclass(frozen=True)
class EulerStationary:
    """Implicit stationary solution: constants (C1, C2) and a branch tag."""

    C1: float
    C2: float
    regime: str  # "subsonic" | "supersonic"


def stationary_constants(rho, v, r, M, k, v_min=V_MIN) -> EulerStationary:
    """Fit (C1, C2) through the state (rho, v) at radius r.

    C1 = g(v) r^{4k^2/(1-k^2)} / (1 - 2M/r);  C2 = r(r-2M) rho v / (1 - v^2).
    """
    if abs(v) <= v_min:
        raise DegenerateStateError("stationary family degenerates at v = 0")
    _, q2 = _q_exponents(k)
    C1 = float(g_of_v(v, k)) * r**q2 / metric(r, M)
    C2 = r * (r - 2.0 * M) * rho * v / (1.0 - v * v)
    reg = regime_of(v, k)
    return EulerStationary(C1=float(C1), C2=float(C2), regime="subsonic" if reg == "sonic" else reg)


def stationary_ka(C1, r, M, k):
    """K_r = (1 - 2M/r) r^{-4k^2/(1-k^2)} C1."""
    _, q2 = _q_exponents(k)
    return metric(r, M) * np.asarray(r, dtype=float) ** (-q2) * C1


def stationary_eval_e(s: EulerStationary, r, M, k, sonic_eps=SONIC_EPS, regime=None):
    """Evaluate the stationary solution at radius r -> (rho, v), or None outside its range."""
    Ka = float(stationary_ka(s.C1, r, M, k))
    reg = regime or s.regime
    v = solve_g(Ka, reg, k, sonic_eps)
    if v is None:
        return None
    if abs(v) <= V_MIN:
        raise DegenerateStateError("stationary evaluation hit v = 0")
    rho = s.C2 * (1.0 - v * v) / (v * r * (r - 2.0 * M))
    return rho, v


def stationary_profile_e(s: EulerStationary, r, M, k, sonic_eps=SONIC_EPS):
    """Vectorized stationary evaluation along radii r -> (rho, v) arrays.

    Raises DomainError-like ValueError if any radius falls outside the family's range.
    """
    r = np.atleast_1d(np.asarray(r, dtype=float))
    Ka = stationary_ka(s.C1, r, M, k)
    t = np.abs(Ka)
    gk = g_max(k)
    if np.any(t > gk * (1.0 + sonic_eps)):
        bad = r[t > gk * (1.0 + sonic_eps)]
        raise ValueError(f"stationary family has no value at r = {bad[0]:g}")
    supersonic = np.full(r.shape, s.regime == "supersonic")
    w = _solve_g_abs(np.minimum(t, gk), supersonic, k, sonic_eps=sonic_eps)
    v = np.sign(Ka) * w
    rho = s.C2 * (1.0 - v * v) / (v * r * (r - 2.0 * M))
    return rho, v


def steady_shock_jump(rho_minus, v_minus, k):
    """Downstream state of the standing shock: v+ = k^2/v-, rho+ = rho-(v-^2-k^4)/(k^2(1-v-^2))."""
    v_plus = k * k / v_minus
    rho_plus = rho_minus * (v_minus * v_minus - k**4) / (k * k * (1.0 - v_minus * v_minus))
    return rho_plus, v_plus


def critical_radius(M, k):
    """r_c = M(1-k^2)/(2k^2) + 2M, where |K_r| attains its maximum along a profile."""
    return M * (1.0 - k * k) / (2.0 * k * k) + 2.0 * M


@dataclass(frozen=True)
class CriticalStationary:
    """Smooth transonic stationary solution: v(r_c) = side*k, subsonic for r <= r_c."""

    C1: float
    C2: float
    r_c: float
    side: float


def critical_stationary(side, r_ref, rho_ref, M, k) -> CriticalStationary:
    """Transonic profile through v(r_c) = side*k with rho = rho_ref at r = r_ref."""
    _, q2 = _q_exponents(k)
    r_c = critical_radius(M, k)
    C1 = float(g_of_v(side * k, k)) * r_c**q2 / metric(r_c, M)
    regime = "subsonic" if r_ref <= r_c else "supersonic"
    base = EulerStationary(C1=C1, C2=1.0, regime=regime)
    out = stationary_eval_e(base, r_ref, M, k)
    if out is None:
        raise ValueError("reference radius outside the critical profile's range")
    v_ref = out[1]
    C2 = r_ref * (r_ref - 2.0 * M) * rho_ref * v_ref / (1.0 - v_ref * v_ref)
    return CriticalStationary(C1=C1, C2=float(C2), r_c=float(r_c), side=float(side))


def critical_eval(cs: CriticalStationary, r, M, k):
    """Evaluate the transonic profile at radii r -> (rho, v) arrays."""
    r = np.atleast_1d(np.asarray(r, dtype=float))
    t = np.abs(stationary_ka(cs.C1, r, M, k))
    supersonic = r > cs.r_c
    w = _solve_g_abs(t, supersonic, k)
    v = cs.side * w
    rho = cs.C2 * (1.0 - v * v) / (v * r * (r - 2.0 * M))
    return rho, v


# -- numerical fluxes -----------------------------------------------------------------------


def _roe_vm_vec(rho_l, v_l, rho_r, v_r, V_l, V_r, close_eps=1e-12):
    """Intermediate Roe velocity; root selection and cancellation-free evaluation."""
    oml = 1.0 - v_l * v_l
    omr = 1.0 - v_r * v_r
    alpha = rho_r * oml - rho_l * omr
    num_half = rho_r * v_r * oml - rho_l * v_l * omr  # = -beta/2
    gamma = rho_r * v_r * v_r * oml - rho_l * v_l * v_l * omr
    sq = np.abs(v_r - v_l) * np.sqrt(rho_l * rho_r * oml * omr)
    alpha_s = np.where(np.abs(alpha) > 1e-300, alpha, 1.0)
    den_p = np.where(np.abs(num_half + sq) > 1e-300, num_half + sq, 1.0)
    den_m = np.where(np.abs(num_half - sq) > 1e-300, num_half - sq, 1.0)
    v_minus = np.where(num_half > 0.0, gamma / den_p, (num_half - sq) / alpha_s)
    v_plus = np.where(num_half < 0.0, gamma / den_m, (num_half + sq) / alpha_s)
    vm = np.where(v_l < v_r, v_minus, v_plus)
    mean = 0.5 * (v_l + v_r)
    nh_s = np.where(np.abs(num_half) > 1e-300, num_half, 1.0)
    lin = np.where(np.abs(num_half) > 1e-300, gamma / (2.0 * nh_s), mean)
    vm = np.where(np.abs(alpha) <= 1e-14, lin, vm)
    close = np.maximum(np.abs(V_r[..., 0] - V_l[..., 0]), np.abs(V_r[..., 1] - V_l[..., 1]))
    return np.where(close < close_eps, mean, vm)


def roe_average(p_left, p_right, k, close_eps=1e-12):
    """Roe-type intermediate velocity v_m for primitives p = (rho, v)."""
    rho_l, v_l = p_left
    rho_r, v_r = p_right
    V_l = prim_to_cons(rho_l, v_l, k)
    V_r = prim_to_cons(rho_r, v_r, k)
    vm = _roe_vm_vec(
        np.asarray(rho_l, float),
        np.asarray(v_l, float),
        np.asarray(rho_r, float),
        np.asarray(v_r, float),
        V_l,
        V_r,
        close_eps,
    )
    return float(vm)


def roe_type_flux(VL, VR, r_if, M, k):
    """Upwinded flux from the intermediate-velocity Jacobian (PVM form).

    flux = (F_L + F_R)/2 - (a0 (V_R - V_L) + a1 (F_R - F_L))/2 with a0, a1 built
    from lambda_bar_{1,2} evaluated at v_m.
    """
    VL = np.asarray(VL, dtype=float)
    VR = np.asarray(VR, dtype=float)
    rho_l, v_l = cons_to_prim(VL, k)
    rho_r, v_r = cons_to_prim(VR, k)
    vm = _roe_vm_vec(rho_l, v_l, rho_r, v_r, VL, VR)
    m = metric(r_if, M)
    lam1 = m * (vm - k) / (1.0 - k * k * vm)
    lam2 = m * (vm + k) / (1.0 + k * k * vm)
    dl = lam2 - lam1
    ok = np.abs(dl) > 1e-300
    dls = np.where(ok, dl, 1.0)
    a0 = (lam2 * np.abs(lam1) - lam1 * np.abs(lam2)) / dls
    a1 = (np.abs(lam2) - np.abs(lam1)) / dls
    FL = flux_e(VL, r_if, M, k)
    FR = flux_e(VR, r_if, M, k)
    central = 0.5 * (FL + FR)
    visc = 0.5 * (a0[..., None] * (VR - VL) + a1[..., None] * (FR - FL))
    upwind = np.where((vm >= 0.0)[..., None], FL, FR)
    return np.where(ok[..., None], central - visc, upwind)


def lax_friedrichs_flux(VL, VR, r_if, dt, dr, M, k):
    """flux = (F_L + F_R)/2 - (dt/dr)(V_R - V_L)/2 (coefficient as the model states it)."""
    VL = np.asarray(VL, dtype=float)
    VR = np.asarray(VR, dtype=float)
    FL = flux_e(VL, r_if, M, k)
    FR = flux_e(VR, r_if, M, k)
    return 0.5 * (FL + FR) - 0.5 * (dt / dr) * (VR - VL)


# -- well-balanced right-hand side ----------------------------------------------------------


@lru_cache(maxsize=8)
def _euler_geometry(grid, k):
    """Static per-grid arrays for the extended cells/interfaces (2 ghosts per side)."""
    _, q2 = _q_exponents(k)
    M = grid.M
    dr = grid.dr
    ce = grid.extended_centers(2)  # n+4
    if_e = np.concatenate(
        [
            [grid.interfaces[0] - 2.0 * dr, grid.interfaces[0] - dr],
            grid.interfaces,
            [grid.interfaces[-1] + dr, grid.interfaces[-1] + 2.0 * dr],
        ]
    )  # n+5

    def pack(r):
        m = metric(r, M)
        safe = np.where(r > 2.0 * M, r, 3.0 * M)
        return {
            "r": r,
            "metric": m,
            "rpow": safe ** (-q2),
            "rr": r * (r - 2.0 * M),
            "valid": m > 0.0,
        }

    return {"centers": pack(ce), "ifaces": pack(if_e)}


def _branch_at_points(v_t, v_nb, k, sonic_eps, diag):
    """Supersonic flags for evaluation points on one side; sonic cells defer to the neighbor."""
    a_t = np.abs(v_t)
    a_nb = np.abs(v_nb)
    son_t = np.abs(a_t - k) <= sonic_eps
    son_nb = np.abs(a_nb - k) <= sonic_eps
    sup = np.where(son_t, (a_nb > k) & ~son_nb, a_t > k)
    both = son_t & son_nb
    if diag is not None and np.any(both):
        diag["double_sonic"] = diag.get("double_sonic", 0) + int(np.sum(both))
    return sup


def _star_conserved(C2, vhat, rr, k):
    """Conserved stationary state via C2 (no 1/(1-v^2) amplification)."""
    vs = np.where(np.abs(vhat) > 1e-300, vhat, 1.0)
    den = np.where(np.abs(rr) > 1e-300, rr, 1.0)
    V0 = C2 * (1.0 + k * k * vhat * vhat) / (vs * den)
    V1 = C2 * (1.0 + k * k) / den
    return np.stack([V0, V1], axis=-1)


def _star_flux(C2, vhat, r, k):
    """Stationary flux F(V*(r), r) via C2: F1 = (1+k^2)C2/r^2, F2 = C2(v^2+k^2)/(v r^2)."""
    vs = np.where(np.abs(vhat) > 1e-300, vhat, 1.0)
    r2 = r * r
    F1 = (1.0 + k * k) * C2 / r2
    F2 = C2 * (vhat * vhat + k * k) / (vs * r2)
    return np.stack([F1, F2], axis=-1)


def _ghost_values_e(V, grid, cfg):
    """Ghost states: copies, or the stationary extension of the boundary cell on the right."""
    left = np.vstack([V[0], V[0]])
    right = np.vstack([V[-1], V[-1]])
    if cfg.right_bc == "stationary_extension":
        rho_b, v_b = cons_to_prim(V[-1][None, :], cfg.k)
        rho_b, v_b = float(rho_b[0]), float(v_b[0])
        if abs(v_b) > cfg.v_min:
            s = stationary_constants(rho_b, v_b, float(grid.centers[-1]), grid.M, cfg.k)
            vals = []
            for rg in (grid.centers[-1] + grid.dr, grid.centers[-1] + 2.0 * grid.dr):
                out = stationary_eval_e(s, float(rg), grid.M, cfg.k, cfg.sonic_eps)
                if out is None:
                    vals = None
                    break
                vals.append(prim_to_cons(out[0], out[1], cfg.k))
            if vals is not None:
                right = np.vstack(vals)
    return left, right


def rhs_euler(V, grid, cfg, dt=None, diag=None):
    """Semi-discrete dV/dt on the interior cells (orders 1-2, WB or standard).

    The horizon interface r = 2M contributes zero to both the numerical flux and the
    adjacent cell's stationary source term (the two must share the convention for the
    scheme to be well balanced at the first cell). Stencil points below 2M are skipped:
    their fluctuations are zeroed rather than disqualifying the cell.
    """
    M, k = grid.M, cfg.k
    n = grid.n
    dr = grid.dr
    gk = g_max(k)
    geo = _euler_geometry(grid, k)
    gc, gi = geo["centers"], geo["ifaces"]

    left, right = _ghost_values_e(V, grid, cfg)
    ve = np.concatenate([left, V, right], axis=0)  # n+4 ext cells
    rho_e, v_e = cons_to_prim(ve, k, cell_offset=2)

    # targets: ext cells 1..n+2 (cells -1..n)
    sl = slice(1, n + 3)
    V_t = ve[sl]
    rho_t, v_t = rho_e[sl], v_e[sl]
    c_t = gc["r"][sl]
    rr_c = gc["rr"][sl]
    m_c = gc["metric"][sl]
    iflo = {key: gi[key][1 : n + 3] for key in gi}
    ifhi = {key: gi[key][2 : n + 4] for key in gi}

    _, q2 = _q_exponents(k)
    degen = (np.abs(v_t) <= cfg.v_min) | ~gc["valid"][sl]
    vt_safe = np.where(degen, 0.5, v_t)
    C1 = g_of_v(vt_safe, k) * np.where(gc["valid"][sl], gc["r"][sl], 3.0 * M) ** q2 / np.where(
        gc["valid"][sl], m_c, 1.0
    )
    C2 = rr_c * V_t[:, 1] / (1.0 + k * k)  # conserved form of r(r-2M) rho v/(1-v^2)

    # branch flags per side (sonic cells defer to the neighbor on that side)
    v_nb_l = v_e[0 : n + 2]
    v_nb_r = v_e[2 : n + 4]
    sup_l = _branch_at_points(vt_safe, v_nb_l, k, cfg.sonic_eps, diag)
    sup_r = _branch_at_points(vt_safe, v_nb_r, k, cfg.sonic_eps, None)

    def point_batch(pt):
        """Ka and the WB admissibility condition at one family of evaluation points."""
        Ka = np.where(pt["valid"], pt["metric"] * pt["rpow"] * C1, 0.0)
        cond = ~pt["valid"] | (np.abs(Ka) <= gk * (1.0 + 1e-12))
        return Ka, cond

    Ka_lo, ok_lo = point_batch(iflo)
    Ka_hi, ok_hi = point_batch(ifhi)
    wb = ~degen & ok_lo & ok_hi & bool(cfg.well_balanced)

    if cfg.order == 2:
        ctr_l = {key: gc[key][0 : n + 2] for key in gc}
        ctr_r = {key: gc[key][2 : n + 4] for key in gc}
        Ka_cl, ok_cl = point_batch(ctr_l)
        Ka_cr, ok_cr = point_batch(ctr_r)
        wb = wb & ok_cl & ok_cr

    w0 = np.abs(vt_safe)
    wb_f = wb.astype(float)

    def star_at(Ka, sup):
        t = np.abs(Ka) * wb_f  # zero targets for non-WB cells keep the solve trivial there
        w = _solve_g_abs(t, sup, k, w0=np.clip(w0, np.where(sup, k, 0.0), np.where(sup, 1.0, k)))
        return np.where(Ka != 0.0, np.sign(Ka), np.sign(vt_safe)) * w

    vh_lo = star_at(Ka_lo, sup_l)
    vh_hi = star_at(Ka_hi, sup_r)

    # stationary traces and fluxes at the interfaces; horizon points masked afterwards
    Vs_lo = _star_conserved(C2, vh_lo, iflo["rr"], k)
    Vs_hi = _star_conserved(C2, vh_hi, ifhi["rr"], k)
    Fs_lo = _star_flux(C2, vh_lo, iflo["r"], k)
    Fs_hi = _star_flux(C2, vh_hi, ifhi["r"], k)
    Fs_lo[~iflo["valid"]] = 0.0  # horizon interface convention, matches F_{-1/2} = 0
    Vs_lo[~iflo["valid"]] = V_t[~iflo["valid"]]

    src_wb = Fs_hi - Fs_lo
    src_std = dr * source_e(V_t, np.where(gc["valid"][sl], c_t, 3.0 * M), M, k)

    wbm = wb[:, None]
    if cfg.order == 1:
        trace_lo = np.where(wbm, Vs_lo, V_t)
        trace_hi = np.where(wbm, Vs_hi, V_t)
    else:
        Vs_cl = _star_conserved(C2, star_at(Ka_cl, sup_l), ctr_l["rr"], k)
        Vs_cr = _star_conserved(C2, star_at(Ka_cr, sup_r), ctr_r["rr"], k)
        W_m = np.where(ctr_l["valid"][:, None], ve[0 : n + 2] - Vs_cl, 0.0)
        W_p = np.where(ctr_r["valid"][:, None], ve[2 : n + 4] - Vs_cr, 0.0)
        slope_wb = minmod3(W_p / dr, (W_p - W_m) / (2.0 * dr), -W_m / dr)
        slope_std = muscl_slope(ve[0 : n + 2], V_t, ve[2 : n + 4], dr)
        t_lo_wb = Vs_lo - 0.5 * dr * slope_wb
        t_hi_wb = Vs_hi + 0.5 * dr * slope_wb
        t_lo_std = V_t - 0.5 * dr * slope_std
        t_hi_std = V_t + 0.5 * dr * slope_std
        trace_lo = np.where(wbm, t_lo_wb, t_lo_std)
        trace_hi = np.where(wbm, t_hi_wb, t_hi_std)
        bad = ~(state_valid(trace_lo, k) & state_valid(trace_hi, k))
        if np.any(bad):
            if diag is not None:
                diag["order2_trace_reverts"] = diag.get("order2_trace_reverts", 0) + int(
                    np.sum(bad)
                )
            first_lo = np.where(wbm, Vs_lo, V_t)
            first_hi = np.where(wbm, Vs_hi, V_t)
            trace_lo = np.where(bad[:, None], first_lo, trace_lo)
            trace_hi = np.where(bad[:, None], first_hi, trace_hi)

    # interface points at or below the horizon carry no meaningful trace; keep states valid
    trace_lo = np.where(iflo["valid"][:, None], trace_lo, V_t)
    trace_hi = np.where(ifhi["valid"][:, None], trace_hi, V_t)

    source = np.where(wbm, src_wb, src_std)

    VL = trace_hi[:-1]
    VR = trace_lo[1:]
    r_if = grid.interfaces
    if cfg.flux == "roe_type":
        F = roe_type_flux(VL, VR, r_if, M, k)
    else:
        if dt is None:
            raise ValueError("lax_friedrichs flux requires the current dt")
        F = lax_friedrichs_flux(VL, VR, r_if, dt, dr, M, k)
    F[0] = 0.0
    out = -(F[1:] - F[:-1] - source[1:-1]) / dr
    if not np.all(np.isfinite(out)):
        cell = int(np.argmin(np.all(np.isfinite(out), axis=1)))
        raise SolverAbort("non-finite right-hand side", cell=cell)
    return out
