"""Slope-limited and central-WENO reconstruction on uniform meshes.

Operators act on (already formed) cell-average stencils and return polynomial
coefficients about the cell center: P(r) = a0 + a1*(r - r_i) + a2*(r - r_i)^2.
All candidates preserve the cell average, so every weighted combination does too.
"""

from __future__ import annotations

import numpy as np

CWENO3_WEIGHTS = (0.25, 0.25, 0.5)  # (left, right, central)
CWENO3_EPS = 1e-6


def minmod3(a, b, c):
    """Three-argument minmod: min/max when all arguments share a sign, else 0."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    pos = (a > 0) & (b > 0) & (c > 0)
    neg = (a < 0) & (b < 0) & (c < 0)
    return np.where(pos, np.minimum(a, np.minimum(b, c)), np.where(neg, np.maximum(a, np.maximum(b, c)), 0.0))


def muscl_slope(um, u0, up, dr):
    """MUSCL-minmod slope from the three-cell stencil."""
    return minmod3((up - u0) / dr, (up - um) / (2.0 * dr), (u0 - um) / dr)


def cweno3_coeffs(um, u0, up, dr, eps=CWENO3_EPS):
    """CWENO3 quadratic coefficients (a0, a1, a2) about the cell center.

    Candidates: one-sided linear P_L, P_R; central quadratic
    P_C = (P_opt - 1/4 P_L - 1/4 P_R)/(1/2) built from the optimal quadratic
    P_opt that reproduces the three cell averages. Jiang-Shu-type smoothness
    indicators; linear weights (1/4, 1/4, 1/2).
    """
    um = np.asarray(um, dtype=float)
    u0 = np.asarray(u0, dtype=float)
    up = np.asarray(up, dtype=float)
    dl = u0 - um
    dR = up - u0
    d2 = up - 2.0 * u0 + um
    is_l = dl * dl
    is_r = dR * dR
    is_c = (13.0 / 3.0) * d2 * d2 + 0.25 * (up - um) ** 2
    cl, cr, cc = CWENO3_WEIGHTS
    al = cl / (eps + is_l) ** 2
    ar = cr / (eps + is_r) ** 2
    ac = cc / (eps + is_c) ** 2
    s = al + ar + ac
    wl, wr, wc = al / s, ar / s, ac / s
    sl = dl / dr
    sr = dR / dr
    ctr = (up - um) / (2.0 * dr)
    # P_L = u0 + sl*x, P_R = u0 + sr*x
    # P_opt = (u0 - d2/24) + ctr*x + d2/(2 dr^2)*x^2
    # P_C = 2*P_opt - (P_L + P_R)/2
    a0 = u0 - wc * (d2 / 12.0)
    a1 = wl * sl + wr * sr + wc * (2.0 * ctr - 0.5 * (sl + sr))
    a2 = wc * (d2 / (dr * dr))
    return a0, a1, a2


def poly2_eval(a0, a1, a2, dx):
    """Evaluate a0 + a1*dx + a2*dx^2 (broadcasts)."""
    return a0 + dx * (a1 + dx * a2)
