"""Keplerian motion of the primaries.

The primaries orbit their barycenter with period 2*pi, so mean anomaly equals
time.  The true anomaly v(t) solves

    dv/dt = (1 + e0*cos(v))**2 / (1 - e0**2)**(3/2),   v(0) = 0,

and the mutual separation is rho(t) = (1 - e0**2) / (1 + e0*cos(v(t))).
The production path solves the Kepler equation M = E - e0*sin(E) by Newton
iteration; an ODE solve of the equation above is kept as the cross-check.
"""

from __future__ import annotations

import numpy as np
from scipy.integrate import solve_ivp

from .params import Params


def eccentric_anomaly(M, e0: float, tol: float = 1e-15, max_iter: int = 50):
    """Solve M = E - e0*sin(E) by Newton with a Halley-corrected start.

    Accepts scalars or numpy arrays, real or complex.  For real input the
    iteration is started at E = M + e0*sin(M), which converges for all
    e0 < 1 in a handful of steps at the eccentricities used here.
    """
    M = np.asarray(M)
    E = M + e0 * np.sin(M)
    for _ in range(max_iter):
        f = E - e0 * np.sin(E) - M
        fp = 1.0 - e0 * np.cos(E)
        dE = f / fp
        E = E - dE
        if np.max(np.abs(dE)) < tol * max(1.0, float(np.max(np.abs(E)))):
            break
    else:
        raise RuntimeError("Kepler iteration did not converge")
    return E


def true_anomaly(t, e0: float):
    """True anomaly v(t) with v(0) = 0, continuous (not wrapped to [0, 2*pi)).

    Vectorized over t.  Uses the Kepler-equation route; see
    :func:`true_anomaly_ode` for the independent differential route.
    """
    if e0 == 0.0:
        return np.asarray(t, dtype=float) + 0.0
    t = np.asarray(t, dtype=float)
    n = np.floor((t + np.pi) / (2.0 * np.pi))
    Mr = t - 2.0 * np.pi * n  # reduced mean anomaly in [-pi, pi)
    E = eccentric_anomaly(Mr, e0)
    beta = np.sqrt((1.0 + e0) / (1.0 - e0))
    v = 2.0 * np.arctan(beta * np.tan(0.5 * E))
    return v + 2.0 * np.pi * n


def true_anomaly_complex(t, e0: float, tol: float = 1e-25, max_iter: int = 80):
    """Analytic continuation of v(t) to complex t (principal determination).

    Used by contour-shifted quadratures.  Newton on the Kepler equation in
    complex arithmetic, started from the real solution at Re(t).
    """
    t = np.asarray(t, dtype=complex)
    if e0 == 0.0:
        return t
    n = np.floor((t.real + np.pi) / (2.0 * np.pi))
    Mr = t - 2.0 * np.pi * n
    E = np.asarray(eccentric_anomaly(Mr.real, e0), dtype=complex)
    for _ in range(max_iter):
        f = E - e0 * np.sin(E) - Mr
        dE = f / (1.0 - e0 * np.cos(E))
        E = E - dE
        if np.max(np.abs(dE)) < tol:
            break
    beta = np.sqrt((1.0 + e0) / (1.0 - e0))
    v = 2.0 * np.arctan(beta * np.tan(0.5 * E))
    return v + 2.0 * np.pi * n


def true_anomaly_ode(t_eval, e0: float, rtol: float = 1e-12):
    """Independent route: integrate dv/dt directly.  Returns v at t_eval."""
    t_eval = np.atleast_1d(np.asarray(t_eval, dtype=float))
    if e0 == 0.0:
        return t_eval.copy()
    fac = (1.0 - e0 * e0) ** 1.5

    def rhs(t, v):
        return [(1.0 + e0 * np.cos(v[0])) ** 2 / fac]

    order = np.argsort(t_eval)
    ts = t_eval[order]
    out = np.empty_like(ts)
    # integrate from 0 to the left and the right separately
    for sign in (-1.0, 1.0):
        sel = ts < 0 if sign < 0 else ts >= 0
        if not np.any(sel):
            continue
        pts = ts[sel]
        span = (0.0, pts[0] if sign < 0 else pts[-1])
        if span[1] == 0.0:
            out[sel] = 0.0
            continue
        sol = solve_ivp(rhs, span, [0.0], t_eval=pts if sign > 0 else pts[::-1],
                        rtol=rtol, atol=1e-14, method="DOP853")
        out[sel] = sol.y[0] if sign > 0 else sol.y[0][::-1]
    res = np.empty_like(out)
    res[order] = out
    return res


def primary_separation(t, e0: float):
    """Distance rho(t) between the primaries (vectorized, complex-safe)."""
    if e0 == 0.0:
        return np.ones_like(np.asarray(t, dtype=float)) + 0.0
    if np.iscomplexobj(np.asarray(t)):
        v = true_anomaly_complex(t, e0)
    else:
        v = true_anomaly(t, e0)
    return (1.0 - e0 * e0) / (1.0 + e0 * np.cos(v))


def primary_positions(t, params: Params):
    """Positions of the heavy (mass 1-mu) and light (mass mu) primary at time t.

    They sit at +mu*q0(t) and -(1-mu)*q0(t) with
    q0 = rho(t) * (cos v(t), sin v(t)), keeping the barycenter at the origin.
    """
    v = true_anomaly(t, params.e0)
    rho = (1.0 - params.e0 ** 2) / (1.0 + params.e0 * np.cos(v)) if params.e0 else np.ones_like(v)
    q0 = np.stack([rho * np.cos(v), rho * np.sin(v)], axis=-1)
    return params.mu * q0, -(1.0 - params.mu) * q0
