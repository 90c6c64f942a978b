"""Unperturbed (mu = 0) parabolic homoclinic orbit in closed form.

For the Kepler problem the invariant circle {x = y = 0} at angular momentum
G0 has coincident stable/unstable manifolds, parameterized by

    x = 2 / (G0 * sqrt(1 + tau**2)),
    y = 2 * tau / (G0 * (1 + tau**2)),
    alpha = alpha0 + 2 * arctan(tau),
    G = G0,        s = s0 + t,
    t = (G0**3 / 2) * (tau + tau**3 / 3).

tau is the natural quadrature variable for homoclinic integrals, with
dt = (G0**3 / 2) * (1 + tau**2) dtau.
"""

from __future__ import annotations

import numpy as np

from .params import McGeheeState


def separatrix_eval(tau, alpha0: float, G0: float, s0: float = 0.0):
    """Arrays (x, alpha, y, G, s) on the parabolic separatrix (vectorized)."""
    tau = np.asarray(tau, dtype=float)
    opt = 1.0 + tau * tau
    x = 2.0 / (G0 * np.sqrt(opt))
    y = 2.0 * tau / (G0 * opt)
    alpha = alpha0 + 2.0 * np.arctan(tau)
    t = 0.5 * G0 ** 3 * (tau + tau ** 3 / 3.0)
    G = np.full_like(x, G0)
    return x, alpha, y, G, s0 + t


def separatrix_state(tau: float, alpha0: float, G0: float, s0: float = 0.0) -> McGeheeState:
    x, alpha, y, G, s = separatrix_eval(float(tau), alpha0, G0, s0)
    return McGeheeState(x=float(x), alpha=float(alpha), y=float(y),
                        G=float(G), s=float(s))


def time_from_tau(tau, G0: float):
    tau = np.asarray(tau, dtype=float)
    return 0.5 * G0 ** 3 * (tau + tau ** 3 / 3.0)


def tau_from_time(t, G0: float):
    """Invert t(tau): the real root of tau**3 + 3*tau - 6*t/G0**3 = 0.

    Cardano's formula (the discriminant is always positive here, so the real
    root is unique), then one Newton step to polish rounding.
    """
    t = np.asarray(t, dtype=float)
    b = 3.0 * t / G0 ** 3  # tau**3/3 + tau = 2t/G0^3  =>  half of -q
    disc = np.sqrt(b * b + 1.0)
    tau = np.cbrt(b + disc) + np.cbrt(b - disc)
    # Newton polish on f = tau + tau^3/3 - 2 t / G0^3
    f = tau + tau ** 3 / 3.0 - 2.0 * t / G0 ** 3
    tau = tau - f / (1.0 + tau * tau)
    return tau


def separatrix_velocity(tau, alpha0: float, G0: float):
    """Exact d/dt of (x, alpha, y, G, s) along the separatrix (vectorized)."""
    tau = np.asarray(tau, dtype=float)
    opt = 1.0 + tau * tau
    dxdt = -4.0 * tau / (G0 ** 4 * opt ** 2.5)
    dadt = (2.0 / opt) / (0.5 * G0 ** 3 * opt)
    dydt = (2.0 * (1.0 - tau * tau) / (G0 * opt ** 2)) / (0.5 * G0 ** 3 * opt)
    zeros = np.zeros_like(dxdt)
    return dxdt, dadt, dydt, zeros, np.ones_like(dxdt)


def verify_separatrix(G0_values=(1.0, 2.0, 5.0), tau_span=20.0, n: int = 4001) -> float:
    """Max residual of the mu = 0 vector field along the closed-form orbit."""
    from .dynamics import mcgehee_rhs
    from .params import Params

    p0 = Params(mu=0.0)
    worst = 0.0
    for G0 in G0_values:
        taus = np.linspace(-tau_span, tau_span, n)
        x, alpha, y, G, s = separatrix_eval(taus, 0.3, G0, 0.1)
        dx, da, dy, dG, ds = separatrix_velocity(taus, 0.3, G0)
        for i in range(n):
            rhs = mcgehee_rhs(0.0, np.array([x[i], alpha[i], y[i], G[i], s[i]]), p0)
            res = np.max(np.abs(rhs - np.array([dx[i], da[i], dy[i], dG[i], ds[i]])))
            worst = max(worst, float(res))
    return worst
