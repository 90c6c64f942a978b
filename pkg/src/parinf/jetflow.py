"""Extended-precision flow of the regularized circular-problem field.

Integrates the compactified near-escape equations with a Taylor (jet
transport / Picard) method in mpmath arithmetic.  Used as the reference
propagator when chart defects must be resolved far below double rounding;
the double-precision engine lives in flow.py.

Only the circular case is supported here: the interaction term is summed as
a convergent multipole series, which near the escape boundary (small x)
matches the exact potential to well below working precision.
"""

from __future__ import annotations

import mpmath as mp

from .errors import PrecisionExhausted
from .params import Params
from .fourier_taylor import Taylor1, taylor_sin_cos


def kappa_mp(ell: int, mu) -> mp.mpf:
    """Multipole mass coefficient evaluated in working precision."""
    mu = mp.mpf(mu)
    return mu * (1 - mu) * (mu ** (ell - 1) + (-1) ** ell * (1 - mu) ** (ell - 1))


def _lmax_for_w(w: float | mp.mpf, tol) -> int:
    """Multipole order needed so the dropped tail is below tol."""
    w = mp.mpf(w)
    if w <= 0:
        return 2
    lmax = 2
    term = w ** 3
    while term > tol and lmax < 200:
        lmax += 1
        term *= w
    return max(lmax + 2, 4)


def _rhs_jets(x, alpha, y, G, s, mu, lmax):
    """Field jets for state components given as Taylor1 in the step time."""
    deg = x.deg
    psi = alpha - s
    psi0 = psi.a[0]
    dpsi = Taylor1([0] + psi.a[1:], deg)
    sd, cd = taylor_sin_cos(dpsi)
    c0, s0 = mp.cos(psi0), mp.sin(psi0)
    cospsi = cd * c0 - sd * s0
    sinpsi = sd * c0 + cd * s0

    x2 = x * x
    x3 = x2 * x
    x4 = x2 * x2

    # Legendre recurrence in the jet algebra.
    P_prev = Taylor1([1], deg)          # P_0
    P_cur = cospsi                      # P_1
    dP_prev = Taylor1([0], deg)         # P_0'
    dP_cur = Taylor1([1], deg)          # P_1'
    dUx = Taylor1([0], deg)
    dUa = Taylor1([0], deg)
    xpow = x3 * x2                      # x^(2l+1) at l = 2
    half_pow = mp.mpf(1) / 4            # 2^(-l) at l = 2
    for ell in range(2, lmax + 1):
        P_next = (cospsi * P_cur * (2 * ell - 1) - P_prev * (ell - 1)) * (mp.mpf(1) / ell)
        dP_next = dP_prev + P_cur * (2 * ell - 1)
        P_prev, P_cur = P_cur, P_next
        dP_prev, dP_cur = dP_cur, dP_next
        kap = kappa_mp(ell, mu)
        if kap != 0:
            dUx = dUx + P_cur * xpow * (kap * (ell + 1) * half_pow)
            dUa = dUa - sinpsi * dP_cur * (xpow * x) * (kap * half_pow / 2)
        xpow = xpow * x2
        half_pow /= 2

    xdot = x3 * y * mp.mpf("-0.25")
    adot = x4 * G * mp.mpf("0.25")
    ydot = (G * G) * (x3 * x3) * mp.mpf("0.125") - x3 * (x + dUx) * mp.mpf("0.25")
    Gdot = dUa
    return xdot, adot, ydot, Gdot


def flow_mp(state, params: Params, t_span, tol=None, depth=40, max_halvings=18):
    """Propagate (x, alpha, y, G, s) over t_span with a Picard/Taylor method.

    Returns the final 5-component state as mpf values.  `tol` is the
    per-step truncation target (default 10^(5 - dps)).
    """
    if params.e0 != 0.0:
        raise NotImplementedError("extended-precision flow is circular-only")
    tol = tol if tol is not None else mp.mpf(10) ** (-mp.mp.dps + 5)
    mu = mp.mpf(params.mu)
    x, alpha, y, G, s = (mp.mpf(v) for v in state)
    t0, t1 = mp.mpf(t_span[0]), mp.mpf(t_span[1])
    direction = 1 if t1 >= t0 else -1
    lmax = _lmax_for_w(2 * (abs(x) * mp.mpf("1.5")) ** 2 / 2, tol / 100)

    t = t0
    h = mp.mpf(mp.pi) / 2 * direction
    while (t1 - t) * direction > mp.mpf(10) ** (-mp.mp.dps + 2):
        if abs(t1 - t) < abs(h):
            h = t1 - t
        for attempt in range(max_halvings + 1):
            # Picard iteration, gaining one Taylor order per sweep.
            jets = [Taylor1([v], depth) for v in (x, alpha, y, G)]
            s_jet = Taylor1([s, mp.mpf(1)], depth)
            for n in range(1, depth + 1):
                trunc = [Taylor1(j.a, n) for j in jets]
                rhs = _rhs_jets(*trunc, Taylor1(s_jet.a, n), mu, lmax)
                jets = [Taylor1([v0] + f.integrate().a[1:], depth)
                        for v0, f in zip((x, alpha, y, G), rhs)]
            tail = max(sum(abs(j.a[n]) * abs(h) ** n for n in range(depth - 3, depth + 1))
                       for j in jets)
            if tail < tol:
                break
            h /= 2
        else:
            raise PrecisionExhausted(0, "jet step size underflow")
        x, alpha, y, G = (j.eval(h) for j in jets)
        s += h
        t += h
        # Cautious step growth; the tail estimate governs acceptance.
        if tail < tol / mp.mpf(10) ** 8 and abs(h) < mp.pi:
            h *= 2
    return x, alpha, y, G, s


def poincare_map_mp(state4, params: Params, s0=0.0, tol=None, depth=40):
    """One stroboscopic period of (x, alpha, y, G) starting at epoch s0."""
    res = flow_mp((state4[0], state4[1], state4[2], state4[3], s0),
                  params, (0, 2 * mp.pi), tol=tol, depth=depth)
    return res[:4]
