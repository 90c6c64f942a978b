"""Scattering maps on the cylinder of angular momenta.

Circular problem: the two branches of the scattering map are integrable
twists (alpha, G) -> (alpha + f_pm(G), G) with f_pm = d/dG of the reduced
homoclinic potential at the corresponding critical phase; asymptotically
f_pm(G) = -3*pi*mu*(1-mu) / (2*G**4).

Elliptic problem (0 < e0 <= E0_CAP): the epoch-averaged part of the
perturbing potential acquires genuine alpha-harmonics, so G drifts.  The map
is realized through its generating function

    g(alpha, G') = Lsec(alpha, G'),
    alpha' = alpha + dg/dG',      G = G' + dg/dalpha,

solved implicitly for G' (hence exactly area-preserving), where
Lsec(alpha, G) = sum_k L_k(G) e^{i k alpha} collects the epoch-mean
components of the homoclinic potential.  Each L_k(G) is a closed multipole
series whose epoch averages are computed once per eccentricity.

The sigma-profile of the potential (which selects the homoclinic channel) is
exponentially small in G**3; its leading harmonics are continued in e0 from
the circular critical phases, failing with ChannelLost when the profile
degenerates.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np

from .errors import ChannelLost
from .ephemeris import true_anomaly, primary_separation
from .melnikov import (harmonic, reduced_poincare, _contour_h, _require_circular)
from .params import Params
from .potential import kappa_coeff, legendre_fourier

G_MIN_ASYMPTOTIC = 8.0
G_MIN_MAP = 2.0
E0_CAP = 0.05
_LMAX = 30
_KMAX = 4


def f_asymptotic(G: float, params: Params) -> float:
    """Leading twist term -3*pi*mu*(1-mu) / (2*G**4); valid for G >= 8."""
    if G < G_MIN_ASYMPTOTIC:
        raise ValueError(f"asymptotic evaluator requires G >= {G_MIN_ASYMPTOTIC}")
    return -3.0 * np.pi * params.mu * (1.0 - params.mu) / (2.0 * G ** 4)


def f_branch(G: float, params: Params, branch: str = "-",
             route: str = "quadrature", h_rel: float = 1e-4) -> float:
    """Phase shift f_pm(G) by centered 5-point differencing of the reduced
    potential in G.  route selects the underlying evaluator."""
    _require_circular(params)
    if G < G_MIN_MAP:
        raise ValueError(f"scattering map requires G >= {G_MIN_MAP}")
    h = h_rel * G
    vals = [reduced_poincare(G + j * h, params, branch, route=route)
            for j in (-2, -1, 1, 2)]
    return float((vals[0] - 8 * vals[1] + 8 * vals[2] - vals[3]) / (12 * h))


def scattering_circular(alpha: float, G: float, params: Params,
                        branch: str = "-", route: str = "series"):
    """One application of the circular scattering map; G is exactly fixed."""
    return alpha + f_branch(G, params, branch, route=route), G


def twist_statistic(G: float, params: Params, branch: str = "-",
                    route: str = "series", h_rel: float = 1e-3) -> float:
    """|d f_pm / dG| * G**5 / mu, which tends to 6*pi*(1-mu) as G grows."""
    h = h_rel * G
    fs = [f_branch(G + j * h, params, branch, route=route) for j in (-2, -1, 1, 2)]
    dfdG = (fs[0] - 8 * fs[1] + 8 * fs[2] - fs[3]) / (12 * h)
    return float(abs(dfdG) * G ** 5 / params.mu)


def twist_check(G_values, params: Params, branch: str = "-") -> tuple[float, float]:
    """(min statistic over G_values, theoretical limit 6*pi*(1-mu))."""
    stats = [twist_statistic(G, params, branch) for G in G_values]
    return float(min(stats)), float(6.0 * np.pi * (1.0 - params.mu))


# ---------------------------------------------------------------------------
# elliptic secular components


def _epoch_fourier(l: int, k: int, q: int, e0: float, n_s: int = 512) -> complex:
    """b_{l,k,q} = epoch mean of rho(s)**l * exp(-i k v(s)) * exp(-i q s)."""
    s = 2.0 * np.pi * np.arange(n_s) / n_s
    rho = primary_separation(s, e0)
    v = true_anomaly(s, e0)
    return complex(np.mean(rho ** l * np.exp(-1j * (k * v + q * s))))


@lru_cache(maxsize=None)
def _half_circle_moment(n: int, k: int) -> float:
    """integral_{-pi/2}^{pi/2} cos(t)**n e^{2 i k t} dt for even n (it is real)."""
    if n % 2:
        raise ValueError("even powers only")
    j = n // 2 + k
    if 0 <= j <= n:
        return np.pi * comb(n, j) / 2.0 ** n
    return 0.0


class EllipticScattering:
    """Scattering map of the elliptic problem at fixed eccentricity.

    Precomputes the epoch-averaged multipole data; exposes the reduced
    secular potential Lsec, the implicit symplectic map, and the channel
    continuation.
    """

    def __init__(self, params: Params, kmax: int = _KMAX, lmax: int = _LMAX):
        if params.e0 > E0_CAP:
            raise ValueError(f"e0 capped at {E0_CAP}")
        self.params = params
        self.kmax = kmax
        self.lmax = lmax
        # coef[k][l] multiplies x**(2l+2) in the (alpha-harmonic k, epoch-mean)
        # component of dU
        self._coef = {}
        for k in range(-kmax, kmax + 1):
            g = np.zeros(lmax + 1, dtype=complex)
            for l in range(max(2, abs(k)), lmax + 1):
                if (l - abs(k)) % 2 != 0 or abs(k) > l:
                    continue
                p_lk = legendre_fourier(l)[k + l]
                if p_lk == 0.0:
                    continue
                b = _epoch_fourier(l, k, 0, params.e0)
                g[l] = kappa_coeff(l, params.mu) * p_lk * b / 2.0 ** (l + 1)
            self._coef[k] = g

    def secular_coefficient(self, k: int, G: float, d_dG: int = 0) -> complex:
        """L_k(G) (or its G-derivative): closed series
        sum_l g_l * 2**(2l+2) * G**(1-2l) / 2 * moment(2l-2, k)."""
        g = self._coef[k]
        total = 0.0 + 0.0j
        for l in range(2, self.lmax + 1):
            if g[l] == 0.0:
                continue
            mom = _half_circle_moment(2 * l - 2, k)
            if mom == 0.0:
                continue
            c = g[l] * 2.0 ** (2 * l + 2) / 2.0 * mom
            p = 1 - 2 * l
            if d_dG == 0:
                total += c * G ** p
            elif d_dG == 1:
                total += c * p * G ** (p - 1)
            else:
                total += c * p * (p - 1) * G ** (p - 2)
        return total

    def lsec(self, alpha: float, G: float, d_alpha: int = 0, d_G: int = 0) -> float:
        """Real secular potential and its derivatives."""
        total = self.secular_coefficient(0, G, d_G) if d_alpha == 0 else 0.0
        for k in range(1, self.kmax + 1):
            Lk = self.secular_coefficient(k, G, d_G)
            phase = (1j * k) ** d_alpha * np.exp(1j * k * alpha)
            total += 2.0 * (Lk * phase).real
        return float(np.real(total))

    def map(self, alpha: float, G: float, branch: str = "-",
            newton_tol: float = 1e-13) -> tuple[float, float]:
        """One application of the elliptic scattering map (exact generating-
        function solve, hence area-preserving to machine precision)."""
        if G < G_MIN_MAP:
            raise ValueError(f"scattering map requires G >= {G_MIN_MAP}")
        # The secular coefficient L_0 already reduces to the circular mean at
        # e0 = 0; the branch enters only through the exponentially small
        # harmonic correction of the reduced potential.
        def branch_corr(Gp):
            from .melnikov import reduced_mean_series
            return (reduced_poincare(Gp, self.params_circular, branch,
                                     route="series")
                    - reduced_mean_series(Gp, self.params_circular))

        Gp = G
        for _ in range(50):
            res = Gp + self.lsec(alpha, Gp, d_alpha=1) - G
            dres = 1.0 + _fd(lambda z: self.lsec(alpha, z, d_alpha=1), Gp)
            step = res / dres
            Gp -= step
            if abs(step) < newton_tol * max(1.0, abs(G)):
                break
        dgdG = self.lsec(alpha, Gp, d_G=1) + _fd(branch_corr, Gp)
        return alpha + dgdG, Gp

    @property
    def params_circular(self) -> Params:
        return Params(mu=self.params.mu, e0=0.0,
                      collision_floor=self.params.collision_floor)

    def jacobian(self, alpha: float, G: float, branch: str = "-",
                 h: float = 1e-6) -> np.ndarray:
        """Centered-difference Jacobian of the map (area-preservation check)."""
        out = np.empty((2, 2))
        for j, dv in enumerate(((h, 0.0), (0.0, h))):
            ap, Gp = self.map(alpha + dv[0], G + dv[1], branch)
            am, Gm = self.map(alpha - dv[0], G - dv[1], branch)
            out[0, j] = (ap - am) / (2 * h)
            out[1, j] = (Gp - Gm) / (2 * h)
        return out

    def first_order_field(self, alpha: float, G: float, branch: str = "-",
                          e0_fd: float | None = None) -> tuple[float, float]:
        """S1 = d/d e0 of the map at e0 = 0, by centered differences in e0."""
        e0 = e0_fd if e0_fd is not None else max(self.params.e0, 1e-3)
        mu = self.params.mu
        # e0 < 0 is not an admissible parameter (it is equivalent to an epoch
        # shift), so the derivative is one-sided against the circular map.
        sc = EllipticScattering(Params(mu=mu, e0=e0), self.kmax, self.lmax)
        a1, G1 = sc.map(alpha, G, branch)
        a0, G0_ = scattering_circular(alpha, G, sc.params_circular, branch)
        return (a1 - a0) / e0, (G1 - G0_) / e0


def _fd(fn, x: float, h: float = 1e-6):
    return (fn(x + h) - fn(x - h)) / (2.0 * h)


# ---------------------------------------------------------------------------
# homoclinic channel continuation (exponentially small sigma-profile)


def channel_harmonic(k: int, q: int, G0: float, params: Params) -> complex:
    """I_{k,q}: homoclinic integral of the (k alpha, q s) component of dU.

    Computed on a contour shifted off the real axis on the side where
    exp(i q t(tau)) decays (q < 0: lower half plane).  At e0 = 0 only
    k = -q survives and I_{m,-m} equals the circular harmonic c_m.
    """
    if q == 0:
        raise ValueError("q = 0 components are secular, not channel harmonics")
    side = -1.0 if q < 0 else 1.0
    h = _contour_h(G0) * side
    m = abs(q)
    sig = 1.0 / np.sqrt(m * G0 ** 3 * abs(h))
    U = max(14.0 * sig, 1.5)
    phase = m * 0.5 * G0 ** 3 * ((1 - h * h) * U + U ** 3 / 3.0)
    n = int(min(40000, max(400, 8 * phase)))
    nodes, w = np.polynomial.legendre.leggauss(min(n, 2000))
    n_pan = max(1, n // 2000)
    edges = np.linspace(-U, U, n_pan + 1)
    # x-power coefficients of the (k, q) component
    lmax = _LMAX
    coef = np.zeros(lmax + 1, dtype=complex)
    for l in range(max(2, abs(k)), lmax + 1):
        p_lk = legendre_fourier(l)[k + l] if abs(k) <= l else 0.0
        if p_lk == 0.0:
            continue
        b = _epoch_fourier(l, k, q, params.e0)
        coef[l] = kappa_coeff(l, params.mu) * p_lk * b / 2.0 ** (l + 1)
    total = 0.0 + 0.0j
    for a, b_ in zip(edges[:-1], edges[1:]):
        tau = 0.5 * (b_ - a) * nodes + 0.5 * (a + b_) + 1j * h
        x2 = 4.0 / (G0 ** 2 * (1.0 + tau ** 2))
        comp = np.zeros_like(tau, dtype=complex)
        xp = x2 ** 2  # x^(2l+2) for l = 1
        for l in range(2, lmax + 1):
            xp = xp * x2
            if coef[l] != 0.0:
                comp += coef[l] * xp
        rot = ((1.0 + 1j * tau) / (1.0 - 1j * tau)) ** k
        ph = np.exp(1j * q * 0.5 * G0 ** 3 * (tau + tau ** 3 / 3.0))
        f = comp * rot * ph * 0.5 * G0 ** 3 * (1.0 + tau ** 2)
        total += 0.5 * (b_ - a) * np.sum(w * f)
    return complex(total)


def channel_profile(alpha0: float, G0: float, params: Params,
                    kmax: int = 2):
    """Lambda(alpha0) with sigma-profile P(beta) = 2 Re(Lambda e^{-i beta})
    + 2 Re(Lambda2 e^{-2 i beta}), beta = s0 - sigma."""
    lam1 = sum(channel_harmonic(k, -1, G0, params) * np.exp(1j * k * alpha0)
               for k in range(-kmax, kmax + 1))
    lam2 = sum(channel_harmonic(k, -2, G0, params) * np.exp(1j * k * alpha0)
               for k in range(-kmax, kmax + 1))
    return complex(lam1), complex(lam2)


def continue_channel(alpha0: float, G0: float, s0: float, params: Params,
                     branch: str = "-", e0_step: float = 1e-2,
                     max_halvings: int = 20) -> float:
    """Critical phase sigma*(e0) of the channel, continued from e0 = 0.

    Newton on dP/dbeta with the leading two epoch-harmonics, stepping e0 up
    from zero and halving the step on failure; raises ChannelLost after
    max_halvings halvings.
    """
    target = params.e0
    if target > E0_CAP:
        raise ValueError(f"e0 capped at {E0_CAP}")
    beta = alpha0 if branch == "-" else alpha0 + np.pi  # circular seed
    e0 = 0.0
    step = e0_step
    halvings = 0
    while True:
        e0_next = min(target, e0 + step)
        p_next = Params(mu=params.mu, e0=e0_next)
        lam1, lam2 = channel_profile(alpha0, G0, p_next)

        def dP(b):
            return 2.0 * np.real(-1j * lam1 * np.exp(-1j * b)) \
                + 2.0 * np.real(-2j * lam2 * np.exp(-2j * b))

        def d2P(b):
            return 2.0 * np.real(-lam1 * np.exp(-1j * b)) \
                + 2.0 * np.real(-4.0 * lam2 * np.exp(-2j * b))

        ok = True
        b = beta
        scale = 2.0 * (abs(lam1) + 4.0 * abs(lam2))
        if scale == 0.0:
            raise ChannelLost("sigma-profile vanishes to working precision")
        for _ in range(60):
            d2 = d2P(b)
            if abs(d2) < 1e-6 * scale:
                ok = False
                break
            delta = dP(b) / d2
            b -= delta
            if abs(delta) < 1e-12:
                break
        else:
            ok = False
        if ok and abs(b - beta) < 1.0:
            beta = b
            e0 = e0_next
            if e0 >= target:
                return float(s0 - beta)
        else:
            step *= 0.5
            halvings += 1
            if halvings > max_halvings:
                raise ChannelLost(
                    f"continuation stalled at e0 = {e0} (step {step})")
