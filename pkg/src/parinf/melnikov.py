"""Homoclinic (Poincare/Melnikov) potential of the circular problem.

The first-order displacement potential along the unperturbed separatrix,

    L(alpha0, G0, s0, sigma) = integral dU(x_h(sigma + t),
                                          alpha0 + da_h(sigma + t),
                                          s0 + t) dt,

depends on its angle arguments only through theta0 = alpha0 - s0 + sigma and
has a pure cosine Fourier profile in theta0 (the sine integrals vanish by the
parity of the separatrix):

    L = Lbar(G0) + sum_{m>=1} 2 c_m(G0) cos(m theta0).

The mean Lbar is elementary (closed multipole series, with an independent
quadrature route), while the harmonics c_m are exponentially small in G0**3
and are computed by quadrature on a contour shifted off the real tau axis,
where the oscillatory factor exp(-i m t(tau)) becomes decaying.  Below the
float64 floor the same contour integral is evaluated with mpmath.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb

import mpmath as mp
import numpy as np

from .errors import NondegeneracyFailure, QuadratureError
from .params import Params
from .potential import (delta_U, delta_U_angular_mean,
                        delta_U_angular_mean_elliptic_oracle,
                        delta_U_fourier_alpha, kappa_coeff, legendre_fourier,
                        legendre_mean)

G_MIN_QUADRATURE = 2.0
DEFAULT_HARMONICS = 3


@dataclass(frozen=True)
class MelnikovResult:
    value: float
    error: float            # quadrature error estimate (panel halving)
    tail_bound: float       # analytic bound on the truncated tau tail
    mean: float             # theta0-independent part
    harmonics: tuple        # (c_1, ..., c_M)
    theta0: float


@lru_cache(maxsize=None)
def _inv_power_integral(l: int) -> float:
    """integral over R of (1 + tau**2)**(-l)."""
    return np.pi * comb(2 * l - 2, l - 1) / 4.0 ** (l - 1)


def reduced_mean_series(G0: float, params: Params, lmax: int = 60) -> float:
    """Closed-form mean Lbar(G0) of the circular homoclinic potential.

    Lbar = sum_{even l >= 2} kappa_l * mean(P_l) * 2**l * G0**(1-2l)
           * integral (1+tau^2)^(-l).
    Leading term: mu*(1-mu)*pi / (2*G0**3).
    """
    _require_circular(params)
    total = 0.0
    for l in range(2, lmax + 1, 2):
        pm = legendre_mean(l)
        term = (kappa_coeff(l, params.mu) * pm * 2.0 ** l
                * G0 ** (1 - 2 * l) * _inv_power_integral(l))
        total += term
        if abs(term) < 1e-18 * abs(total):
            break
    return total


def reduced_mean_quadrature(G0: float, params: Params, tol: float = 1e-12,
                            n_panels: int = 24, use_oracle_mean: bool = False):
    """Mean Lbar(G0) by adaptive-resolution quadrature in tau, with tail bound.

    Truncates at T chosen from the analytic envelope |mean dU| <= C x**6 and
    integrates with composite Gauss-Legendre panels graded toward tau = 0.
    Returns (value, error_estimate, tail_bound); the error estimate is the
    change under doubling the panel count.
    """
    _require_circular(params)
    if G0 < G_MIN_QUADRATURE:
        raise ValueError(f"quadrature route requires G0 >= {G_MIN_QUADRATURE}")
    mu = params.mu
    C = kappa_coeff(2, mu) * legendre_mean(2) / 8.0 * 1.5  # envelope with margin
    scale = mu * (1.0 - mu) * np.pi / (2.0 * G0 ** 3)
    # tail = C * 64 G^-3 / (3 T^3) <= tol * scale
    T = (C * 64.0 / (G0 ** 3 * 3.0 * tol * scale)) ** (1.0 / 3.0)
    T = max(T, 10.0)
    mean_fn = (delta_U_angular_mean_elliptic_oracle if use_oracle_mean
               else delta_U_angular_mean)

    def compute(npan: int) -> float:
        # panels graded geometrically from [0, 1] out to T, mirrored
        edges = np.unique(np.concatenate([
            np.linspace(0.0, 2.0, npan // 2 + 1),
            2.0 * (T / 2.0) ** (np.linspace(0.0, 1.0, npan // 2 + 1))]))
        nodes, weights = np.polynomial.legendre.leggauss(20)
        total = 0.0
        for a, b in zip(edges[:-1], edges[1:]):
            tau = 0.5 * (b - a) * nodes + 0.5 * (a + b)
            x = 2.0 / (G0 * np.sqrt(1.0 + tau ** 2))
            f = mean_fn(x, params) * 0.5 * G0 ** 3 * (1.0 + tau ** 2)
            total += 0.5 * (b - a) * np.sum(weights * f)
        return 2.0 * total  # even integrand

    v1 = compute(n_panels)
    v2 = compute(2 * n_panels)
    tail = C * 64.0 / (G0 ** 3 * 3.0 * T ** 3)
    err = abs(v2 - v1) + tail
    return v2, err, tail


def _contour_h(G0: float) -> float:
    """Contour offset below the real axis; keeps the multipole series inside
    its convergence disc while staying clear of the branch point at tau = -i."""
    return float(np.sqrt(max(0.19, min(0.9, 1.0 - 2.8 / G0 ** 2))))


def harmonic(m: int, G0: float, params: Params) -> float:
    """Circular harmonic c_m(G0) (exponentially small, float64 path).

    c_m = Re integral D_m(x_h) * ((1+i tau)/(1-i tau))**m * exp(-i m t(tau))
          * (G0**3/2) (1 + tau**2) dtau
    evaluated on the contour tau = u - i h, where the exponential decays like
    a Gaussian in u.  Switches to the mpmath path when exp(-m G0^3/3)
    underflows double precision.
    """
    _require_circular(params)
    if m < 1:
        raise ValueError("harmonic index must be >= 1")
    if m * G0 ** 3 / 3.0 > 600.0:
        return float(harmonic_mp(m, G0, params))
    h = _contour_h(G0)
    sig = 1.0 / np.sqrt(m * G0 ** 3 * h)
    U = max(14.0 * sig, 1.5)
    # oscillation budget on the contour -> node count
    phase = m * 0.5 * G0 ** 3 * ((1 - h * h) * U + U ** 3 / 3.0)
    n = int(min(40000, max(400, 8 * phase)))
    u, w = np.polynomial.legendre.leggauss(min(n, 2000))
    total = 0.0 + 0.0j
    n_pan = max(1, n // 2000)
    edges = np.linspace(-U, U, n_pan + 1)
    for a, b in zip(edges[:-1], edges[1:]):
        tau = 0.5 * (b - a) * u + 0.5 * (a + b) - 1j * h
        x = 2.0 / (G0 * np.sqrt(1.0 + tau ** 2))
        Dm = delta_U_fourier_alpha(m, x, params)
        rot = ((1.0 + 1j * tau) / (1.0 - 1j * tau)) ** m
        ph = np.exp(-1j * m * 0.5 * G0 ** 3 * (tau + tau ** 3 / 3.0))
        f = Dm * rot * ph * 0.5 * G0 ** 3 * (1.0 + tau ** 2)
        total += 0.5 * (b - a) * np.sum(w * f)
    return float(total.real)


def harmonic_mp(m: int, G0: float, params: Params, dps: int = 40):
    """mpmath evaluation of c_m(G0) for magnitudes below the float64 floor."""
    _require_circular(params)
    mu = params.mu
    h = mp.mpf(_contour_h(G0))
    G = mp.mpf(G0)
    lmax = 40

    # dU = (x^2/2) sum_l kappa_l P_l (x^2/2)^l  (rho = 1), so
    # D_m(x) = (x^2/2) * sum_l kappa_l p_{l,m} (x^2/2)^l.
    def g(u):
        tau = mp.mpc(u) - 1j * h
        x2 = 4 / (G * G * (1 + tau * tau))
        base = x2 / 2
        acc = mp.mpc(0)
        term = base
        for l in range(2, lmax + 1):
            term = term * base
            if abs(m) <= l and (l - m) % 2 == 0:
                acc += mp.mpf(kappa_coeff(l, mu)) * mp.mpf(legendre_fourier(l)[m + l]) * term
        Dm = base * acc
        rot = ((1 + 1j * tau) / (1 - 1j * tau)) ** m
        ph = mp.exp(-1j * m * G ** 3 / 2 * (tau + tau ** 3 / 3))
        return Dm * rot * ph * G ** 3 / 2 * (1 + tau * tau)

    sig = float(1.0 / np.sqrt(m * G0 ** 3 * float(h)))
    U = max(14.0 * sig, 1.5)
    with mp.workdps(dps):
        val = mp.quad(g, [-U, 0, U])
    return val.real


def harmonic_asymptotic(G0: float, params: Params) -> float:
    """Leading asymptotic of the first harmonic, c_1 ~ L_{1,-1}/2 with
    L_{1,-1} = mu(1-mu)(1-2mu) sqrt(pi/(8 G0)) exp(-G0**3/3)."""
    mu = params.mu
    return 0.5 * mu * (1 - mu) * (1 - 2 * mu) * np.sqrt(np.pi / (8 * G0)) * np.exp(-G0 ** 3 / 3)


def poincare_function(alpha0: float, G0: float, s0: float, sigma: float,
                      params: Params, n_harmonics: int = DEFAULT_HARMONICS,
                      tol: float = 1e-12, use_oracle_mean: bool = False) -> MelnikovResult:
    """Homoclinic potential L(alpha0, G0, s0, sigma) for the circular problem."""
    _require_circular(params)
    theta0 = alpha0 - s0 + sigma
    mean, err, tail = reduced_mean_quadrature(G0, params, tol=tol,
                                              use_oracle_mean=use_oracle_mean)
    cs = tuple(harmonic(m, G0, params) for m in range(1, n_harmonics + 1))
    value = mean + sum(2.0 * c * np.cos(m * theta0)
                       for m, c in enumerate(cs, start=1))
    return MelnikovResult(value=float(value), error=float(err), tail_bound=float(tail),
                          mean=float(mean), harmonics=cs, theta0=float(theta0))


def _profile_derivatives_mp(G0: float, params: Params, n_harmonics: int = 3, dps: int = 40):
    """(c_m) as mpf plus the max of |dL/dsigma| over sigma, in mpmath."""
    with mp.workdps(dps):
        cs = [harmonic_mp(m, G0, params, dps=dps) for m in range(1, n_harmonics + 1)]
        grid = [mp.mpf(2) * mp.pi * k / 720 for k in range(720)]
        mx = mp.mpf(0)
        for th in grid:
            d = sum(-2 * m * c * mp.sin(m * th) for m, c in enumerate(cs, start=1))
            mx = max(mx, abs(d))
    return cs, mx


@dataclass(frozen=True)
class CriticalPoints:
    sigma_minus: float
    sigma_plus: float
    residual_ratio_minus: float
    residual_ratio_plus: float
    second_deriv_minus: float
    second_deriv_plus: float
    max_abs_dL: float


def critical_points(alpha0: float, G0: float, s0: float, params: Params,
                    n_harmonics: int = DEFAULT_HARMONICS) -> CriticalPoints:
    """Critical phases of sigma -> L and nondegeneracy data.

    sigma*- = s0 - alpha0 and sigma*+ = pi + s0 - alpha0 (theta0 = 0, pi).
    Residuals |dL/dsigma(sigma*)| are measured by centered differences on
    poincare_function reconstructed from the harmonics, normalized by the
    global maximum of |dL/dsigma|; everything is carried in mpmath because
    the harmonics sit far below double precision at moderate G0.
    """
    _require_circular(params)
    cs, mx = _profile_derivatives_mp(G0, params, n_harmonics)
    if mx == 0:
        raise NondegeneracyFailure("dL/dsigma vanishes identically to working precision")
    sm = s0 - alpha0
    sp = np.pi + s0 - alpha0

    def dL(theta):
        return sum(-2 * m * c * mp.sin(m * theta) for m, c in enumerate(cs, start=1))

    def d2L(theta):
        return sum(-2 * m * m * c * mp.cos(m * theta) for m, c in enumerate(cs, start=1))

    h = mp.mpf(1e-4)

    def fd_residual(theta):
        L = lambda th: sum(2 * c * mp.cos(m * th) for m, c in enumerate(cs, start=1))
        return abs((L(theta + h) - L(theta - h)) / (2 * h))

    with mp.workdps(40):
        rm = fd_residual(mp.mpf(0)) / mx
        rp = fd_residual(mp.pi) / mx
        d2m = d2L(mp.mpf(0))
        d2p = d2L(mp.pi)
    return CriticalPoints(sigma_minus=float(sm), sigma_plus=float(sp),
                          residual_ratio_minus=float(rm), residual_ratio_plus=float(rp),
                          second_deriv_minus=float(d2m), second_deriv_plus=float(d2p),
                          max_abs_dL=float(mx))


def reduced_poincare(G0: float, params: Params, branch: str = "-",
                     n_harmonics: int = DEFAULT_HARMONICS,
                     route: str = "series") -> float:
    """Reduced potential at a critical phase: L*- = L(theta0=0), L*+ = L(theta0=pi).

    route = "series" uses the closed multipole mean; "quadrature" the panel
    quadrature.  The exponentially small harmonic correction is included
    (it matters only at very small G0).
    """
    _require_circular(params)
    if branch not in ("-", "+"):
        raise ValueError("branch must be '-' or '+'")
    if route == "series":
        mean = reduced_mean_series(G0, params)
    elif route == "quadrature":
        mean = reduced_mean_quadrature(G0, params)[0]
    elif route == "quadrature-oracle":
        mean = reduced_mean_quadrature(G0, params, use_oracle_mean=True)[0]
    else:
        raise ValueError(f"unknown route {route!r}")
    sgn = 1.0 if branch == "-" else -1.0  # cos(m*0) = 1, cos(m*pi) = (-1)^m
    corr = sum(2.0 * harmonic(m, G0, params) * (sgn ** m)
               for m in range(1, n_harmonics + 1))
    return float(mean + corr)


def reduced_poincare_asymptotic(G0: float, params: Params) -> float:
    """Leading term mu (1 - mu) pi / (2 G0**3)."""
    return params.mu * (1.0 - params.mu) * np.pi / (2.0 * G0 ** 3)


def _require_circular(params: Params) -> None:
    if params.e0 != 0.0:
        raise ValueError("circular-problem routine called with e0 != 0")
