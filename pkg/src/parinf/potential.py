"""Two-center potential in McGehee variables and its multipole machinery.

With r = 2 / x**2 and phi = alpha - v(s) the potential of the two primaries is

    U(x, alpha, s) = (x**2 / 2) * ((1 - mu) / sig_h + mu / sig_l),

    sig_h**2 = 1 - mu*rho*x**2*cos(phi)       + (mu*rho*x**2)**2 / 4,
    sig_l**2 = 1 + (1-mu)*rho*x**2*cos(phi)   + ((1-mu)*rho*x**2)**2 / 4,

where rho(s) is the primaries' separation.  The deviation from the Kepler
monopole, dU = U - x**2/2, is O(x**6) but suffers catastrophic cancellation
if formed by subtraction.  The Legendre generating function gives the exact
series (the l = 1 terms cancel because the barycenter is at the origin):

    dU = (x**2 / 2) * sum_{l>=2} kappa_l * P_l(cos phi) * (rho * x**2 / 2)**l,
    kappa_l = mu*(1-mu) * (mu**(l-1) + (-1)**l * (1-mu)**(l-1)),

which converges for rho*x**2/2 * max(mu, 1-mu) < 1 and is used whenever that
ratio is below 1/2; the direct subtraction is used otherwise (no cancellation
there since dU is then comparable to U).
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy.special import ellipk
from math import comb

from .errors import CollisionError
from .params import Params
from .ephemeris import true_anomaly, true_anomaly_complex, primary_separation

_SERIES_W_MAX = 0.5  # switch point between series and direct evaluation
_EPS = 1e-18


def kappa_coeff(l: int, mu: float) -> float:
    """Multipole coefficient kappa_l; kappa_1 = 0, kappa_l = O(mu) for l >= 2."""
    return mu * (1.0 - mu) * (mu ** (l - 1) + (-1.0) ** l * (1.0 - mu) ** (l - 1))


@lru_cache(maxsize=None)
def legendre_fourier(l: int) -> np.ndarray:
    """Fourier coefficients p[l, j] with P_l(cos t) = sum_j p[l, j] * exp(i j t).

    Returns the full array for j = -l..l (index j + l).  They are real,
    symmetric in j, and vanish unless j = l (mod 2).  Closed form:
    p[l, j] = binom(l, (l+j)/2) * binom(l, (l-j)/2) / 4**l ... computed here
    from the expansion of ((e^{it} + e^{-it})/2)**l via the recurrence-free
    product formula below, which is exact in rational arithmetic.
    """
    # P_l(x) = sum_k a_k x^(l-2k); with x = cos t expand each power of cos t.
    coeffs = np.zeros(2 * l + 1)
    # Legendre coefficients a_k = (-1)^k binom(l,k) binom(2l-2k,l) / 2^l
    for k in range(l // 2 + 1):
        a = (-1) ** k * comb(l, k) * comb(2 * l - 2 * k, l) / 2.0 ** l
        m = l - 2 * k  # expand cos^m t = 2^-m sum_j binom(m, j) e^{i(m-2j)t}
        for j in range(m + 1):
            coeffs[(m - 2 * j) + l] += a * comb(m, j) / 2.0 ** m
    return coeffs


@lru_cache(maxsize=None)
def legendre_mean(l: int) -> float:
    """Angular mean of P_l(cos t) over a full circle."""
    if l % 2:
        return 0.0
    return (comb(l, l // 2) / 2.0 ** l) ** 2


def _lmax_for(wmax: float, tol: float = _EPS) -> int:
    if wmax <= 0.0:
        return 2
    if wmax >= 0.9:
        raise ValueError("multipole series evaluated outside its domain")
    return max(4, int(np.ceil(np.log(tol) / np.log(wmax))) + 2)


def _phi(alpha, s, e0: float):
    if np.iscomplexobj(np.asarray(s)) or np.iscomplexobj(np.asarray(alpha)):
        return np.asarray(alpha) - true_anomaly_complex(s, e0)
    return np.asarray(alpha) - true_anomaly(s, e0)


def _sigmas(x, cphi, rho, mu: float):
    wh = mu * rho * x * x / 2.0
    wl = (1.0 - mu) * rho * x * x / 2.0
    sig_h = np.sqrt(1.0 - 2.0 * wh * cphi + wh * wh)
    sig_l = np.sqrt(1.0 + 2.0 * wl * cphi + wl * wl)
    return sig_h, sig_l


def potential_U(x, alpha, s, params: Params):
    """Full potential U in McGehee variables.

    Raises CollisionError if the evaluation point is within the collision
    floor of either primary (physical distance r * sigma).
    """
    x = np.asarray(x, dtype=float)
    rho = primary_separation(s, params.e0)
    cphi = np.cos(_phi(alpha, s, params.e0))
    sig_h, sig_l = _sigmas(x, cphi, rho, params.mu)
    with np.errstate(divide="ignore", invalid="ignore"):
        r = 2.0 / (x * x)
    if params.mu > 0.0 and np.any((r * np.minimum(sig_h, sig_l)) < params.collision_floor):
        raise CollisionError("evaluation point within collision floor of a primary")
    return 0.5 * x * x * ((1.0 - params.mu) / sig_h + params.mu / sig_l)


def delta_U(x, alpha, s, params: Params, lmax: int | None = None):
    """Cancellation-safe dU = U - x**2/2 (complex-safe on the series branch)."""
    mu, e0 = params.mu, params.e0
    if mu == 0.0:
        return np.zeros(np.broadcast(x, alpha, s).shape)
    x = np.asarray(x)
    rho = primary_separation(s, e0)
    phi = _phi(alpha, s, e0)
    w = np.abs(rho) * np.abs(x) ** 2 / 2.0 * max(mu, 1.0 - mu)
    wmax = float(np.max(w)) if np.size(w) else 0.0
    if wmax < _SERIES_W_MAX:
        if lmax is None:
            lmax = _lmax_for(wmax)
        cphi = np.cos(phi)
        base = rho * x * x / 2.0
        # Legendre recurrence and Horner-style accumulation over l
        P_prev = np.ones_like(cphi)     # P_0
        P = cphi                        # P_1
        term = base  # base**l for l = 1
        acc = np.zeros_like(cphi * x)
        for l in range(2, lmax + 1):
            P_prev, P = P, ((2 * l - 1) * cphi * P - (l - 1) * P_prev) / l
            term = term * base
            acc = acc + kappa_coeff(l, mu) * P * term
        return 0.5 * x * x * acc
    # direct subtraction (fine: dU is O(U) here)
    cphi = np.cos(phi)
    sig_h, sig_l = _sigmas(x, cphi, rho, mu)
    return 0.5 * x * x * ((1.0 - mu) / sig_h + mu / sig_l - 1.0)


def delta_U_gradients(x, alpha, s, params: Params, lmax: int | None = None):
    """(dU, d(dU)/dx, d(dU)/dalpha), series-based, cancellation-safe.

    Valid on the series domain (w < 1/2); used by the vector field, whose
    near-infinity regime always satisfies that bound.  Falls back to the
    direct closed form outside it.
    """
    mu, e0 = params.mu, params.e0
    shape = np.broadcast(x, alpha, s).shape
    if mu == 0.0:
        z = np.zeros(shape)
        return z, z.copy(), z.copy()
    x = np.asarray(x)
    rho = primary_separation(s, e0)
    phi = _phi(alpha, s, e0)
    w = np.abs(rho) * np.abs(x) ** 2 / 2.0 * max(mu, 1.0 - mu)
    wmax = float(np.max(w)) if np.size(w) else 0.0
    cphi = np.cos(phi)
    if wmax < _SERIES_W_MAX:
        if lmax is None:
            lmax = _lmax_for(wmax)
        sphi = np.sin(phi)
        base = rho * x * x / 2.0
        P_prev = np.ones_like(cphi)
        P = cphi
        dP_prev = np.zeros_like(cphi)   # P_l'(c)
        dP = np.ones_like(cphi)
        term = base
        val = np.zeros_like(cphi * x)
        dval_dx = np.zeros_like(val)
        dval_da = np.zeros_like(val)
        for l in range(2, lmax + 1):
            P_prev, P = P, ((2 * l - 1) * cphi * P - (l - 1) * P_prev) / l
            dP_prev, dP = dP, ((2 * l - 1) * (P_prev + cphi * dP) - (l - 1) * dP_prev) / l
            term = term * base
            k = kappa_coeff(l, mu)
            # dU term: (x^2/2) k P_l term ; x-dependence x^(2l+2)
            val += k * P * term * 0.5 * x * x
            dval_dx += k * P * term * (l + 1) * x
            dval_da += k * (-sphi) * dP * term * 0.5 * x * x
        return val, dval_dx, dval_da
    # closed-form derivatives of the sigma expressions
    sphi = np.sin(phi)
    sig_h, sig_l = _sigmas(x, cphi, rho, mu)
    dsh_dx = (-mu * rho * x * cphi + mu * mu * rho * rho * x ** 3 / 2.0) / sig_h
    dsl_dx = ((1 - mu) * rho * x * cphi + (1 - mu) ** 2 * rho * rho * x ** 3 / 2.0) / sig_l
    dsh_da = (mu * rho * x * x * sphi / 2.0) / sig_h
    dsl_da = (-(1 - mu) * rho * x * x * sphi / 2.0) / sig_l
    bracket = (1.0 - mu) / sig_h + mu / sig_l - 1.0
    val = 0.5 * x * x * bracket
    dval_dx = x * bracket + 0.5 * x * x * (
        -(1.0 - mu) * dsh_dx / sig_h ** 2 - mu * dsl_dx / sig_l ** 2)
    dval_da = 0.5 * x * x * (
        -(1.0 - mu) * dsh_da / sig_h ** 2 - mu * dsl_da / sig_l ** 2)
    return val, dval_dx, dval_da


def delta_U_angular_mean(x, params: Params, s=0.0):
    """Mean of dU over the angle phi at fixed x and epoch (multipole series)."""
    mu = params.mu
    if mu == 0.0:
        return np.zeros_like(np.asarray(x, dtype=float))
    x = np.asarray(x)
    rho = primary_separation(s, params.e0)
    base = rho * np.abs(x) ** 2 / 2.0
    wmax = float(np.max(base)) * max(mu, 1.0 - mu)
    lmax = _lmax_for(wmax)
    base = rho * x * x / 2.0
    acc = np.zeros_like(base * x)
    term = base
    for l in range(2, lmax + 1):
        term = term * base
        pm = legendre_mean(l)
        if pm:
            acc = acc + kappa_coeff(l, mu) * pm * term
    return 0.5 * x * x * acc


def delta_U_angular_mean_elliptic_oracle(x, params: Params, s=0.0):
    """Independent route for the angular mean via complete elliptic integrals.

    mean_phi 1/sqrt(1 - 2 w cos phi + w**2) = (2/pi) K(k) / (1 + w) with
    k**2 = 4 w / (1 + w)**2.  Subtraction-based, so only an oracle.
    """
    mu = params.mu
    x = np.asarray(x, dtype=float)
    rho = primary_separation(s, params.e0)
    wh = mu * rho * x * x / 2.0
    wl = (1.0 - mu) * rho * x * x / 2.0

    def circ_mean(w):
        m = 4.0 * w / (1.0 + w) ** 2  # scipy's ellipk takes the parameter m = k**2
        return (2.0 / np.pi) * ellipk(m) / (1.0 + w)

    return 0.5 * x * x * ((1.0 - mu) * circ_mean(wh) + mu * circ_mean(wl) - 1.0)


def delta_U_fourier_alpha(m: int, x, params: Params, s=0.0):
    """m-th Fourier coefficient of dU in the angle phi at fixed x (complex-safe).

    dU(x, phi) = sum_m D_m(x) e^{i m phi}; returns D_m (real for real x).
    """
    mu = params.mu
    if mu == 0.0:
        return np.zeros_like(np.asarray(x, dtype=float))
    x = np.asarray(x)
    rho = primary_separation(s, params.e0)
    wmax = float(np.max(np.abs(rho) * np.abs(x) ** 2 / 2.0)) * max(mu, 1.0 - mu)
    lmax = _lmax_for(wmax)
    base = rho * x * x / 2.0
    acc = np.zeros_like(base * x)
    term = base
    for l in range(2, lmax + 1):
        term = term * base
        if abs(m) <= l and (l - m) % 2 == 0:
            acc = acc + kappa_coeff(l, mu) * legendre_fourier(l)[m + l] * term
    return 0.5 * x * x * acc


def fourier_alpha_s_coeffs(k: int, params: Params, lmax: int = 40, n_s: int = 256):
    """x-power coefficients of the (alpha-harmonic k, epoch-mean) part of dU.

    Writing dU = sum_{k,q} C_{k,q}(x) e^{i(k alpha - ... )}, the q = 0 slice
    (mean over the primaries' epoch s) carries the secular part of the
    elliptic problem.  Returns g[l] with C_{k,0}(x) = sum_l g[l] * x**(2l+2),
    l = 2..lmax, using the epoch averages of rho(s)**l * e^{-i k v(s)}.
    """
    mu, e0 = params.mu, params.e0
    s_grid = 2.0 * np.pi * np.arange(n_s) / n_s
    rho = primary_separation(s_grid, e0)
    v = true_anomaly(s_grid, e0)
    g = np.zeros(lmax + 1, dtype=complex)
    # dU = sum_l kappa_l (rho x^2/2)^l (x^2/2) sum_j p_{l,j} e^{ij(alpha - v)}
    #    => coefficient of e^{ik alpha} x^(2l+2):
    #       kappa_l p_{l,k} mean_s[rho^l e^{-ikv}] / 2^(l+1)
    for l in range(2, lmax + 1):
        if abs(k) > l or (l - abs(k)) % 2 != 0:
            continue
        a_lk = np.mean(rho ** l * np.exp(-1j * k * v))
        g[l] = kappa_coeff(l, mu) * legendre_fourier(l)[k + l] * a_lk / 2.0 ** (l + 1)
    return g
