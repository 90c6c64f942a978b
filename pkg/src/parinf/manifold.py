"""Invariant-manifold charts of the circle of parabolic fixed points.

For the circular problem every point of {x = y = 0} is a fixed point of the
stroboscopic map, degenerate (parabolic) in the (x, y) plane.  This module
builds polynomial charts K of its stable/unstable sets by solving the flow
invariance equation

    dK/ds + rho(t) dK/dt = X(K(t, s), s),     rho(t) = rho4 t^4 + rho7 t^7,

order by order in the Fourier-Taylor algebra (powers of the internal
parameter t, harmonics of the epoch s), entirely in mpmath arithmetic so
coefficient noise sits far below the truncation defect.  A one-dimensional
conjugacy then converts the section curve K(t, 0) into an exact polynomial
internal map R(t) = t + r4 t^4 + r7 t^7, giving the map-invariance property

    F(Ktilde(t)) - Ktilde(R(t)) = O(t^(k + 4))

which invariance_defect verifies against extended-precision jet transport.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath as mp
import numpy as np

from .errors import OrderSolveFailure, DomainValidationFailure
from .params import Params, McGeheeState
from .fourier_taylor import FTSeries, Taylor1, ft_sin_cos
from .jetflow import kappa_mp, poincare_map_mp
from .flow import IntegratorConfig, poincare_map

DEFAULT_ORDER = 8
DEFAULT_DPS = 50
_JMAX = 12


# ---------------------------------------------------------------------------
# Field evaluation in the Fourier-Taylor algebra (circular case).
# ---------------------------------------------------------------------------

def _field_ft(K, alpha0, G0, mu, deg):
    """Compactified field evaluated on a 4-component FT series.

    K = (X, A, Y, Gam) with A carrying the constant alpha0 and Gam the
    constant G0.  Returns the four component series truncated at `deg`.
    """
    jmax = K[0].jmax
    X = K[0].truncate(deg)
    A = K[1].truncate(deg)
    Y = K[2].truncate(deg)
    Gam = K[3].truncate(deg)

    # exp(i psi) with psi = A - s  =  exp(i alpha0) exp(-i s) exp(i dalpha)
    dalpha = A - mp.mpf(alpha0)
    sd, cd = ft_sin_cos(dalpha)
    E = FTSeries.harmonic(-1, deg, jmax, mp.exp(1j * mp.mpf(alpha0))) * (cd + sd * 1j)
    cospsi = (E + E.conj()) * mp.mpf("0.5")
    sinpsi = (E - E.conj()) * (mp.mpc(0, -1) / 2)

    x2 = X * X
    x3 = x2 * X
    x4 = x2 * x2

    lmax = max((deg - 1) // 2, 2)
    P_prev = FTSeries.const(1, deg, jmax)
    P_cur = cospsi
    dP_prev = FTSeries(deg=deg, jmax=jmax)
    dP_cur = FTSeries.const(1, deg, jmax)
    dUx = FTSeries(deg=deg, jmax=jmax)
    dUa = FTSeries(deg=deg, jmax=jmax)
    xpow = (x3 * x2).chop()                       # X^(2l+1) at l = 2
    half_pow = mp.mpf(1) / 4
    for ell in range(2, lmax + 1):
        P_next = (cospsi * P_cur * (2 * ell - 1) - P_prev * (ell - 1)) * (mp.mpf(1) / ell)
        dP_next = dP_prev + P_cur * (2 * ell - 1)
        P_prev, P_cur = P_cur, P_next
        dP_prev, dP_cur = dP_cur, dP_next
        kap = kappa_mp(ell, mu)
        if kap != 0:
            dUx = dUx + P_cur * xpow * (kap * (ell + 1) * half_pow)
            dUa = dUa - sinpsi * dP_cur * (xpow * X) * (kap * half_pow / 2)
        xpow = (xpow * x2).chop()
        half_pow /= 2

    Fx = x3 * Y * mp.mpf("-0.25")
    Fa = x4 * Gam * mp.mpf("0.25")
    Fy = (Gam * Gam) * (x3 * x3) * mp.mpf("0.125") - x3 * (X + dUx) * mp.mpf("0.25")
    FG = dUa
    return [Fx.chop(), Fa.chop(), Fy.chop(), FG.chop()]


# ---------------------------------------------------------------------------
# Order-by-order solve.
# ---------------------------------------------------------------------------

def _solve_pivot(J, r, tol):
    """Solve J u = -r (rows x cols, cols may exceed rows) by full pivoting.

    Free columns are set to zero.  Returns (u, consistent).
    """
    rows = len(J)
    cols = len(J[0])
    M = [[mp.mpf(J[i][j]) for j in range(cols)] + [-mp.mpf(r[i])] for i in range(rows)]
    piv_cols = []
    row = 0
    for _ in range(min(rows, cols)):
        best, bi, bj = mp.mpf(0), -1, -1
        for i in range(row, rows):
            for j in range(cols):
                if j in piv_cols:
                    continue
                if abs(M[i][j]) > best:
                    best, bi, bj = abs(M[i][j]), i, j
        if best < tol:
            break
        M[row], M[bi] = M[bi], M[row]
        piv_cols.append(bj)
        pr = M[row]
        inv = 1 / pr[bj]
        for i in range(rows):
            if i == row:
                continue
            f = M[i][bj] * inv
            if f != 0:
                M[i] = [a - f * b for a, b in zip(M[i], pr)]
        row += 1
    u = [mp.mpf(0)] * cols
    for rr, j in enumerate(piv_cols):
        u[j] = M[rr][cols] / M[rr][j]
    consistent = all(abs(M[i][cols]) < tol * 1e6 for i in range(row, rows))
    return u, consistent


class _StageUnknown:
    """Tag for one scalar unknown of an order-m solvability stage."""

    def __init__(self, kind, comp=None):
        self.kind = kind      # "mean" or "rho4" or "rho7"
        self.comp = comp


def formal_solve(alpha0: float, G0: float, params: Params,
                 k: int = DEFAULT_ORDER, stable: bool = True,
                 dps: int = DEFAULT_DPS) -> "ManifoldChart":
    """Build the degree-k chart of the stable (or unstable) set at (alpha0, G0).

    Circular case only; with eccentric forcing the fixed circle survives but
    the expansion coefficients become epoch series that this solver does not
    carry.
    """
    if params.e0 != 0.0:
        raise DomainValidationFailure("chart solve supports the circular case only")
    if k < 4:
        raise DomainValidationFailure("chart order must be at least 4")
    with mp.workdps(dps):
        return _formal_solve_impl(alpha0, G0, params, k, stable)


def _formal_solve_impl(alpha0, G0, params, k, stable):
    deg = k + 3
    mu = mp.mpf(params.mu)
    G0m = mp.mpf(G0)
    sgn = mp.mpf(1) if stable else mp.mpf(-1)
    tol = mp.mpf(10) ** (-mp.mp.dps + 12)

    # K components (x, alpha, y, G); tangent x-coefficient normalized to 1.
    K = [FTSeries.t_power(1, deg, _JMAX),
         FTSeries.const(alpha0, deg, _JMAX),
         FTSeries.t_power(1, deg, _JMAX, val=sgn),
         FTSeries.const(G0m, deg, _JMAX)]
    rho = {4: mp.mpf(0), 7: mp.mpf(0)}

    def rhs_slice(m):
        """Harmonic layers of dK_m/ds as forced by the invariance equation."""
        F = _field_ft(K, alpha0, G0m, mu, m)
        out = []
        for c in range(4):
            layer = F[c].order_slice(m)
            for p_ord in (4, 7):
                mp_idx = m - p_ord + 1
                if mp_idx >= 1 and rho[p_ord] != 0:
                    for j, v in K[c].order_slice(mp_idx).items():
                        layer[j] = layer.get(j, mp.mpc(0)) - rho[p_ord] * mp_idx * v
            out.append(layer)
        return out

    def set_unknowns(tags, u):
        for tag, val in zip(tags, u):
            if tag.kind == "mean":
                K[tag.comp].c[(m - 3, 0)] = mp.mpc(val)
            else:
                rho[4 if tag.kind == "rho4" else 7] = mp.mpf(val)

    def mean_residual(tags, u):
        set_unknowns(tags, u)
        layers = rhs_slice(m)
        res = []
        for c in range(4):
            v = layers[c].get(0, mp.mpc(0))
            if abs(v.imag) > tol * 1e4:
                raise OrderSolveFailure(f"complex mean at order {m}")
            res.append(v.real)
        return res

    for m in range(2, deg + 1):
        tags = []
        if m == 4:
            tags = [_StageUnknown("mean", 1), _StageUnknown("mean", 2),
                    _StageUnknown("mean", 3), _StageUnknown("rho4")]
        elif m >= 5:
            tags = [_StageUnknown("mean", c) for c in range(4)]
            if m == 7:
                tags.append(_StageUnknown("rho7"))

        if tags:
            u = [mp.mpf(0)] * len(tags)
            if m == 4:
                u = [-sgn * G0m, mp.mpf(0), mp.mpf(0), -sgn / mp.mpf(4)]
            for _ in range(6):
                r0 = mean_residual(tags, u)
                if max(abs(v) for v in r0) < tol:
                    break
                J = []
                for i in range(len(tags)):
                    up = list(u)
                    up[i] = up[i] + 1
                    ri = mean_residual(tags, up)
                    J.append([a - b for a, b in zip(ri, r0)])
                Jt = [[J[j][i] for j in range(len(tags))] for i in range(4)]
                du, ok = _solve_pivot(Jt, r0, tol)
                if not ok:
                    raise OrderSolveFailure(f"inconsistent solvability system at order {m}")
                u = [a + b for a, b in zip(u, du)]
            else:
                raise OrderSolveFailure(f"solvability iteration stalled at order {m}")
            set_unknowns(tags, u)
        else:
            layers = rhs_slice(m)
            for c in range(4):
                if abs(layers[c].get(0, mp.mpc(0))) > tol * 1e4:
                    raise OrderSolveFailure(f"unforced mean defect at order {m}")

        if m <= k:
            layers = rhs_slice(m)
            for c in range(4):
                for j, v in layers[c].items():
                    if j == 0:
                        continue
                    K[c].c[(m, j)] = v / (1j * j)

    rho4, rho7 = rho[4], rho[7]

    # Internal time-2pi map Phi of dt/dsigma = rho(t), as a bivariate Picard
    # iteration (Taylor in t, coefficients Taylor in sigma).
    zero_sig = Taylor1([mp.mpf(0)], deg)
    one_sig = Taylor1([mp.mpf(1)], deg)
    t_var = Taylor1([zero_sig, one_sig], deg)
    T = t_var
    for _ in range(deg // 3 + 2):
        R4 = T.pow_int(4)
        R7 = T.pow_int(7)
        rhoT = Taylor1([a * rho4 + b * rho7 for a, b in zip(R4.a, R7.a)], deg)
        T = t_var + Taylor1([c.integrate() if isinstance(c, Taylor1) else zero_sig
                             for c in rhoT.a], deg)
    two_pi = 2 * mp.pi
    Phi = Taylor1([c.eval(two_pi) if isinstance(c, Taylor1) else mp.mpf(c)
                   for c in T.a], deg)

    # 1-d conjugacy  Phi o h = h o R + O(t^(deg+1)),  R = t + r4 t^4 + r7 t^7.
    r4 = Phi.a[4]
    r7 = mp.mpf(0)
    h = Taylor1([mp.mpf(0), mp.mpf(1)], deg)

    def conj_defect(hpoly, r7v):
        Rp = Taylor1([mp.mpf(0), mp.mpf(1), 0, 0, r4, 0, 0, r7v], deg)
        return Phi.compose(hpoly) - hpoly.compose(Rp)

    for m in range(5, deg + 1):
        C0 = conj_defect(h, r7).a[m]
        hp = Taylor1(h.a, deg)
        hp.a[m - 3] = hp.a[m - 3] + 1
        gamma = conj_defect(hp, r7).a[m] - C0
        if abs(gamma) > tol:
            h.a[m - 3] = h.a[m - 3] - C0 / gamma
        else:
            if m != 7:
                raise OrderSolveFailure(f"unexpected conjugacy resonance at order {m}")
            drop = conj_defect(h, r7 + 1).a[m] - C0
            r7 = r7 - C0 / drop

    # Section curve composed with the reparameterization, truncated at k.
    coeffs = []
    for c in range(4):
        poly = Taylor1(K[c].eval_t_poly(0.0), deg).compose(h)
        row = []
        for m_ord in range(k + 1):
            v = poly.a[m_ord]
            v = v if isinstance(v, mp.mpc) else mp.mpc(v)
            if abs(v.imag) > tol * 1e4:
                raise OrderSolveFailure("complex section coefficient")
            row.append(v.real)
        coeffs.append(row)

    return ManifoldChart(alpha0=float(alpha0), G0=float(G0), mu=float(params.mu),
                         k=k, stable=stable, dps=mp.mp.dps,
                         coeffs=coeffs, r4=r4, r7=r7, rho4=rho4, rho7=rho7,
                         ft=[dict(K[c].truncate(k).c) for c in range(4)])


# ---------------------------------------------------------------------------
# Chart object.
# ---------------------------------------------------------------------------

@dataclass
class ManifoldChart:
    """Polynomial section chart t -> (x, alpha, y, G) with internal map R."""

    alpha0: float
    G0: float
    mu: float
    k: int
    stable: bool
    dps: int
    coeffs: list                # 4 lists of mpf, orders 0..k
    r4: mp.mpf
    r7: mp.mpf
    rho4: mp.mpf
    rho7: mp.mpf
    ft: list | None = None      # full (t, s) coefficient dicts (not serialized)

    @property
    def c_map(self):
        """Contraction coefficient of R(t) = t - c_map t^4 + ..."""
        with mp.workdps(self.dps):
            return -self.r4 if self.stable else +self.r4

    @property
    def c_flow(self):
        """Flow-rate normal-form coefficient (c_map / period)."""
        with mp.workdps(self.dps):
            return self.c_map / (2 * mp.pi)

    def eval(self, t):
        t = mp.mpf(t)
        out = []
        for row in self.coeffs:
            v = mp.mpf(0)
            for c in reversed(row):
                v = v * t + c
            out.append(v)
        return out

    def eval_float(self, t) -> McGeheeState:
        x, a, y, G = (float(v) for v in self.eval(t))
        return McGeheeState(x=x, alpha=a, y=y, G=G, s=0.0)

    def eval_family(self, beta: float, t: float) -> McGeheeState:
        """Section state of the chart based at (alpha0 + beta, G0).

        The circular field is equivariant under simultaneous rotation of the
        position angle and the epoch, so the whole family of base points
        comes from one solve: evaluate the full series at epoch -beta and
        shift the angle.  Requires the in-memory series (`ft`).
        """
        if self.ft is None:
            raise DomainValidationFailure("chart was deserialized without its full series")
        out = []
        with mp.workdps(self.dps):
            tm = mp.mpf(t)
            phase = mp.mpc(0, -1) * mp.mpf(beta)
            for c in range(4):
                v = mp.mpc(0)
                for (m_ord, j), a in self.ft[c].items():
                    v += a * tm ** m_ord * mp.exp(phase * j)
                out.append(v)
        x, al, y, G = (float(v.real) for v in out)
        return McGeheeState(x=x, alpha=al + beta, y=y, G=G, s=0.0)

    def internal_map(self, t):
        t = mp.mpf(t)
        return t + self.r4 * t ** 4 + self.r7 * t ** 7

    def internal_map_inverse(self, t, tol=None):
        t = mp.mpf(t)
        tol = tol or mp.mpf(10) ** (-mp.mp.dps + 5)
        u = t
        for _ in range(80):
            f = self.internal_map(u) - t
            if abs(f) < tol:
                break
            u = u - f / (1 + 4 * self.r4 * u ** 3 + 7 * self.r7 * u ** 6)
        return u


def chart_to_text(chart: ManifoldChart) -> str:
    """Exact text serialization (mantissa/exponent pairs, bit-for-bit)."""

    def enc(v):
        if not hasattr(v, "_mpf_"):
            with mp.workdps(chart.dps):
                v = mp.mpf(v)
        sign, man, exp, _ = v._mpf_
        return f"{sign}:{man}:{exp}"

    lines = ["parinf-chart 1",
             f"alpha0 {chart.alpha0!r}", f"G0 {chart.G0!r}", f"mu {chart.mu!r}",
             f"k {chart.k}", f"stable {int(chart.stable)}", f"dps {chart.dps}",
             f"r4 {enc(chart.r4)}", f"r7 {enc(chart.r7)}",
             f"rho4 {enc(chart.rho4)}", f"rho7 {enc(chart.rho7)}"]
    for c in range(4):
        lines.append("coeffs " + " ".join(enc(v) for v in chart.coeffs[c]))
    return "\n".join(lines) + "\n"


def chart_from_text(text: str) -> ManifoldChart:
    from mpmath.libmp import from_man_exp

    def dec(tok):
        sign, man, exp = tok.split(":")
        man = -int(man) if sign == "1" else int(man)
        return mp.make_mpf(from_man_exp(man, int(exp)))

    fields = {}
    coeff_rows = []
    lines = text.strip().splitlines()
    if lines[0].split() != ["parinf-chart", "1"]:
        raise DomainValidationFailure("unrecognized chart header")
    for line in lines[1:]:
        key, _, rest = line.partition(" ")
        if key == "coeffs":
            coeff_rows.append([dec(tok) for tok in rest.split()])
        else:
            fields[key] = rest
    return ManifoldChart(alpha0=float(fields["alpha0"]), G0=float(fields["G0"]),
                         mu=float(fields["mu"]), k=int(fields["k"]),
                         stable=bool(int(fields["stable"])), dps=int(fields["dps"]),
                         coeffs=coeff_rows, r4=dec(fields["r4"]), r7=dec(fields["r7"]),
                         rho4=dec(fields["rho4"]), rho7=dec(fields["rho7"]))


# ---------------------------------------------------------------------------
# Defect measurement and decay-order fit.
# ---------------------------------------------------------------------------

def invariance_defect(chart: ManifoldChart, params: Params, ts,
                      tol=None, dps: int | None = None):
    """max-norm of F(K(t)) - K(R(t)) at each t, via extended-precision flow."""
    dps = dps or chart.dps
    out = []
    with mp.workdps(dps):
        for t in ts:
            z = chart.eval(t)
            img = poincare_map_mp(z, params, s0=0.0, tol=tol)
            w = chart.eval(chart.internal_map(t))
            out.append(max(abs(a - b) for a, b in zip(img, w)))
    return out


def fit_defect_order(ts, defects) -> float:
    """Least-squares slope of log-defect against log-t."""
    xs = np.log([float(t) for t in ts])
    ys = np.log([float(d) for d in defects])
    slope = np.polyfit(xs, ys, 1)[0]
    return float(slope)


# ---------------------------------------------------------------------------
# Normal-form detection from the double-precision map (independent oracle).
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ParabolicNormalData:
    N: int
    c: float                    # flow-rate convention: rho(t) ~ -c t^N
    c_map: float                # map convention: R(t) = t - c_map t^N + ...
    slope: float                # measured log-log order of the tangential defect


def detect_normal_form(alpha0: float, G0: float, params: Params,
                       hs=(0.01, 0.015, 0.0225, 0.03375), dps: int = 30,
                       ) -> ParabolicNormalData:
    """Degeneracy order and leading coefficient from map differences alone.

    Applies the stroboscopic map near the tangent ray of the stable set and
    Richardson-extrapolates (p' - p)/h^N.  Never consults the chart solver;
    the map is evaluated by jet transport at `dps` digits because the
    double-precision map noise, divided by h^4, would swamp the limit.
    """
    deltas = []
    with mp.workdps(dps):
        tol = mp.mpf(10) ** (-dps + 6)
        for h in hs:
            img = poincare_map_mp((h, alpha0, h, G0), params, s0=0.0, tol=tol)
            deltas.append(float((img[0] + img[2]) / 2 - mp.mpf(h)))
    hs = np.asarray(hs, dtype=float)
    deltas = np.asarray(deltas)
    slope = float(np.polyfit(np.log(hs), np.log(np.abs(deltas)), 1)[0])
    N = int(round(slope))
    # Fit delta/h^N to a full polynomial in h and keep the h -> 0 limit.
    V = np.vander(hs, len(hs), increasing=True)
    a0 = float(np.linalg.solve(V, deltas / hs ** N)[0])
    c_map = -a0
    return ParabolicNormalData(N=N, c=c_map / (2.0 * np.pi), c_map=c_map, slope=slope)


# ---------------------------------------------------------------------------
# Sector domain bounds for the internal map.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SectorDomain:
    opening: float
    radius: float
    b: float                    # |R(t)| <= |t| - b |t|^N on the sector
    d: float                    # |R(t)| >= |t| - d |t|^N
    margin: float               # slack in the radius condition
    ok: bool


def sector_check(N: int, c: float, a: float, rho: float,
                 M: float = 0.0, c_tilde: float = 0.0,
                 n_grid: int = 64) -> SectorDomain:
    """Validate an invariant sector |arg t| <= a, |t| <= rho for R.

    Checks the radius condition rho^(N-1) < (N-1) c a (1 - M a / ((N-1) c))
    and the two-sided contraction sandwich on a boundary grid, with
    R(t) = t - c t^N + c_tilde t^(2N-1).
    """
    if not (0 < a < np.pi / (2 * (N - 1))):
        raise DomainValidationFailure("sector opening out of range")
    if c <= 0 or rho <= 0:
        raise DomainValidationFailure("need positive contraction rate and radius")
    cap = (N - 1) * c * a * (1.0 - M * a / ((N - 1) * c))
    radius_ok = rho ** (N - 1) < cap
    margin = cap - rho ** (N - 1)

    # Boundary sampling: the two radial edges and the outer arc.
    ts = []
    rs = np.linspace(rho / n_grid, rho, n_grid // 2)
    for r in rs:
        ts.append(r * np.exp(1j * a))
        ts.append(r * np.exp(-1j * a))
    for phi in np.linspace(-a, a, n_grid // 2):
        ts.append(rho * np.exp(1j * phi))
    ts = np.asarray(ts)
    Rt = ts - c * ts ** N + c_tilde * ts ** (2 * N - 1)
    drop = (np.abs(ts) - np.abs(Rt)) / np.abs(ts) ** N
    inside = (np.abs(Rt) <= np.abs(ts)) & (np.abs(np.angle(Rt)) <= a + 1e-12)
    b = float(drop.min())
    d = float(drop.max())
    ok = bool(radius_ok and b > 0 and inside.all())
    return SectorDomain(opening=a, radius=rho, b=b, d=d, margin=float(margin), ok=ok)


# ---------------------------------------------------------------------------
# Globalization of the local chart by the flow.
# ---------------------------------------------------------------------------

@dataclass
class GlobalizedManifold:
    chart: ManifoldChart
    t0: float
    mesh_ts: np.ndarray         # internal parameters of the fundamental mesh
    levels: list                # levels[n][i] = state after n outward periods
    handoff_defect: float


def globalize(chart: ManifoldChart, params: Params, t0: float,
              n_iter: int = 10, n_mesh: int = 24,
              config: IntegratorConfig = IntegratorConfig()) -> GlobalizedManifold:
    """Extend the chart along the flow over a fundamental domain of R.

    For a stable chart the manifold is grown backward in time (outward); for
    an unstable chart, forward.  Level n holds the image of the fundamental
    mesh after n outward periods, as section states (s = 0 mod 2 pi).
    """
    with mp.workdps(chart.dps):
        t_in = float(chart.internal_map(t0))
    lo, hi = (t_in, t0) if t_in < t0 else (t0, t_in)
    mesh_ts = np.geomspace(lo, hi, n_mesh) if lo > 0 else np.linspace(lo, hi, n_mesh)
    direction = -1 if chart.stable else +1
    levels = [[chart.eval_float(t) for t in mesh_ts]]
    for n in range(n_iter):
        nxt = [poincare_map(st, params, config, direction=direction)
               for st in levels[-1]]
        levels.append(nxt)
    # Seed-shift consistency: mapping the chart point one period outward must
    # land on the chart at the pulled-back parameter.
    probe = mesh_ts[n_mesh // 2]
    with mp.workdps(chart.dps):
        t_back = float(chart.internal_map_inverse(probe)) if chart.stable \
            else float(chart.internal_map(probe))
    moved = poincare_map(chart.eval_float(probe), params, config, direction=direction)
    ref = chart.eval_float(t_back)
    handoff = max(abs(moved.x - ref.x), abs(moved.y - ref.y),
                  abs(moved.alpha - ref.alpha), abs(moved.G - ref.G))
    return GlobalizedManifold(chart=chart, t0=t0, mesh_ts=mesh_ts,
                              levels=levels, handoff_defect=float(handoff))


def pick_handoff(chart: ManifoldChart, params: Params,
                 candidates=(0.3, 0.25, 0.2, 0.15, 0.1, 0.075, 0.05, 0.03),
                 target: float = 1e-9) -> float:
    """Largest candidate parameter whose one-period chart defect beats target.

    Uses the double-precision map, so the measurable floor is ~1e-13; this is
    the radius at which globalization hands off to direct integration.
    """
    cfg = IntegratorConfig(rtol=1e-13, atol=1e-14)
    for t0 in candidates:
        direction = -1 if chart.stable else +1
        with mp.workdps(chart.dps):
            t_img = float(chart.internal_map_inverse(t0)) if chart.stable \
                else float(chart.internal_map(t0))
        moved = poincare_map(chart.eval_float(t0), params, cfg, direction=direction)
        ref = chart.eval_float(t_img)
        defect = max(abs(moved.x - ref.x), abs(moved.y - ref.y),
                     abs(moved.alpha - ref.alpha), abs(moved.G - ref.G))
        if defect < target:
            return t0
    raise DomainValidationFailure(f"no candidate radius meets defect target {target}")


# ---------------------------------------------------------------------------
# Local straightening of the two manifolds.
# ---------------------------------------------------------------------------

@dataclass
class StraightenedChart:
    """Shear coordinates (qt, pt) flattening both local manifolds onto axes."""

    stable_graph: np.ndarray    # q as polynomial in p along the stable set
    unstable_graph: np.ndarray  # p as polynomial in q along the unstable set
    base: tuple                 # (alpha0, G0)

    def transform(self, q, p):
        qt = q - np.polyval(self.stable_graph, p)
        pt = p - np.polyval(self.unstable_graph, q)
        return qt, pt

    def rate(self, q, p):
        """Rescaling factor of the straightened field, ~ q + p near the base."""
        qt, pt = self.transform(q, p)
        return qt + pt


def straighten_local(stable_chart: ManifoldChart, unstable_chart: ManifoldChart
                     ) -> StraightenedChart:
    """Graph representations of both charts via exact series reversion."""
    if (stable_chart.alpha0 != unstable_chart.alpha0
            or stable_chart.G0 != unstable_chart.G0):
        raise DomainValidationFailure("charts must share a base point")

    def graph(chart, along_p):
        k = chart.k
        with mp.workdps(chart.dps):
            qpoly = Taylor1([(x - y) / 2 for x, y in
                             zip(chart.coeffs[0], chart.coeffs[2])], k)
            ppoly = Taylor1([(x + y) / 2 for x, y in
                             zip(chart.coeffs[0], chart.coeffs[2])], k)
            abscissa, ordinate = (ppoly, qpoly) if along_p else (qpoly, ppoly)
            # Revert abscissa(t) = u (tangent coefficient is 1 by construction).
            g = Taylor1(abscissa.a, k)
            g.a[1] = g.a[1] - 1
            u = Taylor1([mp.mpf(0), mp.mpf(1)], k)
            T = u
            for _ in range(k + 1):
                T = u - g.compose(T)
            out = ordinate.compose(T)
        return np.array([float(v) for v in out.a[::-1]])

    return StraightenedChart(stable_graph=graph(stable_chart, along_p=True),
                             unstable_graph=graph(unstable_chart, along_p=False),
                             base=(stable_chart.alpha0, stable_chart.G0))
