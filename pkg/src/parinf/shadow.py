"""Homoclinic matching, near-circle passage estimates, and shadowing chains.

The circle of parabolic fixed points organizes near-escape dynamics: orbits
leave along its unstable set, make an excursion to perihelion (and, with
slightly negative two-body energy, back out to a far apoapsis), and return.
This module locates symmetric homoclinic connections, bounds passage times
near the circle with a Gronwall sandwich, and builds finite orbits that
shadow prescribed itineraries by nested bisection on the post-excursion
energy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .errors import (PrecisionExhausted, DomainValidationFailure,
                     NoCrossing, DegenerateSplitting)
from .params import Params, McGeheeState
from .dynamics import kepler_energy, mcgehee_rhs
from .flow import IntegratorConfig, integrate, find_section_crossing
from .manifold import ManifoldChart, formal_solve
from . import melnikov

TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------------------
# Passage-time enclosure near the fixed-point circle.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TransitionEstimate:
    S_min: float
    S_max: float
    z_drift_bound: float
    eps: float


def lambda_transition(delta: float, q_exit: float, eps: float = 0.1,
                      K: float = 1.0) -> TransitionEstimate:
    """Two-sided passage-time bounds for the straightened local model.

    In coordinates where the local dynamics is q' = q(1 + O1), p' = -p(1 + O1),
    z' = q p O0 with |O1| <= eps and |O0| <= K, an orbit entering with q = delta
    reaches q = q_exit after a time S with

        log(q_exit/delta)/(1 + eps) <= S <= log(q_exit/delta)/(1 - eps),

    and the center coordinates drift by at most 5 K exp(S/5) q(0) p(0).
    """
    if not (0 < delta < q_exit):
        raise DomainValidationFailure("need 0 < delta < q_exit")
    if not (0 <= eps < 1):
        raise DomainValidationFailure("relative field error must lie in [0, 1)")
    L = math.log(q_exit / delta)
    S_max = L / (1.0 - eps)
    z_bound = 5.0 * K * math.exp(S_max / 5.0) * delta * q_exit
    return TransitionEstimate(S_min=L / (1.0 + eps), S_max=S_max,
                              z_drift_bound=z_bound, eps=eps)


def transition_model_run(delta: float, q_exit: float, eps: float = 0.1,
                         K: float = 1.0, n_samples: int = 200,
                         seed: int = 20260826) -> dict:
    """Sampled realizations of the straightened local model vs. the bounds.

    Each sample draws bounded perturbations piecewise constant on unit time
    intervals and propagates q, p, z exactly segment by segment from
    q(0) = delta, p(0) = q_exit.  The report counts pointwise violations of
    the exponential sandwich, exit times outside [S_min, S_max], and center
    drifts above the a-priori bound; all three counts must be zero.
    """
    est = lambda_transition(delta, q_exit, eps=eps, K=K)
    rng = np.random.default_rng(seed)
    n_seg = int(math.ceil(est.S_max)) + 1
    violations = 0
    S_values = []
    z_max = 0.0
    for _ in range(n_samples):
        o_q = rng.uniform(-eps, eps, n_seg)
        o_p = rng.uniform(-eps, eps, n_seg)
        o_z = rng.uniform(-K, K, n_seg)
        q, p, z = delta, q_exit, 0.0
        t = 0.0
        S = None
        for j in range(n_seg):
            gq, gp = 1.0 + o_q[j], 1.0 + o_p[j]
            h = min(1.0, math.log(q_exit / q) / gq) if q < q_exit else 0.0
            # exact segment update for piecewise-constant coefficients
            q_new = q * math.exp(gq * h)
            p_new = p * math.exp(-gp * h)
            g = gq - gp
            z += o_z[j] * q * p * ((math.exp(g * h) - 1.0) / g if g != 0.0 else h)
            t += h
            # pointwise sandwich at the segment end
            tol = 1e-12
            if not (delta * math.exp((1 - eps) * t) * (1 - tol) <= q_new
                    <= delta * math.exp((1 + eps) * t) * (1 + tol)):
                violations += 1
            if not (q_exit * math.exp(-(1 + eps) * t) * (1 - tol) <= p_new
                    <= q_exit * math.exp(-(1 - eps) * t) * (1 + tol)):
                violations += 1
            q, p = q_new, p_new
            if q >= q_exit * (1.0 - 1e-14):
                S = t
                break
        if S is None:
            violations += 1
            continue
        S_values.append(S)
        z_max = max(z_max, abs(z))
        if not (est.S_min - 1e-12 <= S <= est.S_max + 1e-12):
            violations += 1
    if z_max > est.z_drift_bound:
        violations += 1
    return {"estimate": est, "violations": violations,
            "S_observed": (min(S_values), max(S_values)) if S_values else None,
            "z_drift_observed": z_max, "n_samples": n_samples}


# ---------------------------------------------------------------------------
# Symmetric homoclinic connections of the fixed-point circle.
# ---------------------------------------------------------------------------

@dataclass
class HomoclinicResult:
    branch: str                  # "+" (perihelion between the bodies axis) or "-"
    beta: float                  # base-point offset of the unstable fiber
    state: McGeheeState          # perihelion section state (y = 0)
    residual: float              # symmetry mismatch |sin(phi)| at perihelion
    displacement: float          # perihelion shift from the two-body separatrix
    splitting: float             # transversal splitting scale from the profile
    below_geometric_resolution: bool
    coincident: bool             # mu = 0: both manifolds equal the separatrix
    splitting_log10: float = -math.inf


def _perihelion_of_fiber(chart: ManifoldChart, params: Params, beta: float,
                         t_fiber: float, config: IntegratorConfig):
    """Flow one unstable fiber to its first perihelion (y = 0, r minimal)."""
    st = chart.eval_family(beta, t_fiber)
    # Two-body travel time from this radius to perihelion sets the horizon.
    G0 = chart.G0
    sec = max((2.0 / (G0 * st.x)) ** 2 - 1.0, 0.0)
    tau = math.sqrt(sec)
    horizon = G0 ** 3 * (tau + tau ** 3 / 3.0) + 100.0
    traj = integrate(st, (0.0, horizon), params, config)
    ev = find_section_crossing(traj, lambda t, u: u[2], direction=+1)
    x, al, y, G, s = ev.state
    return McGeheeState(x=x, alpha=al, y=y, G=G, s=s), ev.t


def find_homoclinic(params: Params, G0: float, branch: str = "+",
                    k: int = 8, t_fiber: float = 0.12, n_scan: int = 16,
                    config: IntegratorConfig = IntegratorConfig(rtol=1e-12, atol=1e-13),
                    chart: ManifoldChart | None = None) -> HomoclinicResult:
    """Locate the symmetric homoclinic orbit of the circle at radius G0.

    Works in the circular problem, where the co-rotating phase phi = alpha - s
    is reversible under (phi, y) -> (-phi, -y).  An unstable fiber whose first
    perihelion lands on the symmetry axis (sin phi = 0) continues into the
    stable set by reflection, so the matching condition is one-dimensional in
    the base offset.  Branch "+" selects phi = 0 at perihelion, "-" selects
    phi = pi.

    The transversal splitting between the two manifolds scales like the
    oscillating part of the perihelion-kick profile, which is exponentially
    small in G0**3; when it is below the geometric resolution of the double
    native format the intersection is reported as numerically tangent.
    """
    if params.e0 != 0.0:
        raise DomainValidationFailure("homoclinic matching requires the circular case")
    if branch not in ("+", "-"):
        raise DomainValidationFailure("branch must be '+' or '-'")
    if chart is None:
        chart = formal_solve(0.0, G0, params, k=k, stable=False)
    target = 0.0 if branch == "+" else math.pi

    def mismatch(beta):
        st, _ = _perihelion_of_fiber(chart, params, beta, t_fiber, config)
        phi = st.alpha - st.s
        return (phi - target + math.pi) % TWO_PI - math.pi

    betas = np.linspace(0.0, TWO_PI, n_scan, endpoint=False)
    vals = [mismatch(b) for b in betas]
    beta_star = None
    for i in range(n_scan):
        a, b = betas[i], betas[(i + 1) % n_scan] + (TWO_PI if i + 1 == n_scan else 0.0)
        fa, fb = vals[i], vals[(i + 1) % n_scan]
        if fa == 0.0:
            beta_star = a
            break
        if fa * fb < 0.0 and abs(fa) + abs(fb) < 2.0:
            beta_star = brentq(mismatch, a, b, xtol=1e-11)
            break
    if beta_star is None:
        raise NoCrossing("no symmetric perihelion found on the base circle")

    st, _ = _perihelion_of_fiber(chart, params, beta_star, t_fiber, config)
    residual = abs(math.sin(st.alpha - st.s - target))
    displacement = abs(st.x - 2.0 / G0)

    if params.mu == 0.0:
        return HomoclinicResult(branch=branch, beta=beta_star, state=st,
                                residual=residual, displacement=displacement,
                                splitting=0.0, below_geometric_resolution=False,
                                coincident=True)

    # Oscillating part of the kick profile measures the splitting scale.
    import mpmath as mp
    with mp.workdps(40):
        spl = sum(2 * abs(melnikov.harmonic_mp(m, G0, params))
                  for m in range(1, 4))
        if spl == 0:
            raise DegenerateSplitting("kick profile has no oscillating part")
        splitting_log10 = float(mp.log10(spl))
        splitting = float(spl)
    mean = abs(melnikov.reduced_mean_series(G0, params))
    below = splitting_log10 < math.log10(max(mean, 1e-300)) - 13.0
    return HomoclinicResult(branch=branch, beta=beta_star, state=st,
                            residual=residual, displacement=displacement,
                            splitting=splitting, splitting_log10=splitting_log10,
                            below_geometric_resolution=bool(below),
                            coincident=False)


# ---------------------------------------------------------------------------
# Itineraries of the interaction map (fast witnesses).
# ---------------------------------------------------------------------------

@dataclass
class ChainLink:
    index: int
    alpha: float
    G: float
    dG: float
    witness: object = None


@dataclass
class ChainItinerary:
    links: list
    params: Params
    branch: str

    @property
    def G_values(self):
        return np.array([ln.G for ln in self.links])


def build_chain(alpha0: float, G0: float, params: Params, n: int,
                branch: str = "-", witnesses: str = "cheap") -> ChainItinerary:
    """Iterate the interaction (perihelion-kick) map n times.

    Witness policy "cheap" records only the map data; "full" attaches the
    branch kick value used at each link, recomputed independently at the
    link's angular momentum.
    """
    from .scattering import EllipticScattering
    em = EllipticScattering(params)
    a, G = float(alpha0), float(G0)
    links = [ChainLink(index=0, alpha=a, G=G, dG=0.0)]
    for i in range(1, n + 1):
        a2, G2 = em.map(a, G, branch=branch)
        wit = None
        if witnesses == "full":
            wit = melnikov.reduced_poincare(G2, params,
                                            branch="-" if branch == "-" else "+")
        links.append(ChainLink(index=i, alpha=a2, G=G2, dG=G2 - G, witness=wit))
        a, G = a2, G2
    return ChainItinerary(links=links, params=params, branch=branch)


# ---------------------------------------------------------------------------
# Shadowing by nested bisection on post-excursion energy.
# ---------------------------------------------------------------------------

@dataclass
class Excursion:
    index: int
    energy: float               # two-body energy on the outward leg
    r_in: float                 # perihelion distance entering the excursion
    r_out: float                # apoapsis distance
    ratio: float
    d_visit: float              # distance to the fixed-point circle at apoapsis
    t_peri: float
    t_apo: float


@dataclass
class ShadowResult:
    excursions: list
    parameter: float            # converged control value (initial G offset)
    start: McGeheeState
    completed: int


def _excursions_of(start: McGeheeState, params: Params, n: int, eps: float,
                   config: IntegratorConfig):
    """Follow r-extrema (y = 0 crossings) and classify up to n excursions.

    Returns (excursions, verdict) where verdict is "ok", ("bound", k) when
    the k-th outward energy drops below -eps, or ("escape", k).
    """
    out = []
    st = start
    t_now = 0.0
    r_in = 2.0 / st.x ** 2
    for k in range(1, n + 1):
        E = kepler_energy(st)
        if E >= 0.0:
            return out, ("escape", k)
        if E < -eps:
            return out, ("bound", k)
        a_semi = 1.0 / (2.0 * abs(E))
        horizon = 3.0 * TWO_PI * a_semi ** 1.5 + 200.0

        def next_extremum(state, t0, direction):
            # Step past the starting extremum (y = 0 there), then search.
            lead = integrate(state, (t0, t0 + 2.0), params, config)
            x, al, y, G, s = lead.ys[:, -1]
            mid = McGeheeState(x=x, alpha=al, y=y, G=G, s=s)
            traj = integrate(mid, (t0 + 2.0, t0 + horizon), params, config)
            ev = find_section_crossing(traj, lambda t, u: u[2], direction=direction)
            x, al, y, G, s = ev.state
            return McGeheeState(x=x, alpha=al, y=y, G=G, s=s), ev.t

        # Outward leg: the next y = 0 crossing from above is the apoapsis.
        apo, t_apo = next_extremum(st, t_now, -1)
        r_out = 2.0 / apo.x ** 2
        out.append(Excursion(index=k, energy=E, r_in=r_in, r_out=r_out,
                             ratio=r_out / r_in, d_visit=math.hypot(apo.x, apo.y),
                             t_peri=t_now, t_apo=t_apo))
        # Inward leg back to the next perihelion.
        st, t_now = next_extremum(apo, t_apo, +1)
        r_in = 2.0 / st.x ** 2
    return out, ("ok", n)


def shadow_chain(params: Params, G0: float, n_links: int = 2,
                 eps: float = 8e-3, delta: float = 0.25,
                 lam_range: tuple = (-0.4, 0.05), phi0: float = 0.0,
                 config: IntegratorConfig = IntegratorConfig(rtol=1e-12, atol=1e-13),
                 max_bisect: int = 200) -> ShadowResult:
    """Orbit with n_links bounded excursions, each leaving with energy in
    (-eps, 0) and revisiting the fixed-point circle within distance delta.

    The control is a single offset lam of the initial angular momentum at a
    perihelion start; the post-excursion energies are monotone enough in lam
    for bisection, applied level by level: whichever excursion first leaves
    the energy window decides the half kept.  Raises PrecisionExhausted with
    the number of completed links if the control interval collapses first.
    """

    def start_state(lam):
        return McGeheeState(x=2.0 / G0, alpha=phi0, y=0.0, G=G0 + lam, s=0.0)

    def classify(lam):
        return _excursions_of(start_state(lam), params, n_links, eps, config)

    lo, hi = lam_range
    ex_lo, v_lo = classify(lo)
    ex_hi, v_hi = classify(hi)
    if v_lo[0] != "bound":
        raise DomainValidationFailure("lower control must start too bound")
    if v_hi[0] != "escape":
        raise DomainValidationFailure("upper control must start escaping")
    best = max(len(ex_lo), len(ex_hi))
    for _ in range(max_bisect):
        mid = 0.5 * (lo + hi)
        if hi - lo < 8.0 * np.spacing(max(abs(lo), abs(hi), 1e-3)):
            raise PrecisionExhausted(best, "control interval collapsed")
        ex, verdict = classify(mid)
        best = max(best, len(ex))
        if verdict[0] == "ok":
            bad = [e for e in ex if e.d_visit > delta]
            if bad:
                raise DomainValidationFailure(
                    f"excursion {bad[0].index} misses the circle by {bad[0].d_visit:.3f}")
            return ShadowResult(excursions=ex, parameter=mid,
                                start=start_state(mid), completed=len(ex))
        if verdict[0] == "bound":
            lo = mid
        else:
            hi = mid
    raise PrecisionExhausted(best, "bisection budget exhausted")


def oscillation_demo(params: Params, G0: float = 5.0, n_excursions: int = 2,
                     min_ratio: float = 10.0) -> dict:
    """Bounded orbit normally far from the bodies with large radial swings.

    Returns a report with one row per excursion; each must sweep at least a
    factor min_ratio between perihelion and apoapsis.
    """
    res = shadow_chain(params, G0, n_links=n_excursions)
    rows = [{"index": e.index, "r_in": e.r_in, "r_out": e.r_out,
             "ratio": e.ratio, "energy": e.energy, "d_visit": e.d_visit,
             "t_peri": e.t_peri, "t_apo": e.t_apo} for e in res.excursions]
    ok = len(rows) >= n_excursions and all(r["ratio"] >= min_ratio for r in rows)
    return {"mu": params.mu, "e0": params.e0, "G0": G0,
            "control": res.parameter, "excursions": rows, "ok": bool(ok)}
