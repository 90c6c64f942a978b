"""Vector fields and conserved quantities.

The McGehee-regularized equations of motion (r = 2/x**2, epoch s carried as a
state so the field is formally autonomous in 5 variables):

    x' = -(1/4) x**3 y
    a' =  (1/4) x**4 G
    y' =  (1/8) G**2 x**6 - (1/4) x**3 dU/dx
    G' =  dU/da
    s' =  1

with dU/dx = x + d(dU)/dx.  Every spatial component carries a factor x**3,
so the set {x = 0} (Kepler infinity) consists of equilibria of the spatial
part; the field returns exact zeros there.
"""

from __future__ import annotations

import numpy as np

from .params import Params, McGeheeState
from .potential import delta_U_gradients, potential_U
from .ephemeris import primary_positions
from .errors import CollisionError


def mcgehee_rhs(t: float, u: np.ndarray, params: Params) -> np.ndarray:
    """Right-hand side in McGehee variables u = (x, alpha, y, G, s)."""
    x, alpha, y, G, s = u
    if x == 0.0:
        return np.array([0.0, 0.0, 0.0, 0.0, 1.0])
    if x < 0.0:
        raise ValueError("McGehee x must be nonnegative")
    _, dUdx, dUda = delta_U_gradients(x, alpha, s, params)
    # collision guard: physical distance to the nearer primary
    r = 2.0 / (x * x)
    if params.mu > 0.0 and r < 4.0:
        _check_collision(r, alpha, s, params)
    x3 = x ** 3
    return np.array([
        -0.25 * x3 * y,
        0.25 * x3 * x * G,
        0.125 * G * G * x3 * x3 - 0.25 * x3 * (x + float(dUdx)),
        float(dUda),
        1.0,
    ])


def _check_collision(r: float, alpha: float, s: float, params: Params) -> None:
    ph, pl = primary_positions(s, params)
    pos = np.array([r * np.cos(alpha), r * np.sin(alpha)])
    dmin = min(np.linalg.norm(pos - ph), np.linalg.norm(pos - pl))
    if dmin < params.collision_floor:
        raise CollisionError(f"distance {dmin:.3e} to a primary below the floor")


def polar_rhs(t: float, u: np.ndarray, params: Params) -> np.ndarray:
    """Right-hand side in polar variables u = (r, alpha, y, G, s)."""
    r, alpha, y, G, s = u
    x = np.sqrt(2.0 / r)
    _, dUdx, dUda = delta_U_gradients(x, alpha, s, params)
    if params.mu > 0.0 and r < 4.0:
        _check_collision(r, alpha, s, params)
    dUdr = (x + float(dUdx)) * (-(x ** 3) / 4.0)  # chain rule through x(r)
    return np.array([y, G / r ** 2, G * G / r ** 3 + dUdr, float(dUda), 1.0])


def cartesian_rhs(t: float, u: np.ndarray, params: Params) -> np.ndarray:
    """Independent route: Newtonian two-center field in the inertial frame.

    u = (qx, qy, px, py); time is the epoch.
    """
    q = u[:2]
    ph, pl = primary_positions(t, params)
    dh = q - ph
    dl = q - pl
    rh = np.linalg.norm(dh)
    rl = np.linalg.norm(dl)
    if min(rh, rl) < params.collision_floor:
        raise CollisionError("collision with a primary")
    acc = -(1.0 - params.mu) * dh / rh ** 3 - params.mu * dl / rl ** 3
    return np.array([u[2], u[3], acc[0], acc[1]])


def hamiltonian(st: McGeheeState, params: Params) -> float:
    """H = (y**2 + G**2 x**4 / 4) / 2 - U; tends to 0 on parabolic orbits."""
    U = float(potential_U(st.x, st.alpha, st.s, params))
    return 0.5 * (st.y ** 2 + st.G ** 2 * st.x ** 4 / 4.0) - U


def jacobi_integral(st: McGeheeState, params: Params) -> float:
    """J = H - G, conserved exactly when e0 = 0 (rotating-frame energy)."""
    return hamiltonian(st, params) - st.G


def kepler_energy(st: McGeheeState) -> float:
    """Two-body energy (monopole part only); 0 on parabolic escape orbits."""
    return 0.5 * (st.y ** 2 + st.G ** 2 * st.x ** 4 / 4.0) - 0.5 * st.x * st.x
