"""Coordinate charts and exact conversions between them.

All conversions are closed-form; round-tripping any state through another
chart reproduces it to near machine precision (tested at 1e-14).
"""

from __future__ import annotations

import numpy as np

from .params import CartesianState, PolarState, McGeheeState, LocalState


def cartesian_to_polar(st: CartesianState) -> PolarState:
    r = float(np.hypot(st.qx, st.qy))
    if r == 0.0:
        raise ValueError("polar chart singular at the origin")
    alpha = float(np.arctan2(st.qy, st.qx))
    y = (st.qx * st.px + st.qy * st.py) / r
    G = st.qx * st.py - st.qy * st.px
    return PolarState(r=r, alpha=alpha, y=y, G=G, s=st.s)


def polar_to_cartesian(st: PolarState) -> CartesianState:
    ca, sa = np.cos(st.alpha), np.sin(st.alpha)
    qx, qy = st.r * ca, st.r * sa
    # p = y * rhat + (G / r) * that
    px = st.y * ca - (st.G / st.r) * sa
    py = st.y * sa + (st.G / st.r) * ca
    return CartesianState(qx=qx, qy=qy, px=px, py=py, s=st.s)


def polar_to_mcgehee(st: PolarState) -> McGeheeState:
    if st.r <= 0.0:
        raise ValueError("McGehee chart requires r > 0")
    return McGeheeState(x=float(np.sqrt(2.0 / st.r)), alpha=st.alpha,
                        y=st.y, G=st.G, s=st.s)


def mcgehee_to_polar(st: McGeheeState) -> PolarState:
    if st.x <= 0.0:
        raise ValueError("r is infinite at x = 0")
    return PolarState(r=2.0 / (st.x * st.x), alpha=st.alpha,
                      y=st.y, G=st.G, s=st.s)


def cartesian_to_mcgehee(st: CartesianState) -> McGeheeState:
    return polar_to_mcgehee(cartesian_to_polar(st))


def mcgehee_to_cartesian(st: McGeheeState) -> CartesianState:
    return polar_to_cartesian(mcgehee_to_polar(st))


def local_qp_chart(st: McGeheeState) -> LocalState:
    """Near-infinity diagonalizing chart q = (x-y)/2, p = (x+y)/2, theta = alpha + G*y."""
    return LocalState(q=0.5 * (st.x - st.y), p=0.5 * (st.x + st.y),
                      theta=st.alpha + st.G * st.y, G=st.G, s=st.s)


def local_qp_inverse(st: LocalState) -> McGeheeState:
    x = st.q + st.p
    y = st.p - st.q
    return McGeheeState(x=x, alpha=st.theta - st.G * y, y=y, G=st.G, s=st.s)
