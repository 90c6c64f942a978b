"""Problem parameters and state containers.

The model is a massless body moving in the plane under two primaries of mass
1 - mu and mu on a Keplerian orbit of eccentricity e0 (period 2*pi, total
mass 1).  States come in three interchangeable charts:

* Cartesian (q, p) in the inertial frame,
* polar (r, alpha, y, G) with radial momentum y and angular momentum G,
* McGehee (x, alpha, y, G, s) with r = 2 / x**2, which maps r = infinity
  to the regular boundary x = 0 and carries the epoch s along.
"""

from __future__ import annotations

from dataclasses import dataclass, field


COLLISION_FLOOR = 1e-6  # reject evaluations closer than this to a primary


@dataclass(frozen=True)
class Params:
    """Mass ratio and primary eccentricity.

    mu  in (0, 1/2]  (mu = 0 is accepted as the integrable limit),
    e0  in [0, 1).
    """

    mu: float
    e0: float = 0.0
    collision_floor: float = COLLISION_FLOOR

    def __post_init__(self) -> None:
        if not 0.0 <= self.mu <= 0.5:
            raise ValueError(f"mu must lie in [0, 1/2], got {self.mu}")
        if not 0.0 <= self.e0 < 1.0:
            raise ValueError(f"e0 must lie in [0, 1), got {self.e0}")
        if self.collision_floor <= 0.0:
            raise ValueError("collision_floor must be positive")

    @property
    def circular(self) -> bool:
        return self.e0 == 0.0


@dataclass(frozen=True)
class CartesianState:
    """Inertial-frame position and momentum of the massless body at epoch s."""

    qx: float
    qy: float
    px: float
    py: float
    s: float = 0.0


@dataclass(frozen=True)
class PolarState:
    """Polar chart: radius r, angle alpha, radial momentum y, angular momentum G."""

    r: float
    alpha: float
    y: float
    G: float
    s: float = 0.0


@dataclass(frozen=True)
class McGeheeState:
    """McGehee chart: x = sqrt(2 / r) >= 0, plus (alpha, y, G) and epoch s."""

    x: float
    alpha: float
    y: float
    G: float
    s: float = 0.0

    def astuple(self) -> tuple[float, float, float, float, float]:
        return (self.x, self.alpha, self.y, self.G, self.s)


@dataclass(frozen=True)
class LocalState:
    """Near-infinity chart q = (x - y)/2, p = (x + y)/2, theta = alpha + G*y."""

    q: float
    p: float
    theta: float
    G: float
    s: float = 0.0
