"""Exception hierarchy shared across the package."""


class ParinfError(Exception):
    """Base class for all package-specific failures."""


class CollisionError(ParinfError):
    """Trajectory or evaluation point came too close to a primary."""


class StepSizeUnderflow(ParinfError):
    """Adaptive integrator could not meet the tolerance with a representable step."""


class HorizonExceeded(ParinfError):
    """Integration budget (time span or step count) was exhausted."""


class NoCrossing(ParinfError):
    """Requested section crossing was not found inside the search window."""


class QuadratureError(ParinfError):
    """Quadrature failed to meet its error target."""


class NondegeneracyFailure(ParinfError):
    """A required nondegenerate critical point could not be certified."""


class ChannelLost(ParinfError):
    """Continuation of a homoclinic channel failed before reaching the target."""


class OrderSolveFailure(ParinfError):
    """Order-by-order solve of the conjugacy equations hit a non-invertible block."""


class DomainValidationFailure(ParinfError):
    """A requested chart domain violates the invariance sufficient condition."""


class DegenerateSplitting(ParinfError):
    """Manifolds coincide to working precision where a splitting was required."""


class PrecisionExhausted(ParinfError):
    """Nested refinement ran out of floating-point resolution.

    Carries the number of links that were completed successfully.
    """

    def __init__(self, links_completed: int, message: str = ""):
        self.links_completed = links_completed
        super().__init__(message or f"precision exhausted after {links_completed} links")


class ConfigError(ParinfError):
    """Malformed or inconsistent run configuration."""
