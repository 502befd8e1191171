"""Exception types shared across the package."""


class PTWellError(Exception):
    """Base class for all package-specific errors."""


class QuadrantError(PTWellError, ValueError):
    """Inverse rotation landed outside the physical quadrant s >= 0, t >= 0."""


class PoleError(PTWellError, ValueError):
    """Evaluation requested at a pole of 1/sin(tau) (tau a multiple of pi)."""


class AsymptoteError(PTWellError, ValueError):
    """Evaluation requested too close to a vertical asymptote."""


class NodeAtMatchingPointError(PTWellError, ValueError):
    """The wavefunction vanishes at the matching point, so the unit
    normalization there is impossible and the slope parameter is undefined."""


class OffContourError(PTWellError, ValueError):
    """Coordinate does not lie on the broken integration contour."""


class WindowError(PTWellError, ValueError):
    """Energy window is invalid or too small to isolate the feature sought."""


class SolverError(PTWellError, RuntimeError):
    """A solver failed to converge or to validate its own output."""


class CountMismatchError(SolverError):
    """Argument-principle count disagrees with the refined root list."""
