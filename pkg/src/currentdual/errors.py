"""Exception types shared across the library."""


class CurrentDualError(Exception):
    """Base class for all library errors."""


class NotHyperbolic(CurrentDualError):
    """Operation requires a hyperbolic isometry (|trace| > 2)."""


class DegenerateSegment(CurrentDualError):
    """Segment is a singleton where a non-degenerate one is required."""


class CoincidentPoints(CurrentDualError):
    """Boundary points too close together for a stable cross-ratio."""


class BallTooLarge(CurrentDualError):
    """Orbit enumeration exceeded the configured element cap."""


class NonCompactBox(CurrentDualError):
    """Box interval closures touch; the measure may be infinite."""


class InvalidMatrix(CurrentDualError):
    """Matrix is not a unit-determinant 2x2 real matrix."""


class RelatorViolation(CurrentDualError):
    """A declared relator does not evaluate to +-identity."""


class NonHyperbolicGenerator(CurrentDualError):
    """A presentation generator is not hyperbolic."""


class Disconnected(CurrentDualError):
    """Graph nodes are separated by the window truncation."""


class NotConvexPosition(CurrentDualError):
    """Four points do not span an embedded geodesic quadrilateral."""
