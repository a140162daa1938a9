"""Exception hierarchy for the outer billiard toolkit.

Tagged outcomes (singular hits, inconclusive certificates, unresolved pixels)
are reported through Enums. Only genuine failures raise.
"""


class BilliardError(Exception):
    """Base exception for domain errors."""
    pass


class PolygonError(BilliardError):
    """Polygon input violates the standing convexity assumptions."""
    pass


class NotConvex(PolygonError):
    """Vertices do not describe a strictly convex polygon."""
    pass


class DegenerateCollinear(PolygonError):
    """Three consecutive vertices are collinear or a vertex is repeated."""
    pass


class TooFewVertices(PolygonError):
    """Fewer than three vertices."""
    pass


class ParameterOutOfRange(BilliardError):
    """A numeric parameter lies outside its admissible range."""
    pass


class SameVertex(BilliardError):
    """Two-symbol fixed point requested for identical vertices."""
    pass


class EnteredPolygonError(BilliardError):
    """An orbit point fell inside the closed polygon."""
    pass


class SubdivisionError(BilliardError):
    """Base exception for continuity-cell subdivision errors."""
    pass


class DepthTooLarge(SubdivisionError):
    """Number of cells exceeded the configured cap."""
    pass


class NotStrictlyInside(BilliardError):
    """A cell image straddles several cells of the same depth."""
    pass


class EmptyAttractorList(BilliardError):
    """Basin operations need at least one attractor."""
    pass


class TransversalityError(BilliardError):
    """Base exception for polynomial machinery errors."""
    pass


class DegreeBelowD(TransversalityError):
    """Polynomial degree is smaller than the derivative order d."""
    pass


class NotFoundWithinCap(TransversalityError):
    """Integer search exhausted its cap."""
    pass


class AllLeadingCoefficientsBelowThreshold(TransversalityError):
    """No coefficient c_l with l <= N reaches the threshold."""
    pass


class InputFileError(BilliardError):
    """Malformed polygon, polynomial or palette file."""
    pass


class IncompletePalette(BilliardError):
    """Palette has no colour for some label of a raster."""
    pass
