"""Exception hierarchy for growth distance queries."""


class GrowthDistanceError(Exception):
    """Base class for all errors raised by this package."""


class ZeroDirection(GrowthDistanceError):
    """A support direction with zero norm was supplied."""


class MissingInradius(GrowthDistanceError):
    """A polytope-family shape needs a caller-supplied inradius bound."""


class DisconnectedAdjacency(GrowthDistanceError):
    """Hill climbing stalled below the exhaustive maximum (bad adjacency)."""


class DegenerateCenters(GrowthDistanceError):
    """The two scaling centers coincide in world frame."""


class InvalidInradius(GrowthDistanceError):
    """The combined inradius lower bound is not positive."""


class SimplexError(GrowthDistanceError):
    """Base class for numerical breakdowns inside the basis solver."""


class SingularBasis(SimplexError):
    """The basis matrix is numerically singular."""


class NoPositivePivot(SimplexError):
    """No admissible outgoing variable in the ratio test."""


class CycleLimit(SimplexError):
    """Pivot count exceeded the hard anti-cycling limit."""


class NoFeasibleBasis(GrowthDistanceError):
    """Exhaustive basis enumeration found no feasible conic basis."""
