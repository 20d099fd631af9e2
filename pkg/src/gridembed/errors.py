"""Exception hierarchy shared across the package."""


class GridEmbedError(Exception):
    """Base class for all errors raised by gridembed."""


# -- complex construction -----------------------------------------------------

class InvalidSimplex(GridEmbedError):
    """A simplex tuple contains a repeated vertex index."""


class EmptyInput(GridEmbedError):
    """build_complex was given no simplices."""


class VertexOutOfRange(GridEmbedError):
    """A vertex index is outside [0, vertex_count)."""


class ZeroDimensional(GridEmbedError):
    """boundary() was asked for the boundary of a vertex."""


class NotAGraph(GridEmbedError):
    """Operation requires a 1-dimensional complex."""


# -- lattice geometry ---------------------------------------------------------

class AxisOutOfRange(GridEmbedError):
    """An axis index is outside [0, n)."""


class PieceNotInHyperplane(GridEmbedError):
    """prism_between requires the piece to sit at a constant coordinate."""


class ApexNotOnPiece(GridEmbedError):
    """cone_over requires the apex to lie on the base piece."""


class DimensionMismatch(GridEmbedError):
    """Plane query asked at a dimension the piece does not have."""


# -- placement ----------------------------------------------------------------

class MEqualsN(GridEmbedError):
    """No finite box supports unbounded placement when every coordinate is free."""


class PlacementExhausted(GridEmbedError):
    """Greedy placement found no free point; the counting precondition was violated."""


# -- skeleton extension -------------------------------------------------------

class SizePreconditionViolated(GridEmbedError):
    """Base-case filling received a complex larger than its inherited cap."""


class LabelRangeExhausted(GridEmbedError):
    """The greedy labeler ran out of labels; retry with a doubled constant."""


class SparsityViolated(GridEmbedError):
    """A label class failed its internal plane-disjointness check."""


class RecursionBaseMissing(GridEmbedError):
    """Extension recursion reached an ambient dimension with no base case."""


# -- embedding driver ---------------------------------------------------------

class UnsatisfiableParameters(GridEmbedError):
    """Requested (d, m, n) violate d <= m <= n or exceed the reachable range."""


class RetryBudgetExhausted(GridEmbedError):
    """Constant doubling failed within the allotted number of retries."""


# -- width pipeline -----------------------------------------------------------

class ChunkTooLarge(GridEmbedError):
    """A chunk holds more vertices than the width bound allows."""


class DegenerateHeights(GridEmbedError):
    """Height function is not injective on vertices after perturbation."""


# -- verifier -----------------------------------------------------------------

class BoxTooLarge(GridEmbedError):
    """Brute-force census refused a bounding box above its size limit."""


# -- CLI / serialization ------------------------------------------------------

class ParseError(GridEmbedError):
    """An input file could not be parsed."""


class UnsupportedDimension(GridEmbedError):
    """Export format does not support the embedding's dimensions."""
