"""Exception hierarchy shared by all subpackages."""


class GeometryError(ValueError):
    """Base class for invalid or degenerate geometric input."""


class Unbounded(GeometryError):
    pass


class TooLarge(GeometryError):
    pass


class DegenerateDim(GeometryError):
    pass


class EmptySection(GeometryError):
    pass


class OriginNotInterior(GeometryError):
    pass


class TooManyGenerators(GeometryError):
    pass


class EmptyInterior(GeometryError):
    pass


class NotInJohnPosition(GeometryError):
    pass


class InfeasibleDecomposition(GeometryError):
    pass


class IndexOutOfRange(GeometryError):
    pass


class GenerationFailed(GeometryError):
    pass


class NotConverged(RuntimeError):
    """An iterative solver hit its iteration cap before its tolerance."""
