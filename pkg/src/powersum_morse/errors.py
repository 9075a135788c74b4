"""Exceptions raised by the surface, enumeration and topology routines."""


class SurfaceError(Exception):
    """Base class for all package errors."""


class NotOnSurface(SurfaceError, ValueError):
    pass


class SingularPoint(SurfaceError):
    """The point has fewer than three distinct coordinate values."""


class RankDeficient(SurfaceError):
    """The constraint Jacobian has numerical rank below three."""


class DegenerateRoot(SurfaceError):
    """Two coordinate values of a critical point coincide."""


class WrongRegime(SurfaceError):
    pass


class DegenerateRegime(SurfaceError):
    """The surface is empty or zero-dimensional for this value of c."""


class InconsistentTopology(SurfaceError, ValueError):
    pass
