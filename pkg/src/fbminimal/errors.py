"""Exception hierarchy shared by all modules."""


class GeometryError(Exception):
    """Base class for every error raised by fbminimal."""


class PoleError(GeometryError, ZeroDivisionError):
    pass


class BracketError(GeometryError, ValueError):
    pass


class NumericError(GeometryError, ArithmeticError):
    pass


class DegeneracyError(GeometryError, ArithmeticError):
    """Metric or curve speed vanishes where an immersion was expected."""


class DomainError(GeometryError, ValueError):
    pass


class BranchPointError(GeometryError, ValueError):
    pass


class RepresentationError(GeometryError, ValueError):
    """A transform leaves the class of Laurent polynomials or the annulus."""


class InsufficientDataError(GeometryError, ValueError):
    pass
