"""Exception hierarchy shared across the package."""


class LmsError(Exception):
    """Base class for every error raised by lmsurf."""


class ParseError(LmsError):
    """Raised for malformed expression source.

    ``position`` is the 0-based character offset and ``expected`` the set of
    tokens that would have been accepted there (may be empty).
    """

    def __init__(self, message, position=None, expected=()):
        self.position = position
        self.expected = frozenset(expected)
        if position is not None:
            message = f"{message} (at position {position})"
        if self.expected:
            message = f"{message}; expected one of: {', '.join(sorted(self.expected))}"
        super().__init__(message)


class DomainError(LmsError, ArithmeticError):
    """A function was evaluated outside its domain (pole, negative sqrt, ...)."""

    def __init__(self, message, subexpr=None):
        self.subexpr = subexpr
        if subexpr is not None:
            message = f"{message} in `{subexpr}`"
        super().__init__(message)


class ContinuationError(DomainError):
    """Complex continuation produced a non-negligible imaginary part."""

    def __init__(self, message, point=None):
        self.point = point
        if point is not None:
            message = f"{message} at {tuple(point)}"
        super().__init__(message)


class CatalogError(LmsError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class DefinitionFileError(LmsError, ValueError):
    pass


class QuadratureError(LmsError):
    """Adaptive quadrature failed to converge or hit a pole."""


class MeshError(LmsError, ValueError):
    pass
