"""Shared exception types."""


class FfredError(Exception):
    """Base class for package-specific errors."""


class InseparableInput(FfredError):
    """Raised when an operation requires a separable polynomial (h' != 0)."""


class InternalContradiction(FfredError):
    """A machine-checked statement failed where theory says it cannot.

    This is raised loudly instead of returning a value: it would mean a
    counterexample to one of the verified propositions, or (far more
    likely) a bug in this package.
    """


class NotEnoughOrbits(FfredError):
    """F_q does not contain enough Frobenius orbits for the request."""

    def __init__(self, available: int, requested: int):
        super().__init__(
            f"need {requested} distinct Frobenius orbits, field has {available}"
        )
        self.available = available
        self.requested = requested


class UnsupportedExtension(FfredError):
    """Operation implemented only for a restricted class of extensions."""


class InvalidPoint(FfredError):
    """Point fails a curve-membership precondition."""


class FormulaSyntaxError(FfredError):
    """S-expression parse failure, with offset into the input text."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at offset {position})")
        self.position = position


class SortError(FfredError):
    """Formula mixes the arithmetic and ring signatures."""


class SearchSpaceExceeded(FfredError):
    """Bounded ring search refused: the universe is too large."""

    def __init__(self, points: int, limit: int):
        super().__init__(f"search space of {points} points exceeds limit {limit}")
        self.points = points
        self.limit = limit
