"""Exception hierarchy shared by all modules."""


class BottChernError(Exception):
    """Base class for library errors."""


class ShapeError(BottChernError, ValueError):
    """Array has the wrong shape or is not hermitian."""


class RankError(BottChernError, ValueError):
    """A map expected to be injective/surjective is rank deficient."""


class ExactnessError(BottChernError, ValueError):
    """Cube or S-simplex data fails an exactness or functoriality check."""


class DegreeError(BottChernError, ValueError):
    """Operation applied in an unsupported degree."""


class ScopeError(BottChernError, ValueError):
    """Requested branch or size is outside the implemented range."""


class SingularityError(BottChernError, ValueError):
    """Evaluation at a singular point of a form."""


class PreconditionError(BottChernError, ValueError):
    """Input violates a documented precondition."""


class ExprParseError(BottChernError, ValueError):
    """Malformed metric-family expression."""

    def __init__(self, message, position=None):
        super().__init__(message if position is None else f"{message} (at column {position})")
        self.position = position
