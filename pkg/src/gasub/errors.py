"""Exception hierarchy shared by every module."""


class GasubError(Exception):
    """Base class for all errors raised by gasub."""


class SignatureMismatch(GasubError, ValueError):
    pass


class NotInvertible(GasubError, ArithmeticError):
    """Raised for blades whose square vanishes (null blades)."""


class NotABlade(GasubError, ValueError):
    pass


class RankMismatch(GasubError, ValueError):
    """A projector's image does not have the dimension that was asked for."""


class NotASubspace(GasubError, ValueError):
    pass


class NotInImage(GasubError, ValueError):
    """A multivector lies outside the subalgebra reached by a lift."""


class EmptyInput(GasubError, ValueError):
    pass


class NotAProjector(GasubError, ValueError):
    """Operator fails the idempotence check."""
