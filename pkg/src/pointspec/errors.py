"""Exception hierarchy.

Every error raised on purpose by the library derives from :class:`PointSpecError`,
which lets the command line map them to exit code 1.
"""


class PointSpecError(Exception):
    """Base class for all library errors."""


# configuration and persistence


class ValidationFailure(PointSpecError, ValueError):
    """A configuration violates its invariants."""


class DuplicateCenters(ValidationFailure):
    pass


class EmptyConfiguration(ValidationFailure):
    pass


class NonFiniteEntry(ValidationFailure):
    pass


class UnknownName(PointSpecError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown name"


class BadParameterCount(PointSpecError, ValueError):
    pass


class IOFailure(PointSpecError, OSError):
    pass


class ParseFailure(PointSpecError, ValueError):
    pass


# geometry


class CoincidentPoints(PointSpecError, ValueError):
    """Green function requested at zero separation."""


class CoincidentWithCenter(CoincidentPoints):
    """Evaluation point sits on an interaction center."""


# spectral computations


class BranchNotBracketed(PointSpecError, RuntimeError):
    """An eigenvalue branch of Gamma(i*lambda) is still negative at lambda_max."""


class NotAZeroMode(PointSpecError, ValueError):
    pass


class APlusPSingular(PointSpecError, ArithmeticError):
    pass


class BSingular(PointSpecError, ArithmeticError):
    """The reduced operator on range(P) is singular, hence so is A."""


class RestrictedBlockSingular(PointSpecError, ArithmeticError):
    pass


class SingularOnContour(PointSpecError, ArithmeticError):
    pass


class NoConvergence(PointSpecError, RuntimeError):
    pass


class GammaSingular(PointSpecError, ArithmeticError):
    pass


class SumNotZero(PointSpecError, ValueError):
    pass


class InconsistentZeroComponent(PointSpecError, ValueError):
    pass
