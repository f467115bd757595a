"""Exception hierarchy. The CLI maps each family onto a stable exit code."""


class MaglabError(Exception):
    """Base class for all library errors."""


class InputError(MaglabError, ValueError):
    """Malformed input: unparsable files, bad shapes, non-finite coordinates."""


class DuplicatePointError(InputError):
    """A point set contains the same point twice."""


class DimensionMismatchError(InputError):
    """Points or point sets of different dimension were combined."""


class NumericalError(MaglabError, ArithmeticError):
    """A numerical routine failed (singular matrix, residual too large, ...)."""


class SingularMatrixError(NumericalError):
    pass


class ResidualError(NumericalError):
    def __init__(self, residual, tol, what="solve"):
        self.residual = residual
        self.tol = tol
        super().__init__(f"{what}: relative residual {residual:.3e} exceeds tolerance {tol:.1e}")


class DomainError(MaglabError, ValueError):
    """An input lies outside the domain where a formula holds."""


class NotSkewError(DomainError):
    pass


class RadiusError(DomainError):
    pass
