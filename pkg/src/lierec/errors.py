"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes, so every failure a user can trigger
should surface as one of the classes below.
"""


class LieRecError(Exception):
    """Base class for all package errors."""


class DimensionError(LieRecError, ValueError):
    pass


class SingularMatrixError(LieRecError, ValueError):
    def __init__(self, det: float):
        super().__init__(f"matrix is singular (|det| = {abs(det):.3e})")
        self.det = abs(det)


class AlgebraStructureError(LieRecError, ValueError):
    """A matrix does not have the structure of the requested Lie algebra."""


class MembershipError(LieRecError, ValueError):
    """A matrix does not lie on the requested group manifold."""


class BranchCutError(LieRecError, ValueError):
    """The logarithm is requested outside its injectivity region."""


class DataFormatError(LieRecError, ValueError):
    """A dataset or checkpoint file is malformed."""


class NumericalError(LieRecError, ArithmeticError):
    """Non-finite values appeared during a computation (e.g. diverging training)."""


class KindMismatchError(LieRecError, ValueError):
    """Two objects that must share a group kind do not."""
