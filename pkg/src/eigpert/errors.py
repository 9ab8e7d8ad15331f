"""Exception hierarchy.

Every error raised on purpose by the library derives from ``EigPertError``.
The CLI maps the subclasses below onto exit codes, so new classes should
inherit from the closest existing category.
"""


class EigPertError(Exception):
    """Base class for all library errors."""


# -- input / shape problems --------------------------------------------------


class InputError(EigPertError, ValueError):
    """Malformed input (shapes, non-finite entries, bad parameters)."""


class NotSquare(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class NonFiniteInput(InputError):
    pass


# -- numerical failures ------------------------------------------------------


class NumericalError(EigPertError):
    """A numerical procedure failed to deliver a trustworthy result."""


class NonConvergence(NumericalError):
    pass


class SingularToTolerance(NumericalError):
    def __init__(self, message, pivot=None):
        super().__init__(message)
        self.pivot = pivot


class EvaluatorFailure(NumericalError):
    pass


class PairingAmbiguous(NumericalError):
    pass


class ReorderFailure(NumericalError):
    pass


class BranchCutViolation(NumericalError):
    pass


class MatchingFailure(NumericalError):
    pass


class ResolventBreakdown(NumericalError):
    pass


class NonIntegerResult(NumericalError):
    pass


class AmbiguousSign(NumericalError):
    pass


# -- first-order theory does not apply ---------------------------------------


class NotSimple(EigPertError):
    """The selected eigenvalue is (numerically) multiple."""


class SingularDecoupling(NotSimple):
    pass


class NearOrthogonalPair(EigPertError):
    """Right and left eigenvectors are numerically orthogonal (defective case)."""


# -- normalization scheme problems -------------------------------------------


class SchemeError(EigPertError):
    """A normalization scheme is undefined or unusable for this eigenpair."""


class PinnedEntryZero(SchemeError):
    pass


class IsotropicVector(SchemeError):
    pass


class NotVerifiable(SchemeError):
    pass
