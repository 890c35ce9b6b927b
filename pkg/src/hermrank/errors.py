"""Exception hierarchy shared by every module of the package."""


class HermrankError(Exception):
    """Base class for all errors raised by hermrank."""


class BackendMismatch(HermrankError, TypeError):
    """Operands live on different arithmetic backends."""


class DimensionMismatch(HermrankError, ValueError):
    pass


class NotSquare(DimensionMismatch):
    pass


class NotHermitian(HermrankError, ValueError):
    pass


class Unsolvable(HermrankError):
    """A matrix equation (or system) has no solution of the requested class.

    ``condition`` names the solvability test that failed, ``left`` and
    ``right`` hold the two evaluated sides when the test is an equality.
    """

    def __init__(self, condition, left=None, right=None):
        self.condition = condition
        self.left = left
        self.right = right
        msg = condition if left is None else f"{condition}: {left} != {right}"
        super().__init__(msg)


class PremiseViolated(HermrankError):
    """A standing assumption of a formula does not hold for the input."""


class HypothesisViolated(PremiseViolated):
    """Range-inclusion hypotheses of the two-variable formula fail."""


class HypothesisNotChecked(HermrankError):
    """A special-case identity was requested but its precondition fails."""


class InternalInconsistency(HermrankError):
    """Two independent evaluation routes disagree; indicates a transcription bug."""


class BudgetUnsatisfiable(HermrankError):
    """The search budget can neither enumerate the grid nor sample randomly."""


class InputError(HermrankError, ValueError):
    """Malformed instance or report file; the message names the offending field."""
