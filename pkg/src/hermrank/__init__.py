"""Exact extremal ranks and inertias of Hermitian matrix expressions."""

from .errors import (
    BackendMismatch,
    BudgetUnsatisfiable,
    DimensionMismatch,
    HermrankError,
    HypothesisNotChecked,
    HypothesisViolated,
    InputError,
    InternalInconsistency,
    NotHermitian,
    NotSquare,
    PremiseViolated,
    Unsolvable,
)
from .numeric import EXACT, FLOAT, Inertia, Matrix, Scalar, TolerancePolicy

__version__ = "0.1.0"

__all__ = [
    "EXACT", "FLOAT", "Inertia", "Matrix", "Scalar", "TolerancePolicy",
    "BackendMismatch", "BudgetUnsatisfiable", "DimensionMismatch", "HermrankError",
    "HypothesisNotChecked", "HypothesisViolated", "InputError", "InternalInconsistency",
    "NotHermitian", "NotSquare", "PremiseViolated", "Unsolvable",
]
