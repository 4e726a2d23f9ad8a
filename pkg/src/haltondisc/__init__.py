"""Halton and Hammersley point sets, their CRT/Fourier discrepancy
decomposition, and exact and Monte Carlo L_p discrepancy engines."""

from ._core import BACKEND
from .discrepancy import (
    BudgetExceededError,
    DiscrepancyValue,
    l2_exact,
    linf_exact,
    local_discrepancy,
    lp_mc,
    truncated_local_discrepancy,
)
from .pointsets import (
    DigitPermutationFamily,
    PointSet,
    generalized_halton,
    halton,
    hammersley,
    hammersley_sym,
    hammersley_sym_dot,
)
from .radix import BaseSystem, ModulusOverflowError, crt_weights, digits, localize, radical_inverse

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BaseSystem",
    "BudgetExceededError",
    "DigitPermutationFamily",
    "DiscrepancyValue",
    "ModulusOverflowError",
    "PointSet",
    "crt_weights",
    "digits",
    "generalized_halton",
    "halton",
    "hammersley",
    "hammersley_sym",
    "hammersley_sym_dot",
    "l2_exact",
    "linf_exact",
    "local_discrepancy",
    "localize",
    "lp_mc",
    "radical_inverse",
    "truncated_local_discrepancy",
]
