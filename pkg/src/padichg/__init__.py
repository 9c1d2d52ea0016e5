"""p-adic hypergeometric functions with exact congruence checking."""
from .kernels import BACKEND
from .padic_core import (
    BranchConstants, FrobeniusConstantError, NotIntegralError, PadicBall,
    PadicError, PrecisionError, branch_constants, iwasawa_log_unit,
    parse_rational, pow_binomial, psi_gamma, reduce, valuation,
)

__version__ = "0.1.0"
