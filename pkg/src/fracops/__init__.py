"""Fractional derivatives of arbitrary positive order.

Liouville-Weyl, Riesz and Feller derivatives, and the central-difference
family of order ``k`` whose normalization makes ``alpha -> k`` reproduce the
ordinary ``k``-th derivative.  Singular integrals are evaluated by a compiled
kernel when available (:mod:`fracops._kernels`) and by pure Python otherwise.
"""

from .engine import HAVE_EXTENSION, backend, get_backend, set_backend
from .errors import DegeneracyError, DomainError, FracOpsError, QuadratureWarning, TailBoundError
from .functions import (
    FunctionHandle,
    constant,
    cosine,
    exp_decay,
    exp_growth,
    gaussian,
    lorentzian,
    parse_function,
    plane_wave,
    sine,
)
from .normalization import NormalizationResult, calibrate_sign, prefactor, stencil_sum
from .operators import (
    DirectionWeights,
    FellerCoefficients,
    GridResult,
    OperatorSpec,
    antisymmetric,
    central_fractional,
    evaluate,
    extended_order,
    feller,
    feller_coeffs,
    feller_rotation,
    grid_eval,
    hyperspherical_apply,
    hyperspherical_weights,
    lw_minus,
    lw_plus,
    riesz,
)
from .quadrature import IntegralEstimate, QuadratureConfig, TailModel, singular_integral
from .stencil import CentralStencil, apply_stencil, build_stencil, stencil_moment

__version__ = "0.1.0"

__all__ = [
    "HAVE_EXTENSION", "backend", "get_backend", "set_backend",
    "DegeneracyError", "DomainError", "FracOpsError", "QuadratureWarning", "TailBoundError",
    "FunctionHandle", "constant", "cosine", "exp_decay", "exp_growth", "gaussian",
    "lorentzian", "parse_function", "plane_wave", "sine",
    "NormalizationResult", "calibrate_sign", "prefactor", "stencil_sum",
    "DirectionWeights", "FellerCoefficients", "GridResult", "OperatorSpec", "antisymmetric",
    "central_fractional", "evaluate", "extended_order", "feller", "feller_coeffs",
    "feller_rotation", "grid_eval", "hyperspherical_apply", "hyperspherical_weights",
    "lw_minus", "lw_plus", "riesz",
    "IntegralEstimate", "QuadratureConfig", "TailModel", "singular_integral",
    "CentralStencil", "apply_stencil", "build_stencil", "stencil_moment",
]
