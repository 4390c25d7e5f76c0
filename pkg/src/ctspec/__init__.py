"""Spectral functions of Calderon-Toeplitz operators with vertical symbols.

The package computes the functions gamma_{a,k} that realize these
operators as multiplications, classifies symbols by the boundedness of
the resulting operator family, and verifies the multiplier picture
against directly discretized operators.
"""

__version__ = "0.1.0"

from .boundedness import BoundednessVerdict, classify, nonneg_lift
from .gamma import (
    ClosedFormUnavailable,
    EndpointLimit,
    GammaProfile,
    gamma,
    gamma_closed_form,
    gamma_many,
    gamma_profile,
)
from .harness import (
    Grid2D,
    HalfLineSignal,
    approximation_decay,
    decay_report,
    default_grid,
    equivalence_report,
    isometry_report,
    r_apply,
    r_star_apply,
    random_signals,
    tapered_signal,
    toeplitz_apply,
    truncation_sequence,
    verify_multiplier_equivalence,
)
from .kernels import backend_name
from .laguerre import (
    LaguerreBasis,
    LambdaParams,
    ell_eval,
    laguerre_eval,
    laguerre_product_integral,
    lambda_bound_constant,
    lambda_eval,
    pochhammer,
)
from .symbols import (
    Symbol,
    SymbolError,
    SymbolParseError,
    IntegrabilityError,
    NotNonNegativeError,
    const,
    cosinvpow,
    ensure_nonnegative,
    eval_symbol,
    fit_mean_asymptotic,
    iterated_mean,
    logpow,
    mean_growth_exponent,
    normalize,
    oscexp,
    parse_symbol,
    plainsin_invpow,
    print_symbol,
    restrict,
    sininvpow,
    theta_inf,
    Theta_inf,
    truncate,
    vi,
    vpow,
)

__all__ = [
    "__version__",
    "backend_name",
    "BoundednessVerdict",
    "ClosedFormUnavailable",
    "EndpointLimit",
    "GammaProfile",
    "Grid2D",
    "HalfLineSignal",
    "LaguerreBasis",
    "LambdaParams",
    "Symbol",
    "SymbolError",
    "SymbolParseError",
    "IntegrabilityError",
    "NotNonNegativeError",
    "approximation_decay",
    "classify",
    "const",
    "cosinvpow",
    "decay_report",
    "default_grid",
    "ell_eval",
    "ensure_nonnegative",
    "equivalence_report",
    "eval_symbol",
    "fit_mean_asymptotic",
    "gamma",
    "gamma_closed_form",
    "gamma_many",
    "gamma_profile",
    "isometry_report",
    "iterated_mean",
    "laguerre_eval",
    "laguerre_product_integral",
    "lambda_bound_constant",
    "lambda_eval",
    "logpow",
    "mean_growth_exponent",
    "nonneg_lift",
    "normalize",
    "oscexp",
    "parse_symbol",
    "plainsin_invpow",
    "pochhammer",
    "print_symbol",
    "r_apply",
    "r_star_apply",
    "random_signals",
    "restrict",
    "sininvpow",
    "tapered_signal",
    "theta_inf",
    "Theta_inf",
    "toeplitz_apply",
    "truncate",
    "truncation_sequence",
    "verify_multiplier_equivalence",
    "vi",
    "vpow",
]
