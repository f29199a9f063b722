"""Logarithmic q-series and the classical forms they are built from."""

from .binomial import (
    binom_eval,
    binom_matrix,
    binom_matrix_eval,
    binom_matrix_inverse,
    binom_matrix_inverse_eval,
    binom_to_power,
    jordan_block_symbolic,
    power_to_binom,
)
from .classical import FORM_WEIGHTS, divisor_sigma, eisenstein
from .ops import (
    CUSPIDAL,
    HOLOMORPHIC,
    MEROMORPHIC,
    classify_at_infinity,
    d_power,
    g_to_h,
    h_to_g,
    modular_derivative,
)
from .series import LogQSeries, normalize_mu

__all__ = [
    "LogQSeries",
    "normalize_mu",
    "eisenstein",
    "divisor_sigma",
    "FORM_WEIGHTS",
    "modular_derivative",
    "d_power",
    "classify_at_infinity",
    "g_to_h",
    "h_to_g",
    "binom_eval",
    "binom_matrix",
    "binom_matrix_inverse",
    "binom_matrix_eval",
    "binom_matrix_inverse_eval",
    "binom_to_power",
    "power_to_binom",
    "jordan_block_symbolic",
    "MEROMORPHIC",
    "HOLOMORPHIC",
    "CUSPIDAL",
]
