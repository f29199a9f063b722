"""Logarithmic vector-valued modular forms: group words, representations,
logarithmic q-series, Poincare series, modular differential equations and
empirical growth estimates."""

from . import errors, estimates, io, mlde, poincare, rep, sl2z
from .logq import LogQSeries, eisenstein, modular_derivative
from .poincare import PoincareParams, extract_coefficients, poincare_eval
from .rep import BlockSpec, Representation, standard_rep, trivial_rep, unipotent_rep
from .sl2z import GammaElement, eichler_decompose

__version__ = "0.1.0"

__all__ = [
    "errors", "estimates", "io", "mlde", "poincare", "rep", "sl2z",
    "LogQSeries", "eisenstein", "modular_derivative",
    "PoincareParams", "extract_coefficients", "poincare_eval",
    "BlockSpec", "Representation", "standard_rep", "trivial_rep", "unipotent_rep",
    "GammaElement", "eichler_decompose",
]
