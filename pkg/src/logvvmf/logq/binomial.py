"""Binomial polynomials binom(x, k) and the change-of-basis matrices B_m(x)."""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np
import sympy

__all__ = [
    "binom_eval",
    "binom_product_coeffs",
    "binom_derivative_coeffs",
    "shifted_binom_coeffs",
    "stirling1",
    "stirling2",
    "binom_to_power",
    "power_to_binom",
    "binom_matrix",
    "binom_matrix_inverse",
    "binom_matrix_eval",
    "binom_matrix_inverse_eval",
    "jordan_block_symbolic",
]

X = sympy.Symbol("x")


def binom_eval(x, k: int):
    """binom(x, k) = x (x-1) ... (x-k+1) / k! for scalar or array x (0 for k < 0)."""
    if k < 0:
        return np.zeros_like(x) if isinstance(x, np.ndarray) else 0
    out = np.ones_like(x) if isinstance(x, np.ndarray) else 1
    for r in range(k):
        out = out * (x - r)
    return out / math.factorial(k)


@lru_cache(maxsize=None)
def binom_product_coeffs(a: int, b: int) -> tuple[tuple[int, int], ...]:
    """binom(x, a) binom(x, b) = sum_k C_k binom(x, k); returns ((k, C_k), ...)."""
    out = []
    for k in range(max(a, b), a + b + 1):
        c = math.factorial(k) // (math.factorial(k - a) * math.factorial(k - b) * math.factorial(a + b - k))
        out.append((k, c))
    return tuple(out)


@lru_cache(maxsize=None)
def binom_derivative_coeffs(j: int) -> tuple[tuple[int, Fraction], ...]:
    """d/dx binom(x, j) = sum_{i<j} (-1)^(j-1-i) / (j-i) binom(x, i)."""
    return tuple((i, Fraction((-1) ** (j - 1 - i), j - i)) for i in range(j))


@lru_cache(maxsize=None)
def shifted_binom_coeffs(s: int, t: int) -> tuple[tuple[int, int], ...]:
    """binom(x + s, t) = sum_u binom(s, t - u) binom(x, u) for integer s (Vandermonde)."""
    from ..rep import gen_binomial

    out = []
    for u in range(t + 1):
        c = gen_binomial(s, t - u)
        if c:
            out.append((u, c))
    return tuple(out)


@lru_cache(maxsize=None)
def stirling1(n: int, k: int) -> int:
    """Signed Stirling numbers of the first kind: x(x-1)...(x-n+1) = sum s(n,k) x^k."""
    if n == k:
        return 1
    if n == 0 or k == 0:
        return 0
    return stirling1(n - 1, k - 1) - (n - 1) * stirling1(n - 1, k)


@lru_cache(maxsize=None)
def stirling2(n: int, k: int) -> int:
    if n == k:
        return 1
    if n == 0 or k == 0:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


@lru_cache(maxsize=None)
def binom_to_power(j: int) -> tuple[Fraction, ...]:
    """Power-basis coefficients (c_0..c_j) of binom(x, j)."""
    f = math.factorial(j)
    return tuple(Fraction(stirling1(j, i), f) for i in range(j + 1))


@lru_cache(maxsize=None)
def power_to_binom(i: int) -> tuple[int, ...]:
    """x^i = sum_j S(i, j) j! binom(x, j); returns (d_0..d_i)."""
    return tuple(stirling2(i, j) * math.factorial(j) for j in range(i + 1))


def _sym_binom(expr, k):
    out = sympy.Integer(1)
    for r in range(k):
        out *= expr - r
    return sympy.expand(out / sympy.factorial(k))


def binom_matrix(m: int, x=X) -> sympy.Matrix:
    """B_m(x)_{ij} = (-1)^(i-j) binom(x+i-j-1, i-j), lower triangular."""
    return sympy.Matrix(m, m, lambda i, j: (-1) ** (i - j) * _sym_binom(x + i - j - 1, i - j) if i >= j else 0)


def binom_matrix_inverse(m: int, x=X) -> sympy.Matrix:
    """B_m(x)^{-1}_{ij} = binom(x, i-j)."""
    return sympy.Matrix(m, m, lambda i, j: _sym_binom(x, i - j) if i >= j else 0)


def jordan_block_symbolic(m: int, lam) -> sympy.Matrix:
    return sympy.Matrix(m, m, lambda i, j: lam if i == j or i == j + 1 else 0)


def binom_matrix_eval(m: int, x) -> np.ndarray:
    """Numeric B_m(x); x may be an array, giving shape x.shape + (m, m)."""
    x = np.asarray(x, dtype=complex)
    out = np.zeros(x.shape + (m, m), dtype=complex)
    for d in range(m):
        val = (-1) ** d * binom_eval(x + d - 1, d)
        for i in range(d, m):
            out[..., i, i - d] = val
    return out


def binom_matrix_inverse_eval(m: int, x) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    out = np.zeros(x.shape + (m, m), dtype=complex)
    for d in range(m):
        val = binom_eval(x, d)
        for i in range(d, m):
            out[..., i, i - d] = val
    return out
