"""Independent reference values, computed without the package under test."""

from __future__ import annotations

import cmath
from fractions import Fraction

# first values of Ramanujan's tau function
RAMANUJAN_TAU = [0, 1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920]


def sigma(k: int, n: int) -> int:
    """Divisor power sum by trial division."""
    return sum(d**k for d in range(1, n + 1) if n % d == 0)


def eisenstein_coeffs(weight: int, N: int) -> list[int]:
    const = {4: 240, 6: -504, 8: 480, 10: -264, 14: -24}[weight]
    return [1] + [const * sigma(weight - 1, n) for n in range(1, N)]


def e2_coeffs(N: int) -> list[int]:
    return [1] + [-24 * sigma(1, n) for n in range(1, N)]


def delta_product(N: int) -> list[int]:
    """q prod (1 - q^n)^24 truncated to q^(N-1)."""
    f = [0] * N
    if N > 1:
        f[1] = 1
    for n in range(1, N):
        for _ in range(24):
            for i in range(N - 1, n - 1, -1):
                f[i] -= f[i - n]
    return f


def mat_mul(x, y):
    a, b, c, d = x
    e, f, g, h = y
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def st_word(exponents):
    """(S T^l_v) ... (S T^l_0) as a plain 4-tuple."""
    g = (1, 0, 0, 1)
    for l in exponents:
        g = mat_mul((0, -1, 1, l), g)
    return g


def q_eval(coeffs, tau: complex, offset: int = 0) -> complex:
    q = cmath.exp(2j * cmath.pi * tau)
    return sum(c * q ** (n + offset) for n, c in enumerate(coeffs))


def derivative(f, tau: complex, h: float = 1e-4) -> complex:
    """Five-point central difference along the real direction."""
    return (-f(tau + 2 * h) + 8 * f(tau + h) - 8 * f(tau - h) + f(tau - 2 * h)) / (12 * h)


def hilbert_trivial(k_max: int) -> dict[int, int]:
    """Coefficients of 1/((1-t^4)(1-t^6)) by direct counting."""
    return {k: sum(1 for a in range(k // 4 + 1) for b in range(k // 6 + 1) if 4 * a + 6 * b == k)
            for k in range(0, k_max + 1)}


P_COEFF = Fraction(-1, 12)
