"""Classical level-one forms as q-series: E2, P, E4, E6 and Delta.

All coefficients are computed in exact integers.  Delta = (E4^3 - E6^2)/1728
uses integer products (Kronecker substitution), since double precision
convolutions lose the cancellation long before n = 2000.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .series import LogQSeries

__all__ = ["divisor_sigma", "int_poly_mul", "eisenstein", "FORM_WEIGHTS"]

FORM_WEIGHTS = {"E2": 2, "P": 2, "E4": 4, "E6": 6, "Delta": 12}


def divisor_sigma(k: int, N: int) -> list[int]:
    """[sigma_k(0)=0, sigma_k(1), ..., sigma_k(N-1)] by a sieve over divisors."""
    out = [0] * max(N, 0)
    for d in range(1, N):
        dk = d**k
        for m in range(d, N, d):
            out[m] += dk
    return out


def int_poly_mul(a: list[int], b: list[int], length: int) -> list[int]:
    """First ``length`` coefficients of a*b for signed integer lists."""
    a, b = a[:length], b[:length]
    if not a or not b:
        return [0] * length
    bound = max(map(abs, a)) * max(map(abs, b)) * min(len(a), len(b))
    bits = max(bound.bit_length() + 2, 8)

    def pack(c):
        x = 0
        for v in reversed(c):
            x = (x << bits) + v
        return x

    prod = pack(a) * pack(b)
    mask = (1 << bits) - 1
    half = 1 << (bits - 1)
    out = []
    for _ in range(length):
        d = prod & mask
        prod >>= bits
        if d >= half:
            d -= 1 << bits
            prod += 1
        out.append(d)
    return out


def _coeff_list(name: str, N: int) -> list:
    if name == "E4":
        s = divisor_sigma(3, N)
        return [1] + [240 * s[n] for n in range(1, N)]
    if name == "E6":
        s = divisor_sigma(5, N)
        return [1] + [-504 * s[n] for n in range(1, N)]
    if name == "E2":
        s = divisor_sigma(1, N)
        return [1] + [-24 * s[n] for n in range(1, N)]
    if name == "P":
        s = divisor_sigma(1, N)
        return [Fraction(-1, 12)] + [2 * s[n] for n in range(1, N)]
    if name == "Delta":
        e4 = _coeff_list("E4", N)
        e6 = _coeff_list("E6", N)
        cube = int_poly_mul(int_poly_mul(e4, e4, N), e4, N)
        sq = int_poly_mul(e6, e6, N)
        out = []
        for x, y in zip(cube, sq):
            q, r = divmod(x - y, 1728)
            assert r == 0
            out.append(q)
        return out
    raise ValueError(f"unknown form {name!r}; expected one of {sorted(FORM_WEIGHTS)}")


def eisenstein(name: str, N: int, exact: bool = True) -> LogQSeries:
    """q-expansion of E2, P = -E2/12, E4, E6 or Delta, known for exponents n < N."""
    if N < 0:
        raise ValueError("N must be >= 0")
    coeffs = _coeff_list(name, N)[:N]
    if exact:
        return LogQSeries.from_qseries(coeffs, exact=True)
    arr = np.array([complex(float(c)) for c in coeffs], dtype=complex)
    return LogQSeries(arr[None, :] if N else np.zeros((1, 0), complex), exact=False)
