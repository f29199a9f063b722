"""Modular derivative and cusp classification, plus the g <-> h change of basis."""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence

import numpy as np

from ..errors import BlockMismatch, TruncationUnderflow
from .binomial import binom_matrix_eval, binom_matrix_inverse_eval, shifted_binom_coeffs
from .classical import eisenstein
from .series import LogQSeries

__all__ = ["modular_derivative", "d_power", "classify_at_infinity", "g_to_h", "h_to_g",
           "MEROMORPHIC", "HOLOMORPHIC", "CUSPIDAL"]

MEROMORPHIC = "meromorphic"
HOLOMORPHIC = "holomorphic"
CUSPIDAL = "cuspidal"


@lru_cache(maxsize=32)
def _P(N: int, exact: bool) -> LogQSeries:
    return eisenstein("P", N, exact=exact)


def modular_derivative(f: LogQSeries, k: int) -> LogQSeries:
    """D_k f = theta f + k P f, of weight k + 2."""
    if f.order < 0:
        raise TruncationUnderflow("series has negative truncation order")
    out = f.theta()
    if k:
        P = _P(max(f.length, 1), f.exact)
        out = out + (P * f).scale(k)
    return out


def d_power(f: LogQSeries, k: int, n: int) -> LogQSeries:
    """D^n f = D_{k+2n-2} ... D_{k+2} D_k f."""
    out = f
    for i in range(n):
        out = modular_derivative(out, k + 2 * i)
    return out


def classify_at_infinity(f: LogQSeries, tol: float = 1e-9) -> str:
    """Cusp behaviour read off every ordinary q-series multiplying binom(tau, j).

    Float coefficients count as zero when their magnitude is at most ``tol``
    (absolute: coefficient sizes grow with n, so a relative test would be
    dominated by the far end of the series).
    """
    f = f.to_binomial()
    lead = f.leading_exponent(tol=0.0 if f.exact else tol)
    if lead is None or lead > 0:
        return CUSPIDAL
    if lead == 0:
        return HOLOMORPHIC
    return MEROMORPHIC


def _bm_poly(d: int) -> list[int]:
    """(-1)^d binom(tau + d - 1, d) in the binomial basis of tau."""
    out = [0] * (d + 1)
    for u, c in shifted_binom_coeffs(d - 1, d):
        out[u] = (-1) ** d * c
    return out


def _check(seq, m):
    if m is not None and len(seq) != m:
        raise BlockMismatch(f"expected {m} components, got {len(seq)}")
    if not len(seq):
        raise BlockMismatch("empty component list")


def g_to_h(g: Sequence, lam=None, tau=None, m: int | None = None) -> list:
    """h = B_m(tau) g for one modified Jordan block.

    ``g`` is either a list of ``LogQSeries`` or a list of numeric samples at the
    points ``tau``.  ``lam`` is accepted for symmetry; B_m does not depend on it.
    """
    _check(g, m)
    m = len(g)
    if isinstance(g[0], LogQSeries):
        out = []
        for i in range(m):
            acc = None
            for j in range(i + 1):
                term = g[j].mul_tau_poly(_bm_poly(i - j))
                acc = term if acc is None else acc + term
            out.append(acc)
        return out
    if tau is None:
        raise ValueError("numeric samples need the sample points tau")
    G = np.stack([np.asarray(x, dtype=complex) for x in g], axis=-1)
    B = binom_matrix_eval(m, tau)
    return list(np.moveaxis(np.einsum("...ij,...j->...i", B, G), -1, 0))


def h_to_g(h: Sequence, lam=None, tau=None, m: int | None = None) -> list:
    """g_j = sum_t binom(tau, t) h_{j-t}; inverse of ``g_to_h``."""
    _check(h, m)
    m = len(h)
    if isinstance(h[0], LogQSeries):
        out = []
        for j in range(m):
            acc = None
            for t in range(j + 1):
                term = h[j - t].mul_tau_poly([0] * t + [1])
                acc = term if acc is None else acc + term
            out.append(acc)
        return out
    if tau is None:
        raise ValueError("numeric samples need the sample points tau")
    H = np.stack([np.asarray(x, dtype=complex) for x in h], axis=-1)
    Binv = binom_matrix_inverse_eval(m, tau)
    return list(np.moveaxis(np.einsum("...ij,...j->...i", Binv, H), -1, 0))
