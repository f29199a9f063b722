"""Exact scalar helpers.

Exact mode works over the Gaussian rationals, extended by an indeterminate
``kappa`` standing for 1/(2 pi i).  kappa is transcendental, so treating it as
a free symbol loses nothing; it only appears once theta hits a log term.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from numbers import Rational

import numpy as np
from sympy import QQ, QQ_I
from sympy.polys.domains import FractionField
from sympy.polys.rings import ring

KAPPA_RING, KAPPA = ring("kappa", QQ_I)
KAPPA_FIELD = KAPPA_RING.to_field()
KAPPA_DOMAIN = FractionField(KAPPA_FIELD)
KAPPA_VALUE = 1 / (2j * math.pi)

_ZERO_G = QQ_I(0, 0)


def _rational(x) -> Fraction:
    if isinstance(x, Rational):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError("non-finite value has no exact form")
        return Fraction(x)
    return Fraction(x)


def is_exact_scalar(x) -> bool:
    if isinstance(x, (int, Fraction, np.integer)):
        return True
    return type(x).__name__ in ("GaussianRational", "PolyElement", "FracElement", "PythonMPQ", "mpq")


def to_gaussian(x):
    """Convert int / Fraction / complex-with-rational-parts to a QQ_I element."""
    if type(x).__name__ == "GaussianRational":
        return x
    if isinstance(x, complex) or isinstance(x, np.complexfloating):
        re, im = _rational(x.real), _rational(x.imag)
    else:
        re, im = _rational(x), Fraction(0)
    return QQ_I(QQ(re.numerator, re.denominator), QQ(im.numerator, im.denominator))


def to_kappa(x):
    """Lift a scalar into the kappa polynomial ring."""
    if type(x).__name__ == "PolyElement":
        return x
    return KAPPA_RING(to_gaussian(x))


def gaussian_to_complex(g) -> complex:
    return complex(float(g.x), float(g.y))


def kappa_to_complex(p, kappa_value: complex = KAPPA_VALUE) -> complex:
    if type(p).__name__ == "FracElement":
        return kappa_to_complex(p.numer, kappa_value) / kappa_to_complex(p.denom, kappa_value)
    if type(p).__name__ == "GaussianRational":
        return gaussian_to_complex(p)
    if not hasattr(p, "terms"):
        return complex(p)
    total = 0j
    for (e,), c in p.terms():
        total += gaussian_to_complex(c) * kappa_value**e
    return total


def exact_unit_root(mu) -> object:
    """exp(2 pi i mu) as a Gaussian integer when mu is a multiple of 1/4."""
    mu = Fraction(mu) % 1
    table = {Fraction(0): (1, 0), Fraction(1, 4): (0, 1), Fraction(1, 2): (-1, 0), Fraction(3, 4): (0, -1)}
    if mu not in table:
        raise ValueError(f"exp(2 pi i * {mu}) is not a Gaussian rational")
    return QQ_I(*table[mu])


def unit_root(mu, power: int = 1) -> complex:
    """exp(2 pi i mu power), reducing the angle exactly when mu is rational."""
    if isinstance(mu, Fraction):
        frac = (mu * power) % 1
        return cmath.exp(2j * math.pi * float(frac))
    return cmath.exp(2j * math.pi * ((float(mu) * power) % 1.0))
