"""JSON encodings shared by the library and the command line.

Complex numbers are written as ``[re, im]`` pairs of decimal strings carrying
every digit of the working precision (``repr`` for doubles, ``mpmath`` strings
otherwise), so other languages can reparse them losslessly.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import mpmath
import numpy as np

from .rep import BlockSpec, Representation

__all__ = [
    "encode_complex",
    "decode_complex",
    "encode_matrix",
    "decode_matrix",
    "decode_mu",
    "encode_mu",
    "rep_to_json",
    "rep_from_json",
    "load_rep",
    "save_rep",
    "dumps",
]


def _dec(x) -> str:
    if isinstance(x, mpmath.mpf):
        return mpmath.nstr(x, mpmath.mp.dps, min_fixed=-mpmath.inf, max_fixed=mpmath.inf) if x else "0.0"
    return repr(float(x))


def encode_complex(z) -> list[str]:
    if isinstance(z, mpmath.mpc):
        return [_dec(z.real), _dec(z.imag)]
    if type(z).__name__ in ("PolyElement", "GaussianRational", "FracElement"):
        from ._exact import kappa_to_complex

        z = kappa_to_complex(z)
    z = complex(z)
    return [_dec(z.real), _dec(z.imag)]


def decode_complex(v) -> complex:
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise ValueError(f"complex value must be [re, im], got {v!r}")
        return complex(float(v[0]), float(v[1]))
    return complex(float(v))


def encode_matrix(M) -> list:
    M = np.asarray(M)
    return [[encode_complex(x) for x in row] for row in M]


def decode_matrix(rows) -> np.ndarray:
    return np.array([[decode_complex(x) for x in row] for row in rows], dtype=complex)


def encode_mu(mu) -> str:
    return str(mu) if isinstance(mu, Fraction) else repr(float(mu))


def decode_mu(v):
    """Rational strings ("1/2", "0", "0.25") become Fractions; other reals stay floats."""
    if isinstance(v, (int, Fraction)):
        return Fraction(v)
    if isinstance(v, str):
        frac = Fraction(v)
        if frac.denominator <= 10**6:
            return frac
        return float(v)
    return float(v)


def _exact_entry(z: complex):
    # integer and dyadic entries are kept exact
    re, im = Fraction(z.real), Fraction(z.imag)
    if re.denominator <= 2**10 and im.denominator <= 2**10:
        return re if im == 0 else complex(z)
    return complex(z)


def rep_to_json(rho: Representation) -> dict:
    return {
        "dim": rho.p,
        "rho_S": encode_matrix(rho.rho_S),
        "blocks": [[m, encode_mu(mu)] for m, mu in rho.spec.blocks],
    }


def rep_from_json(data: dict) -> Representation:
    S = decode_matrix(data["rho_S"])
    if S.shape != (int(data["dim"]), int(data["dim"])):
        raise ValueError(f"rho_S has shape {S.shape}, expected dim {data['dim']}")
    spec = BlockSpec(tuple((int(m), decode_mu(mu)) for m, mu in data["blocks"]))
    rows = [[_exact_entry(z) for z in row] for row in S]
    return Representation(rows, spec)


def load_rep(path) -> Representation:
    return rep_from_json(json.loads(Path(path).read_text()))


def save_rep(rho: Representation, path) -> None:
    Path(path).write_text(dumps(rep_to_json(rho)))


def dumps(obj) -> str:
    """Canonical JSON text: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"
