"""Truncated logarithmic q-series.

A ``LogQSeries`` represents

    f(tau) = sum_j binom(tau, j) * sum_{nmin <= n < order} c[j, n] q^(n + mu),
    q = exp(2 pi i tau),

with the tail O(q^(order + mu)) unknown.  Coefficients are stored densely as a
2-D array ``coeffs[j, n - nmin]``; the binomial basis binom(tau, j) is the
canonical one and the power basis tau^j is available as a view.

Two coefficient modes exist.  Float mode stores complex128.  Exact mode stores
elements of QQ(i)[kappa] (numpy object arrays) where kappa = 1/(2 pi i) is kept
symbolic, so theta acting on log terms stays exact.
"""

from __future__ import annotations

import csv
import io
import math
from fractions import Fraction
import numpy as np

from .._exact import KAPPA, KAPPA_RING, KAPPA_VALUE, kappa_to_complex, to_kappa
from ..errors import TruncationUnderflow
from .binomial import (
    binom_derivative_coeffs,
    binom_eval,
    binom_product_coeffs,
    binom_to_power,
    power_to_binom,
)

__all__ = ["LogQSeries", "normalize_mu"]

BINOMIAL = "binomial"
POWER = "power"


def normalize_mu(mu):
    """Reduce mu into [0, 1); returns (mu, carry) with mu_in = mu + carry."""
    if isinstance(mu, (int, Fraction)):
        mu = Fraction(mu)
        carry = math.floor(mu)
        return mu - carry, carry
    mu = float(mu)
    carry = math.floor(mu + 1e-12)
    red = mu - carry
    if abs(red) < 1e-12:
        red = 0.0
    return red, carry


def _is_exact_array(a) -> bool:
    return isinstance(a, np.ndarray) and a.dtype == object


def _zero(exact):
    return KAPPA_RING.zero if exact else 0j


def _zeros(shape, exact):
    if exact:
        out = np.empty(shape, dtype=object)
        out.fill(KAPPA_RING.zero)
        return out
    return np.zeros(shape, dtype=complex)


def _lift(x, exact):
    if exact:
        return to_kappa(x)
    if type(x).__name__ in ("PolyElement", "GaussianRational", "FracElement"):
        return kappa_to_complex(x)
    return complex(x)


def _to_float_array(a):
    if not _is_exact_array(a):
        return np.asarray(a, dtype=complex)
    flat = [kappa_to_complex(x) for x in a.ravel()]
    return np.array(flat, dtype=complex).reshape(a.shape)


def _convolve(a, b, length):
    if length <= 0:
        return a[:0]
    out = np.convolve(a[:length], b[:length])
    return out[:length]


class LogQSeries:
    __slots__ = ("coeffs", "mu", "nmin", "basis")

    def __init__(self, coeffs, mu=0, nmin: int = 0, basis: str = BINOMIAL, exact: bool | None = None):
        mu, carry = normalize_mu(mu)
        arr = coeffs if isinstance(coeffs, np.ndarray) else np.array(coeffs, dtype=object)
        if arr.ndim == 1:
            arr = arr[None, :]
        if exact is None:
            exact = _is_exact_array(arr) and all(
                not isinstance(x, (float, complex, np.floating, np.complexfloating)) for x in arr.ravel()
            )
        if exact:
            out = np.empty(arr.shape, dtype=object)
            for idx, x in np.ndenumerate(arr):
                out[idx] = to_kappa(x)
            arr = out
        else:
            arr = _to_float_array(arr)
        if arr.shape[0] == 0:
            arr = _zeros((1, arr.shape[1]), exact)
        if basis not in (BINOMIAL, POWER):
            raise ValueError(f"unknown basis {basis!r}")
        self.coeffs = arr
        self.mu = mu
        self.nmin = int(nmin) + carry
        self.basis = basis
        self._trim()

    # -- construction -----------------------------------------------------

    @classmethod
    def from_terms(cls, terms: dict, order: int, mu=0, nmin: int | None = None, exact: bool = True,
                   basis: str = BINOMIAL) -> "LogQSeries":
        """Build from {(n, j): coefficient}; coefficients with n >= order are dropped."""
        if nmin is None:
            nmin = min([n for n, _ in terms] + [0])
        deg = max([j for _, j in terms] + [0])
        length = order - nmin
        if length < 0:
            raise TruncationUnderflow("order below nmin")
        arr = _zeros((deg + 1, length), exact)
        for (n, j), c in terms.items():
            if nmin <= n < order:
                arr[j, n - nmin] = _lift(c, exact)
        return cls(arr, mu=mu, nmin=nmin, basis=basis, exact=exact)

    @classmethod
    def constant(cls, c, order: int, exact: bool = True) -> "LogQSeries":
        return cls.from_terms({(0, 0): c}, order, exact=exact)

    @classmethod
    def tau(cls, order: int, exact: bool = True) -> "LogQSeries":
        """The function tau itself (= binom(tau, 1))."""
        return cls.from_terms({(0, 1): 1}, order, exact=exact)

    @classmethod
    def zero(cls, order: int, mu=0, nmin: int = 0, exact: bool = True) -> "LogQSeries":
        return cls(_zeros((1, order - nmin), exact), mu=mu, nmin=nmin, exact=exact)

    @classmethod
    def from_qseries(cls, coeffs, mu=0, nmin: int = 0, exact: bool | None = None) -> "LogQSeries":
        """Ordinary q-series (no log terms) from a coefficient list starting at q^(nmin+mu)."""
        if exact is None:
            exact = all(isinstance(c, (int, Fraction)) for c in coeffs)
        arr = _zeros((1, len(coeffs)), exact)
        for i, c in enumerate(coeffs):
            arr[0, i] = _lift(c, exact)
        return cls(arr, mu=mu, nmin=nmin, exact=exact)

    # -- basic properties -------------------------------------------------

    @property
    def exact(self) -> bool:
        return _is_exact_array(self.coeffs)

    @property
    def order(self) -> int:
        """Exponents n + mu with n >= order are unknown."""
        return self.nmin + self.coeffs.shape[1]

    @property
    def degree(self) -> int:
        return self.coeffs.shape[0] - 1

    @property
    def length(self) -> int:
        return self.coeffs.shape[1]

    def _trim(self):
        c = self.coeffs
        keep = c.shape[0]
        while keep > 1 and all(x == 0 for x in c[keep - 1]):
            keep -= 1
        if keep < c.shape[0]:
            self.coeffs = c[:keep].copy()

    def _like(self, coeffs, mu=None, nmin=None, basis=None) -> "LogQSeries":
        out = LogQSeries.__new__(LogQSeries)
        out.coeffs = coeffs
        out.mu = self.mu if mu is None else mu
        out.nmin = self.nmin if nmin is None else nmin
        out.basis = self.basis if basis is None else basis
        out._trim()
        return out

    def coefficient(self, n: int, j: int = 0):
        """Coefficient of binom(tau, j) q^(n + mu) (or tau^j in the power basis)."""
        if not (self.nmin <= n < self.order):
            if n < self.nmin:
                return _zero(self.exact)
            raise TruncationUnderflow(f"q^{n} is beyond the truncation order {self.order}")
        if j > self.degree:
            return _zero(self.exact)
        return self.coeffs[j, n - self.nmin]

    __getitem__ = lambda self, key: self.coefficient(*key) if isinstance(key, tuple) else self.coefficient(key)

    def qseries(self, j: int = 0) -> np.ndarray:
        """Ordinary q-series multiplying basis element j."""
        if j > self.degree:
            return _zeros(self.length, self.exact)
        return self.coeffs[j].copy()

    def terms(self) -> dict:
        out = {}
        for (j, i), c in np.ndenumerate(self.coeffs):
            if c != 0:
                out[(self.nmin + i, j)] = c
        return out

    def leading_exponent(self, tol: float = 0.0):
        """Smallest n + mu with a nonzero coefficient, or None."""
        for i in range(self.length):
            col = self.coeffs[:, i]
            if self.exact:
                if any(x != 0 for x in col):
                    return self.nmin + i + self.mu
            elif np.max(np.abs(col)) > tol:
                return self.nmin + i + self.mu
        return None

    def to_float(self) -> "LogQSeries":
        if not self.exact:
            return self
        return self._like(_to_float_array(self.coeffs))

    def to_exact(self) -> "LogQSeries":
        if self.exact:
            return self
        return LogQSeries(self.coeffs.astype(object), self.mu, self.nmin, self.basis, exact=True)

    def truncate(self, order: int) -> "LogQSeries":
        if order > self.order:
            raise TruncationUnderflow(f"cannot extend order {self.order} to {order}")
        return self._like(self.coeffs[:, : max(order - self.nmin, 0)].copy())

    def with_nmin(self, nmin: int) -> "LogQSeries":
        """Re-anchor the storage at a lower nmin by zero padding (or trim zero columns)."""
        if nmin <= self.nmin:
            pad = _zeros((self.coeffs.shape[0], self.nmin - nmin), self.exact)
            return self._like(np.concatenate([pad, self.coeffs], axis=1), nmin=nmin)
        drop = nmin - self.nmin
        if any(x != 0 for x in self.coeffs[:, :drop].ravel()):
            raise ValueError("nonzero coefficients below the requested nmin")
        return self._like(self.coeffs[:, drop:].copy(), nmin=nmin)

    # -- bases ------------------------------------------------------------

    def to_power(self) -> "LogQSeries":
        if self.basis == POWER:
            return self
        D = self.coeffs.shape[0]
        out = _zeros(self.coeffs.shape, self.exact)
        for j in range(D):
            for i, c in enumerate(binom_to_power(j)):
                if c:
                    out[i] = out[i] + self.coeffs[j] * _lift(c, self.exact)
        return self._like(out, basis=POWER)

    def to_binomial(self) -> "LogQSeries":
        if self.basis == BINOMIAL:
            return self
        D = self.coeffs.shape[0]
        out = _zeros(self.coeffs.shape, self.exact)
        for i in range(D):
            for j, c in enumerate(power_to_binom(i)):
                if c:
                    out[j] = out[j] + self.coeffs[i] * _lift(c, self.exact)
        return self._like(out, basis=BINOMIAL)

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other):
        """Bring two series to a common coefficient mode, binomial basis."""
        a, b = self.to_binomial(), other.to_binomial()
        if a.exact and not b.exact:
            a = a.to_float()
        elif b.exact and not a.exact:
            b = b.to_float()
        return a, b

    def _check_mu(self, other):
        if abs(float(self.mu) - float(other.mu)) > 1e-12:
            raise ValueError(f"cannot add series with offsets mu={self.mu} and mu={other.mu}")

    def __add__(self, other):
        if not isinstance(other, LogQSeries):
            if other == 0:
                return self
            return self + LogQSeries.constant(other, self.order, exact=self.exact and not isinstance(other, (float, complex)))
        a, b = self._coerce(other)
        a._check_mu(b)
        nmin = min(a.nmin, b.nmin)
        order = min(a.order, b.order)
        if order < nmin:
            raise TruncationUnderflow("sum has no known coefficients")
        D = max(a.coeffs.shape[0], b.coeffs.shape[0])
        out = _zeros((D, order - nmin), a.exact)
        for s in (a, b):
            lo = s.nmin - nmin
            width = max(order - s.nmin, 0)
            out[: s.coeffs.shape[0], lo: lo + width] = out[: s.coeffs.shape[0], lo: lo + width] + s.coeffs[:, :width]
        return a._like(out, nmin=nmin)

    __radd__ = __add__

    def __neg__(self):
        return self._like(-self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "LogQSeries":
        if self.exact and not isinstance(c, (float, complex, np.floating, np.complexfloating)):
            return self._like(self.coeffs * to_kappa(c))
        if self.exact:
            return self.to_float().scale(c)
        return self._like(self.coeffs * _lift(c, False))

    def __mul__(self, other):
        if not isinstance(other, LogQSeries):
            return self.scale(other)
        a, b = self._coerce(other)
        mu, carry = normalize_mu(a.mu + b.mu)
        nmin = a.nmin + b.nmin + carry
        length = min(a.length, b.length)
        order = nmin + length
        if order < 0 and length <= 0:
            raise TruncationUnderflow(f"product truncation order {order} < 0")
        Da, Db = a.coeffs.shape[0], b.coeffs.shape[0]
        out = _zeros((Da + Db - 1, length), a.exact)
        for ja in range(Da):
            ra = a.coeffs[ja]
            if all(x == 0 for x in ra):
                continue
            for jb in range(Db):
                rb = b.coeffs[jb]
                if all(x == 0 for x in rb):
                    continue
                conv = _convolve(ra, rb, length)
                for k, c in binom_product_coeffs(ja, jb):
                    out[k] = out[k] + conv * (to_kappa(c) if a.exact else c)
        return a._like(out, mu=mu, nmin=nmin)

    __rmul__ = __mul__

    def __truediv__(self, c):
        if isinstance(c, LogQSeries):
            raise TypeError("series division is not supported")
        if self.exact and isinstance(c, (int, Fraction)):
            return self.scale(Fraction(1) / Fraction(c))
        return self.scale(1 / c)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not supported")
        out = LogQSeries.constant(1, max(self.length, 1), exact=self.exact)
        base = self.to_binomial()
        for _ in range(n):
            out = out * base
        return out

    def shift_q(self, s: int) -> "LogQSeries":
        """Multiply by q^s (integer s)."""
        return self._like(self.coeffs.copy(), nmin=self.nmin + s)

    def mul_tau_poly(self, poly) -> "LogQSeries":
        """Multiply by a polynomial sum_u poly[u] binom(tau, u) (no truncation loss)."""
        a = self.to_binomial()
        Da = a.coeffs.shape[0]
        Dp = len(poly)
        out = _zeros((Da + Dp - 1, a.length), a.exact)
        for ja in range(Da):
            for u, pu in enumerate(poly):
                if pu == 0:
                    continue
                for k, c in binom_product_coeffs(ja, u):
                    factor = to_kappa(pu * c) if a.exact else complex(pu * c)
                    out[k] = out[k] + a.coeffs[ja] * factor
        return a._like(out)

    # -- calculus ---------------------------------------------------------

    def theta(self, kappa=None) -> "LogQSeries":
        """q d/dq.  On tau^j q^s this gives (j kappa) tau^(j-1) q^s + s tau^j q^s, kappa = 1/(2 pi i)."""
        a = self.to_binomial()
        exact = a.exact
        if kappa is None:
            kappa = KAPPA if exact else KAPPA_VALUE
        D = a.coeffs.shape[0]
        n = np.arange(a.nmin, a.order)
        if exact:
            expo = np.empty(a.length, dtype=object)
            for i, v in enumerate(n):
                expo[i] = to_kappa(Fraction(int(v)) + Fraction(a.mu))
        else:
            expo = n + float(a.mu)
        out = _zeros(a.coeffs.shape, exact)
        for j in range(D):
            out[j] = out[j] + a.coeffs[j] * expo
            for i, c in binom_derivative_coeffs(j):
                factor = to_kappa(c) * kappa if exact else float(c) * kappa
                out[i] = out[i] + a.coeffs[j] * factor
        return a._like(out)

    # -- evaluation -------------------------------------------------------

    def evaluate(self, tau, with_error: bool = False):
        """Truncated sum at tau (scalar or array).

        With ``with_error`` also returns an estimate of the first omitted term,
        using the magnitude of the last retained coefficients as a proxy.
        """
        a = self.to_binomial().to_float()
        tau = np.asarray(tau, dtype=complex)
        if np.any(tau.imag <= 0):
            raise ValueError("tau must lie in the upper half-plane")
        n = np.arange(a.nmin, a.order) + float(a.mu)
        qpow = np.exp(2j * np.pi * np.multiply.outer(tau, n))
        total = np.zeros(tau.shape, dtype=complex)
        err = np.zeros(tau.shape, dtype=float)
        for j in range(a.coeffs.shape[0]):
            bj = binom_eval(tau, j)
            total = total + bj * (qpow @ a.coeffs[j])
            if with_error and a.length:
                tailc = np.max(np.abs(a.coeffs[j, -2:]))
                err = err + np.abs(bj) * tailc * np.exp(-2 * np.pi * (a.order + float(a.mu)) * tau.imag)
        if total.ndim == 0:
            total = complex(total)
            err = float(err)
        return (total, err) if with_error else total

    __call__ = evaluate

    # -- comparison -------------------------------------------------------

    def is_zero(self, tol: float = 0.0) -> bool:
        if self.exact:
            return all(x == 0 for x in self.coeffs.ravel())
        return bool(np.all(np.abs(self.coeffs) <= tol))

    def max_abs(self) -> float:
        return float(np.max(np.abs(_to_float_array(self.coeffs)))) if self.coeffs.size else 0.0

    def equals(self, other: "LogQSeries", tol: float = 0.0) -> bool:
        """Coefficientwise comparison on the common truncation range."""
        try:
            diff = self - other
        except ValueError:
            return False
        return diff.is_zero(tol)

    def __eq__(self, other):
        if not isinstance(other, LogQSeries):
            return NotImplemented
        return self.equals(other)

    __hash__ = None

    def __repr__(self):
        shown = []
        for (n, j), c in sorted(self.terms().items())[:6]:
            tj = "" if j == 0 else (f" C(tau,{j})" if self.basis == BINOMIAL else f" tau^{j}")
            shown.append(f"({c}){tj} q^{n}")
        mu = f" mu={self.mu}" if self.mu else ""
        return f"LogQSeries({' + '.join(shown) or '0'} + O(q^{self.order}){mu})"

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        from ..io import encode_complex

        terms = []
        for (n, j), c in sorted(self.terms().items()):
            val = kappa_to_complex(c) if self.exact else complex(c)
            terms.append([int(n), int(j), encode_complex(val)])
        mu = self.mu
        return {
            "mu": str(mu) if isinstance(mu, Fraction) else repr(float(mu)),
            "nmin": int(self.nmin),
            "terms": terms,
            "basis": self.basis,
            "order": int(self.order),
        }

    @classmethod
    def from_json(cls, data: dict) -> "LogQSeries":
        from ..io import decode_complex, decode_mu

        mu = decode_mu(data.get("mu", 0))
        terms = {(int(n), int(j)): decode_complex(c) for n, j, c in data["terms"]}
        exact = all(v.imag == 0 and float(v.real).is_integer() for v in terms.values())
        if exact:
            terms = {k: int(v.real) for k, v in terms.items()}
        nmin = int(data.get("nmin", min([n for n, _ in terms] + [0])))
        return cls.from_terms(terms, int(data["order"]), mu=mu, nmin=nmin, exact=exact,
                              basis=data.get("basis", BINOMIAL))

    def to_csv(self) -> str:
        """Rows: exponent n + mu, then one complex column pair per basis degree."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        header = ["n", "exponent"]
        for j in range(self.coeffs.shape[0]):
            header += [f"re_{j}", f"im_{j}"]
        w.writerow(header)
        arr = _to_float_array(self.coeffs)
        for i in range(self.length):
            row = [self.nmin + i, repr(float(self.nmin + i + float(self.mu)))]
            for j in range(arr.shape[0]):
                row += [repr(float(arr[j, i].real)), repr(float(arr[j, i].imag))]
            w.writerow(row)
        return buf.getvalue()
