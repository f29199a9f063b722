"""Empirical checks of the growth estimates behind convergence and coefficient bounds.

Every constant here (K3, K4, K6, the Lame constant, alpha) is fitted from data
and reported together with the sample it came from.  None is asserted as a
universal truth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import rep as _rep
from .errors import InsufficientData
from .logq.series import LogQSeries
from .rep import Representation
from .sl2z import GammaElement, T_power, _rep_with_bottom_row, eichler_decompose, eichler_length

__all__ = [
    "check_prop36",
    "check_word_inequality",
    "word_inequality_case",
    "sweep_group",
    "SweepReport",
    "check_cd_bound",
    "fit_K6",
    "check_im_bound",
    "NormGrowthFit",
    "fit_norm_growth",
    "GrowthFit",
    "fit_fourier_growth",
    "fit_lame_constant",
    "random_elements",
]

SQRT3_2 = math.sqrt(3) / 2


# -- word inequalities ------------------------------------------------------


def word_inequality_case(g: GammaElement) -> tuple[str, int, int]:
    """(case, lhs, rhs) of the word-length inequality for g; case is '-', '0' or '+'.

    The inequalities are unchanged by +-T^m on the left (c and d only change
    sign), so they are applied to the pure word of the canonical form.
    Elements with c = 0 have the empty word and report ('empty', 1, 1).
    """
    w = eichler_decompose(g)
    if not w.exponents:
        return "empty", 1, 1
    c, d = abs(g.c), abs(g.d)
    l0, rest = w.exponents[0], w.exponents[1:]
    prod_rest = math.prod(abs(l) for l in rest)
    if l0 < 0:
        return "-", abs(l0) * prod_rest, d
    if l0 == 0:
        return "0", prod_rest, abs(g.d - g.c)
    return "+", abs(l0) * prod_rest, c + d


def check_word_inequality(g: GammaElement) -> bool:
    _, lhs, rhs = word_inequality_case(g)
    return lhs <= rhs


# name fixed by the public interface
check_prop36 = check_word_inequality


@dataclass
class SweepReport:
    bound: int
    total: int = 0
    roundtrip_ok: int = 0
    alternation_ok: int = 0
    inequality_ok: int = 0
    cases: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.total == self.roundtrip_ok == self.alternation_ok == self.inequality_ok

    def as_dict(self) -> dict:
        return {
            "bound": self.bound,
            "total": self.total,
            "roundtrip_ok": self.roundtrip_ok,
            "alternation_ok": self.alternation_ok,
            "inequality_ok": self.inequality_ok,
            "cases": dict(sorted(self.cases.items())),
            "failures": [list(f) for f in self.failures[:20]],
            "passed": self.passed,
        }


def _elements_in_box(bound: int):
    rng = range(-bound, bound + 1)
    for a in rng:
        for b in rng:
            for c in rng:
                if a == 0:
                    if b * c == -1:
                        for d in rng:
                            yield GammaElement(a, b, c, d)
                    continue
                num = 1 + b * c
                if num % a == 0 and abs(num // a) <= bound:
                    yield GammaElement(a, b, c, num // a)


def sweep_group(bound: int = 30) -> SweepReport:
    """Decompose every element with entries in [-bound, bound] and test the round-trip and the inequalities."""
    rep = SweepReport(bound)
    for g in _elements_in_box(bound):
        rep.total += 1
        w = eichler_decompose(g)
        ok_rt = w.reconstruct() == g
        ok_alt = w.is_sign_alternating()
        case, lhs, rhs = word_inequality_case(g)
        ok_ineq = lhs <= rhs
        rep.roundtrip_ok += ok_rt
        rep.alternation_ok += ok_alt
        rep.inequality_ok += ok_ineq
        rep.cases[case] = rep.cases.get(case, 0) + 1
        if not (ok_rt and ok_alt and ok_ineq):
            rep.failures.append(g.entries)
    return rep


# -- |c tau + d| bound ---------------------------------------------------


@lru_cache(maxsize=4)
def fit_K6(box: int = 20, nx: int = 41, ny: int = 25, ymax: float = 3.0) -> float:
    """sup of (c^2 + d^2) / |c tau + d|^2 over a dense grid of the strip and coprime (c, d)."""
    xs = np.linspace(-0.5, 0.5, nx)
    ys = np.linspace(SQRT3_2, ymax, ny)
    tau = (xs[:, None] + 1j * ys[None, :]).ravel()
    best = 0.0
    for c in range(1, box + 1):
        for d in range(-box, box + 1):
            if math.gcd(c, d) != 1:
                continue
            ratio = (c * c + d * d) / np.abs(c * tau + d) ** 2
            best = max(best, float(ratio.max()))
    return best


def _in_strip(tau: complex) -> bool:
    return abs(tau.real) <= 0.5 + 1e-12 and tau.imag >= SQRT3_2 - 1e-12


def check_cd_bound(tau: complex, c: int, d: int, slack: float = 0.05, K6: float | None = None) -> bool:
    """c^2 + d^2 <= (1 + slack) K6 |c tau + d|^2 with K6 fitted once."""
    if not _in_strip(complex(tau)):
        raise ValueError("tau must lie in the strip |Re| <= 1/2, Im >= sqrt(3)/2")
    if c == 0:
        raise ValueError("the bound is stated for c != 0")
    K6 = fit_K6() if K6 is None else K6
    return c * c + d * d <= (1 + slack) * K6 * abs(c * tau + d) ** 2


def check_im_bound(g: GammaElement, tau: complex) -> bool:
    """Im(g tau) <= 2/sqrt(3) for c != 0 and tau in the strip."""
    if g.c == 0:
        raise ValueError("the bound is stated for c != 0")
    tau = complex(tau)
    return (tau.imag / abs(g.c * tau + g.d) ** 2) <= 2 / math.sqrt(3) + 1e-12


# -- norm growth -------------------------------------------------------------


def random_elements(n: int, seed: int = 0, max_entry: int = 400, max_shift: int = 5) -> list[GammaElement]:
    """Random elements T^m M with coprime bottom rows spread log-uniformly in size."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        size = int(np.exp(rng.uniform(0, math.log(max_entry))))
        c = int(rng.integers(1, size + 1))
        d = int(rng.integers(-size, size + 1))
        if math.gcd(c, d) != 1:
            continue
        g = _rep_with_bottom_row(c, d)
        if rng.random() < 0.5:
            g = -g
        out.append(T_power(int(rng.integers(-max_shift, max_shift + 1))) @ g)
    return out


@dataclass
class NormGrowthFit:
    """||rho(g)|| <= K3 (c^2 + d^2)^K4 fitted on a random sample."""

    K3: float
    K4: float
    n: int
    inverse_ratio: float
    slack: float
    inverse_ok: bool

    def __iter__(self):
        return iter((self.K3, self.K4))

    def bound(self, c: int, d: int) -> float:
        return self.K3 * (c * c + d * d) ** self.K4


def fit_norm_growth(rho: Representation, sample_size: int = 300, seed: int = 0, slack: float = 10.0) -> NormGrowthFit:
    """Log-scale least squares for K4, then the smallest K3 covering the sample.

    The inverse elements are checked against the same bound (same c, d) up to
    the multiplicative ``slack``; the worst observed ratio is recorded.
    """
    gs = random_elements(sample_size, seed)
    x = np.array([math.log(g.c**2 + g.d**2) for g in gs])
    y = np.array([math.log(max(_rep.matrix_norm(_rep.evaluate(rho, g)), 1e-300)) for g in gs])
    A = np.stack([np.ones_like(x), x], axis=1)
    (_, k4), *_ = np.linalg.lstsq(A, y, rcond=None)
    k4 = float(k4)
    if abs(k4) < 1e-12:
        k4 = 0.0
    K3 = float(np.exp(np.max(y - k4 * x)))
    yi = np.array([math.log(max(_rep.matrix_norm(_rep.evaluate(rho, g.inverse())), 1e-300)) for g in gs])
    ratio = float(np.exp(np.max(yi - (math.log(K3) + k4 * x))))
    return NormGrowthFit(K3, k4, len(gs), ratio, slack, ratio <= slack)


# -- Fourier coefficient growth ------------------------------------------


@dataclass
class GrowthFit:
    exponent: float
    intercept: float
    n_range: tuple[int, int]
    residual: float
    n_points: int
    weight: int
    cuspidal: bool
    alpha: float
    bound: float
    within_bound: bool

    def as_dict(self) -> dict:
        return {
            "exponent": self.exponent,
            "intercept": self.intercept,
            "n_range": list(self.n_range),
            "residual": self.residual,
            "n_points": self.n_points,
            "weight": self.weight,
            "cuspidal": self.cuspidal,
            "alpha": self.alpha,
            "bound": self.bound,
            "within_bound": self.within_bound,
        }


def fit_fourier_growth(f: LogQSeries, k: int, cuspidal: bool = False, N: int | None = None,
                       alpha: float = 0.0, n_start: int = 1, min_points: int = 50) -> GrowthFit:
    """Slope of log|a(n)| against log n over the nonzero coefficients with n_start <= n < N.

    a(n) is the largest coefficient magnitude across tau-degrees.  The slope is
    compared with k + alpha (or k/2 + alpha/2 when ``cuspidal``).
    """
    g = f.to_binomial().to_float()
    hi = g.order if N is None else min(N, g.order)
    ns, ys = [], []
    for n in range(max(n_start, g.nmin, 1), hi):
        a = float(np.max(np.abs(g.coeffs[:, n - g.nmin])))
        if a > 0:
            ns.append(n)
            ys.append(math.log(a))
    if len(ns) < min_points:
        raise InsufficientData(f"only {len(ns)} nonzero coefficients; need {min_points}")
    x = np.log(np.array(ns, dtype=float))
    y = np.array(ys)
    A = np.stack([np.ones_like(x), x], axis=1)
    (b0, b1), *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = float(np.sqrt(np.mean((A @ np.array([b0, b1]) - y) ** 2)))
    bound = k / 2 + alpha / 2 if cuspidal else k + alpha
    return GrowthFit(float(b1), float(b0), (ns[0], ns[-1]), resid, len(ns), int(k), bool(cuspidal),
                     float(alpha), float(bound), bool(b1 <= bound))


# -- Lame ---------------------------------------------------------------


def fit_lame_constant(bound: int = 200) -> float:
    """max L(g) / (log|c| + 1) over coset representatives with max(|c|, |d|) <= bound."""
    best = 0.0
    for c in range(1, bound + 1):
        for d in range(-bound, bound + 1):
            if math.gcd(c, d) != 1:
                continue
            L = eichler_length(eichler_decompose(_rep_with_bottom_row(c, d)))
            best = max(best, L / (math.log(c) + 1))
    return best
