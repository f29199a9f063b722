"""Truncated matrix-valued Poincare series for a representation of SL2(Z).

For a representation rho with rho(T) in modified Jordan form (blocks
(m_r, mu_r)), shifts nu_r and column weights k_n, the series is

    P(tau) = 1/2 sum_{M in <T>\\Gamma} rho(M)^-1 Lambda(e(nu_r + mu_r) M tau)
                                   B_rho(M tau)^-1 J_k(M, tau)^-1,

summed here over coset representatives with max(|c|, |d|) <= N.

When rho(S^2) = eps I the terms for M and -M agree up to the column factor
eps (-1)^k_n, so the sum folds onto +-<T>\\Gamma without the 1/2: columns
with eps = (-1)^k_n keep weight 1 and the others are exactly 0.
The folded sum is only valid column by column under that mask.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import rep as _rep
from .errors import IllConditionedFit, NotScalarS2, RankDeficient
from .logq.binomial import binom_eval, binom_matrix_eval, binom_matrix_inverse_eval
from .logq.classical import eisenstein
from .logq.ops import CUSPIDAL, HOLOMORPHIC, classify_at_infinity
from .logq.series import LogQSeries
from .rep import Representation
from .sl2z import GammaElement, coset_reps, eichler_decompose
from .summation import chunked_sum

__all__ = [
    "PoincareParams",
    "MatrixSample",
    "ExtractionResult",
    "HolomorphicForm",
    "ConvergenceWarning",
    "lambda_rho",
    "b_rho",
    "b_rho_inverse",
    "automorphy_J",
    "poincare_eval",
    "poincare_values",
    "modularity_residual",
    "leading_term",
    "extract_coefficients",
    "build_holomorphic_form",
    "weight_threshold",
]

CHUNK = 256
DEFAULT_HEIGHTS = (1.0, 1.2, 1.5)


class ConvergenceWarning(UserWarning):
    """Weights below the empirical convergence threshold."""


@dataclass(frozen=True)
class PoincareParams:
    """Shifts nu (one per block), column weights k (one per row), truncation N.

    ``precision`` is in decimal digits; up to 16 uses compensated double
    precision, above that a (slow) mpmath path.  ``folded`` selects the sum over
    +-<T>\\Gamma; ``None`` means "fold whenever rho(S^2) is scalar".
    """

    nu: tuple[int, ...]
    k: tuple[int, ...]
    N: int = 100
    precision: int = 16
    folded: bool | None = None
    threads: int = 1

    def __post_init__(self):
        object.__setattr__(self, "nu", tuple(int(v) for v in self.nu))
        object.__setattr__(self, "k", tuple(int(v) for v in self.k))
        if self.N < 1:
            raise ValueError("N must be >= 1")

    def check(self, rho: Representation) -> None:
        if len(self.nu) != rho.spec.t:
            raise ValueError(f"need {rho.spec.t} shifts nu, got {len(self.nu)}")
        if len(self.k) != rho.p:
            raise ValueError(f"need {rho.p} weights k, got {len(self.k)}")

    def with_N(self, N: int) -> "PoincareParams":
        return PoincareParams(self.nu, self.k, N, self.precision, self.folded, self.threads)


@dataclass
class MatrixSample:
    tau: complex
    value: np.ndarray
    tail_bound: float
    n_terms: int = 0
    folded: bool = False
    column_mask: tuple[int, ...] = ()


# -- building blocks ------------------------------------------------------


def lambda_rho(rho: Representation, z: Sequence) -> np.ndarray:
    """diag(z_1 I_{m_1}, ..., z_t I_{m_t})."""
    if len(z) != rho.spec.t:
        raise ValueError(f"need {rho.spec.t} values, got {len(z)}")
    return np.diag(np.repeat(np.asarray(z, dtype=complex), rho.spec.sizes))


def _block_diag_eval(rho, x, fn):
    x = np.asarray(x, dtype=complex)
    out = np.zeros(x.shape + (rho.p, rho.p), dtype=complex)
    offs = rho.spec.offsets
    for r, m in enumerate(rho.spec.sizes):
        out[..., offs[r]:offs[r + 1], offs[r]:offs[r + 1]] = fn(m, x)
    return out


def b_rho(rho: Representation, x) -> np.ndarray:
    return _block_diag_eval(rho, x, binom_matrix_eval)


def b_rho_inverse(rho: Representation, x) -> np.ndarray:
    return _block_diag_eval(rho, x, binom_matrix_inverse_eval)


def automorphy_J(k: Sequence[int], g: GammaElement, tau) -> np.ndarray:
    """diag(j(g, tau)^k_1, ..., j(g, tau)^k_p)."""
    j = g.c * np.asarray(tau, dtype=complex) + g.d
    return np.eye(len(k)) * np.stack([j**kn for kn in k], axis=-1)[..., None, :]


# -- convergence heuristic --------------------------------------------------


@lru_cache(maxsize=64)
def weight_threshold(rho: Representation) -> float:
    """3 + 2 K4 with K4 the fitted norm-growth exponent (an engineering heuristic)."""
    from .estimates import fit_norm_growth

    _, k4 = fit_norm_growth(rho, sample_size=200, seed=0)
    return 3.0 + 2.0 * max(k4, 0.0)


def _warn_weights(rho, params):
    thr = weight_threshold(rho)
    if min(params.k) < thr:
        warnings.warn(
            f"min weight {min(params.k)} is below the heuristic convergence threshold {thr:.2f}",
            ConvergenceWarning,
            stacklevel=3,
        )


# -- summation ----------------------------------------------------------------


def _fold_mask(rho: Representation, params: PoincareParams):
    """(folded, column factor) for the requested summation mode."""
    eps = _rep.scalar_S2(rho)
    folded = params.folded
    if folded is None:
        folded = eps is not None
    if folded and eps is None:
        raise NotScalarS2("folded summation needs rho(S^2) = +-I")
    if not folded:
        return False, np.full(rho.p, 0.5)
    return True, np.array([(1.0 + eps * (-1) ** (kn % 2)) / 2 for kn in params.k])


@lru_cache(maxsize=16)
def _rep_table(rho: Representation, N: int, mod_minus: bool):
    reps = coset_reps(N, mod_minus=mod_minus)
    return _table_for(rho, tuple(reps))


def _table_for(rho, reps):
    R = len(reps)
    Rinv = np.empty((R, rho.p, rho.p), dtype=complex)
    for i, g in enumerate(reps):
        Rinv[i] = _rep.evaluate(rho, g.inverse())
    abcd = np.array([g.entries for g in reps], dtype=float)
    shell = np.array([max(abs(g.c), abs(g.d)) for g in reps], dtype=int)
    return Rinv, abcd, shell


def _chunk_terms(rho, params, exps, Rinv, abcd, taus, colfac):
    a, b, c, d = (abcd[:, i][:, None] for i in range(4))
    j = c * taus[None, :] + d
    Mt = (a * taus[None, :] + b) / j
    X = np.zeros(Mt.shape + (rho.p, rho.p), dtype=complex)
    offs = rho.spec.offsets
    for r, m in enumerate(rho.spec.sizes):
        z = np.exp(2j * np.pi * exps[r] * Mt)
        X[..., offs[r]:offs[r + 1], offs[r]:offs[r + 1]] = z[..., None, None] * binom_matrix_inverse_eval(m, Mt)
    jk = np.stack([j ** (-kn) for kn in params.k], axis=-1) * colfac
    X = X * jk[..., None, :]
    return np.einsum("rij,rsjk->rsik", Rinv, X)


def _identity_term(rho, exps, taus, colfac_id):
    X = np.zeros(taus.shape + (rho.p, rho.p), dtype=complex)
    offs = rho.spec.offsets
    for r, m in enumerate(rho.spec.sizes):
        z = np.exp(2j * np.pi * exps[r] * taus)
        X[..., offs[r]:offs[r + 1], offs[r]:offs[r + 1]] = z[..., None, None] * binom_matrix_inverse_eval(m, taus)
    return X * colfac_id[None, None, :]


def _tail_estimate(shell_mass: np.ndarray, N: int) -> np.ndarray:
    """Power-law extrapolation of per-shell magnitudes beyond N (heuristic)."""
    lo = max(N // 2, 2)
    ns = np.arange(lo, N + 1)
    if len(ns) < 3:
        return np.full(shell_mass.shape[1], np.inf)
    ys = shell_mass[lo:N + 1]
    out = np.empty(shell_mass.shape[1])
    for s in range(shell_mass.shape[1]):
        y = ys[:, s]
        if np.all(y == 0):
            out[s] = 0.0
            continue
        if np.any(y <= 0):
            out[s] = np.inf
            continue
        beta = -np.polyfit(np.log(ns), np.log(y), 1)[0]
        out[s] = y[-1] * N / (beta - 1.0) if beta > 1.05 else np.inf
    return out


def poincare_values(rho: Representation, params: PoincareParams, taus, reps: Sequence[GammaElement] | None = None,
                    warn: bool = True):
    """(values, tail_bounds, n_terms, folded, mask) at an array of tau (float64 path).

    ``reps`` replaces the default coset representatives (they must cover the
    same cosets); useful for checking representative independence.
    """
    params.check(rho)
    if warn:
        _warn_weights(rho, params)
    taus = np.atleast_1d(np.asarray(taus, dtype=complex))
    if np.any(taus.imag <= 0):
        raise ValueError("tau must lie in the upper half-plane")
    folded, colfac = _fold_mask(rho, params)
    exps = [nu + float(mu) for nu, mu in zip(params.nu, rho.spec.mus)]

    if reps is None:
        Rinv, abcd, shell = _rep_table(rho, params.N, folded)
    else:
        Rinv, abcd, shell = _table_for(rho, tuple(reps))
    if folded:
        # the identity coset is split off
        keep = ~((abcd[:, 2] == 0))
        Rinv, abcd, shell = Rinv[keep], abcd[keep], shell[keep]
        ident = _identity_term(rho, exps, taus, colfac)
    else:
        ident = None

    R = len(abcd)
    n_chunks = max(1, math.ceil(R / CHUNK))
    shell_mass = np.zeros((params.N + 1, len(taus)))

    def make(i):
        sl = slice(i * CHUNK, (i + 1) * CHUNK)
        return _chunk_terms(rho, params, exps, Rinv[sl], abcd[sl], taus, colfac)

    def stats(i, chunk):
        sl = slice(i * CHUNK, (i + 1) * CHUNK)
        mag = np.max(np.abs(chunk), axis=(2, 3))
        np.add.at(shell_mass, np.minimum(shell[sl], params.N), mag)

    if R:
        total = chunked_sum(make, n_chunks, (len(taus), rho.p, rho.p), threads=params.threads, on_chunk=stats)
    else:
        total = np.zeros((len(taus), rho.p, rho.p), dtype=complex)
    if ident is not None:
        total = ident + total
    tails = _tail_estimate(shell_mass, params.N)
    mask = tuple(int(v != 0) for v in colfac)
    return total, tails, R + (1 if folded else 0), folded, mask


def _poincare_mp(rho, params, tau: complex):
    """Scalar mpmath evaluation at params.precision digits (slow reference path)."""
    import mpmath

    folded, colfac = _fold_mask(rho, params)
    reps = coset_reps(params.N, mod_minus=folded)
    with mpmath.workdps(params.precision + 5):
        t = mpmath.mpc(tau.real, tau.imag)
        p = rho.p
        total = mpmath.zeros(p, p)
        offs = rho.spec.offsets
        exps = [nu + (mpmath.mpf(mu.numerator) / mu.denominator if isinstance(mu, Fraction) else mpmath.mpf(mu))
                for nu, mu in zip(params.nu, rho.spec.mus)]
        for g in reps:
            fac = [mpmath.mpf(f) for f in colfac]
            if rho.exact:
                E = _rep.evaluate(rho, g.inverse(), exact=True)
                Rinv = mpmath.matrix([[mpmath.mpf(x.x.numerator) / x.x.denominator + mpmath.mpc(0, 1) *
                                       mpmath.mpf(x.y.numerator) / x.y.denominator for x in row] for row in E])
            else:
                Rinv = mpmath.matrix(_rep.evaluate(rho, g.inverse()).tolist())
            j = g.c * t + g.d
            Mt = (g.a * t + g.b) / j
            X = mpmath.zeros(p, p)
            for r, m in enumerate(rho.spec.sizes):
                z = mpmath.exp(2j * mpmath.pi * exps[r] * Mt)
                for i in range(m):
                    for jj in range(i + 1):
                        bn = mpmath.mpf(1)
                        for s in range(i - jj):
                            bn *= (Mt - s)
                        bn /= mpmath.factorial(i - jj)
                        X[offs[r] + i, offs[r] + jj] = z * bn
            for n in range(p):
                w = j ** (-params.k[n]) * fac[n]
                for i in range(p):
                    X[i, n] *= w
            total += Rinv * X
        out = np.array([[complex(total[i, j]) for j in range(p)] for i in range(p)])
    return out


def poincare_eval(rho: Representation, params: PoincareParams, tau: complex,
                  reps: Sequence[GammaElement] | None = None) -> MatrixSample:
    """Partial sum of the Poincare series at one point."""
    tau = complex(tau)
    vals, tails, n, folded, mask = poincare_values(rho, params, [tau], reps=reps)
    value = vals[0]
    if params.precision > 16 and reps is None:
        value = _poincare_mp(rho, params, tau)
    return MatrixSample(tau=tau, value=value, tail_bound=float(tails[0]), n_terms=n, folded=folded,
                        column_mask=mask)


def modularity_residual(rho: Representation, params: PoincareParams, g: GammaElement, tau: complex) -> float:
    """max |rho(g) P(tau) - P(g tau) J_k(g, tau)^-1| with the same truncation on both sides."""
    tau = complex(tau)
    gt = (g.a * tau + g.b) / (g.c * tau + g.d)
    vals, *_ = poincare_values(rho, params, [tau, gt])
    lhs = _rep.evaluate(rho, g) @ vals[0]
    j = g.c * tau + g.d
    rhs = vals[1] * np.array([j ** (-kn) for kn in params.k])[None, :]
    return float(np.max(np.abs(lhs - rhs)))


# -- q-expansions ---------------------------------------------------------


def leading_term(rho: Representation, params: PoincareParams, m: int, n: int, order: int | None = None) -> LogQSeries:
    """Predicted leading term of entry (m, n) (0-based): binom(tau, m - n) q^(nu_r + mu_r)
    when n lies in the block of row m at or before m, else 0."""
    r = rho.spec.block_of_row(m)
    lo = rho.spec.offsets[r]
    nu, mu = params.nu[r], rho.spec.mus[r]
    order = max(nu + 1, 1) if order is None else order
    if lo <= n <= m:
        return LogQSeries.from_terms({(nu, m - n): 1}, order, mu=mu, nmin=min(nu, 0), exact=isinstance(mu, Fraction))
    return LogQSeries.zero(order, mu=mu, nmin=min(nu, 0), exact=isinstance(mu, Fraction))


@dataclass
class ExtractionResult:
    """Fitted q-expansions of every entry of P, with fit diagnostics.

    ``errors[m][n]`` holds the empirical error estimate of each coefficient
    (same layout as ``series``).
    """

    series: list[list[LogQSeries]]
    errors: list[list[LogQSeries]]
    residual: float
    condition: float
    noise_floor: float
    heights: tuple[float, ...]
    Nq: int
    guard: int

    def __getitem__(self, idx) -> LogQSeries:
        m, n = idx
        return self.series[m][n]

    def column(self, n: int) -> list[LogQSeries]:
        return [row[n] for row in self.series]


def _sample_grid(heights, n_x):
    xs = np.arange(n_x) / n_x
    return np.concatenate([xs + 1j * y for y in heights])


def _design(taus, degrees: int, ns, mu: float):
    cols, labels = [], []
    for jdeg in range(degrees):
        bj = binom_eval(taus, jdeg)
        for n in ns:
            cols.append(bj * np.exp(2j * np.pi * (n + mu) * taus))
            labels.append((jdeg, int(n)))
    A = np.stack(cols, axis=1)
    scale = np.max(np.abs(A), axis=0)
    return A / scale, scale, labels


def extract_coefficients(rho: Representation, params: PoincareParams, Nq: int,
                         heights: Sequence[float] = DEFAULT_HEIGHTS, n_x: int | None = None,
                         guard: int = 4, max_condition: float = 1e12, significance: float = 10.0,
                         values=None, taus=None) -> ExtractionResult:
    """Least-squares fit of sampled P(x + iy) to sum_j binom(tau, j) sum_n c_jn q^(n + mu_r).

    Row m in block r uses exponents n + mu_r for min(nu_r, 0) <= n < Nq + guard
    and tau-degrees up to m_r - 1, so the degree pattern is an output of the
    fit.  The ``guard`` extra orders absorb the truncated q-tail and are
    dropped from the result.

    Each coefficient gets an empirical error: its change when the Poincare
    truncation is halved plus its change when two guard orders are removed,
    plus propagated roundoff.  Coefficients below ``significance`` times that
    error are set to zero.
    """
    heights = tuple(float(h) for h in heights)
    if len(set(heights)) != len(heights) or min(heights) < 1:
        raise ValueError("heights must be distinct and >= 1")
    if guard < 2:
        raise ValueError("guard must be >= 2")
    n_fit = Nq + guard
    n_x = 4 * n_fit if n_x is None else n_x
    values_half = None
    if taus is None:
        taus = _sample_grid(heights, n_x)
        values, *_ = poincare_values(rho, params, taus)
        if params.N >= 4:
            values_half, *_ = poincare_values(rho, params.with_N(params.N // 2), taus, warn=False)
    taus = np.asarray(taus)
    series = [[None] * rho.p for _ in range(rho.p)]
    errors = [[None] * rho.p for _ in range(rho.p)]
    offs = rho.spec.offsets
    worst_res, worst_cond, worst_floor = 0.0, 1.0, 0.0
    for r, (m_r, mu) in enumerate(rho.spec.blocks):
        nmin = min(params.nu[r], 0)
        muf = float(mu)
        As, scale, labels = _design(taus, m_r, np.arange(nmin, n_fit), muf)
        if As.shape[0] < As.shape[1]:
            raise IllConditionedFit(f"{As.shape[0]} samples for {As.shape[1]} unknowns")
        sv = np.linalg.svd(As, compute_uv=False)
        cond = sv[0] / sv[-1] if sv[-1] > 0 else np.inf
        if cond > max_condition:
            raise IllConditionedFit(f"design matrix condition {cond:.3g} exceeds {max_condition:.3g}")
        pinv = np.linalg.pinv(As)
        rows = slice(offs[r], offs[r + 1])
        Y = values[:, rows, :].reshape(len(taus), -1)
        coef = pinv @ Y
        resid = As @ coef - Y
        rms = float(np.sqrt(np.mean(np.abs(resid) ** 2))) if resid.size else 0.0
        ymax = float(np.max(np.abs(Y))) if Y.size else 0.0
        err = (1e-15 * ymax + rms) * np.abs(pinv).sum(axis=1)[:, None] * np.ones_like(coef.real)
        if values_half is not None:
            err = err + np.abs(coef - pinv @ values_half[:, rows, :].reshape(len(taus), -1))
        As2, _, labels2 = _design(taus, m_r, np.arange(nmin, n_fit - 2), muf)
        coef2 = np.linalg.lstsq(As2, Y, rcond=None)[0] / _design(taus, m_r, np.arange(nmin, n_fit - 2), muf)[1][:, None]
        pos2 = {lab: i for i, lab in enumerate(labels2)}
        coef = coef / scale[:, None]
        err = err / scale[:, None]
        for i, lab in enumerate(labels):
            err[i] += np.abs(coef[i] - coef2[pos2[lab]]) if lab in pos2 else np.abs(coef[i])
        coef[np.abs(coef) <= significance * err] = 0
        worst_res, worst_cond = max(worst_res, rms), max(worst_cond, cond)
        worst_floor = max(worst_floor, 1e-15 * ymax + rms)
        coef = coef.reshape(len(labels), m_r, rho.p)
        err = err.reshape(len(labels), m_r, rho.p)
        for i in range(m_r):
            for n in range(rho.p):
                arr = np.zeros((m_r, Nq - nmin), dtype=complex)
                earr = np.zeros((m_r, Nq - nmin), dtype=complex)
                for idx, (jdeg, qn) in enumerate(labels):
                    if qn < Nq:
                        arr[jdeg, qn - nmin] = coef[idx, i, n]
                        earr[jdeg, qn - nmin] = err[idx, i, n]
                series[offs[r] + i][n] = LogQSeries(arr, mu=mu, nmin=nmin, exact=False)
                errors[offs[r] + i][n] = LogQSeries(earr, mu=mu, nmin=nmin, exact=False)
    return ExtractionResult(series, errors, worst_res, worst_cond, worst_floor, heights, Nq, guard)


@dataclass
class HolomorphicForm:
    components: list[LogQSeries]
    rank: int
    classifications: list[str]
    v: int
    columns: tuple[int, ...] = field(default_factory=tuple)

    @property
    def holomorphic(self) -> bool:
        return all(c in (HOLOMORPHIC, CUSPIDAL) for c in self.classifications)


def coefficient_matrix(components: Sequence[LogQSeries]) -> np.ndarray:
    """Rows are components, columns the union of (exponent, tau-degree) slots."""
    keys = set()
    for f in components:
        for n in range(f.nmin, f.order):
            for j in range(f.degree + 1):
                keys.add((round(float(n + f.mu), 12), j))
    keys = sorted(keys)
    index = {k: i for i, k in enumerate(keys)}
    M = np.zeros((len(components), len(keys)), dtype=complex)
    for row, f in enumerate(components):
        ff = f.to_float()
        for (j, i), c in np.ndenumerate(ff.coeffs):
            M[row, index[(round(float(ff.nmin + i + ff.mu), 12), j)]] = c
    return M


def numeric_rank(M: np.ndarray, tol: float = 1e-8) -> int:
    if M.size == 0:
        return 0
    sv = np.linalg.svd(M, compute_uv=False)
    return int(np.sum(sv > tol * sv[0])) if sv[0] > 0 else 0


def build_holomorphic_form(rho: Representation, params: PoincareParams, v: int, Nq: int = 10,
                           extraction: ExtractionResult | None = None, strict: bool = False,
                           rank_tol: float = 1e-8, class_tol: float = 1e-8) -> HolomorphicForm:
    """Delta^v times the sum of the first column of every block of P.

    The first column M_{r-1}+1 of block r carries the leading terms
    binom(tau, u) q^(nu_r + mu_r) on every row of the block, which is what the
    rank check needs.  Raises RankDeficient only when ``strict``.
    """
    params.check(rho)
    exps = [nu + float(mu) for nu, mu in zip(params.nu, rho.spec.mus)]
    if any(e >= 0 for e in exps) or len(set(exps)) != len(exps):
        warnings.warn("nu_r + mu_r should be negative and pairwise distinct", stacklevel=2)
    if v < max(-e for e in exps):
        raise ValueError(f"v={v} is too small to clear the poles q^{min(exps)}")
    ext = extraction or extract_coefficients(rho, params, Nq)
    cols = tuple(rho.spec.offsets[r] for r in range(rho.spec.t))
    delta_v = eisenstein("Delta", ext.Nq + v + 1, exact=False) ** v
    comps = []
    for m in range(rho.p):
        acc = None
        for n in cols:
            acc = ext[m, n] if acc is None else acc + ext[m, n]
        comps.append(acc * delta_v)
    classes = [classify_at_infinity(f, tol=class_tol) for f in comps]
    rank = numeric_rank(coefficient_matrix(comps), rank_tol)
    if rank < rho.p:
        msg = f"component rank {rank} < {rho.p}"
        if strict:
            raise RankDeficient(msg, rank)
        warnings.warn(msg, stacklevel=2)
    return HolomorphicForm(comps, rank, classes, v, cols)
