"""Modular linear differential equations for vector-valued forms.

The ring of level-one holomorphic modular forms is C[Q, R] with Q = E4 and
R = E6.  Given components F_1..F_p of weight k (as q-series, possibly with
log terms), ``find_mlde`` solves

    (g_0 D^p + g_1 D^(p-1) + ... + g_p) F = 0,    g_j in M_{l + 2j},

for the coefficients of every g_j on the monomial basis Q^a R^b.  Each
coefficient of q^(n + mu) binom(tau, j) gives one linear equation.

Exact mode works over Q(i)(kappa) where kappa = 1/(2 pi i) is symbolic.  As
kappa is transcendental the kernel there has the same dimension as over C.
Float mode uses an SVD with the threshold sigma_max * 1e-10.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np
from sympy.polys.matrices import DomainMatrix

from ._exact import KAPPA_DOMAIN, KAPPA_FIELD, kappa_to_complex, to_kappa
from .errors import AmbiguousKernel, Mismatch, NoSolution, RankDeficient, TruncationUnderflow
from .logq.classical import eisenstein
from .logq.ops import modular_derivative
from .logq.series import LogQSeries

__all__ = [
    "mform_basis",
    "GradedModularForm",
    "MLDE",
    "d_iterates",
    "find_mlde",
    "minimal_mlde",
    "hilbert_dims",
    "hilbert_series_check",
    "module_dimension",
    "span_rank",
    "HilbertReport",
]

SV_THRESHOLD = 1e-10


def mform_basis(weight: int) -> list[tuple[int, int]]:
    """Exponents (a, b) with 4a + 6b = weight."""
    if weight < 0 or weight % 2:
        return []
    return [(a, (weight - 4 * a) // 6) for a in range(weight // 4 + 1) if (weight - 4 * a) % 6 == 0]


@lru_cache(maxsize=64)
def _monomial(a: int, b: int, N: int, exact: bool) -> LogQSeries:
    out = LogQSeries.constant(1, N, exact=exact)
    if a:
        out = out * (eisenstein("E4", N, exact) ** a)
    if b:
        out = out * (eisenstein("E6", N, exact) ** b)
    return out


def _fmt(c) -> str:
    if isinstance(c, (int, Fraction)):
        return str(c)
    z = kappa_to_complex(c) if type(c).__name__ in ("FracElement", "PolyElement") else complex(c)
    if abs(z.imag) < 1e-14 * max(abs(z.real), 1):
        return repr(z.real)
    return repr(z)


def _ring_value(c):
    """c as an exact scalar or kappa polynomial, or None when it needs a true fraction."""
    name = type(c).__name__
    if name == "FracElement":
        if not c.denom.is_ground:
            return None
        return c.numer * (c.denom.ring.domain.one / c.denom.LC)
    if isinstance(c, (int, Fraction)) or name in ("PolyElement", "GaussianRational"):
        return c
    return None


def _complex_value(c):
    name = type(c).__name__
    if name in ("FracElement", "PolyElement", "GaussianRational"):
        return kappa_to_complex(c)
    return complex(c)


@dataclass
class GradedModularForm:
    """A polynomial in Q = E4, R = E6 of fixed weight."""

    weight: int
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        for a, b in self.coeffs:
            if 4 * a + 6 * b != self.weight:
                raise ValueError(f"monomial Q^{a} R^{b} does not have weight {self.weight}")

    @classmethod
    def zero(cls, weight: int) -> "GradedModularForm":
        return cls(weight, {})

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs.values())

    def is_exact(self) -> bool:
        return all(_ring_value(c) is not None for c in self.coeffs.values())

    def qseries(self, N: int, exact: bool = True) -> LogQSeries:
        exact = exact and self.is_exact()
        out = LogQSeries.zero(N, exact=exact)
        for (a, b), c in sorted(self.coeffs.items()):
            if c != 0:
                c = _ring_value(c) if exact else _complex_value(c)
                out = out + _monomial(a, b, N, exact).scale(c)
        return out

    def leading_coefficient(self):
        return _leading(self, 0)

    def scaled(self, c) -> "GradedModularForm":
        return GradedModularForm(self.weight, {m: v * c for m, v in self.coeffs.items()})

    def to_json(self) -> dict:
        return {"weight": self.weight,
                "monomials": [{"Q": a, "R": b, "coeff": _fmt(c)} for (a, b), c in sorted(self.coeffs.items()) if c != 0]}

    def __str__(self):
        parts = []
        for (a, b), c in sorted(self.coeffs.items()):
            if c == 0:
                continue
            mono = "*".join(([f"Q^{a}"] if a else []) + ([f"R^{b}"] if b else [])) or "1"
            parts.append(f"({_fmt(c)})*{mono}")
        return " + ".join(parts) or "0"


@dataclass
class MLDE:
    """(g_0 D^p + ... + g_p) F = 0 on forms of weight k; g_j has weight l + 2j."""

    order: int
    lead_weight: int
    k: int
    g: list[GradedModularForm]
    exact: bool = True
    kernel_dim: int = 1

    def __post_init__(self):
        for j, gj in enumerate(self.g):
            if gj.weight != self.lead_weight + 2 * j:
                raise ValueError(f"g_{j} has weight {gj.weight}, expected {self.lead_weight + 2 * j}")

    def apply(self, F: Sequence[LogQSeries]) -> list[LogQSeries]:
        its = d_iterates(F, self.k, self.order)
        N = min(f.length for f in F)
        out = []
        for comp in range(len(F)):
            acc = None
            for j, gj in enumerate(self.g):
                term = its[self.order - j][comp] * gj.qseries(N, exact=its[0][comp].exact)
                acc = term if acc is None else acc + term
            out.append(acc)
        return out

    def to_json(self) -> dict:
        return {"order": self.order, "lead_weight": self.lead_weight, "k": self.k,
                "g": [gj.to_json() for gj in self.g]}

    def __str__(self):
        terms = []
        for j, gj in enumerate(self.g):
            if gj.is_zero():
                continue
            d = f"D^{self.order - j}" if self.order - j > 1 else ("D" if self.order - j == 1 else "1")
            terms.append(f"[{gj}] {d}")
        return " + ".join(terms) + " = 0"


def d_iterates(F: Sequence[LogQSeries], k: int, count: int) -> list[list[LogQSeries]]:
    """[F, D_k F, D_{k+2} D_k F, ...] with ``count`` derivatives; weights k, k+2, ..."""
    if count < 0:
        raise ValueError("count must be >= 0")
    if any(f.order < 1 for f in F):
        raise TruncationUnderflow("components carry no coefficients")
    out = [list(F)]
    for i in range(count):
        out.append([modular_derivative(f, k + 2 * i) for f in out[-1]])
    return out


# -- linear algebra -------------------------------------------------------


def _flatten(series_list: Sequence[LogQSeries], order_cap: dict) -> dict:
    """{(component, exponent, tau-degree): coefficient} restricted to n < order_cap[component]."""
    out = {}
    for comp, f in enumerate(series_list):
        f = f.to_binomial()
        cap = order_cap[comp]
        for (j, i), c in np.ndenumerate(f.coeffs):
            n = f.nmin + i
            if n < cap:
                out[(comp, n, j)] = c
    return out


def _system(columns: list[list[LogQSeries]], exact: bool):
    """Rows: coefficient slots; columns: unknowns.  Truncated to a common order per component."""
    p = len(columns[0])
    caps = {comp: min(col[comp].order for col in columns) for comp in range(p)}
    flats = [_flatten(col, caps) for col in columns]
    keys = sorted(set().union(*flats))
    A = [[flat.get(key, 0) for flat in flats] for key in keys]
    return A, keys


def _nullspace_exact(A, ncols):
    if not A:
        return [[KAPPA_FIELD.one if i == j else KAPPA_FIELD.zero for i in range(ncols)] for j in range(ncols)]
    rows = [[_field(x) for x in row] for row in A]
    N = DomainMatrix(rows, (len(rows), ncols), KAPPA_DOMAIN).nullspace()
    return [[N[i, j].element for j in range(N.shape[1])] for i in range(N.shape[0])]


def _field(x):
    if type(x).__name__ == "FracElement":
        return x
    return KAPPA_FIELD(to_kappa(x)) if x != 0 else KAPPA_FIELD.zero


def _nullspace_float(A, ncols):
    if not A:
        return [np.eye(ncols)[j] for j in range(ncols)]
    M = np.array([[complex(kappa_to_complex(x)) if not isinstance(x, (int, float, complex)) else complex(x)
                   for x in row] for row in A], dtype=complex)
    rs = np.max(np.abs(M), axis=1)
    M = M[rs > 0] / rs[rs > 0, None]
    cs = np.max(np.abs(M), axis=0) if M.size else np.ones(ncols)
    cs[cs == 0] = 1.0
    M = M / cs
    _, sv, Vh = np.linalg.svd(M)
    rank = int(np.sum(sv > sv[0] * SV_THRESHOLD)) if sv.size and sv[0] > 0 else 0
    return [Vh[i].conj() / cs for i in range(rank, ncols)]


def span_rank(F: Sequence[LogQSeries]) -> tuple[int, list[int]]:
    """Rank of the components' coefficient vectors and a greedy independent subset."""
    exact = all(f.exact for f in F)
    chosen: list[int] = []
    for i in range(len(F)):
        trial = chosen + [i]
        A = _component_matrix([F[t] for t in trial])
        ns = _nullspace_exact(A, len(trial)) if exact else _nullspace_float(A, len(trial))
        if not ns:
            chosen.append(i)
    return len(chosen), chosen


def _component_matrix(F):
    caps = {0: min(f.order for f in F)}
    flats = [_flatten([f], caps) for f in F]
    keys = sorted(set().union(*flats))
    return [[flat.get(key, 0) for flat in flats] for key in keys]


# -- solving --------------------------------------------------------------


def _unknowns(order: int, lead: int):
    out = []
    for j in range(order + 1):
        for mono in mform_basis(lead + 2 * j):
            out.append((j, mono))
    return out


def _solve_at(F, k, order, lead, its, exact, margin):
    unknowns = _unknowns(order, lead)
    if not unknowns or not mform_basis(lead):
        return [], unknowns
    N = min(f.length for f in F)
    cols = []
    for j, (a, b) in unknowns:
        mono = _monomial(a, b, N, exact)
        cols.append([its[order - j][c] * mono for c in range(len(F))])
    A, keys = _system(cols, exact)
    if len(keys) < len(unknowns) + margin:
        raise TruncationUnderflow(
            f"only {len(keys)} coefficient equations for {len(unknowns)} unknowns; raise the truncation")
    ns = _nullspace_exact(A, len(unknowns)) if exact else _nullspace_float(A, len(unknowns))
    return ns, unknowns


@lru_cache(maxsize=256)
def _monomial_ints(a: int, b: int, N: int) -> tuple[int, ...]:
    from .logq.classical import _coeff_list, int_poly_mul

    out = [1] + [0] * (N - 1)
    for _ in range(a):
        out = int_poly_mul(out, _coeff_list("E4", N), N)
    for _ in range(b):
        out = int_poly_mul(out, _coeff_list("E6", N), N)
    return tuple(out)


def _leading(g: "GradedModularForm", zero):
    """Lowest nonzero q-coefficient of g (a nonzero form of weight w has one below w/12 + 1)."""
    N = g.weight // 12 + 1
    for n in range(N):
        c = zero
        for (a, b), x in g.coeffs.items():
            c = c + x * _monomial_ints(a, b, N)[n]
        if c != 0:
            return c
    return zero


def _to_mlde(vec, unknowns, order, lead, k, exact, kdim):
    g = [GradedModularForm(lead + 2 * j, {}) for j in range(order + 1)]
    for x, (j, mono) in zip(vec, unknowns):
        g[j].coeffs[mono] = x
    lc = _leading(g[0], KAPPA_FIELD.zero if exact else 0j)
    if lc == 0:
        raise NoSolution("kernel vector has vanishing leading coefficient")
    inv = KAPPA_FIELD.one / lc if exact else 1 / lc
    g = [gj.scaled(inv) for gj in g]
    if exact:
        g = [GradedModularForm(gj.weight, {m: _simplify(v) for m, v in gj.coeffs.items()}) for gj in g]
    return MLDE(order, lead, k, g, exact=exact, kernel_dim=kdim)


def _simplify(v):
    """Constants of Q(i)(kappa) come back as Fractions (real) or complex; others stay symbolic."""
    num, den = v.numer, v.denom
    if not (den.is_ground and num.is_ground):
        return v
    c = num.LC / den.LC if num else num.ring.domain.zero
    if c.y == 0:
        return Fraction(int(c.x.numerator), int(c.x.denominator))
    return complex(float(c.x), float(c.y))


def find_mlde(F: Sequence[LogQSeries], k: int, order: int, max_lead: int = 0, margin: int = 10,
              exact: bool | None = None) -> MLDE:
    """Lowest leading weight l <= max_lead admitting an order-``order`` MLDE for F.

    Raises NoSolution if no leading weight works and AmbiguousKernel if the
    kernel at the first working weight has dimension > 1.
    """
    F = list(F)
    if exact is None:
        exact = all(f.exact for f in F)
    if not exact:
        F = [f.to_float() for f in F]
    its = d_iterates(F, k, order)
    for lead in range(0, max_lead + 1, 2):
        ns, unknowns = _solve_at(F, k, order, lead, its, exact, margin)
        if not ns:
            continue
        if len(ns) > 1:
            raise AmbiguousKernel(f"kernel dimension {len(ns)} at leading weight {lead}", ns)
        try:
            return _to_mlde(ns[0], unknowns, order, lead, k, exact, 1)
        except NoSolution:
            continue
    raise NoSolution(f"no MLDE of order {order} with leading weight <= {max_lead}")


def minimal_mlde(F: Sequence[LogQSeries], k: int, max_lead: int = 48, margin: int = 10) -> MLDE:
    """Least order, then least leading weight; dependent components are first reduced to their span."""
    F = list(F)
    rank, chosen = span_rank(F)
    if rank == 0:
        raise RankDeficient("all components vanish", 0)
    G = [F[i] for i in chosen]
    return find_mlde(G, k, rank, max_lead=max_lead, margin=margin)


# -- Hilbert series -------------------------------------------------------


def hilbert_dims(weights: Sequence[int], k_max: int, k_min: int | None = None) -> dict[int, int]:
    """Coefficients of sum_j t^(k_j) / ((1 - t^4)(1 - t^6)) for k_min <= k <= k_max."""
    k_min = min(weights) if k_min is None else k_min
    return {k: sum(len(mform_basis(k - w)) for w in weights) for k in range(k_min, k_max + 1)}


def module_dimension(generators: Sequence[Sequence[LogQSeries]], weights: Sequence[int], k: int) -> int:
    """Rank of {Q^a R^b G_j : 4a + 6b = k - w_j} from coefficient vectors (a lower bound for dim)."""
    vectors = []
    for G, w in zip(generators, weights):
        N = min(f.length for f in G)
        exact = all(f.exact for f in G)
        for a, b in mform_basis(k - w):
            mono = _monomial(a, b, N, exact)
            vectors.append([f * mono for f in G])
    if not vectors:
        return 0
    exact = all(v[0].exact for v in vectors)
    A, _ = _system(vectors, exact)
    ns = _nullspace_exact(A, len(vectors)) if exact else _nullspace_float(A, len(vectors))
    return len(vectors) - len(ns)


@dataclass
class HilbertReport:
    expected: dict
    observed: dict
    first_mismatch: int | None

    @property
    def ok(self) -> bool:
        return self.first_mismatch is None


def hilbert_series_check(weights: Sequence[int], k_range: Sequence[int], observed: dict | None = None,
                         generators: Sequence[Sequence[LogQSeries]] | None = None, strict: bool = True) -> HilbertReport:
    """Compare dimension counts with the free-module prediction over ``k_range``.

    ``observed`` maps k to a dimension; if omitted it is computed from
    ``generators`` with ``module_dimension``.
    """
    ks = list(k_range)
    expected = {k: sum(len(mform_basis(k - w)) for w in weights) for k in ks}
    if observed is None:
        if generators is None:
            raise ValueError("need observed dimensions or generators")
        observed = {k: module_dimension(generators, weights, k) for k in ks}
    bad = next((k for k in ks if observed.get(k) != expected[k]), None)
    rep = HilbertReport(expected, dict(observed), bad)
    if strict and bad is not None:
        raise Mismatch(f"dimension mismatch at weight {bad}: expected {expected[bad]}, got {observed.get(bad)}", bad)
    return rep
