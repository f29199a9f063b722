"""Finite-dimensional representations of SL2(Z).

A representation is given by the matrix of rho(S) together with a block
specification of rho(T) in *modified* Jordan form: each block J_{m, lambda}
carries lambda on the diagonal and on the first subdiagonal.  Evaluation on an
arbitrary group element walks its Eichler word.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import sl2z
from ._exact import exact_unit_root, to_gaussian, unit_root
from .errors import DefectiveInput, NonInvolutive, NotScalarS2, RelationViolation
from .sl2z import GammaElement

__all__ = [
    "BlockSpec",
    "Representation",
    "ValidationReport",
    "S2Split",
    "modified_jordan_block",
    "gen_binomial",
    "power_T",
    "evaluate",
    "validate",
    "split_by_S2",
    "nontriviality_holds",
    "matrix_norm",
    "jordanize_T",
    "trivial_rep",
    "standard_rep",
    "direct_sum",
    "unipotent_rep",
]


def _as_mu(mu) -> Fraction | float:
    if isinstance(mu, (int, Fraction)):
        return Fraction(mu) % 1
    mu = float(mu) % 1.0
    return mu


@dataclass(frozen=True)
class BlockSpec:
    """Blocks (m_r, mu_r) of rho(T); lambda_r = exp(2 pi i mu_r) with mu_r in [0, 1)."""

    blocks: tuple[tuple[int, Fraction | float], ...]

    def __post_init__(self):
        norm = []
        for m, mu in self.blocks:
            if int(m) != m or m < 1:
                raise ValueError(f"block size must be a positive integer, got {m!r}")
            if isinstance(mu, complex):
                raise ValueError("mu must be real: eigenvalues of rho(T) must have modulus 1")
            norm.append((int(m), _as_mu(mu)))
        object.__setattr__(self, "blocks", tuple(norm))

    @property
    def t(self) -> int:
        return len(self.blocks)

    @property
    def p(self) -> int:
        return sum(m for m, _ in self.blocks)

    @property
    def s(self) -> int:
        return max(m for m, _ in self.blocks)

    @property
    def sizes(self) -> list[int]:
        return [m for m, _ in self.blocks]

    @property
    def mus(self) -> list:
        return [mu for _, mu in self.blocks]

    @property
    def offsets(self) -> list[int]:
        """M_0, M_1, ..., M_t with M_r = m_1 + ... + m_r."""
        out = [0]
        for m, _ in self.blocks:
            out.append(out[-1] + m)
        return out

    def block_of_row(self, i: int) -> int:
        """0-based block index r containing 0-based row i."""
        offs = self.offsets
        for r in range(self.t):
            if offs[r] <= i < offs[r + 1]:
                return r
        raise IndexError(i)

    def eigenvalues(self) -> list[complex]:
        return [unit_root(mu) for mu in self.mus]

    def is_exact(self) -> bool:
        return all(isinstance(mu, Fraction) and (4 * mu).denominator == 1 for mu in self.mus)


def modified_jordan_block(m: int, lam) -> np.ndarray:
    J = np.zeros((m, m), dtype=complex)
    for i in range(m):
        J[i, i] = lam
        if i + 1 < m:
            J[i + 1, i] = lam
    return J


def gen_binomial(l: int, i: int) -> int:
    """binom(l, i) as the polynomial l (l-1) ... (l-i+1) / i!, valid for negative l."""
    if i < 0:
        return 0
    num = 1
    for r in range(i):
        num *= l - r
    return num // math.factorial(i)


@dataclass(frozen=True, eq=False)
class Representation:
    rho_S: np.ndarray
    spec: BlockSpec
    exact_S: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        raw = self.rho_S
        arr = np.array(raw, dtype=complex)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError("rho_S must be a square matrix")
        if arr.shape[0] != self.spec.p:
            raise ValueError(f"rho_S has size {arr.shape[0]} but blocks sum to {self.spec.p}")
        arr.setflags(write=False)
        object.__setattr__(self, "rho_S", arr)
        if self.exact_S is None:
            exact = _try_exact(raw)
            object.__setattr__(self, "exact_S", exact)

    @property
    def p(self) -> int:
        return self.spec.p

    @property
    def rho_T(self) -> np.ndarray:
        return power_T(self, 1)

    @property
    def exact(self) -> bool:
        return self.exact_S is not None and self.spec.is_exact()


def _try_exact(raw):
    """Gaussian-rational copy of rho_S when every entry is given exactly."""
    rows = raw.tolist() if isinstance(raw, np.ndarray) else raw
    try:
        out = np.empty((len(rows), len(rows)), dtype=object)
        for i, row in enumerate(rows):
            for j, x in enumerate(row):
                if isinstance(x, float) or isinstance(x, complex):
                    if not all(float(v).is_integer() or Fraction(float(v)).denominator <= 2**10
                               for v in (x.real, x.imag)):
                        return None
                out[i, j] = to_gaussian(x)
        return out
    except (TypeError, ValueError):
        return None


def power_T(rho: Representation, l: int, exact: bool = False) -> np.ndarray:
    """rho(T)**l blockwise as lambda**l * sum_i binom(l, i) N**i."""
    p = rho.p
    if exact:
        if not rho.spec.is_exact():
            raise ValueError("exact power_T needs every mu in {0, 1/4, 1/2, 3/4}")
        from sympy import QQ_I

        out = np.full((p, p), QQ_I(0, 0), dtype=object)
    else:
        out = np.zeros((p, p), dtype=complex)
    off = 0
    for m, mu in rho.spec.blocks:
        if exact:
            lam_l = exact_unit_root(mu) ** l if l >= 0 else exact_unit_root(-Fraction(mu)) ** (-l)
        else:
            lam_l = unit_root(mu, l)
        for i in range(m):
            coef = gen_binomial(l, i)
            if coef == 0:
                continue
            for r in range(i, m):
                out[off + r, off + r - i] = lam_l * coef
        off += m
    return out


def _rho_S_power(rho, n, exact):
    base = rho.exact_S if exact else rho.rho_S
    out = _identity(rho.p, exact)
    for _ in range(n % 4):
        out = out @ base
    return out


def _identity(p, exact):
    if exact:
        from sympy import QQ_I

        out = np.full((p, p), QQ_I(0, 0), dtype=object)
        for i in range(p):
            out[i, i] = QQ_I(1, 0)
        return out
    return np.eye(p, dtype=complex)


def evaluate(rho: Representation, g: GammaElement, exact: bool = False) -> np.ndarray:
    """rho(g) as a product along the canonical Eichler word of g."""
    if exact and not rho.exact:
        raise ValueError("representation has no exact form")
    w = sl2z.eichler_decompose(g)
    rS = rho.exact_S if exact else rho.rho_S
    out = _identity(rho.p, exact)
    for l in reversed(w.exponents):  # leftmost factor is S T**l_v
        out = out @ rS @ power_T(rho, l, exact)
    if w.shift:
        out = power_T(rho, w.shift, exact) @ out
    if w.sign == -1:
        out = _rho_S_power(rho, 2, exact) @ out
    return out


@dataclass
class ValidationReport:
    braid_residual: float
    order_residual: float
    tol: float

    @property
    def max_residual(self) -> float:
        return max(self.braid_residual, self.order_residual)

    @property
    def ok(self) -> bool:
        return self.max_residual <= self.tol


def validate(rho: Representation, tol: float = 1e-10) -> ValidationReport:
    """Check (rho(S) rho(T))**3 = rho(S)**2 and rho(S)**4 = I."""
    A, B = rho.rho_S, rho.rho_T
    AB = A @ B
    braid = matrix_norm(AB @ AB @ AB - A @ A)
    order = matrix_norm(np.linalg.matrix_power(A, 4) - np.eye(rho.p))
    report = ValidationReport(braid, order, tol)
    if not report.ok:
        raise RelationViolation(
            f"group relations violated: |(ST)^3 - S^2| = {braid:.3e}, |S^4 - I| = {order:.3e} > {tol:g}"
        )
    return report


def matrix_norm(M) -> float:
    """Max absolute entry."""
    M = np.asarray(M)
    if M.dtype == object:
        from ._exact import gaussian_to_complex

        return max(abs(gaussian_to_complex(x)) for x in M.ravel())
    return float(np.max(np.abs(M))) if M.size else 0.0


@dataclass
class S2Split:
    epsilon: int | None
    plus: Representation | None = None
    minus: Representation | None = None
    projector_plus: np.ndarray | None = None
    projector_minus: np.ndarray | None = None
    basis_plus: np.ndarray | None = None
    basis_minus: np.ndarray | None = None


def scalar_S2(rho: Representation, tol: float = 1e-9) -> int | None:
    X = rho.rho_S @ rho.rho_S
    for eps in (1, -1):
        if matrix_norm(X - eps * np.eye(rho.p)) <= tol:
            return eps
    return None


def split_by_S2(rho: Representation, tol: float = 1e-9) -> S2Split:
    X = rho.rho_S @ rho.rho_S
    if matrix_norm(X @ X - np.eye(rho.p)) > tol:
        raise NonInvolutive("rho(S^2) does not square to the identity")
    eps = scalar_S2(rho, tol)
    if eps is not None:
        return S2Split(epsilon=eps)
    Pp = (np.eye(rho.p) + X) / 2
    Pm = (np.eye(rho.p) - X) / 2
    out = S2Split(epsilon=None, projector_plus=Pp, projector_minus=Pm)
    for sign, P in ((1, Pp), (-1, Pm)):
        sub, basis = _restrict(rho, P, tol)
        if sign == 1:
            out.plus, out.basis_plus = sub, basis
        else:
            out.minus, out.basis_minus = sub, basis
    return out


def _restrict(rho, P, tol):
    diag = np.abs(np.diag(P))
    offdiag = matrix_norm(P - np.diag(np.diag(P)))
    if offdiag <= tol and np.all((np.abs(diag) <= tol) | (np.abs(diag - 1) <= tol)):
        # coordinate subspace: keep whole blocks when they lie inside it
        idx = [i for i in range(rho.p) if diag[i] > 0.5]
        offs = rho.spec.offsets
        blocks = []
        for r, (m, mu) in enumerate(rho.spec.blocks):
            rows = set(range(offs[r], offs[r + 1]))
            if rows <= set(idx):
                blocks.append((m, mu))
            elif rows & set(idx):
                break
        else:
            basis = np.eye(rho.p)[:, idx]
            sub_S = rho.rho_S[np.ix_(idx, idx)]
            return Representation(sub_S, BlockSpec(tuple(blocks))), basis
    # general position: restrict and re-jordanize with the known eigenvalues
    U, sv, _ = np.linalg.svd(P)
    rank = int(np.sum(sv > 0.5))
    V = U[:, :rank]
    Vinv = np.linalg.pinv(V)
    sub_S = Vinv @ rho.rho_S @ V
    sub_T = Vinv @ rho.rho_T @ V
    spec, Q = jordanize_T(sub_T, sorted(set(rho.spec.mus), key=float))
    Qi = np.linalg.inv(Q)
    return Representation(Qi @ sub_S @ Q, spec), V @ Q


def nontriviality_holds(rho: Representation, k: int, tol: float = 1e-9) -> bool:
    eps = scalar_S2(rho, tol)
    if eps is None:
        raise NotScalarS2("rho(S^2) is not +-I")
    return eps == (-1) ** (k % 2)


def _numeric_rank(A, tol):
    if A.size == 0:
        return 0
    sv = np.linalg.svd(A, compute_uv=False)
    return int(np.sum(sv > tol))


def jordanize_T(A, mus: Sequence, tol: float = 1e-8, gap: float = 1e3) -> tuple[BlockSpec, np.ndarray]:
    """Bring A into modified Jordan form given exactly-known eigenvalue arguments ``mus``.

    Returns (spec, Q) with inv(Q) @ A @ Q equal to the modified Jordan matrix of
    ``spec``.  Raises DefectiveInput when a rank decision is not clear-cut, i.e.
    some singular value falls between tol and gap * tol.
    """
    A = np.asarray(A, dtype=complex)
    p = A.shape[0]
    blocks: list[tuple[int, object]] = []
    columns: list[np.ndarray] = []
    for mu in mus:
        lam = unit_root(Fraction(mu) if isinstance(mu, (int, Fraction)) else mu)
        Nl = A - lam * np.eye(p)
        kers = [np.zeros((p, 0), dtype=complex)]
        power = np.eye(p, dtype=complex)
        while True:
            power = power @ Nl
            sv = np.linalg.svd(power, compute_uv=False)
            if np.any((sv > tol) & (sv < gap * tol)):
                raise DefectiveInput("ambiguous rank; eigenvalue data is not exact enough")
            _, s_full, vh = np.linalg.svd(power)
            null = vh[np.sum(s_full > tol):].conj().T
            if null.shape[1] == kers[-1].shape[1]:
                break
            kers.append(null)
            if null.shape[1] == p:
                break
        depth = len(kers) - 1
        if depth == 0:
            continue
        chains: list[list[np.ndarray]] = []
        chosen = np.zeros((p, 0), dtype=complex)
        for s in range(depth, 0, -1):
            # vectors in ker N^s not in ker N^(s-1) + span of chain members at level s
            need = (kers[s].shape[1] - kers[s - 1].shape[1]) - sum(1 for c in chains if len(c) >= s)
            for _ in range(need):
                base = np.hstack([kers[s - 1]] + [c[len(c) - s][:, None] for c in chains if len(c) >= s])
                cand = None
                for j in range(kers[s].shape[1]):
                    v = kers[s][:, j]
                    test = np.hstack([base, v[:, None]])
                    if _numeric_rank(test, tol) > _numeric_rank(base, tol):
                        cand = v
                        break
                if cand is None:
                    raise DefectiveInput("could not build a Jordan chain")
                chain = [cand]
                for _ in range(s - 1):
                    chain.append(Nl @ chain[-1] / lam)
                chains.append(chain)
        for chain in chains:
            blocks.append((len(chain), mu))
            columns.extend(chain)
            chosen = np.hstack([chosen] + [v[:, None] for v in chain])
    if len(columns) != p:
        raise DefectiveInput("declared eigenvalues do not account for the whole space")
    Q = np.column_stack(columns)
    if np.linalg.cond(Q) > 1 / tol:
        raise DefectiveInput("Jordan basis is numerically singular")
    return BlockSpec(tuple(blocks)), Q


def trivial_rep() -> Representation:
    return Representation([[1]], BlockSpec(((1, Fraction(0)),)))


def standard_rep() -> Representation:
    """The defining representation, written in the basis where rho(T) = J_{2,1}.

    rho(g) is the conjugate of g by the coordinate swap: (d, c; b, a).
    """
    return Representation([[0, 1], [-1, 0]], BlockSpec(((2, Fraction(0)),)))


def unipotent_rep(m: int) -> Representation:
    """Symmetric power Sym^{m-1} of the standard representation: one m-block with mu = 0.

    Built in exact rational arithmetic, so the result has an exact form.
    """
    if m == 1:
        return trivial_rep()
    import sympy

    n = m - 1
    x, y = sympy.symbols("x y")

    def sym(g):
        a, b, c, d = g.entries
        M = sympy.zeros(m, m)
        for j in range(m):
            img = sympy.Poly(sympy.expand((a * x + c * y) ** (n - j) * (b * x + d * y) ** j), x, y)
            for e in range(m):
                M[e, j] = img.coeff_monomial(x ** (n - e) * y ** e)
        return M

    rS, rT = sym(sl2z.S), sym(sl2z.T)
    if rS * rT != sym(sl2z.S @ sl2z.T):
        rS, rT = rS.T, rT.T
    Nl = rT - sympy.eye(m)
    top = Nl ** (m - 1)
    j0 = next(j for j in range(m) if any(top[:, j]))
    chain = [sympy.eye(m)[:, j0]]
    for _ in range(m - 1):
        chain.append(Nl * chain[-1])
    Q = sympy.Matrix.hstack(*chain)
    S_new = Q.inv() * rS * Q
    rows = [[Fraction(int(sympy.fraction(v)[0]), int(sympy.fraction(v)[1])) for v in S_new.row(i)] for i in range(m)]
    return Representation(rows, BlockSpec(((m, Fraction(0)),)))


def direct_sum(*reps: Representation) -> Representation:
    p = sum(r.p for r in reps)
    S = np.zeros((p, p), dtype=complex)
    exact = all(r.exact_S is not None for r in reps)
    from sympy import QQ_I

    SE = np.full((p, p), QQ_I(0, 0), dtype=object) if exact else None
    blocks = []
    off = 0
    for r in reps:
        S[off:off + r.p, off:off + r.p] = r.rho_S
        if exact:
            SE[off:off + r.p, off:off + r.p] = r.exact_S
        blocks.extend(r.spec.blocks)
        off += r.p
    return Representation(S, BlockSpec(tuple(blocks)), exact_S=SE)
