"""Exact integer arithmetic in the modular group SL2(Z).

Group elements are immutable ``GammaElement`` values backed by Python ints, so
products of long Eichler words never overflow.

Canonical form
--------------
Every element is written uniquely as

    g = sign * T**shift * (S T**l_v) ... (S T**l_1) (S T**l_0)

with ``(-1)**(j-1) * l_j > 0`` for ``1 <= j <= v``.  The pure words (``sign=1``,
``shift=0``) are exactly the elements whose first column (a, c) has ``c != 0``
and ``-1 <= a/c < 1`` with one particular overall sign, so the extra ``sign``
and ``shift`` are needed to cover the whole group.  ``shift`` is taken of
minimal absolute value.  Elements with ``c == 0`` (that is ``+-T**m``) carry the
empty word.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

__all__ = [
    "GammaElement",
    "EichlerWord",
    "S",
    "T",
    "I",
    "compose",
    "mobius",
    "cocycle_j",
    "eichler_decompose",
    "eichler_length",
    "word_matrix",
    "coset_reps",
    "coset_key",
    "same_coset",
    "parse_matrix",
]


@dataclass(frozen=True)
class GammaElement:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        for name in "abcd":
            v = getattr(self, name)
            if not isinstance(v, int):
                if isinstance(v, float) or int(v) != v:
                    raise TypeError(f"entry {name}={v!r} is not an integer")
                object.__setattr__(self, name, int(v))
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError(f"determinant of {self.entries} is not 1")

    @property
    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def __iter__(self) -> Iterator[int]:
        return iter(self.entries)

    def __matmul__(self, other: "GammaElement") -> "GammaElement":
        return compose(self, other)

    def __neg__(self) -> "GammaElement":
        return GammaElement(-self.a, -self.b, -self.c, -self.d)

    def __pow__(self, n: int) -> "GammaElement":
        base = self if n >= 0 else self.inverse()
        out = I
        for _ in range(abs(n)):
            out = out @ base
        return out

    def inverse(self) -> "GammaElement":
        return GammaElement(self.d, -self.b, -self.c, self.a)

    def as_rows(self) -> list[list[int]]:
        return [[self.a, self.b], [self.c, self.d]]

    def __repr__(self):
        return f"GammaElement({self.a}, {self.b}; {self.c}, {self.d})"


S = GammaElement(0, -1, 1, 0)
T = GammaElement(1, 1, 0, 1)
I = GammaElement(1, 0, 0, 1)


def T_power(m: int) -> GammaElement:
    return GammaElement(1, m, 0, 1)


def ST_power(l: int) -> GammaElement:
    """The factor S T**l = (0, -1; 1, l)."""
    return GammaElement(0, -1, 1, l)


def compose(g: GammaElement, h: GammaElement) -> GammaElement:
    return GammaElement(
        g.a * h.a + g.b * h.c,
        g.a * h.b + g.b * h.d,
        g.c * h.a + g.d * h.c,
        g.c * h.b + g.d * h.d,
    )


def mobius(g: GammaElement, tau: complex) -> complex:
    """Left action tau -> (a tau + b) / (c tau + d) on the upper half-plane."""
    if tau.imag <= 0:
        raise ValueError("tau must lie in the upper half-plane")
    return (g.a * tau + g.b) / (g.c * tau + g.d)


def cocycle_j(g: GammaElement, tau):
    """j(g, tau) = c tau + d.  Works elementwise on numpy arrays."""
    return g.c * tau + g.d


@dataclass(frozen=True)
class EichlerWord:
    """Exponents (l_0, ..., l_v) plus the sign and leading shift of the canonical form."""

    exponents: tuple[int, ...]
    sign: int = 1
    shift: int = 0

    @property
    def v(self) -> int:
        """Word depth; -1 for the empty word of +-T**m."""
        return len(self.exponents) - 1

    def is_sign_alternating(self) -> bool:
        return all((-1) ** (j - 1) * l > 0 for j, l in enumerate(self.exponents) if j >= 1)

    @property
    def length(self) -> int:
        return eichler_length(self)

    def reconstruct(self) -> GammaElement:
        g = T_power(self.shift) @ word_matrix(self.exponents)
        return g if self.sign == 1 else -g


def word_matrix(exponents) -> GammaElement:
    """(S T**l_v) ... (S T**l_0) for exponents listed as (l_0, ..., l_v)."""
    g = I
    for l in exponents:
        g = ST_power(l) @ g
    return g


def _shift_for(x: Fraction) -> int:
    # smallest |m| with x - m in [-1, 1)
    if -1 <= x < 1:
        return 0
    if x >= 1:
        return math.floor(x)
    return math.floor(x + 1)


def eichler_decompose(g: GammaElement) -> EichlerWord:
    a, b, c, d = g.entries
    if c == 0:
        # g = a * T**(a*b) with a = d = +-1
        return EichlerWord((), sign=a, shift=a * b)

    m = _shift_for(Fraction(a, c))
    cur = T_power(-m) @ g
    outer: list[int] = []
    while cur.a != 0:
        z = Fraction(-cur.c, cur.a)  # a/c = -1/(l + y)
        if z > 0:
            l = math.floor(z)  # odd depth: l > 0, y in [0, 1)
        else:
            l = math.floor(z) + 1  # even depth: l < 0, y in [-1, 0)
        outer.append(l)
        cur = ST_power(l).inverse() @ cur
    # cur = eps * S T**l_0
    eps = cur.c
    l0 = cur.d * eps
    return EichlerWord((l0, *reversed(outer)), sign=eps, shift=m)


def eichler_length(w: EichlerWord) -> int:
    if not w.exponents:
        return 0
    v = w.v
    return 2 * v + 2 if w.exponents[0] != 0 else 2 * v + 1


def coset_key(g: GammaElement, mod_minus: bool = True) -> tuple[int, int]:
    """Bottom row, normalised to c > 0 (or (0, 1)) when working modulo +-1."""
    c, d = g.c, g.d
    if mod_minus and (c < 0 or (c == 0 and d < 0)):
        c, d = -c, -d
    return c, d


def same_coset(g: GammaElement, h: GammaElement, mod_minus: bool = True) -> bool:
    """Membership test g h^-1 in <T> (or +-<T>)."""
    x = g @ h.inverse()
    if x.c != 0:
        return False
    return mod_minus or x.a == 1


def _rep_with_bottom_row(c: int, d: int) -> GammaElement:
    # c > 0; a = d^-1 mod c, placed so that a/c lies in [-1/2, 1/2)
    a0 = pow(d, -1, c) if c > 1 else 0
    half = c // 2
    a = (a0 + half) % c - half
    b = (a * d - 1) // c
    return GammaElement(a, b, c, d)


def coset_reps(N: int, mod_minus: bool = True) -> list[GammaElement]:
    """Representatives of <T>\\Gamma (or +-<T>\\Gamma) with max(|c|, |d|) <= N.

    The output order is deterministic: identity-type cosets first, then by
    (|c|, |d|, sign of c, sign of d).
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    reps = [I] if mod_minus else [I, -I]
    body = []
    for c in range(1, N + 1):
        for d in range(-N, N + 1):
            if math.gcd(c, d) != 1:
                continue
            g = _rep_with_bottom_row(c, d)
            body.append(g)
            if not mod_minus:
                body.append(-g)
    body.sort(key=lambda g: (abs(g.c), abs(g.d), g.c < 0, g.d < 0))
    return reps + body


def parse_matrix(text: str) -> GammaElement:
    parts = [int(p) for p in text.replace(" ", "").split(",")]
    if len(parts) != 4:
        raise ValueError("expected four comma-separated integers a,b,c,d")
    return GammaElement(*parts)
