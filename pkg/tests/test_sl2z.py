import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logvvmf.sl2z import (
    GammaElement,
    I,
    S,
    T,
    coset_key,
    coset_reps,
    eichler_decompose,
    eichler_length,
    mobius,
    parse_matrix,
    same_coset,
    word_matrix,
)
from oracles import st_word


@st.composite
def elements(draw, bound=10**6):
    c = draw(st.integers(-bound, bound))
    d = draw(st.integers(-bound, bound))
    if c == 0 or math.gcd(c, d) != 1:
        c, d = draw(st.sampled_from([(0, 1), (0, -1), (1, d), (-1, d)]))
    if c == 0:
        a, b = d, draw(st.integers(-50, 50))
    else:
        a = pow(d, -1, abs(c)) if abs(c) > 1 else 0
        b = (a * d - 1) // c
    m = draw(st.integers(-50, 50))
    return GammaElement(a + m * c, b + m * d, c, d)


def test_generators():
    assert S @ S == -I
    assert (S @ T) ** 3 == -I
    assert T ** -3 == GammaElement(1, -3, 0, 1)


def test_determinant_enforced():
    with pytest.raises(ValueError):
        GammaElement(1, 1, 1, 1)
    with pytest.raises(TypeError):
        GammaElement(1.5, 0, 0, 1)


def test_parse_matrix():
    assert parse_matrix("0,-1,1,0") == S
    with pytest.raises(ValueError):
        parse_matrix("1,2,3")


def test_decompose_S_is_single_block():
    w = eichler_decompose(S)
    assert w.exponents == (0,) and w.sign == 1 and w.shift == 0
    assert eichler_length(w) == 1


def test_decompose_translation_is_empty_word():
    w = eichler_decompose(T ** 7)
    assert w.exponents == () and w.shift == 7 and eichler_length(w) == 0
    w = eichler_decompose(-(T ** 2))
    assert w.exponents == () and w.sign == -1 and w.reconstruct() == -(T ** 2)


def test_word_matrix_matches_plain_product():
    ex = (3, 2, -1, 4)
    assert word_matrix(ex).entries == st_word(ex)


@given(elements())
@settings(max_examples=300, deadline=None)
def test_roundtrip_and_alternation(g):
    w = eichler_decompose(g)
    assert w.reconstruct() == g
    assert w.is_sign_alternating()
    if g.c != 0:
        # the leading shift leaves a/c - shift in [-1, 1)
        assert -1 <= Fraction(g.a, g.c) - w.shift < 1


@given(elements())
@settings(max_examples=200, deadline=None)
def test_uniqueness_under_reencoding(g):
    # decomposing the reconstruction of a word returns the same word
    w = eichler_decompose(g)
    assert eichler_decompose(w.reconstruct()) == w


@given(elements(bound=1000), elements(bound=1000))
@settings(max_examples=100, deadline=None)
def test_group_law(g, h):
    assert (g @ h).inverse() == h.inverse() @ g.inverse()
    assert (g @ g.inverse()) == I


@given(elements(bound=200), st.floats(-0.5, 0.5), st.floats(0.5, 3))
@settings(max_examples=100, deadline=None)
def test_mobius_is_action(g, x, y):
    tau = complex(x, y)
    h = S @ T
    assert abs(mobius(g @ h, tau) - mobius(g, mobius(h, tau))) <= 1e-9 * (1 + abs(mobius(g @ h, tau)))


def test_coset_reps_unique_and_ordered():
    reps = coset_reps(12)
    keys = [coset_key(g) for g in reps]
    assert len(keys) == len(set(keys))
    assert reps[0] == I
    assert all(max(abs(g.c), abs(g.d)) <= 12 for g in reps)
    expected = 1 + sum(1 for c in range(1, 13) for d in range(-12, 13) if math.gcd(c, d) == 1)
    assert len(reps) == expected
    assert len(coset_reps(12, mod_minus=False)) == 2 * expected


def test_same_coset():
    g = GammaElement(2, 1, 1, 1)
    assert same_coset(T ** 5 @ g, g)
    assert same_coset(-g, g)
    assert not same_coset(-g, g, mod_minus=False)
    assert not same_coset(S, g)
