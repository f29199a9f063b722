import math
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from logvvmf.errors import BlockMismatch
from logvvmf.logq import (
    CUSPIDAL,
    HOLOMORPHIC,
    MEROMORPHIC,
    LogQSeries,
    binom_eval,
    binom_matrix,
    binom_matrix_eval,
    binom_matrix_inverse,
    binom_matrix_inverse_eval,
    binom_to_power,
    classify_at_infinity,
    d_power,
    divisor_sigma,
    eisenstein,
    g_to_h,
    h_to_g,
    jordan_block_symbolic,
    modular_derivative,
    normalize_mu,
    power_to_binom,
)
from oracles import (
    RAMANUJAN_TAU,
    delta_product,
    derivative,
    e2_coeffs,
    eisenstein_coeffs,
    q_eval,
    sigma,
)

N = 40


def ints(series, j=0):
    return [int(complex(x).real) if not isinstance(x, int) else x for x in series.to_float().qseries(j)]


def as_list(f, j=0):
    return [complex(x) for x in f.to_float().qseries(j)]


# -- classical forms against divisor-sum and product oracles -------------------


def test_divisor_sigma_matches_trial_division():
    assert divisor_sigma(3, 50)[1:] == [sigma(3, n) for n in range(1, 50)]


@pytest.mark.parametrize("name,w", [("E4", 4), ("E6", 6)])
def test_eisenstein_coefficients(name, w):
    assert as_list(eisenstein(name, N)) == eisenstein_coeffs(w, N)


def test_e2():
    P = eisenstein("P", N)
    assert as_list(P.scale(-12)) == e2_coeffs(N)


def test_delta_against_product():
    assert as_list(eisenstein("Delta", N)) == delta_product(N)
    assert delta_product(11) == RAMANUJAN_TAU


def test_e4_squared_is_e8():
    assert as_list(eisenstein("E4", N) ** 2) == eisenstein_coeffs(8, N)


def test_e4_e6_is_e10():
    assert as_list(eisenstein("E4", N) * eisenstein("E6", N)) == eisenstein_coeffs(10, N)


def test_discriminant_identity():
    E4, E6 = eisenstein("E4", N), eisenstein("E6", N)
    lhs = (E4 ** 3 - E6 ** 2) / 1728
    assert lhs == eisenstein("Delta", N)


# -- modular derivative: Ramanujan identities, exact ---------------------------


def test_ramanujan_identities():
    E4, E6, D = eisenstein("E4", N), eisenstein("E6", N), eisenstein("Delta", N)
    assert modular_derivative(E4, 4) == E6.scale(Fraction(-1, 3))
    assert modular_derivative(E6, 6) == (E4 * E4).scale(Fraction(-1, 2))
    assert modular_derivative(D, 12).is_zero()


def test_second_derivative_of_weight_minus_one_pair():
    E4 = eisenstein("E4", N)
    one, tau = LogQSeries.constant(1, N), LogQSeries.tau(N)
    for f in (one, tau):
        assert d_power(f, -1, 2) == (E4 * f).scale(Fraction(-1, 144))


# -- theta against finite differences ------------------------------------------


@given(st.floats(-0.5, 0.5), st.floats(0.8, 1.5))
@settings(max_examples=20, deadline=None)
def test_theta_matches_numeric_derivative(x, y):
    tau0 = complex(x, y)
    f = (LogQSeries.tau(30) * eisenstein("E4", 30) + eisenstein("E6", 30)).to_float()
    numeric = derivative(lambda t: f(t), tau0) / (2j * np.pi)
    assert abs(f.theta()(tau0) - numeric) <= 1e-6 * (1 + abs(numeric))


def test_theta_exact_and_float_agree():
    f = LogQSeries.from_terms({(1, 2): 3, (2, 0): -1}, 5)
    assert np.allclose(np.array(f.theta().to_float().coeffs), f.to_float().theta().coeffs)


# -- arithmetic properties ------------------------------------------------------


coeff = st.integers(-20, 20)


@st.composite
def series(draw, order=8, degree=2):
    terms = {(n, j): draw(coeff) for n in range(order) for j in range(degree + 1)}
    return LogQSeries.from_terms(terms, order)


@given(series(), series(), series())
@settings(max_examples=40, deadline=None)
def test_ring_axioms(f, g, h):
    assert (f * g) == (g * f)
    assert (f * (g + h)) == (f * g + f * h)
    assert ((f * g) * h) == (f * (g * h))


@given(series(), series())
@settings(max_examples=40, deadline=None)
def test_theta_is_a_derivation(f, g):
    assert (f * g).theta() == f.theta() * g + f * g.theta()


@given(series())
@settings(max_examples=30, deadline=None)
def test_basis_roundtrip(f):
    assert f.to_power().to_binomial() == f


@given(series())
@settings(max_examples=30, deadline=None)
def test_evaluation_matches_oracle(f):
    tau0 = 0.2 + 1.1j
    direct = sum(complex(f.to_float().coefficient(n, j)) * binom_eval(tau0, j) * np.exp(2j * np.pi * n * tau0)
                 for n in range(f.order) for j in range(f.degree + 1))
    assert abs(f(tau0) - direct) <= 1e-9 * (1 + abs(direct))


def test_product_truncation_and_offsets():
    f = LogQSeries.from_qseries([1, 2, 3], nmin=-1)
    g = LogQSeries.from_qseries([1, 1, 1, 1, 1])
    h = f * g
    assert h.nmin == -1 and h.length == 3


def test_fractional_exponents_carry():
    f = LogQSeries.from_qseries([1, 1], mu=Fraction(2, 3))
    g = f * f
    assert g.mu == Fraction(1, 3) and g.nmin == 1
    assert normalize_mu(Fraction(7, 3)) == (Fraction(1, 3), 2)
    with pytest.raises(ValueError):
        f + LogQSeries.from_qseries([1, 1])


def test_json_roundtrip():
    f = LogQSeries.from_terms({(-1, 0): 2, (3, 1): -5}, 6, mu=Fraction(1, 4))
    back = LogQSeries.from_json(f.to_json())
    assert back == f
    g = f.to_float().scale(0.3 + 0.1j)
    assert LogQSeries.from_json(g.to_json()).equals(g, 0)


def test_q_evaluation_oracle():
    E4 = eisenstein("E4", 30)
    assert abs(E4(0.1 + 1j) - q_eval(eisenstein_coeffs(4, 30), 0.1 + 1j)) < 1e-12


# -- classification -------------------------------------------------------------


def test_classify():
    assert classify_at_infinity(eisenstein("Delta", 10)) == CUSPIDAL
    assert classify_at_infinity(eisenstein("E4", 10)) == HOLOMORPHIC
    f = LogQSeries.from_terms({(-1, 1): 1, (0, 0): 1}, 5)
    assert classify_at_infinity(f) == MEROMORPHIC
    tiny = LogQSeries.from_qseries([1e-12, 1.0])
    assert classify_at_infinity(tiny, tol=1e-9) == CUSPIDAL


# -- binomial matrices ------------------------------------------------------------


@pytest.mark.parametrize("m", range(1, 7))
def test_b_matrix_identities(m):
    x, lam = sympy.symbols("x lambda")
    B, Binv = binom_matrix(m, x), binom_matrix_inverse(m, x)
    assert sympy.simplify(B * Binv - sympy.eye(m)) == sympy.zeros(m, m)
    lhs = jordan_block_symbolic(m, lam) * binom_matrix_inverse(m, x)
    rhs = lam * binom_matrix_inverse(m, x + 1)
    assert sympy.expand(lhs - rhs) == sympy.zeros(m, m)


@pytest.mark.parametrize("m", range(1, 7))
def test_b_matrix_numeric(m):
    tau = np.array([0.3 + 1.2j, -0.4 + 0.9j])
    B, Binv = binom_matrix_eval(m, tau), binom_matrix_inverse_eval(m, tau)
    assert np.allclose(B @ Binv, np.eye(m))


@pytest.mark.parametrize("j", range(6))
def test_binomial_power_conversion(j):
    x = Fraction(7, 3)

    def binom_eval(x, k):
        return Fraction(math.prod(x - i for i in range(k))) / math.factorial(k)

    coeffs = binom_to_power(j)
    assert sum(c * x**i for i, c in enumerate(coeffs)) == binom_eval(x, j)
    back = power_to_binom(j)
    assert sum(d * binom_eval(x, i) for i, d in enumerate(back)) == x**j


@pytest.mark.parametrize("m", range(1, 7))
def test_g_h_roundtrip_exact(m):
    g = [LogQSeries.from_terms({(n, j): (n + 2 * j + i) % 5 - 2 for n in range(6) for j in range(m)}, 6)
         for i in range(m)]
    h = g_to_h(g, m=m)
    assert all(a == b for a, b in zip(h_to_g(h, m=m), g))


def test_g_h_roundtrip_samples():
    tau = np.array([0.1 + 1j, 0.4 + 1.3j])
    g = [np.array([1 + 2j, 3.0]), np.array([0.5, -1j]), np.array([2.0, 1.0])]
    back = h_to_g(g_to_h(g, tau=tau), tau=tau)
    assert np.allclose(np.array(back), np.array(g))


def test_block_mismatch():
    with pytest.raises(BlockMismatch):
        g_to_h([LogQSeries.constant(1, 3)], m=2)


def test_h_is_periodic_for_jordan_block_data():
    # g(tau) = B_m(tau)^-1 h with periodic h satisfies g(tau+1) = J g(tau)
    m, tau = 4, np.array([0.2 + 1.1j])
    h = [np.exp(2j * np.pi * (i + 1) * tau) for i in range(m)]
    g = h_to_g(h, tau=tau)
    g1 = h_to_g([np.exp(2j * np.pi * (i + 1) * (tau + 1)) for i in range(m)], tau=tau + 1)
    J = np.eye(m) + np.eye(m, k=-1)
    assert np.allclose(np.array(g1)[:, 0], J @ np.array(g)[:, 0], atol=1e-12)
