import warnings

import numpy as np
import pytest

from logvvmf.errors import IllConditionedFit, NotScalarS2
from logvvmf.logq import CUSPIDAL, HOLOMORPHIC
from logvvmf.poincare import (
    ConvergenceWarning,
    PoincareParams,
    automorphy_J,
    b_rho,
    b_rho_inverse,
    build_holomorphic_form,
    extract_coefficients,
    lambda_rho,
    leading_term,
    modularity_residual,
    poincare_eval,
    poincare_values,
    weight_threshold,
)
from logvvmf.rep import direct_sum, standard_rep, trivial_rep
from logvvmf.sl2z import GammaElement, S, T, coset_reps
from oracles import eisenstein_coeffs, q_eval

TAU = 0.13 + 1.07j


def test_building_blocks():
    rho = direct_sum(standard_rep(), trivial_rep())
    L = lambda_rho(rho, [2, 3])
    assert np.allclose(np.diag(L), [2, 2, 3])
    x = np.array([0.2 + 1j])
    assert np.allclose(b_rho(rho, x) @ b_rho_inverse(rho, x), np.eye(3))
    J = automorphy_J((1, 2), S, 1j)
    assert np.allclose(J, np.diag([1j, -1]))


def test_params_check():
    with pytest.raises(ValueError):
        PoincareParams((0,), (7,), N=10).check(standard_rep())
    with pytest.raises(ValueError):
        PoincareParams((0,), (7,), N=0)


def test_trivial_rep_is_eisenstein_e8():
    s = poincare_eval(trivial_rep(), PoincareParams((0,), (8,), N=80), TAU)
    ref = q_eval(eisenstein_coeffs(8, 12), TAU)
    assert abs(s.value[0, 0] - ref) <= 1e-8 * abs(ref)
    assert s.folded and s.tail_bound < 1e-6


def test_folded_and_unfolded_agree():
    rho = standard_rep()
    a = poincare_eval(rho, PoincareParams((0,), (7, 7), N=60), TAU).value
    b = poincare_eval(rho, PoincareParams((0,), (7, 7), N=60, folded=False), TAU).value
    assert np.allclose(a, b, atol=1e-12)


def test_fold_needs_scalar_S2():
    rho = direct_sum(trivial_rep(), standard_rep())
    with pytest.raises(NotScalarS2):
        poincare_eval(rho, PoincareParams((0, 0), (8, 8, 8), N=10, folded=True), TAU)


def test_parity_columns_vanish():
    rho = standard_rep()
    s = poincare_eval(rho, PoincareParams((0,), (8, 7), N=40), TAU)
    assert s.column_mask == (0, 1) or list(s.column_mask) == [0, 1]
    assert np.all(s.value[:, 0] == 0)
    u = poincare_eval(rho, PoincareParams((0,), (8, 8), N=40, folded=False), TAU)
    assert np.max(np.abs(u.value)) <= 1e-12


def test_translation_residual_is_truncation_sized():
    # right translation moves cosets across the box boundary, so only the tail differs
    rho = standard_rep()
    res = [modularity_residual(rho, PoincareParams((0,), (7, 7), N=n), T, TAU) for n in (20, 40)]
    assert res[1] <= 1e-7 and res[1] < res[0]


def test_representative_independence():
    rho = standard_rep()
    params = PoincareParams((0,), (7, 7), N=30)
    reps = coset_reps(30)
    shifted = [reps[0]] + [T ** ((i % 5) - 2) @ g for i, g in enumerate(reps[1:])]
    a = poincare_values(rho, params, [TAU])[0]
    b = poincare_values(rho, params, [TAU], reps=shifted)[0]
    assert np.allclose(a, b, atol=1e-12)


def test_threads_bit_identical():
    rho = standard_rep()
    taus = np.array([TAU, 0.4 + 1.5j])
    one = poincare_values(rho, PoincareParams((0,), (7, 7), N=50), taus)[0]
    many = poincare_values(rho, PoincareParams((0,), (7, 7), N=50, threads=4), taus)[0]
    assert one.tobytes() == many.tobytes()


def test_modularity_improves_with_N():
    rho = standard_rep()
    g = T @ S
    res = [modularity_residual(rho, PoincareParams((0,), (7, 7), N=n), g, 1j) for n in (10, 20, 40)]
    assert res[0] > res[1] > res[2]


def test_low_weight_warns():
    assert weight_threshold(trivial_rep()) == pytest.approx(3.0)
    with pytest.warns(ConvergenceWarning):
        poincare_eval(trivial_rep(), PoincareParams((0,), (2,), N=5), TAU)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        poincare_eval(trivial_rep(), PoincareParams((0,), (8,), N=5), TAU)


def test_high_precision_path_agrees():
    rho = trivial_rep()
    lo = poincare_eval(rho, PoincareParams((0,), (8,), N=15), TAU).value
    hi = poincare_eval(rho, PoincareParams((0,), (8,), N=15, precision=30), TAU).value
    assert np.allclose(lo, hi, atol=1e-13)


def test_extraction_e8_small():
    ex = extract_coefficients(trivial_rep(), PoincareParams((0,), (8,), N=60), 3)
    got = [complex(x) for x in ex[0, 0].to_float().qseries(0)]
    assert np.allclose(got, eisenstein_coeffs(8, 3), rtol=1e-5)


def test_extraction_refuses_bad_conditioning():
    params = PoincareParams((0,), (8,), N=10)
    with pytest.raises(IllConditionedFit):
        extract_coefficients(trivial_rep(), params, 20, n_x=4)
    with pytest.raises(IllConditionedFit):
        extract_coefficients(trivial_rep(), params, 6, max_condition=1.0)


def test_leading_term_prediction():
    rho = standard_rep()
    lt = leading_term(rho, PoincareParams((0,), (7, 7)), 1, 0)
    assert lt.degree == 1 and lt.to_float().coefficient(0, 1) == 1
    assert leading_term(rho, PoincareParams((0,), (7, 7)), 0, 1).is_zero()


def test_holomorphic_form_from_negative_shift():
    rho = standard_rep()
    hf = build_holomorphic_form(rho, PoincareParams((-1,), (13, 13), N=60), v=1, Nq=6)
    assert hf.rank == 2
    assert all(c in (HOLOMORPHIC, CUSPIDAL) for c in hf.classifications)
    with pytest.raises(ValueError):
        build_holomorphic_form(rho, PoincareParams((-2,), (13, 13), N=20), v=1, Nq=4)
