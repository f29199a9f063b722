import cmath
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logvvmf import io
from logvvmf._exact import gaussian_to_complex
from logvvmf.errors import DefectiveInput, NotScalarS2, RelationViolation
from logvvmf.rep import (
    BlockSpec,
    Representation,
    direct_sum,
    evaluate,
    jordanize_T,
    modified_jordan_block,
    nontriviality_holds,
    power_T,
    scalar_S2,
    split_by_S2,
    standard_rep,
    trivial_rep,
    unipotent_rep,
    validate,
)
from logvvmf.sl2z import GammaElement, S, T

from test_sl2z import elements


def character(a: int) -> Representation:
    """The character with rho(T) = exp(2 pi i a/12), rho(S) = (-i)^a."""
    return Representation([[(-1j) ** a]], BlockSpec(((1, Fraction(a, 12)),)))


REPS = [trivial_rep(), standard_rep(), unipotent_rep(3), character(1), character(5),
        direct_sum(standard_rep(), character(2))]


def test_modified_jordan_block():
    J = modified_jordan_block(3, 2)
    assert np.array_equal(J, [[2, 0, 0], [2, 2, 0], [0, 2, 2]])


def test_blockspec_offsets_and_eigenvalues():
    spec = BlockSpec(((2, Fraction(1, 3)), (1, Fraction(4, 3))))
    assert spec.offsets == [0, 2, 3]
    assert spec.mus[1] == Fraction(1, 3)  # reduced into [0, 1)
    assert spec.block_of_row(2) == 1
    with pytest.raises(ValueError):
        BlockSpec(((0, 0),))


@pytest.mark.parametrize("rho", REPS, ids=range(len(REPS)))
def test_relations(rho):
    assert validate(rho).ok


def test_relations_violation():
    bad = Representation([[1j]], BlockSpec(((1, Fraction(0)),)))
    with pytest.raises(RelationViolation):
        validate(bad)


def test_standard_rep_is_conjugated_defining_rep():
    for g in (S, T, GammaElement(2, 3, 3, 5)):
        assert np.allclose(evaluate(standard_rep(), g), [[g.d, g.c], [g.b, g.a]])


@pytest.mark.parametrize("rho", REPS, ids=range(len(REPS)))
@given(g=elements(bound=300), h=elements(bound=300))
@settings(max_examples=30, deadline=None)
def test_homomorphism(rho, g, h):
    lhs = evaluate(rho, g @ h)
    rhs = evaluate(rho, g) @ evaluate(rho, h)
    assert np.allclose(lhs, rhs, atol=1e-6 * (1 + np.abs(rhs).max()))


@given(st.integers(-40, 40))
def test_power_T_exact_matches_float(l):
    rho = unipotent_rep(3)
    A = power_T(rho, l, exact=True)
    B = power_T(rho, l)
    assert np.allclose(np.array([[gaussian_to_complex(x) for x in row] for row in A.tolist()]), B)
    assert np.allclose(B, np.linalg.matrix_power(rho.rho_T, l) if l >= 0
                       else np.linalg.matrix_power(np.linalg.inv(rho.rho_T), -l))


def test_exact_evaluation():
    rho = standard_rep()
    g = GammaElement(7, 2, 10, 3)
    M = evaluate(rho, g, exact=True)
    assert [[gaussian_to_complex(x) for x in row] for row in M.tolist()] == [[3, 10], [2, 7]]


def test_scalar_S2_and_parity():
    assert scalar_S2(trivial_rep()) == 1
    assert scalar_S2(standard_rep()) == -1
    assert nontriviality_holds(standard_rep(), 7)
    assert not nontriviality_holds(standard_rep(), 8)
    mixed = direct_sum(trivial_rep(), standard_rep())
    assert scalar_S2(mixed) is None
    with pytest.raises(NotScalarS2):
        nontriviality_holds(mixed, 4)


def test_split_by_S2():
    mixed = direct_sum(trivial_rep(), standard_rep())
    sp = split_by_S2(mixed)
    assert sp.plus.p == 1 and sp.minus.p == 2
    Pp, Pm = sp.projector_plus, sp.projector_minus
    assert np.allclose(Pp + Pm, np.eye(3))
    assert np.allclose(Pp @ Pp, Pp)


def test_jordanize_recovers_blocks():
    rng = np.random.default_rng(1)
    J = modified_jordan_block(3, 1)
    Q = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    A = Q @ J @ np.linalg.inv(Q)
    spec, Q2 = jordanize_T(A, [0])
    assert spec.blocks == ((3, Fraction(0)),)
    assert np.allclose(np.linalg.inv(Q2) @ A @ Q2, J, atol=1e-8)


def test_jordanize_refuses_near_defective():
    A = np.array([[1, 0], [1e-7, 1]], dtype=complex)
    with pytest.raises(DefectiveInput):
        jordanize_T(A, [0])


def test_json_roundtrip(tmp_path):
    rho = direct_sum(standard_rep(), character(5))
    path = tmp_path / "rep.json"
    io.save_rep(rho, path)
    back = io.load_rep(path)
    assert back.spec == rho.spec
    assert np.allclose(back.rho_S, rho.rho_S)
    assert io.load_rep(path).exact == rho.exact


def test_character_eigenvalue():
    rho = character(1)
    assert abs(rho.rho_T[0, 0] - cmath.exp(2j * cmath.pi / 12)) < 1e-15
