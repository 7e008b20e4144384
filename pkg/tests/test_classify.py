import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from anticomm.classify import (
    Reason,
    SignClass,
    Verdict,
    adjugate_annihilation_check,
    adjugate_anticommute_check,
    classify,
    companion2_formula,
    companion_upper_det,
    kron_operator,
    kron_operator_rank,
    phi_nonneg,
    phi_nonpos,
    phi_zero,
    scalar_square_test,
    square_form_value,
    two_square_form_value,
)
from anticomm.errors import AlphaIsSquare, BadShape, PreconditionViolated, TooLarge, UnsupportedField
from anticomm.field import GF, Q
from anticomm.matrix import Matrix, block_diag, jordan_block, phi, rank

from helpers import rand_matrix, sample_with_rank


def test_identically_zero_needs_rank_reason():
    with pytest.raises(ValueError):
        SignClass(Verdict.IDENTICALLY_ZERO, Reason.WITNESSED)


def test_rank_deficient_is_identically_zero():
    A = block_diag([jordan_block(Q, 2), Matrix.zeros(Q, 2), Matrix.zeros(Q, 1)])
    res = classify(A, seed=1, samples=100)
    assert [str(r.verdict) for r in res.values()] == ["IdenticallyZero", "NonNegative", "NonPositive"]
    assert all(r.reason is Reason.RANK_DEFICIENT for r in res.values())


def test_odd_dimension_is_indefinite_with_both_signs():
    sc = phi_zero(jordan_block(Q, 3), seed=0, samples=10)
    assert sc.verdict is Verdict.INDEFINITE
    values = [v for _, v in sc.witnesses]
    assert min(values) < 0 < max(values)


def test_negative_scalar_square_is_nonnegative():
    A = Matrix(Q, [[0, -3], [1, 0]])
    assert scalar_square_test(A).alpha == -3
    assert phi_nonneg(A).verdict is Verdict.NON_NEGATIVE
    assert phi_nonneg(A).reason is Reason.NEG_SCALAR_SQUARE
    assert phi_nonpos(A).verdict is Verdict.NON_NEGATIVE


def test_positive_scalar_square_is_indefinite():
    sc = phi_nonneg(Matrix(Q, [[0, 2], [1, 0]]), seed=3, samples=2000)
    assert sc.verdict is Verdict.INDEFINITE
    assert any(v < 0 for _, v in sc.witnesses)


def test_gf_rejected_for_sign_questions():
    with pytest.raises(UnsupportedField):
        phi_nonneg(Matrix.identity(GF(5), 2))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32), st.sampled_from([3, 4, 5]))
def test_adjugate_annihilates_when_rank_deficient(seed, n):
    rng = random.Random(seed)
    A = sample_with_rank(rng, n, deficient=True)
    X = rand_matrix(rng, n, bound=4)
    assert adjugate_annihilation_check(A, X)
    assert adjugate_anticommute_check(A, X).is_zero()
    assert phi(A, X) == 0


def test_adjugate_precondition():
    with pytest.raises(PreconditionViolated):
        adjugate_annihilation_check(Matrix.identity(Q, 2), Matrix.identity(Q, 2))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32))
def test_square_form(seed):
    rng = random.Random(seed)
    A = block_diag([jordan_block(Q, 2)] * 2)
    X = rand_matrix(rng, 4, bound=5)
    value, root = square_form_value(A, X)
    assert value == root * root >= 0


def test_square_form_shape():
    with pytest.raises(BadShape):
        square_form_value(jordan_block(Q, 3), Matrix.identity(Q, 3))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32), st.sampled_from([-1, -5, 3, Fraction(1, 2)]))
def test_two_square_form(seed, alpha):
    rng = random.Random(seed)
    A = block_diag([Matrix(Q, [[0, alpha], [1, 0]])] * 2)
    X = rand_matrix(rng, 4, bound=5)
    value, r, s = two_square_form_value(A, X)
    assert value == r * r - alpha * s * s


def test_two_square_rejects_square_alpha():
    with pytest.raises(AlphaIsSquare):
        two_square_form_value(Matrix(Q, [[0, 4], [1, 0]]), Matrix.identity(Q, 2))


def test_companion_upper_det_and_shape():
    A = Matrix(Q, [[0, 0, 0, 3], [1, 0, 0, 1], [0, 1, 0, 0], [0, 0, 1, 2]])
    X = Matrix(Q, [[0, 2, 9, 9], [0, 0, 3, 9], [0, 0, 0, 5], [0, 0, 0, 0]])
    assert companion_upper_det(A, X) == 2 * (2 + 3) * (3 + 5) * 5
    with pytest.raises(BadShape):
        companion_upper_det(A, Matrix.identity(Q, 4))


@pytest.mark.parametrize("alpha,beta,a", [(1, 2, 3), (-1, 0, 5), (Fraction(1, 3), -2, Fraction(-1, 2))])
def test_companion2_formula(alpha, beta, a):
    assert companion2_formula(alpha, beta, a) == 1 - 2 * Q.coerce(a) * Q.coerce(beta)


def test_kronecker_operator_matches_map():
    rng = random.Random(0)
    A = rand_matrix(rng, 3)
    X = rand_matrix(rng, 3)
    vec = Matrix.column(Q, [x for row in X.rows for x in row])
    image = kron_operator(A) @ vec
    assert [image[i, 0] for i in range(9)] == [x for row in (A @ X + X @ A).rows for x in row]


def test_kronecker_ranks():
    assert kron_operator_rank(Matrix.identity(Q, 3)) == 9
    # AX + XA = [[c, a + d], [0, c]] for A = J_2, so the image is two-dimensional
    assert kron_operator_rank(jordan_block(Q, 2)) == 2
    with pytest.raises(TooLarge):
        kron_operator_rank(Matrix.identity(Q, 13))


def test_nonpos_witness_is_positive():
    rng = random.Random(11)
    for _ in range(10):
        A = sample_with_rank(rng, 3, deficient=False)
        sc = phi_nonpos(A, seed=1, samples=100)
        assert any(v > 0 and phi(A, X) == v for X, v in sc.witnesses)
        assert rank(A) >= 2
