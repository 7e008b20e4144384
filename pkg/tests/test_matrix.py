import itertools
import pickle
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from anticomm.errors import DimensionMismatch, FieldMismatch, ParseError, SingularTransform
from anticomm.field import GF, Q
from anticomm.matrix import (
    Matrix,
    Permutation,
    adjugate,
    anticommutator,
    block_diag,
    determinant,
    format_matrix,
    inverse,
    jordan_block,
    kernel_basis,
    kron,
    parse_matrix,
    permutation_matrix,
    phi,
    rank,
    solve,
)

from helpers import rand_matrix


def leibniz(M: Matrix):
    n = M.nrows
    total = 0
    for perm in itertools.permutations(range(n)):
        sign = Permutation(perm).signature
        term = sign
        for i in range(n):
            term *= M[i, perm[i]]
        total += term
    return M.field.reduce(total)


def to_sympy(M: Matrix):
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) if isinstance(x, Fraction) else x
                          for x in row] for row in M.rows])


def small_q_matrix(max_n=5):
    return st.integers(1, max_n).flatmap(lambda n: st.lists(
        st.lists(st.fractions(min_value=-6, max_value=6, max_denominator=4), min_size=n, max_size=n),
        min_size=n, max_size=n)).map(lambda rows: Matrix(Q, rows))


def gf_matrix(max_n=4):
    return st.tuples(st.sampled_from([2, 3, 5, 7]), st.integers(1, max_n)).flatmap(
        lambda pn: st.lists(st.lists(st.integers(0, pn[0] - 1), min_size=pn[1], max_size=pn[1]),
                            min_size=pn[1], max_size=pn[1]).map(lambda rows, p=pn[0]: Matrix(GF(p), rows)))


@settings(max_examples=60, deadline=None)
@given(small_q_matrix())
def test_determinant_matches_sympy(M):
    assert determinant(M) == to_sympy(M).det()


@settings(max_examples=60, deadline=None)
@given(gf_matrix())
def test_determinant_matches_leibniz_over_gf(M):
    assert determinant(M) == leibniz(M)


@settings(max_examples=40, deadline=None)
@given(small_q_matrix())
def test_adjugate_identity(M):
    n = M.nrows
    assert adjugate(M) @ M == Matrix.scalar(Q, n, determinant(M))
    assert adjugate(M) == Matrix(Q, to_sympy(M).adjugate().tolist())


@settings(max_examples=40, deadline=None)
@given(small_q_matrix())
def test_rank_nullity_and_kernel(M):
    assert rank(M) == to_sympy(M).rank()
    ker = kernel_basis(M)
    assert len(ker) + rank(M) == M.ncols
    for v in ker:
        assert (M @ v).is_zero()


@settings(max_examples=40, deadline=None)
@given(small_q_matrix(), st.integers(0, 2**32))
def test_det_multiplicative(M, seed):
    N = rand_matrix(random.Random(seed), M.nrows)
    assert determinant(M @ N) == determinant(M) * determinant(N)


def test_inverse_and_solve():
    A = Matrix(Q, [[2, 1], [7, 4]])
    assert inverse(A) == Matrix(Q, [[4, -1], [-7, 2]])
    x = solve(A, Matrix.column(Q, [1, 0]))
    assert A @ x == Matrix.column(Q, [1, 0])
    with pytest.raises(SingularTransform):
        inverse(Matrix(Q, [[1, 2], [2, 4]]))


def test_big_integer_determinant():
    # entries large enough that int64 would overflow
    M = Matrix(Q, [[10**12 + i + j * j for j in range(6)] for i in range(6)])
    assert determinant(M) == to_sympy(M).det()
    H = Matrix(Q, [[Fraction(1, i + j + 1) for j in range(7)] for i in range(7)])
    assert determinant(H) == sympy.Matrix(7, 7, lambda i, j: sympy.Rational(1, i + j + 1)).det()


def test_mismatches_raise():
    with pytest.raises(DimensionMismatch):
        Matrix.identity(Q, 2) @ Matrix.identity(Q, 3)
    with pytest.raises(FieldMismatch):
        Matrix.identity(Q, 2) + Matrix.identity(GF(3), 2)


def test_permutation_conventions():
    s = Permutation((1, 2, 0))
    t = Permutation((0, 2, 1))
    P = lambda x: permutation_matrix(x, Q)
    assert P(s) @ P(t) == P(s.compose(t))
    assert P(s).T == P(s.inverse())
    assert determinant(P(t)) == t.signature == -1


def test_jordan_block_and_kron():
    J = jordan_block(Q, 3)
    assert J ** 3 == Matrix.zeros(Q, 3) and J ** 2 != Matrix.zeros(Q, 3)
    K = kron(Matrix.identity(Q, 2), J)
    assert K == block_diag([J, J])


def test_phi_is_det_of_anticommutator():
    A = Matrix(Q, [[1, 2], [3, 4]])
    X = Matrix(Q, [[0, 1], [1, 0]])
    assert anticommutator(A, X) == A @ X + X @ A
    assert phi(A, X) == determinant(A @ X + X @ A)


def test_text_roundtrip_and_override():
    M = Matrix(Q, [[Fraction(1, 2), -3], [0, 4]])
    assert parse_matrix(format_matrix(M)) == M
    assert parse_matrix("field Q\n2 2\n1 2\n3 4\n", GF(3)) == Matrix(GF(3), [[1, 2], [0, 1]])


@pytest.mark.parametrize("text", ["", "field Q\n2 2\n1 2\n", "field Q\n1 2\n1\n", "field 4\n1 1\n1\n",
                                  "field Q\n1 1\nabc\n"])
def test_parse_rejects_malformed(text):
    with pytest.raises(ParseError):
        parse_matrix(text)


def test_pickle_and_hash():
    M = Matrix(GF(5), [[1, 2], [3, 4]])
    assert pickle.loads(pickle.dumps(M)) == M
    assert len({M, Matrix(GF(5), [[6, 7], [8, 9]])}) == 1
