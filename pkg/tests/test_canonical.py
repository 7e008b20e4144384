import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from anticomm.canonical import (
    charpoly,
    companion_matrix,
    fitting_decompose,
    frobenius_form,
    invariant_factors,
    is_nilpotent,
    nilpotent_jordanize,
    nilpotent_partition,
)
from anticomm.errors import NotMonic, NotNilpotent
from anticomm.field import GF, Q
from anticomm.matrix import Matrix, block_diag, determinant, inverse, jordan_block, rank
from anticomm.poly import Poly

from helpers import conjugate_by_random, rand_partition, rand_structured

seeds = st.integers(0, 2**32)


def sympy_charpoly(M: Matrix):
    x = sympy.Symbol("x")
    coeffs = sympy.Matrix(M.tolist()).charpoly(x).all_coeffs()[::-1]
    return tuple(int(c) if c.q == 1 else c for c in coeffs)


@settings(max_examples=50, deadline=None)
@given(seeds, st.integers(1, 6))
def test_fitting_split(seed, n):
    A = rand_structured(random.Random(seed), n)
    fit = fitting_decompose(A)
    P = fit.transform
    assert inverse(P) @ A @ P == block_diag([fit.invertible_part, fit.nilpotent_part])
    assert fit.invertible_part.nrows == 0 or determinant(fit.invertible_part) != 0
    assert is_nilpotent(fit.nilpotent_part)


@settings(max_examples=50, deadline=None)
@given(seeds, st.integers(1, 7))
def test_jordanize_recovers_hidden_partition(seed, n):
    rng = random.Random(seed)
    parts = rand_partition(rng, n)
    N = conjugate_by_random(rng, block_diag([jordan_block(Q, k) for k in parts]))
    assert nilpotent_partition(N).block_sizes == parts
    P, part = nilpotent_jordanize(N)
    assert part.block_sizes == parts
    assert inverse(P) @ N @ P == part.jordan_matrix(Q)


def test_jordanize_over_gf():
    F = GF(3)
    N = block_diag([jordan_block(F, 3), jordan_block(F, 1), jordan_block(F, 2)], F)
    P, part = nilpotent_jordanize(N)
    assert part.block_sizes == (3, 2, 1)


def test_not_nilpotent_rejected():
    with pytest.raises(NotNilpotent):
        nilpotent_partition(Matrix.identity(Q, 2))


@settings(max_examples=50, deadline=None)
@given(seeds, st.integers(1, 6))
def test_charpoly_and_invariant_factors_against_sympy(seed, n):
    A = rand_structured(random.Random(seed), n)
    cp = charpoly(A)
    assert cp.coeffs == sympy_charpoly(A)
    inv = invariant_factors(A)
    assert inv.product(Q) == cp
    for f, g in zip(inv.factors, inv.factors[1:]):
        assert f.divides(g)
    # rational canonical form is similar to A: same invariant factors
    assert invariant_factors(frobenius_form(inv, Q)) == inv


def test_invariant_factors_known_cases():
    x = Poly.x(Q)
    assert invariant_factors(Matrix.scalar(Q, 3, 2)).factors == (x - 2,) * 3
    assert invariant_factors(jordan_block(Q, 3)).factors == (x ** 3,)
    A = block_diag([jordan_block(Q, 2), Matrix.zeros(Q, 1)])
    assert invariant_factors(A).factors == (x, x ** 2)


def test_companion_matrix():
    f = Poly(Q, (5, -3, 1))
    C = companion_matrix(f)
    assert C == Matrix(Q, [[0, -5], [1, 3]])
    assert charpoly(C) == f
    with pytest.raises(NotMonic):
        companion_matrix(Poly(Q, (1, 2)))


def test_charpoly_over_gf_matches_cayley_hamilton():
    rng = random.Random(7)
    F = GF(5)
    for _ in range(20):
        A = Matrix(F, [[rng.randrange(5) for _ in range(4)] for _ in range(4)])
        cp = charpoly(A)
        acc = Matrix.zeros(F, 4)
        for k, c in enumerate(cp.coeffs):
            acc = acc + (A ** k).scale(c)
        assert acc.is_zero()
        assert rank(A) <= 4
