"""Seeded generators shared by the test modules."""

import random

from anticomm.field import Q
from anticomm.matrix import Matrix, block_diag, inverse, jordan_block, rank


def rand_matrix(rng: random.Random, n: int, m: int | None = None, bound: int = 3, field=Q) -> Matrix:
    m = n if m is None else m
    return Matrix(field, [[rng.randint(-bound, bound) for _ in range(m)] for _ in range(n)])


def rand_unimodular(rng: random.Random, n: int, bound: int = 2, field=Q) -> Matrix:
    """Unit lower times unit upper triangular: determinant 1, integer inverse."""
    L = [[rng.randint(-bound, bound) if j < i else int(i == j) for j in range(n)] for i in range(n)]
    U = [[rng.randint(-bound, bound) if j > i else int(i == j) for j in range(n)] for i in range(n)]
    return Matrix(field, L) @ Matrix(field, U)


def rand_rank(rng: random.Random, n: int, r: int, bound: int = 3, field=Q) -> Matrix:
    """Product of random n x r and r x n factors, rejected until the rank is exactly r."""
    if r == 0:
        return Matrix.zeros(field, n)
    while True:
        A = rand_matrix(rng, n, r, bound, field) @ rand_matrix(rng, r, n, bound, field)
        if rank(A) == r:
            return A


def rand_partition(rng: random.Random, n: int) -> tuple[int, ...]:
    parts = []
    while n:
        k = rng.randint(1, n)
        parts.append(k)
        n -= k
    return tuple(sorted(parts, reverse=True))


def conjugate_by_random(rng: random.Random, D: Matrix) -> Matrix:
    S = rand_unimodular(rng, D.nrows, field=D.field)
    return S @ D @ inverse(S)


def rand_structured(rng: random.Random, n: int, field=Q) -> Matrix:
    """A random matrix mixing low rank products, nilpotent Jordan shapes and
    a repeated eigenvalue glued to a nilpotent part, hidden by a conjugation."""
    kind = rng.randrange(3)
    if kind == 0:
        return rand_rank(rng, n, rng.randint(0, n), field=field)
    if kind == 1:
        parts = rand_partition(rng, n)
        return conjugate_by_random(rng, block_diag([jordan_block(field, k) for k in parts], field))
    k = rng.randint(1, n)
    lam = rng.choice([-2, -1, 1, 2, 3])
    blocks = [jordan_block(field, m, lam) for m in rand_partition(rng, k)]
    if n > k:
        blocks += [jordan_block(field, m) for m in rand_partition(rng, n - k)]
    return conjugate_by_random(rng, block_diag(blocks, field))


def sample_with_rank(rng: random.Random, n: int, deficient: bool, field=Q) -> Matrix:
    """Rejection-sample ``rand_structured`` on ``rank < n/2`` (deficient) or ``>= n/2``."""
    while True:
        A = rand_structured(rng, n, field)
        if (2 * rank(A) < n) == deficient:
            return A
