"""Similarity invariants: Fitting split, nilpotent Jordan structure, invariant factors."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotMonic, NotNilpotent, NotSquare
from .field import Field
from .matrix import (
    Matrix,
    block_diag,
    column_space_basis,
    inverse,
    jordan_block,
    kernel_basis,
    rank,
)
from .poly import Poly


@dataclass(frozen=True)
class FittingDecomposition:
    """``transform^-1 A transform = diag(invertible_part, nilpotent_part)``."""

    transform: Matrix
    invertible_part: Matrix
    nilpotent_part: Matrix


@dataclass(frozen=True)
class NilpotentPartition:
    block_sizes: tuple[int, ...]

    @property
    def size(self) -> int:
        return sum(self.block_sizes)

    def jordan_matrix(self, field: Field) -> Matrix:
        return block_diag([jordan_block(field, k) for k in self.block_sizes], field)


@dataclass(frozen=True)
class InvariantFactors:
    factors: tuple[Poly, ...]

    def product(self, field: Field) -> Poly:
        out = Poly(field, (1,))
        for f in self.factors:
            out = out * f
        return out


def _square(A: Matrix):
    if not A.is_square:
        raise NotSquare(f"matrix of shape {A.shape} is not square")


def _vec_rank(field: Field, vectors: list[tuple], n: int) -> int:
    if not vectors:
        return 0
    return rank(Matrix.from_columns(field, vectors, n))


def fitting_decompose(A: Matrix) -> FittingDecomposition:
    _square(A)
    F, n = A.field, A.nrows
    An = A ** n
    image = column_space_basis(An)
    kernel = kernel_basis(An)
    P = Matrix.from_columns(F, image + kernel, n)
    D = inverse(P) @ A @ P
    m = len(image)
    assert D.block(0, m, m, n).is_zero() and D.block(m, n, 0, m).is_zero()
    return FittingDecomposition(P, D.block(0, m, 0, m), D.block(m, n, m, n))


def is_nilpotent(N: Matrix) -> bool:
    _square(N)
    return (N ** N.nrows).is_zero()


def nilpotent_partition(N: Matrix) -> NilpotentPartition:
    """Block sizes from the rank sequence of powers of ``N``."""
    if not is_nilpotent(N):
        raise NotNilpotent("matrix is not nilpotent")
    n = N.nrows
    ranks = [n]
    power = Matrix.identity(N.field, n)
    while ranks[-1] > 0:
        power = power @ N
        ranks.append(rank(power))
    # at_least[k] = number of blocks of size >= k
    at_least = [ranks[k - 1] - ranks[k] for k in range(1, len(ranks))] + [0]
    sizes: list[int] = []
    for k in range(len(at_least) - 1, 0, -1):
        sizes.extend([k] * (at_least[k - 1] - at_least[k]))
    return NilpotentPartition(tuple(sizes))


def nilpotent_jordanize(N: Matrix) -> tuple[Matrix, NilpotentPartition]:
    """Return ``(P, partition)`` with ``P^-1 N P`` the Jordan matrix of the partition.

    Chains are built top-down: at level ``k`` new chain tops extend a basis of
    ``ker N^(k-1)`` plus the images of longer chains to a basis of ``ker N^k``.
    """
    if not is_nilpotent(N):
        raise NotNilpotent("matrix is not nilpotent")
    F, n = N.field, N.nrows
    if n == 0:
        return Matrix.identity(F, 0), NilpotentPartition(())

    powers = [Matrix.identity(F, n)]
    while not powers[-1].is_zero():
        powers.append(powers[-1] @ N)
    index = len(powers) - 1
    kernels = [[tuple(r[0] for r in v.rows) for v in kernel_basis(P)] for P in powers]

    def apply(M: Matrix, v: tuple) -> tuple:
        return tuple(F.reduce(sum(a * b for a, b in zip(row, v))) for row in M.rows)

    tops: list[tuple[int, tuple]] = []
    for k in range(index, 0, -1):
        spanning = list(kernels[k - 1]) + [apply(powers[length - k], t) for length, t in tops]
        current = _vec_rank(F, spanning, n)
        for v in kernels[k]:
            if _vec_rank(F, spanning + [v], n) > current:
                spanning.append(v)
                current += 1
                tops.append((k, v))

    columns = []
    for length, t in tops:
        columns.extend(apply(powers[length - 1 - i], t) for i in range(length))
    P = Matrix.from_columns(F, columns, n)
    partition = NilpotentPartition(tuple(length for length, _ in tops))
    assert inverse(P) @ N @ P == partition.jordan_matrix(F)
    return P, partition


def companion_matrix(p: Poly) -> Matrix:
    """Ones on the subdiagonal, negated coefficients in the last column."""
    if not p.is_monic():
        raise NotMonic(f"{p!r} is not monic")
    d = p.degree
    if d < 1:
        raise NotMonic("companion matrix needs degree >= 1")
    F = p.field
    rows = [[0] * d for _ in range(d)]
    for i in range(d):
        if i > 0:
            rows[i][i - 1] = 1
        rows[i][d - 1] = F.neg(p.coeffs[i])
    return Matrix(F, rows)


def frobenius_form(factors: InvariantFactors | list[Poly], field: Field) -> Matrix:
    """Block diagonal of companion matrices."""
    fs = factors.factors if isinstance(factors, InvariantFactors) else factors
    return block_diag([companion_matrix(f) for f in fs], field)


def charpoly(A: Matrix) -> Poly:
    """``det(xI - A)`` via reduction to upper Hessenberg form (any field)."""
    _square(A)
    F, n = A.field, A.nrows
    H = [list(r) for r in A.rows]
    for m in range(1, n - 1):
        piv = next((i for i in range(m, n) if H[i][m - 1] != 0), None)
        if piv is None:
            continue
        if piv != m:
            H[piv], H[m] = H[m], H[piv]
            for row in H:
                row[piv], row[m] = row[m], row[piv]
        inv = F.invert(H[m][m - 1])
        for i in range(m + 1, n):
            u = F.mul(H[i][m - 1], inv)
            if u == 0:
                continue
            H[i] = [F.sub(a, F.mul(u, b)) for a, b in zip(H[i], H[m])]
            for row in H:
                row[m] = F.add(row[m], F.mul(u, row[i]))
    x = Poly.x(F)
    p = [Poly(F, (1,))]
    for m in range(1, n + 1):
        acc = (x - H[m - 1][m - 1]) * p[m - 1]
        prod = 1
        for i in range(m - 1, 0, -1):
            prod = F.mul(prod, H[i][i - 1])
            acc = acc - p[i - 1] * F.mul(H[i - 1][m - 1], prod)
        p.append(acc)
    return p[n]


def smith_diagonal(M: list[list[Poly]]) -> list[Poly]:
    """Diagonal of the Smith normal form of a square matrix over K[x].

    Pivots on the lowest-degree nonzero entry; entries are made monic at the end.
    """
    n = len(M)
    M = [list(r) for r in M]
    diag: list[Poly] = []
    for t in range(n):
        while True:
            best = None
            for i in range(t, n):
                for j in range(t, n):
                    e = M[i][j]
                    if not e.is_zero() and (best is None or e.degree < M[best[0]][best[1]].degree):
                        best = (i, j)
            if best is None:
                diag.extend(Poly(M[0][0].field) for _ in range(t, n))
                return diag
            i, j = best
            M[t], M[i] = M[i], M[t]
            for row in M:
                row[t], row[j] = row[j], row[t]
            pivot = M[t][t]
            clean = True
            for i in range(t + 1, n):
                if M[i][t].is_zero():
                    continue
                q, r = divmod(M[i][t], pivot)
                M[i] = [a - q * b for a, b in zip(M[i], M[t])]
                clean = clean and r.is_zero()
            for j in range(t + 1, n):
                if M[t][j].is_zero():
                    continue
                q, r = divmod(M[t][j], pivot)
                for row in M:
                    row[j] = row[j] - q * row[t]
                clean = clean and r.is_zero()
            if not clean:
                continue
            bad = next(((i, j) for i in range(t + 1, n) for j in range(t + 1, n)
                        if not (M[i][j] % pivot).is_zero()), None)
            if bad is None:
                break
            M[t] = [a + b for a, b in zip(M[t], M[bad[0]])]
        diag.append(M[t][t].monic())
    return diag


def invariant_factors(A: Matrix) -> InvariantFactors:
    _square(A)
    F, n = A.field, A.nrows
    x = Poly.x(F)
    char_matrix = [[(x if i == j else Poly(F)) - A[i, j] for j in range(n)] for i in range(n)]
    diag = smith_diagonal(char_matrix)
    return InvariantFactors(tuple(d for d in diag if d.degree >= 1))
