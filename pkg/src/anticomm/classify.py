"""Sign classification of ``phi(X) = det(AX + XA)`` and closed-form determinant identities.

Over Q the verdicts are decided from rank and ``A^2`` alone; sampling only
attaches concrete witnesses.  Every sampler takes an explicit seed.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from typing import Optional

from .canonical import nilpotent_jordanize
from .errors import (
    AlphaIsSquare,
    BadShape,
    FormulaMismatch,
    NotSquare,
    PreconditionViolated,
    TooLarge,
    UnsupportedField,
)
from .field import Field, Q
from .matrix import (
    Matrix,
    adjugate,
    anticommutator,
    block_diag,
    determinant,
    inverse,
    kron,
    phi,
    rank,
)
from .witness import assemble_witness

DEFAULT_SAMPLES = 10_000
SAMPLE_BOUND = 5


class Verdict(enum.Enum):
    IDENTICALLY_ZERO = "IdenticallyZero"
    NON_NEGATIVE = "NonNegative"
    NON_POSITIVE = "NonPositive"
    INDEFINITE = "Indefinite"

    def __str__(self):
        return self.value


class Reason(enum.Enum):
    RANK_DEFICIENT = "RankDeficient"
    NEG_SCALAR_SQUARE = "NegScalarSquare"
    WITNESSED = "Witnessed"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class SignClass:
    verdict: Verdict
    reason: Reason
    witnesses: tuple = ()  # (X, det(AX + XA)) pairs

    def __post_init__(self):
        if self.verdict is Verdict.IDENTICALLY_ZERO and self.reason is not Reason.RANK_DEFICIENT:
            raise ValueError("IdenticallyZero must be justified by rank deficiency")

    @property
    def witness(self):
        return self.witnesses[0] if self.witnesses else None

    def line(self) -> str:
        return f"verdict={self.verdict} reason={self.reason}"


@dataclass(frozen=True)
class ScalarSquareResult:
    alpha: Optional[object]


def _require_square(A: Matrix):
    if not A.is_square:
        raise NotSquare(f"matrix of shape {A.shape} is not square")


def _require_rationals(A: Matrix):
    if not A.field.is_rational:
        raise UnsupportedField("sign classification needs Q; use the finite-field scans instead")


def _rank_deficient(A: Matrix) -> bool:
    return 2 * rank(A) < A.nrows


def scalar_square_test(A: Matrix) -> ScalarSquareResult:
    """``alpha`` with ``A^2 = alpha I``, if any."""
    _require_square(A)
    n = A.nrows
    S = A @ A
    alpha = S[0, 0] if n else 0
    if S == Matrix.scalar(A.field, n, alpha):
        return ScalarSquareResult(alpha)
    return ScalarSquareResult(None)


def _nonneg_square(A: Matrix) -> bool:
    alpha = scalar_square_test(A).alpha
    return A.nrows % 2 == 0 and alpha is not None and alpha <= 0


def random_matrix(rng: random.Random, field: Field, n: int, bound: int) -> Matrix:
    return Matrix(field, [[rng.randint(-bound, bound) for _ in range(n)] for _ in range(n)])


def search_sign(A: Matrix, sign: int, *, seed: int, samples: int = DEFAULT_SAMPLES, bound: int = SAMPLE_BOUND,
                candidates=()):
    """First ``(X, phi(X))`` with the requested strict sign, or None.

    ``candidates`` are tried before the seeded random stream.
    """
    for X in candidates:
        v = phi(A, X)
        if (v > 0) - (v < 0) == sign:
            return X, v
    rng = random.Random(seed)
    F, n = A.field, A.nrows
    for _ in range(samples):
        X = random_matrix(rng, F, n, bound)
        v = phi(A, X)
        if (v > 0) - (v < 0) == sign:
            return X, v
    return None


def _nonzero_witness(A: Matrix, seed: int):
    w = assemble_witness(A, seed=seed)
    X = w.transform
    return X, phi(A, X)


def _standard_candidates(A: Matrix, X: Matrix):
    F, n = A.field, A.nrows
    I = Matrix.identity(F, n)
    return [X, -X, I, -I]


def phi_zero(A: Matrix, *, seed: int = 0, samples: int = DEFAULT_SAMPLES) -> SignClass:
    """Identically zero iff ``rank(A) < n/2``; otherwise carries a nonzero evaluation."""
    _require_square(A)
    _require_rationals(A)
    if _rank_deficient(A):
        return SignClass(Verdict.IDENTICALLY_ZERO, Reason.RANK_DEFICIENT)
    X, v = _nonzero_witness(A, seed)
    if _nonneg_square(A):
        return SignClass(Verdict.NON_NEGATIVE, Reason.NEG_SCALAR_SQUARE, ((X, v),))
    return SignClass(Verdict.INDEFINITE, Reason.WITNESSED, _both_signs(A, X, v, seed, samples))


def _both_signs(A: Matrix, X: Matrix, v, seed: int, samples: int) -> tuple:
    if A.nrows % 2:
        return ((X, v), (-X, -v))
    want = -1 if v > 0 else 1
    found = search_sign(A, want, seed=seed, samples=samples, candidates=_standard_candidates(A, X)[1:])
    return ((X, v),) + ((found,) if found else ())


def phi_nonneg(A: Matrix, *, seed: int = 0, samples: int = DEFAULT_SAMPLES) -> SignClass:
    """NonNegative iff ``rank(A) < n/2`` or ``A^2 = alpha I`` with ``alpha <= 0`` (n even)."""
    _require_square(A)
    _require_rationals(A)
    if _rank_deficient(A):
        return SignClass(Verdict.NON_NEGATIVE, Reason.RANK_DEFICIENT)
    if _nonneg_square(A):
        X, v = _nonzero_witness(A, seed)
        return SignClass(Verdict.NON_NEGATIVE, Reason.NEG_SCALAR_SQUARE, ((X, v),))
    X, v = _nonzero_witness(A, seed)
    if A.nrows % 2:
        return SignClass(Verdict.INDEFINITE, Reason.WITNESSED, ((X, v), (-X, -v)))
    neg = search_sign(A, -1, seed=seed, samples=samples, candidates=_standard_candidates(A, X))
    witnesses = ((neg,) if neg else ()) + (((X, v),) if v > 0 else ())
    return SignClass(Verdict.INDEFINITE, Reason.WITNESSED, witnesses)


def phi_nonpos(A: Matrix, *, seed: int = 0, samples: int = DEFAULT_SAMPLES) -> SignClass:
    """NonPositive iff ``rank(A) < n/2`` (and then phi vanishes identically)."""
    _require_square(A)
    _require_rationals(A)
    if _rank_deficient(A):
        return SignClass(Verdict.NON_POSITIVE, Reason.RANK_DEFICIENT)
    X, v = _nonzero_witness(A, seed)
    pos = search_sign(A, 1, seed=seed, samples=samples, candidates=_standard_candidates(A, X))
    verdict = Verdict.NON_NEGATIVE if _nonneg_square(A) else Verdict.INDEFINITE
    return SignClass(verdict, Reason.WITNESSED, (pos,) if pos else ())


def classify(A: Matrix, *, seed: int = 0, samples: int = DEFAULT_SAMPLES) -> dict[str, SignClass]:
    return {
        "zero": phi_zero(A, seed=seed, samples=samples),
        "nonneg": phi_nonneg(A, seed=seed, samples=samples),
        "nonpos": phi_nonpos(A, seed=seed, samples=samples),
    }


# ---------------------------------------------------------------------------
# adjugate identities


def adjugate_annihilation_check(A: Matrix, X: Matrix) -> bool:
    """``adj(AX+XA) A == A adj(AX+XA) == 0`` for rank-deficient ``A``."""
    if not _rank_deficient(A):
        raise PreconditionViolated("needs rank(A) < n/2")
    adj = adjugate(anticommutator(A, X))
    return (adj @ A).is_zero() and (A @ adj).is_zero()


def adjugate_anticommute_check(A: Matrix, X: Matrix) -> Matrix:
    """Residual ``adj(AX+XA) A + A adj(AX+XA)``; zero on all X signals phi == 0."""
    adj = adjugate(anticommutator(A, X))
    return adj @ A + A @ adj


# ---------------------------------------------------------------------------
# normal forms of det(AX + XA)


def square_form_value(A: Matrix, X: Matrix):
    """``(det(AX+XA), det(X_hat))`` for ``A^2 = 0``, ``rank(A) = n/2``.

    ``X_hat`` takes the even rows and odd columns (1-based) of ``X`` written in
    a basis where ``A = diag(J_2, ..., J_2)``.  Returns with
    ``value == root**2`` checked.
    """
    _require_square(A)
    n = A.nrows
    if n % 2 or not (A @ A).is_zero() or 2 * rank(A) != n:
        raise BadShape("needs n even, A^2 = 0 and rank(A) = n/2")
    P, part = nilpotent_jordanize(A)
    assert set(part.block_sizes) == {2}
    Xc = inverse(P) @ X @ P
    hat = Xc.submatrix(range(1, n, 2), range(0, n, 2))
    root = determinant(hat)
    value = phi(A, X)
    F = A.field
    if value != F.mul(root, root):
        raise FormulaMismatch(f"det(AX+XA) = {value} but det(X_hat)^2 = {F.mul(root, root)}")
    return value, root


def two_square_basis(A: Matrix, alpha) -> Matrix:
    """Columns ``v1, A v1, v2, A v2, ...`` so that ``A`` becomes ``diag(U, ..., U)``, ``U = [[0, alpha], [1, 0]]``."""
    F, n = A.field, A.nrows
    cols: list[Matrix] = []
    for i in range(n):
        e = Matrix.column(F, [int(k == i) for k in range(n)])
        trial = cols + [e]
        if rank(Matrix.from_columns(F, trial, n)) == len(trial):
            cols.extend([e, A @ e])
        if len(cols) == n:
            break
    return Matrix.from_columns(F, cols, n)


def _quad_mul(x, y, alpha, F):
    a, b = x
    c, d = y
    return (F.add(F.mul(a, c), F.mul(alpha, F.mul(b, d))), F.add(F.mul(a, d), F.mul(b, c)))


def _quad_det(M: list[list[tuple]], alpha, F: Field) -> tuple:
    """Determinant over ``K[U]/(U^2 - alpha)``, a field when alpha is a non-square."""
    n = len(M)
    M = [list(r) for r in M]
    det = (1, 0)
    for k in range(n):
        piv = next((i for i in range(k, n) if M[i][k] != (0, 0)), None)
        if piv is None:
            return (0, 0)
        if piv != k:
            M[k], M[piv] = M[piv], M[k]
            det = (F.neg(det[0]), F.neg(det[1]))
        a, b = M[k][k]
        det = _quad_mul(det, (a, b), alpha, F)
        norm = F.sub(F.mul(a, a), F.mul(alpha, F.mul(b, b)))
        inv = (F.div(a, norm), F.div(F.neg(b), norm))
        for i in range(k + 1, n):
            f = _quad_mul(M[i][k], inv, alpha, F)
            if f == (0, 0):
                continue
            for j in range(k, n):
                g = _quad_mul(f, M[k][j], alpha, F)
                M[i][j] = (F.sub(M[i][j][0], g[0]), F.sub(M[i][j][1], g[1]))
    return det


def two_square_form_value(A: Matrix, X: Matrix):
    """``(det(AX+XA), r, s)`` with ``det(AX+XA) = r^2 - alpha s^2`` for ``A^2 = alpha I``."""
    _require_square(A)
    F, n = A.field, A.nrows
    alpha = scalar_square_test(A).alpha
    if n % 2 or alpha is None:
        raise BadShape("needs n even and A^2 = alpha I")
    if F.is_square(alpha):
        raise AlphaIsSquare(f"alpha = {F.render(alpha)} is a square")
    P = two_square_basis(A, alpha)
    Pinv = inverse(P)
    U = Matrix(F, [[0, alpha], [1, 0]])
    assert Pinv @ A @ P == block_diag([U] * (n // 2), F)
    Xc = Pinv @ X @ P
    M = anticommutator(block_diag([U] * (n // 2), F), Xc)
    h = n // 2
    blocks = []
    for i in range(h):
        row = []
        for j in range(h):
            a, b = M[2 * i, 2 * j], M[2 * i + 1, 2 * j]
            if M.block(2 * i, 2 * i + 2, 2 * j, 2 * j + 2) != Matrix.scalar(F, 2, a) + U.scale(b):
                raise FormulaMismatch(f"block ({i}, {j}) is not of the form aI + bU")
            row.append((a, b))
        blocks.append(row)
    r, s = _quad_det(blocks, alpha, F)
    value = phi(A, X)
    if value != F.sub(F.mul(r, r), F.mul(alpha, F.mul(s, s))):
        raise FormulaMismatch(f"det(AX+XA) = {value} is not r^2 - alpha s^2 for r={r}, s={s}")
    return value, r, s


def _is_companion(A: Matrix) -> bool:
    n = A.nrows
    for i in range(n):
        for j in range(n - 1):
            if A[i, j] != int(i == j + 1):
                return False
    return True


def companion_upper_det(A: Matrix, X: Matrix):
    """Closed-form ``det(AX+XA)`` for companion ``A`` and strictly upper triangular ``X``.

    ``x12 (x12 + x23) ... (x_{n-2,n-1} + x_{n-1,n}) x_{n-1,n}``, checked
    against the exact determinant.
    """
    _require_square(A)
    F, n = A.field, A.nrows
    if n < 2 or not _is_companion(A):
        raise BadShape("A must be an n x n companion matrix, n >= 2")
    if X.shape != A.shape or any(X[i, j] != 0 for i in range(n) for j in range(i + 1)):
        raise BadShape("X must be strictly upper triangular")
    sup = [X[i, i + 1] for i in range(n - 1)]
    value = sup[0]
    for i in range(len(sup) - 1):
        value = F.mul(value, F.add(sup[i], sup[i + 1]))
    value = F.mul(value, sup[-1])
    det = phi(A, X)
    if det != value:
        raise FormulaMismatch(f"product formula {value} != determinant {det}")
    return value


def two_block_fixture(u, v, a, field: Field = Q):
    """A = diag([[0,u],[1,0]], [[0,v],[1,0]]) and the 4x4 probe X with parameter a."""
    A = block_diag([Matrix(field, [[0, u], [1, 0]]), Matrix(field, [[0, v], [1, 0]])], field)
    X = Matrix(field, [[0, 0, 1, 0], [0, 0, 0, 1], [a, 0, 0, 0], [0, 1 - field.coerce(a), 0, 0]])
    return A, X


def theorem_main_4x4_formula(u, v, a):
    """``det(AX+XA) = 2(u+v)(v + a(u-v))`` for the two-block fixture, ``u, v < 0``."""
    u, v, a = Q.coerce(u), Q.coerce(v), Q.coerce(a)
    if not (u < 0 and v < 0):
        raise PreconditionViolated("needs u < 0 and v < 0")
    A, X = two_block_fixture(u, v, a)
    det = phi(A, X)
    expected = Q.reduce(2 * (u + v) * (v + a * (u - v)))
    if det != expected:
        raise FormulaMismatch(f"det {det} != 2(u+v)(v+a(u-v)) = {expected}")
    return det


def theorem_main_degenerate_formula(v, a):
    """``det(AX+XA) = 2 v^2 (1 - a)`` for ``A = diag([[0,0],[1,0]], [[0,v],[1,0]])``."""
    v, a = Q.coerce(v), Q.coerce(a)
    A, X = two_block_fixture(0, v, a)
    det = phi(A, X)
    expected = Q.reduce(2 * v * v * (1 - a))
    if det != expected:
        raise FormulaMismatch(f"det {det} != 2v^2(1-a) = {expected}")
    return det


def companion2_formula(alpha, beta, a):
    """``det(AX+XA) = 1 - 2 a beta`` for ``A = [[0,alpha],[1,beta]]``, ``X = [[a,1],[0,-a]]``."""
    alpha, beta, a = Q.coerce(alpha), Q.coerce(beta), Q.coerce(a)
    A = Matrix(Q, [[0, alpha], [1, beta]])
    X = Matrix(Q, [[a, 1], [0, -a]])
    det = phi(A, X)
    expected = Q.reduce(1 - 2 * a * beta)
    if det != expected:
        raise FormulaMismatch(f"det {det} != 1 - 2 a beta = {expected}")
    return det


MAX_KRON_DIM = 12


def kron_operator(A: Matrix) -> Matrix:
    """Matrix of ``X -> AX + XA`` on row-major vec(X): ``A (x) I + I (x) A^T``."""
    _require_square(A)
    I = Matrix.identity(A.field, A.nrows)
    return kron(A, I) + kron(I, A.T)


def kron_operator_rank(A: Matrix) -> int:
    if A.nrows > MAX_KRON_DIM:
        raise TooLarge(f"n = {A.nrows} exceeds {MAX_KRON_DIM}")
    return rank(kron_operator(A))
