"""Similarity witnesses: B similar to A with A + B invertible.

Deterministic constructions cover the structured cases (permutation
witnesses for nilpotent Jordan blocks, the block swap for an invertible
part with a single eigenvalue in K).  Everything else goes through a seeded
random search, which terminates quickly because ``T -> det(A + T A T^-1)``
is a nonzero polynomial whenever ``rank(A) >= n/2``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .canonical import fitting_decompose, is_nilpotent, nilpotent_jordanize
from .errors import (
    BadShape,
    BudgetExhausted,
    CharTwo,
    InvalidWitness,
    NotNilpotent,
    PairingFailed,
    ParseError,
    RankTooLow,
    SingularTransform,
)
from .field import Field, Q
from .matrix import (
    Matrix,
    Permutation,
    block_diag,
    determinant,
    format_matrix,
    inverse,
    jordan_block,
    parse_matrix_lines,
    permutation_matrix,
    rank,
)

DEFAULT_ENTRY_BOUND = 3
DEFAULT_BUDGET = 64


@dataclass(frozen=True)
class SimilarityWitness:
    transform: Matrix
    conjugated: Matrix
    certificate: object
    provenance: str = ""


def _check_char(field: Field):
    if field.characteristic == 2:
        raise CharTwo("construction needs char(K) != 2")


def _check_rank(A: Matrix):
    n = A.nrows
    r = rank(A)
    if 2 * r < n:
        raise RankTooLow(f"rank {r} < n/2 = {n / 2}")


def make_witness(A: Matrix, P: Matrix, provenance: str = "") -> SimilarityWitness:
    """Compute ``B = P A P^-1`` and ``det(A + B)``; refuse a zero certificate."""
    try:
        Pinv = inverse(P)
    except SingularTransform:
        raise InvalidWitness("transform is singular") from None
    B = P @ A @ Pinv
    cert = determinant(A + B)
    if cert == 0:
        raise InvalidWitness("certificate det(A + B) is zero")
    return SimilarityWitness(P, B, cert, provenance)


def verify_witness(A: Matrix, w: SimilarityWitness):
    """Recompute everything from scratch; return the certificate."""
    P, B = w.transform, w.conjugated
    if P.shape != A.shape or B.shape != A.shape:
        raise InvalidWitness("shape mismatch between A, transform and conjugated")
    if P.field != A.field or B.field != A.field:
        raise InvalidWitness("field mismatch")
    if determinant(P) == 0:
        raise InvalidWitness("transform is singular")
    if B != P @ A @ inverse(P):
        raise InvalidWitness("conjugated != transform * A * transform^-1")
    cert = determinant(A + B)
    if cert == 0:
        raise InvalidWitness("certificate det(A + B) is zero")
    if cert != A.field.coerce(w.certificate):
        raise InvalidWitness(f"stored certificate {w.certificate} != recomputed {cert}")
    return cert


# ---------------------------------------------------------------------------
# permutations used by the constructions


def cyclic_shift(n: int) -> Permutation:
    """``1 -> 2, ..., n-1 -> n, n -> 1``."""
    return Permutation((j + 1) % n for j in range(n))


def step3_permutation(n: int) -> Permutation:
    """Permutation for ``diag(0_p, J_q)``, ``n = p + q``, by parity of ``n``."""
    s = {}
    if n % 2 == 0:
        h = n // 2
        for i in range(1, h):
            s[i] = n - i
        s[h] = n
        for i in range(h + 1, n + 1):
            s[i] = i - h
    else:
        h = (n - 1) // 2
        for i in range(1, h + 1):
            s[i] = n - i
        s[h + 1] = n
        for i in range(h + 2, n + 1):
            s[i] = i - (h + 1)
    return Permutation.from_one_based(s)


def step3_matrix(p: int, q: int, field: Field = Q) -> Matrix:
    return block_diag([Matrix.zeros(field, p), jordan_block(field, q)], field) if p else jordan_block(field, q)


def step3_expected_exponent(p: int, q: int) -> int:
    n = p + q
    return (q - p - 2) // 2 if n % 2 == 0 else (q - p - 3) // 2


# ---------------------------------------------------------------------------
# deterministic steps


def step1_swap_witness(lam, N: Matrix, q: int) -> SimilarityWitness:
    """Witness for ``A = diag(lam I + N, 0_q)``: ``B = diag(0_q, lam I + N)``.

    ``N`` must be strictly upper triangular and ``q <= size(N)``; then
    ``A + B`` is upper triangular with nonzero diagonal.
    """
    F = N.field
    _check_char(F)
    lam = F.coerce(lam)
    n1 = N.nrows
    if lam == 0:
        raise BadShape("eigenvalue must be nonzero")
    if not N.is_square or any(N[i, j] != 0 for i in range(n1) for j in range(i + 1)):
        raise BadShape("N must be strictly upper triangular")
    if q < 0 or q > n1:
        raise BadShape(f"need 0 <= q <= {n1}, got q={q}")
    M = N + Matrix.scalar(F, n1, lam)
    A = block_diag([M, Matrix.zeros(F, q)], F) if q else M
    sigma = Permutation([j + q for j in range(n1)] + [j - n1 for j in range(n1, n1 + q)])
    w = make_witness(A, permutation_matrix(sigma, F), f"step1(q={q})")
    assert w.conjugated == (block_diag([Matrix.zeros(F, q), M], F) if q else M)
    return w


def step2_witness(n: int, field: Field = Q) -> SimilarityWitness:
    """Cyclic-shift witness for the nilpotent Jordan block ``J_n``."""
    _check_char(field)
    if n < 2:
        raise BadShape("J_n needs n >= 2")
    P = permutation_matrix(cyclic_shift(n), field)
    return make_witness(jordan_block(field, n), P, f"step2({n})")


def step3_witness(p: int, q: int, field: Field = Q) -> SimilarityWitness:
    """Permutation witness for ``diag(0_p, J_q)`` with ``q >= 3``, ``p <= q - 2``."""
    _check_char(field)
    if q < 3 or p < 0 or p > q - 2:
        raise BadShape(f"need q >= 3 and 0 <= p <= q - 2, got (p, q) = ({p}, {q})")
    n = p + q
    P = permutation_matrix(step3_permutation(n), field)
    return make_witness(step3_matrix(p, q, field), P, f"step3({p},{q})")


# ---------------------------------------------------------------------------
# randomized search


def randomized_witness(A: Matrix, entry_bound: int = DEFAULT_ENTRY_BOUND, budget: int = DEFAULT_BUDGET, *,
                       seed: int) -> SimilarityWitness:
    """Sample ``T`` with entries in ``[-entry_bound, entry_bound]`` until ``det(AT + TA) != 0``.

    For invertible ``T`` that is equivalent to ``A + T A T^-1`` being invertible.
    """
    F = A.field
    _check_char(F)
    _check_rank(A)
    n = A.nrows
    rng = random.Random(seed)
    for attempt in range(1, budget + 1):
        T = Matrix(F, [[rng.randint(-entry_bound, entry_bound) for _ in range(n)] for _ in range(n)])
        if determinant(T) == 0:
            continue
        if determinant(A @ T + T @ A) == 0:
            continue
        return make_witness(A, T, f"randomized(seed={seed},attempt={attempt})")
    raise BudgetExhausted(f"no witness in {budget} attempts (bound {entry_bound})", attempts=budget)


# ---------------------------------------------------------------------------
# nilpotent part and full assembly


def pair_zero_blocks(sizes: tuple[int, ...]) -> tuple[list[tuple[int, int]], int]:
    """Greedily attach size-1 blocks to Jordan blocks, largest first.

    Returns ``(groups, leftover)`` where each group is ``(zeros, block size)``
    with ``zeros <= size - 2``.  Under ``rank >= n/2`` the leftover is zero,
    since then the total capacity ``sum(k - 2)`` is at least the number of
    zero blocks.
    """
    zeros = sum(1 for k in sizes if k == 1)
    groups = []
    for k in sorted((k for k in sizes if k >= 2), reverse=True):
        a = min(zeros, k - 2)
        zeros -= a
        groups.append((a, k))
    return groups, zeros


def _group_witness(a: int, k: int, field: Field) -> SimilarityWitness:
    return step2_witness(k, field) if a == 0 else step3_witness(a, k, field)


def _nilpotent_layout(sizes, groups):
    """Old -> new coordinate order for the grouped Jordan basis.

    Old order: Jordan blocks in ``sizes`` order.  New order: for each group,
    its zero coordinates then its block coordinates.  Returns the list of old
    indices in new order plus the unused zero indices.
    """
    starts = []
    pos = 0
    for k in sizes:
        starts.append(pos)
        pos += k
    zero_idx = [starts[i] for i, k in enumerate(sizes) if k == 1]
    big = [i for i, k in enumerate(sizes) if k >= 2]
    big.sort(key=lambda i: -sizes[i])
    order = []
    for (a, k), i in zip(groups, big):
        order.extend(zero_idx[:a])
        zero_idx = zero_idx[a:]
        order.extend(range(starts[i], starts[i] + k))
    return order, zero_idx


def _assemble(A: Matrix, S: Matrix, blocks: list[Matrix], transforms: list[Matrix], labels: list[str]):
    F = A.field
    Sinv = inverse(S)
    assert Sinv @ A @ S == block_diag(blocks, F)
    W = block_diag(transforms, F)
    return make_witness(A, S @ W @ Sinv, "deterministic:" + "+".join(labels))


def nilpotent_witness(N: Matrix, *, seed: int = 0) -> SimilarityWitness:
    """Witness for a nilpotent ``N`` with ``rank(N) >= n/2`` via Jordan blocks."""
    F = N.field
    _check_char(F)
    if not is_nilpotent(N):
        raise NotNilpotent("matrix is not nilpotent")
    _check_rank(N)
    Qn, part = nilpotent_jordanize(N)
    sizes = part.block_sizes
    try:
        groups, leftover = pair_zero_blocks(sizes)
        if leftover:
            raise PairingFailed(f"{leftover} zero blocks could not be paired")
        order, _ = _nilpotent_layout(sizes, groups)
        R = permutation_matrix(Permutation(order), F)
        blocks, transforms, labels = [], [], []
        for a, k in groups:
            w = _group_witness(a, k, F)
            blocks.append(step3_matrix(a, k, F) if a else jordan_block(F, k))
            transforms.append(w.transform)
            labels.append(w.provenance)
        return _assemble(N, Qn @ R, blocks, transforms, labels)
    except (PairingFailed, InvalidWitness):
        return randomized_witness(N, seed=seed)


def _single_eigenvalue(C: Matrix):
    """``lam`` with ``C - lam I`` nilpotent, or None."""
    F, m = C.field, C.nrows
    if F.modulus and m % F.modulus == 0:
        return None
    lam = F.div(C.trace(), m)
    if is_nilpotent(C - Matrix.scalar(F, m, lam)):
        return lam
    return None


def assemble_witness(A: Matrix, *, seed: int = 0, entry_bound: int = DEFAULT_ENTRY_BOUND,
                     budget: int = DEFAULT_BUDGET) -> SimilarityWitness:
    """Split ``A`` into invertible and nilpotent parts and combine witnesses.

    Zero blocks that the nilpotent Jordan blocks cannot absorb are swapped
    against the invertible part when that part has a single eigenvalue in K;
    any other shape falls back to :func:`randomized_witness`.
    """
    F = A.field
    _check_char(F)
    _check_rank(A)
    n = A.nrows
    fit = fitting_decompose(A)
    C, N = fit.invertible_part, fit.nilpotent_part
    m, s = C.nrows, N.nrows
    if s:
        Qn, part = nilpotent_jordanize(N)
        sizes = part.block_sizes
    else:
        Qn, sizes = Matrix.identity(F, 0), ()
    groups, leftover = pair_zero_blocks(sizes)
    order, spare = _nilpotent_layout(sizes, groups)

    blocks, transforms, labels = [], [], []
    Qc = Matrix.identity(F, m)
    if leftover:
        lam = _single_eigenvalue(C) if m else None
        if lam is None or leftover > m:
            return randomized_witness(A, entry_bound, budget, seed=seed)
        Qc, partc = nilpotent_jordanize(C - Matrix.scalar(F, m, lam))
        Jc = partc.jordan_matrix(F)
        w = step1_swap_witness(lam, Jc, leftover)
        blocks.append(block_diag([Jc + Matrix.scalar(F, m, lam), Matrix.zeros(F, leftover)], F))
        transforms.append(w.transform)
        labels.append(w.provenance)
    elif m:
        blocks.append(C)
        transforms.append(Matrix.identity(F, m))
        labels.append("double")

    for a, k in groups:
        try:
            w = _group_witness(a, k, F)
        except InvalidWitness:
            return randomized_witness(A, entry_bound, budget, seed=seed)
        blocks.append(step3_matrix(a, k, F) if a else jordan_block(F, k))
        transforms.append(w.transform)
        labels.append(w.provenance)

    # new coordinate j sits at old coordinate perm[j] of the Fitting/Jordan basis
    perm = list(range(m)) + [m + i for i in spare] + [m + i for i in order]
    R = permutation_matrix(Permutation(perm), F)
    S = fit.transform @ block_diag([Qc, Qn], F) @ R if n else fit.transform
    return _assemble(A, S, blocks, transforms, labels)


# ---------------------------------------------------------------------------
# serialization


def format_witness(w: SimilarityWitness) -> str:
    F = w.transform.field
    return ("P:\n" + format_matrix(w.transform) + "B:\n" + format_matrix(w.conjugated)
            + "certificate:\n" + F.render(w.certificate) + "\n")


def parse_witness(text: str, field_override: Field | None = None) -> SimilarityWitness:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    provenance = ""
    for ln in lines:
        if ln.startswith("path="):
            provenance = ln[len("path="):]
    try:
        ip, ib, ic = lines.index("P:"), lines.index("B:"), lines.index("certificate:")
    except ValueError as exc:
        raise ParseError("witness needs 'P:', 'B:' and 'certificate:' sections") from exc
    if not ip < ib < ic or ic + 1 >= len(lines):
        raise ParseError("witness sections out of order or certificate missing")
    P = parse_matrix_lines(lines[ip + 1:ib], field_override)
    B = parse_matrix_lines(lines[ib + 1:ic], field_override)
    cert = P.field.parse(lines[ic + 1])
    return SimilarityWitness(P, B, cert, provenance)
