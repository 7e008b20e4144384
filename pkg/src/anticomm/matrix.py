"""Exact dense matrices over Q or GF(p).

Matrices are immutable.  Vectors are ``n x 1`` matrices.  Determinants over
Q use fraction-free (Bareiss) elimination on integer-scaled rows; over GF(p)
plain Gaussian elimination.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (
    DimensionMismatch,
    FieldMismatch,
    NotSquare,
    ParseError,
    SingularTransform,
)
from .field import Field, Q, field_from_token


class Matrix:
    __slots__ = ("field", "nrows", "ncols", "rows", "_hash")

    def __init__(self, field: Field, rows: Iterable[Iterable], ncols: int | None = None, *, _raw: bool = False):
        if _raw:
            rows = tuple(rows)
        else:
            rows = tuple(tuple(field.coerce(x) for x in row) for row in rows)
        if ncols is None:
            if not rows:
                raise DimensionMismatch("cannot infer column count of an empty matrix")
            ncols = len(rows[0])
        for row in rows:
            if len(row) != ncols:
                raise DimensionMismatch("ragged rows")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "nrows", len(rows))
        object.__setattr__(self, "ncols", ncols)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    # -- constructors -----------------------------------------------------

    @classmethod
    def zeros(cls, field: Field, n: int, m: int | None = None) -> "Matrix":
        m = n if m is None else m
        return cls(field, ((0,) * m for _ in range(n)), m, _raw=True)

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        return cls(field, (tuple(int(i == j) for j in range(n)) for i in range(n)), n, _raw=True)

    @classmethod
    def scalar(cls, field: Field, n: int, c) -> "Matrix":
        c = field.coerce(c)
        return cls(field, (tuple(c if i == j else 0 for j in range(n)) for i in range(n)), n, _raw=True)

    @classmethod
    def diagonal(cls, field: Field, values: Sequence) -> "Matrix":
        n = len(values)
        vals = [field.coerce(v) for v in values]
        return cls(field, (tuple(vals[i] if i == j else 0 for j in range(n)) for i in range(n)), n, _raw=True)

    @classmethod
    def from_columns(cls, field: Field, columns: Sequence, nrows: int | None = None) -> "Matrix":
        """Assemble from column vectors (n x 1 matrices or flat sequences)."""
        cols = [_flat(c) for c in columns]
        if nrows is None:
            nrows = len(cols[0]) if cols else 0
        return cls(field, (tuple(c[i] for c in cols) for i in range(nrows)), len(cols), _raw=True)

    @classmethod
    def column(cls, field: Field, values: Sequence) -> "Matrix":
        return cls(field, ((v,) for v in values), 1)

    # -- basic protocol ---------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __getitem__(self, idx):
        if isinstance(idx, tuple):
            i, j = idx
            return self.rows[i][j]
        return self.rows[idx]

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.field == other.field and self.shape == other.shape and self.rows == other.rows)

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.field, self.shape, self.rows)))
        return self._hash

    def __repr__(self):
        body = "; ".join(" ".join(self.field.render(x) for x in row) for row in self.rows)
        return f"Matrix({self.field!r}, [{body}])"

    def __reduce__(self):
        return (_rebuild, (self.field, self.rows, self.ncols))

    def tolist(self) -> list[list]:
        return [list(r) for r in self.rows]

    def col(self, j: int) -> "Matrix":
        return Matrix(self.field, ((r[j],) for r in self.rows), 1, _raw=True)

    def columns(self) -> list[tuple]:
        return [tuple(r[j] for r in self.rows) for j in range(self.ncols)]

    def entries(self) -> tuple:
        return tuple(x for r in self.rows for x in r)

    @property
    def T(self) -> "Matrix":
        if self.nrows == 0:
            return Matrix(self.field, ((),) * self.ncols, 0, _raw=True)
        return Matrix(self.field, zip(*self.rows), self.nrows, _raw=True)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix(self.field, (tuple(self.rows[i][j] for j in cols) for i in rows), len(cols), _raw=True)

    def block(self, r0: int, r1: int, c0: int, c1: int) -> "Matrix":
        return self.submatrix(range(r0, r1), range(c0, c1))

    def replace(self, i: int, j: int, value) -> "Matrix":
        rows = [list(r) for r in self.rows]
        rows[i][j] = self.field.coerce(value)
        return Matrix(self.field, (tuple(r) for r in rows), self.ncols, _raw=True)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.rows for x in r)

    def trace(self):
        _require_square(self)
        F = self.field
        return F.reduce(sum(self.rows[i][i] for i in range(self.nrows)))

    # -- arithmetic -------------------------------------------------------

    def _check_same(self, other: "Matrix"):
        if self.field != other.field:
            raise FieldMismatch(f"{self.field!r} vs {other.field!r}")
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} vs {other.shape}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        red = self.field.reduce
        return Matrix(self.field, (tuple(red(a + b) for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)),
                      self.ncols, _raw=True)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        red = self.field.reduce
        return Matrix(self.field, (tuple(red(a - b) for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)),
                      self.ncols, _raw=True)

    def __neg__(self) -> "Matrix":
        red = self.field.reduce
        return Matrix(self.field, (tuple(red(-a) for a in r) for r in self.rows), self.ncols, _raw=True)

    def scale(self, c) -> "Matrix":
        F = self.field
        c = F.coerce(c)
        return Matrix(F, (tuple(F.reduce(c * a) for a in r) for r in self.rows), self.ncols, _raw=True)

    def __rmul__(self, c) -> "Matrix":
        if isinstance(c, Matrix):
            return NotImplemented
        return self.scale(c)

    def __mul__(self, c) -> "Matrix":
        if isinstance(c, Matrix):
            raise TypeError("use @ for matrix products")
        return self.scale(c)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.field != other.field:
            raise FieldMismatch(f"{self.field!r} vs {other.field!r}")
        if self.ncols != other.nrows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        red = self.field.reduce
        cols = list(zip(*other.rows)) if other.nrows else [()] * other.ncols
        return Matrix(self.field,
                      (tuple(red(sum(a * b for a, b in zip(r, c))) for c in cols) for r in self.rows),
                      other.ncols, _raw=True)

    def __pow__(self, k: int) -> "Matrix":
        _require_square(self)
        if k < 0:
            return inverse(self) ** (-k)
        result = Matrix.identity(self.field, self.nrows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result


def _rebuild(field, rows, ncols):
    return Matrix(field, rows, ncols, _raw=True)


def _flat(v) -> tuple:
    if isinstance(v, Matrix):
        if v.ncols == 1:
            return tuple(r[0] for r in v.rows)
        if v.nrows == 1:
            return v.rows[0]
        raise DimensionMismatch("not a vector")
    return tuple(v)


def _require_square(M: Matrix):
    if not M.is_square:
        raise NotSquare(f"matrix of shape {M.shape} is not square")


# ---------------------------------------------------------------------------
# elimination kernels


def _rref(M: Matrix) -> tuple[list[list], list[int]]:
    """Reduced row echelon form; returns (rows, pivot columns)."""
    F = M.field
    rows = [list(r) for r in M.rows]
    pivots: list[int] = []
    r = 0
    for c in range(M.ncols):
        piv = next((i for i in range(r, M.nrows) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = F.invert(rows[r][c])
        rows[r] = [F.mul(inv, x) for x in rows[r]]
        for i in range(M.nrows):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == M.nrows:
            break
    return rows, pivots


def _bareiss(rows: list[list[int]]) -> int:
    n = len(rows)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if rows[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if rows[i][k] != 0), None)
            if swap is None:
                return 0
            rows[k], rows[swap] = rows[swap], rows[k]
            sign = -sign
        pk = rows[k][k]
        rk = rows[k]
        for i in range(k + 1, n):
            ri = rows[i]
            f = ri[k]
            for j in range(k + 1, n):
                ri[j] = (ri[j] * pk - f * rk[j]) // prev
        prev = pk
    return sign * rows[n - 1][n - 1]


def _det_mod_p(rows: list[list[int]], p: int) -> int:
    n = len(rows)
    det = 1
    for k in range(n):
        piv = next((i for i in range(k, n) if rows[i][k]), None)
        if piv is None:
            return 0
        if piv != k:
            rows[k], rows[piv] = rows[piv], rows[k]
            det = -det
        pk = rows[k][k]
        det = det * pk % p
        inv = pow(pk, -1, p)
        rk = rows[k]
        for i in range(k + 1, n):
            ri = rows[i]
            f = ri[k] * inv % p
            if f:
                for j in range(k + 1, n):
                    ri[j] = (ri[j] - f * rk[j]) % p
    return det % p


def determinant(M: Matrix):
    """Exact determinant."""
    _require_square(M)
    F = M.field
    if F.modulus:
        return _det_mod_p([list(r) for r in M.rows], F.modulus)
    scale = 1
    rows = []
    for r in M.rows:
        den = 1
        for x in r:
            if not isinstance(x, int):
                den = den * x.denominator // math.gcd(den, x.denominator)
        if den == 1:
            rows.append(list(r))
        else:
            rows.append([int(x * den) for x in r])
            scale *= den
    d = _bareiss(rows)
    return F.reduce(Fraction(d, scale)) if scale != 1 else d


def rank(M: Matrix) -> int:
    return len(_rref(M)[1])


def kernel_basis(M: Matrix) -> list[Matrix]:
    """Basis of the right null space as n x 1 column matrices."""
    F = M.field
    rows, pivots = _rref(M)
    free = [c for c in range(M.ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * M.ncols
        v[f] = 1
        for r, c in enumerate(pivots):
            v[c] = F.neg(rows[r][f])
        basis.append(Matrix(F, ((x,) for x in v), 1, _raw=True))
    return basis


def column_space_basis(M: Matrix) -> list[Matrix]:
    """Pivot columns of ``M`` (a basis of its image)."""
    _, pivots = _rref(M)
    return [M.col(c) for c in pivots]


def inverse(M: Matrix) -> Matrix:
    _require_square(M)
    F = M.field
    n = M.nrows
    aug = Matrix(F, (r + tuple(int(i == j) for j in range(n)) for i, r in enumerate(M.rows)), 2 * n, _raw=True)
    rows, pivots = _rref(aug)
    if pivots[:n] != list(range(n)):
        raise SingularTransform("matrix is singular")
    return Matrix(F, (tuple(r[n:]) for r in rows), n, _raw=True)


def is_invertible(M: Matrix) -> bool:
    return determinant(M) != 0


def solve(M: Matrix, b: Matrix) -> Matrix | None:
    """A solution of ``M x = b`` or None."""
    F = M.field
    aug = Matrix(F, (r + b.rows[i] for i, r in enumerate(M.rows)), M.ncols + b.ncols, _raw=True)
    rows, pivots = _rref(aug)
    if any(c >= M.ncols for c in pivots):
        return None
    x = [[0] * b.ncols for _ in range(M.ncols)]
    for r, c in enumerate(pivots):
        x[c] = list(rows[r][M.ncols:])
    return Matrix(F, (tuple(r) for r in x), b.ncols, _raw=True)


def adjugate(M: Matrix) -> Matrix:
    """Classical adjoint; exact for singular inputs too."""
    _require_square(M)
    F = M.field
    n = M.nrows
    if n == 0:
        return M
    if n == 1:
        return Matrix.identity(F, 1)
    if n > 6:
        d = determinant(M)
        if d != 0:
            return inverse(M).scale(d)
    out = [[0] * n for _ in range(n)]
    idx = range(n)
    for i in idx:
        rows_i = [k for k in idx if k != i]
        for j in idx:
            minor = M.submatrix(rows_i, [k for k in idx if k != j])
            c = determinant(minor)
            out[j][i] = c if (i + j) % 2 == 0 else F.neg(c)
    return Matrix(F, (tuple(r) for r in out), n, _raw=True)


def anticommutator(A: Matrix, X: Matrix) -> Matrix:
    """``A X + X A``."""
    _require_square(A)
    _require_square(X)
    if A.field != X.field:
        raise FieldMismatch(f"{A.field!r} vs {X.field!r}")
    if A.shape != X.shape:
        raise DimensionMismatch(f"{A.shape} vs {X.shape}")
    return A @ X + X @ A


def phi(A: Matrix, X: Matrix):
    """``det(AX + XA)``."""
    return determinant(anticommutator(A, X))


def conjugate(A: Matrix, P: Matrix) -> Matrix:
    """``P A P^-1``."""
    _require_square(P)
    try:
        Pinv = inverse(P)
    except SingularTransform:
        raise SingularTransform("transform is singular") from None
    return P @ A @ Pinv


def block_diag(blocks: Sequence[Matrix], field: Field | None = None) -> Matrix:
    if not blocks:
        if field is None:
            raise DimensionMismatch("empty block list needs an explicit field")
        return Matrix(field, (), 0, _raw=True)
    F = blocks[0].field
    for b in blocks:
        if b.field != F:
            raise FieldMismatch(f"{b.field!r} vs {F!r}")
        _require_square(b)
    n = sum(b.nrows for b in blocks)
    out = []
    offset = 0
    for b in blocks:
        pre = (0,) * offset
        post = (0,) * (n - offset - b.ncols)
        out.extend(pre + r + post for r in b.rows)
        offset += b.ncols
    return Matrix(F, out, n, _raw=True)


def kron(A: Matrix, B: Matrix) -> Matrix:
    if A.field != B.field:
        raise FieldMismatch(f"{A.field!r} vs {B.field!r}")
    mul = A.field.mul
    rows = []
    for ra in A.rows:
        for rb in B.rows:
            rows.append(tuple(mul(a, b) for a in ra for b in rb))
    return Matrix(A.field, rows, A.ncols * B.ncols, _raw=True)


def jordan_block(field: Field, n: int, eigenvalue=0) -> Matrix:
    """Eigenvalue on the diagonal, ones on the superdiagonal."""
    lam = field.coerce(eigenvalue)
    return Matrix(field, (tuple(lam if i == j else int(j == i + 1) for j in range(n)) for i in range(n)), n,
                  _raw=True)


# ---------------------------------------------------------------------------
# permutations


class Permutation:
    """Bijection of ``{0..n-1}`` (0-based images)."""

    __slots__ = ("images",)

    def __init__(self, images: Sequence[int]):
        images = tuple(images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"{images} is not a permutation")
        object.__setattr__(self, "images", images)

    def __setattr__(self, name, value):
        raise AttributeError("Permutation is immutable")

    @classmethod
    def from_one_based(cls, mapping) -> "Permutation":
        """Build from a 1-based mapping ``{1: s1, ..., n: sn}`` or sequence of images."""
        if isinstance(mapping, dict):
            n = len(mapping)
            return cls(mapping[i] - 1 for i in range(1, n + 1))
        return cls(s - 1 for s in mapping)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(n))

    def __len__(self):
        return len(self.images)

    def __call__(self, j: int) -> int:
        return self.images[j]

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return f"Permutation({list(self.images)})"

    def compose(self, other: "Permutation") -> "Permutation":
        """``(self o other)(j) = self(other(j))``."""
        return Permutation(self.images[j] for j in other.images)

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for j, s in enumerate(self.images):
            inv[s] = j
        return Permutation(inv)

    @property
    def signature(self) -> int:
        seen = [False] * len(self.images)
        sign = 1
        for start in range(len(self.images)):
            if seen[start]:
                continue
            length = 0
            j = start
            while not seen[j]:
                seen[j] = True
                j = self.images[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
        return sign


def permutation_matrix(sigma: Permutation, field: Field = Q) -> Matrix:
    """P with ``P e_j = e_sigma(j)``, i.e. ``P[sigma(j), j] = 1``."""
    n = len(sigma)
    rows = [[0] * n for _ in range(n)]
    for j, s in enumerate(sigma.images):
        rows[s][j] = 1
    return Matrix(field, (tuple(r) for r in rows), n, _raw=True)


# ---------------------------------------------------------------------------
# text format


def format_matrix(M: Matrix) -> str:
    head = "field Q" if M.field.is_rational else f"field {M.field.modulus}"
    lines = [head, f"{M.nrows} {M.ncols}"]
    lines.extend(" ".join(M.field.render(x) for x in r) for r in M.rows)
    return "\n".join(lines) + "\n"


def parse_matrix_lines(lines: list[str], field_override: Field | None = None) -> Matrix:
    lines = [ln.strip() for ln in lines if ln.strip()]
    if len(lines) < 2:
        raise ParseError("matrix text needs a field line and a shape line")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "field":
        raise ParseError(f"bad field line {lines[0]!r}")
    field = field_override or field_from_token(head[1])
    try:
        n, m = (int(t) for t in lines[1].split())
    except ValueError as exc:
        raise ParseError(f"bad shape line {lines[1]!r}") from exc
    body = lines[2:]
    if len(body) != n:
        raise ParseError(f"expected {n} rows, found {len(body)}")
    rows = []
    for ln in body:
        toks = ln.split()
        if len(toks) != m:
            raise ParseError(f"expected {m} entries in row {ln!r}")
        rows.append(tuple(field.parse(t) for t in toks))
    return Matrix(field, rows, m, _raw=True)


def parse_matrix(text: str, field_override: Field | None = None) -> Matrix:
    return parse_matrix_lines(text.splitlines(), field_override)
