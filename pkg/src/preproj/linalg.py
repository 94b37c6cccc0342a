"""Exact linear algebra over a :class:`~preproj.field.Field`.

Sparse vectors are ``dict[int, scalar]`` with no stored zeros. Dense matrices
are lists of rows.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from .field import Field, Scalar

SparseVec = dict


class SingularMatrix(ArithmeticError):
    pass


def axpy(field: Field, dst: dict, src: Mapping, factor: Scalar) -> None:
    """``dst += factor * src`` in place, dropping zeros."""
    p = field.p
    for c, val in src.items():
        new = dst.get(c, 0) + factor * val
        if p is not None:
            new %= p
        if new:
            dst[c] = new
        else:
            dst.pop(c, None)


def scale(field: Field, v: Mapping, factor: Scalar) -> dict:
    out = {}
    if not factor:
        return out
    for c, val in v.items():
        new = field.norm(val * factor)
        if new:
            out[c] = new
    return out


def clean(field: Field, v: Mapping) -> dict:
    return {c: field.norm(x) for c, x in v.items() if field.norm(x)}


class RowSpace:
    """Incrementally maintained reduced row echelon basis of a subspace.

    The pivot of each row is its largest column, so the columns left without a
    pivot index a basis of the quotient by this subspace.
    """

    __slots__ = ("field", "rows")

    def __init__(self, field: Field, vectors: Iterable[Mapping] = ()) -> None:
        self.field = field
        self.rows: dict[int, dict] = {}
        for v in vectors:
            self.add(v)

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def pivots(self) -> set[int]:
        return set(self.rows)

    def reduce(self, v: Mapping) -> dict:
        """Residual of ``v`` with every pivot column eliminated."""
        out = dict(v)
        rows = self.rows
        for c in [c for c in v if c in rows]:
            f = out.get(c)
            if f:
                axpy(self.field, out, rows[c], -f)
        return out

    def contains(self, v: Mapping) -> bool:
        return not self.reduce(v)

    def add(self, v: Mapping) -> bool:
        """Add ``v`` to the span; return whether the rank grew."""
        r = self.reduce(v)
        if not r:
            return False
        field = self.field
        c = max(r)
        r = scale(field, r, field.inv(r[c]))
        for row in self.rows.values():
            f = row.get(c)
            if f:
                axpy(field, row, r, -f)
        self.rows[c] = r
        return True

    def basis(self) -> list[dict]:
        return [dict(self.rows[c]) for c in sorted(self.rows)]


def rref(field: Field, matrix: Sequence[Sequence[Scalar]]) -> tuple[list[list[Scalar]], list[int]]:
    """Dense reduced row echelon form (leading-column pivots) and pivot columns."""
    m = [[field.norm(x) for x in row] for row in matrix]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = field.inv(m[r][c])
        m[r] = [field.norm(x * inv) for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [field.norm(a - f * b) for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(field: Field, matrix: Sequence[Sequence[Scalar]]) -> int:
    if not matrix:
        return 0
    return len(rref(field, matrix)[1])


def nullspace(field: Field, matrix: Sequence[Sequence[Scalar]], ncols: int | None = None) -> list[list[Scalar]]:
    """Basis of ``{x : M x = 0}``."""
    if ncols is None:
        ncols = len(matrix[0]) if matrix else 0
    if not matrix:
        return [[field.one if i == j else field.zero for i in range(ncols)] for j in range(ncols)]
    r, pivots = rref(field, matrix)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        x = [field.zero] * ncols
        x[f] = field.one
        for row_idx, pc in enumerate(pivots):
            x[pc] = field.neg(r[row_idx][f])
        basis.append(x)
    return basis


def solve(field: Field, matrix: Sequence[Sequence[Scalar]], rhs: Sequence[Scalar]) -> list[Scalar]:
    """One solution of ``M x = rhs``; raises :class:`SingularMatrix` if none exists."""
    ncols = len(matrix[0]) if matrix else 0
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    r, pivots = rref(field, aug)
    if ncols in pivots:
        raise SingularMatrix("inconsistent linear system")
    x = [field.zero] * ncols
    for row_idx, pc in enumerate(pivots):
        x[pc] = r[row_idx][ncols]
    return x


def inverse(field: Field, matrix: Sequence[Sequence[Scalar]]) -> list[list[Scalar]]:
    n = len(matrix)
    aug = [list(row) + [field.one if i == j else field.zero for j in range(n)] for i, row in enumerate(matrix)]
    r, pivots = rref(field, aug)
    if pivots[:n] != list(range(n)):
        raise SingularMatrix("matrix is not invertible")
    return [row[n:] for row in r]


def matmul(field: Field, a: Sequence[Sequence[Scalar]], b: Sequence[Sequence[Scalar]]) -> list[list[Scalar]]:
    bt = list(zip(*b)) if b else []
    return [[field.norm(sum(x * y for x, y in zip(row, col))) for col in bt] for row in a]


def matvec(field: Field, a: Sequence[Sequence[Scalar]], v: Sequence[Scalar]) -> list[Scalar]:
    return [field.norm(sum(x * y for x, y in zip(row, v))) for row in a]


def transpose(a: Sequence[Sequence[Scalar]]) -> list[list[Scalar]]:
    return [list(col) for col in zip(*a)]


def identity(field: Field, n: int) -> list[list[Scalar]]:
    return [[field.one if i == j else field.zero for j in range(n)] for i in range(n)]


def trace(field: Field, a: Sequence[Sequence[Scalar]]) -> Scalar:
    return field.norm(sum(a[i][i] for i in range(len(a))))


def leading_minors(field: Field, matrix: Sequence[Sequence[Scalar]]) -> list[Scalar]:
    """Leading principal minors, computed exactly."""
    out = []
    for k in range(1, len(matrix) + 1):
        out.append(det(field, [row[:k] for row in matrix[:k]]))
    return out


def det(field: Field, matrix: Sequence[Sequence[Scalar]]) -> Scalar:
    m = [[field.norm(x) for x in row] for row in matrix]
    n = len(m)
    result = field.one
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c]), None)
        if piv is None:
            return field.zero
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            result = field.neg(result)
        result = field.mul(result, m[c][c])
        inv = field.inv(m[c][c])
        for i in range(c + 1, n):
            if m[i][c]:
                f = field.mul(m[i][c], inv)
                m[i] = [field.norm(a - f * b) for a, b in zip(m[i], m[c])]
    return result
