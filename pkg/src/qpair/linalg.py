"""Exact linear algebra over Q(q).

Dense matrices are lists of lists of :class:`Scalar` (used for Gram blocks);
:class:`SparseMatrix` is a dict-of-rows matrix used for module operators.
"""
from __future__ import annotations

from collections.abc import Iterable, Sequence

from .scalars import ONE, ZERO, Scalar

Dense = list[list[Scalar]]


class SingularMatrixError(ArithmeticError):
    pass


def _copy(m: Sequence[Sequence[Scalar]]) -> Dense:
    return [list(row) for row in m]


def row_reduce(m: Sequence[Sequence[Scalar]]) -> tuple[Dense, list[int]]:
    """Reduced row echelon form and the pivot columns (first independent columns)."""
    a = _copy(m)
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if not a[i][c].is_zero()), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = a[r][c].inverse()
        a[r] = [x * inv if not x.is_zero() else x for x in a[r]]
        for i in range(nrows):
            if i != r and not a[i][c].is_zero():
                factor = a[i][c]
                row_r = a[r]
                a[i] = [x - factor * y if not y.is_zero() else x for x, y in zip(a[i], row_r)]
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m: Sequence[Sequence[Scalar]]) -> int:
    return len(row_reduce(m)[1]) if m else 0


def transpose(m: Sequence[Sequence[Scalar]]) -> Dense:
    return [list(col) for col in zip(*m)] if m else []


def nullspace(m: Sequence[Sequence[Scalar]], ncols: int | None = None) -> list[list[Scalar]]:
    """Basis of {x : m x = 0}, one vector per free column, free entry 1."""
    if not m:
        n = ncols or 0
        return [[ONE if j == i else ZERO for j in range(n)] for i in range(n)]
    red, piv = row_reduce(m)
    n = len(m[0])
    free = [c for c in range(n) if c not in piv]
    basis = []
    for fc in free:
        v = [ZERO] * n
        v[fc] = ONE
        for r, pc in enumerate(piv):
            v[pc] = -red[r][fc]
        basis.append(v)
    return basis


def inverse(m: Sequence[Sequence[Scalar]]) -> Dense:
    n = len(m)
    aug = [list(row) + [ONE if i == j else ZERO for j in range(n)] for i, row in enumerate(m)]
    red, piv = row_reduce(aug)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise SingularMatrixError("matrix is singular")
    return [row[n:] for row in red]


def matmul(a: Sequence[Sequence[Scalar]], b: Sequence[Sequence[Scalar]]) -> Dense:
    bt = transpose(b)
    return [[_dot(row, col) for col in bt] for row in a]


def matvec(a: Sequence[Sequence[Scalar]], v: Sequence[Scalar]) -> list[Scalar]:
    return [_dot(row, v) for row in a]


def _dot(u: Iterable[Scalar], v: Iterable[Scalar]) -> Scalar:
    acc = ZERO
    for x, y in zip(u, v):
        if not x.is_zero() and not y.is_zero():
            acc = acc + x * y
    return acc


def independent_rows(m: Sequence[Sequence[Scalar]]) -> list[int]:
    """Indices of the first independent rows, scanning top to bottom."""
    return row_reduce(transpose(m))[1] if m and m[0] else []


# -- sparse ------------------------------------------------------------------
class SparseMatrix:
    """Exact sparse matrix stored as ``{row: {col: Scalar}}`` with no zero entries."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows: int, ncols: int, rows: dict[int, dict[int, Scalar]] | None = None):
        self.nrows = nrows
        self.ncols = ncols
        self.rows: dict[int, dict[int, Scalar]] = {}
        for r, row in (rows or {}).items():
            clean = {c: v for c, v in row.items() if not v.is_zero()}
            if clean:
                self.rows[r] = clean

    @classmethod
    def identity(cls, n: int) -> SparseMatrix:
        return cls(n, n, {i: {i: ONE} for i in range(n)})

    @classmethod
    def zero(cls, nrows: int, ncols: int | None = None) -> SparseMatrix:
        return cls(nrows, nrows if ncols is None else ncols)

    @classmethod
    def diagonal(cls, entries: Sequence[Scalar]) -> SparseMatrix:
        return cls(len(entries), len(entries), {i: {i: v} for i, v in enumerate(entries)})

    @classmethod
    def from_dense(cls, m: Sequence[Sequence[Scalar]]) -> SparseMatrix:
        ncols = len(m[0]) if m else 0
        return cls(len(m), ncols, {i: dict(enumerate(row)) for i, row in enumerate(m)})

    def to_dense(self) -> Dense:
        out = [[ZERO] * self.ncols for _ in range(self.nrows)]
        for r, row in self.rows.items():
            for c, v in row.items():
                out[r][c] = v
        return out

    def entry(self, r: int, c: int) -> Scalar:
        return self.rows.get(r, {}).get(c, ZERO)

    def __add__(self, other: SparseMatrix) -> SparseMatrix:
        self._same_shape(other)
        rows = {r: dict(row) for r, row in self.rows.items()}
        for r, row in other.rows.items():
            target = rows.setdefault(r, {})
            for c, v in row.items():
                s = target.get(c, ZERO) + v
                if s.is_zero():
                    target.pop(c, None)
                else:
                    target[c] = s
        return SparseMatrix(self.nrows, self.ncols, rows)

    def __neg__(self) -> SparseMatrix:
        return self.scale(-ONE)

    def __sub__(self, other: SparseMatrix) -> SparseMatrix:
        return self + (-other)

    def scale(self, c: Scalar) -> SparseMatrix:
        if c.is_zero():
            return SparseMatrix(self.nrows, self.ncols)
        return SparseMatrix(
            self.nrows, self.ncols, {r: {k: c * v for k, v in row.items()} for r, row in self.rows.items()}
        )

    def __matmul__(self, other: SparseMatrix) -> SparseMatrix:
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch in product")
        out: dict[int, dict[int, Scalar]] = {}
        for r, row in self.rows.items():
            acc: dict[int, Scalar] = {}
            for k, a in row.items():
                orow = other.rows.get(k)
                if not orow:
                    continue
                for c, b in orow.items():
                    prev = acc.get(c)
                    acc[c] = a * b if prev is None else prev + a * b
            acc = {c: v for c, v in acc.items() if not v.is_zero()}
            if acc:
                out[r] = acc
        res = SparseMatrix.__new__(SparseMatrix)
        res.nrows, res.ncols, res.rows = self.nrows, other.ncols, out
        return res

    def apply(self, vec: dict[int, Scalar]) -> dict[int, Scalar]:
        """Matrix times a sparse column vector."""
        out: dict[int, Scalar] = {}
        for r, row in self.rows.items():
            acc = ZERO
            for c, v in row.items():
                x = vec.get(c)
                if x is not None:
                    acc = acc + v * x
            if not acc.is_zero():
                out[r] = acc
        return out

    def kron(self, other: SparseMatrix) -> SparseMatrix:
        rows: dict[int, dict[int, Scalar]] = {}
        for r1, row1 in self.rows.items():
            for r2, row2 in other.rows.items():
                rows[r1 * other.nrows + r2] = {
                    c1 * other.ncols + c2: a * b for c1, a in row1.items() for c2, b in row2.items()
                }
        return SparseMatrix(self.nrows * other.nrows, self.ncols * other.ncols, rows)

    def transpose(self) -> SparseMatrix:
        rows: dict[int, dict[int, Scalar]] = {}
        for r, row in self.rows.items():
            for c, v in row.items():
                rows.setdefault(c, {})[r] = v
        return SparseMatrix(self.ncols, self.nrows, rows)

    def is_zero(self) -> bool:
        return not self.rows

    def power(self, n: int) -> SparseMatrix:
        out = SparseMatrix.identity(self.nrows)
        for _ in range(n):
            out = out @ self
        return out

    def is_nilpotent_order(self, limit: int = 64) -> int:
        """Smallest n with self^n = 0 (raises if not reached within ``limit``)."""
        p = SparseMatrix.identity(self.nrows)
        for n in range(limit + 1):
            if p.is_zero():
                return n
            p = p @ self
        raise ValueError("matrix is not nilpotent within the limit")

    def inverse(self) -> SparseMatrix:
        return SparseMatrix.from_dense(inverse(self.to_dense()))

    def _same_shape(self, other: SparseMatrix) -> None:
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch")

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return (self.nrows, self.ncols, self.rows) == (other.nrows, other.ncols, other.rows)

    __hash__ = None

    def __repr__(self) -> str:
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={sum(map(len, self.rows.values()))})"
