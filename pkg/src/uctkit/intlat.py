"""Exact integer lattice linear algebra.

Everything here runs on Python's arbitrary-precision integers; no floats,
no fixed-width arithmetic anywhere.  Matrices are immutable once built and
degenerate shapes (0 rows or 0 columns) are legal and denote zero maps.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


class DimensionMismatch(ValueError):
    """Operand shapes are incompatible."""


class NotASummand(ValueError):
    """A column span is not a direct summand of the ambient free group."""


class DependentColumns(ValueError):
    """Columns were required to be independent but are not."""


Vector = tuple[int, ...]


class IntMatrix:
    """Immutable integer matrix, row-major."""

    __slots__ = ("rows", "cols", "_data", "_hash")

    def __init__(self, rows: int, cols: int, entries: Iterable[Iterable[int]]):
        data = tuple(tuple(int(x) for x in row) for row in entries)
        if len(data) != rows or any(len(r) != cols for r in data):
            raise DimensionMismatch(f"expected {rows}x{cols} entries")
        self.rows = rows
        self.cols = cols
        self._data = data
        self._hash = None

    @classmethod
    def from_rows(cls, entries: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = len(entries)
        if rows == 0:
            if cols is None:
                raise DimensionMismatch("column count required for a matrix with no rows")
            return cls(0, cols, [])
        return cls(rows, len(entries[0]), entries)

    @classmethod
    def zero(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, [[0] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int | None = None) -> "IntMatrix":
        if not columns:
            if rows is None:
                raise DimensionMismatch("row count required for a matrix with no columns")
            return cls(rows, 0, [[] for _ in range(rows)])
        rows = len(columns[0])
        return cls(rows, len(columns), [[columns[j][i] for j in range(len(columns))] for i in range(rows)])

    @classmethod
    def diagonal(cls, rows: int, cols: int, diag: Sequence[int]) -> "IntMatrix":
        m = [[0] * cols for _ in range(rows)]
        for i, d in enumerate(diag):
            m[i][i] = d
        return cls(rows, cols, m)

    def __getitem__(self, idx: tuple[int, int]) -> int:
        return self._data[idx[0]][idx[1]]

    def row(self, i: int) -> Vector:
        return self._data[i]

    def column(self, j: int) -> Vector:
        return tuple(self._data[i][j] for i in range(self.rows))

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.cols)]

    def to_lists(self) -> list[list[int]]:
        return [list(r) for r in self._data]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows,
                         [[self._data[i][j] for i in range(self.rows)] for j in range(self.cols)])

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise DimensionMismatch(f"{self.shape} @ {other.shape}")
        od = other._data
        out = []
        for i in range(self.rows):
            ri = self._data[i]
            row = [0] * other.cols
            for k, a in enumerate(ri):
                if a:
                    rk = od[k]
                    for j in range(other.cols):
                        row[j] += a * rk[j]
            out.append(row)
        return IntMatrix(self.rows, other.cols, out)

    def apply(self, v: Sequence[int]) -> Vector:
        if len(v) != self.cols:
            raise DimensionMismatch(f"{self.shape} applied to vector of length {len(v)}")
        return tuple(sum(self._data[i][j] * v[j] for j in range(self.cols)) for i in range(self.rows))

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} + {other.shape}")
        return IntMatrix(self.rows, self.cols,
                         [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self._data, other._data)])

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self + (-other)

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, [[-a for a in r] for r in self._data])

    def scale(self, c: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, [[c * a for a in r] for r in self._data])

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.rows != other.rows:
            raise DimensionMismatch(f"hstack {self.shape} with {other.shape}")
        return IntMatrix(self.rows, self.cols + other.cols,
                         [r1 + r2 for r1, r2 in zip(self._data, other._data)])

    def is_zero(self) -> bool:
        return all(all(a == 0 for a in r) for r in self._data)

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, IntMatrix) and self.shape == other.shape
                and self._data == other._data)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self._data))
        return self._hash

    def __repr__(self) -> str:
        return f"IntMatrix({self.rows}x{self.cols}, {self.to_lists()})"

    def to_json(self) -> list[list[str]]:
        """Arrays of arrays of decimal strings; strings preserve arbitrary precision."""
        return [[str(a) for a in r] for r in self._data]

    @classmethod
    def from_json(cls, doc: Sequence[Sequence[str]], rows: int | None = None,
                  cols: int | None = None) -> "IntMatrix":
        data = [[int(x) for x in row] for row in doc]
        if not data:
            return cls(rows or 0, cols if cols is not None else 0, [])
        return cls(len(data), len(data[0]), data)


@dataclass(frozen=True)
class SnfDecomposition:
    """U @ M @ V == D with U, V unimodular and nonnegative diagonal d1 | d2 | ..."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    def diagonal(self) -> list[int]:
        return [self.D[i, i] for i in range(min(self.D.rows, self.D.cols))]

    def verify(self, M: IntMatrix) -> None:
        assert self.U @ M @ self.V == self.D, "U M V != D"
        assert abs(det(self.U)) == 1, "U not unimodular"
        assert abs(det(self.V)) == 1, "V not unimodular"
        diag = self.diagonal()
        for i in range(min(self.D.rows, self.D.cols)):
            for j in range(self.D.cols):
                if i != j and i < self.D.rows:
                    assert self.D[i, j] == 0 or i == j
        assert all(d >= 0 for d in diag)
        for a, b in zip(diag, diag[1:]):
            if a == 0:
                assert b == 0, "divisibility chain broken"
            else:
                assert b % a == 0, "divisibility chain broken"


def det(M: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    if M.rows != M.cols:
        raise DimensionMismatch("determinant of a non-square matrix")
    n = M.rows
    if n == 0:
        return 1
    a = M.to_lists()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _find_pivot(a: list[list[int]], t: int, rows: int, cols: int) -> tuple[int, int] | None:
    """Smallest |entry| among the nonzero entries of a[t:, t:], row-major tie break."""
    best = None
    best_abs = None
    for i in range(t, rows):
        ai = a[i]
        for j in range(t, cols):
            v = ai[j]
            if v:
                av = abs(v)
                if best_abs is None or av < best_abs:
                    best, best_abs = (i, j), av
                    if av == 1:
                        return best
    return best


def smith_normal_form(M: IntMatrix) -> SnfDecomposition:
    """Diagonalize M over the integers: U M V = D, d1 | d2 | ..., all di >= 0.

    Deterministic: the pivot is always the smallest nonzero entry by absolute
    value (row-major tie break).  Total on all matrices, including empty ones.
    """
    rows, cols = M.rows, M.cols
    a = M.to_lists()
    u = IntMatrix.identity(rows).to_lists()
    v = IntMatrix.identity(cols).to_lists()
    t = 0
    limit = min(rows, cols)
    while t < limit:
        piv = _find_pivot(a, t, rows, cols)
        if piv is None:
            break
        pi, pj = piv
        if pi != t:
            a[t], a[pi] = a[pi], a[t]
            u[t], u[pi] = u[pi], u[t]
        if pj != t:
            for r in a:
                r[t], r[pj] = r[pj], r[t]
            for r in v:
                r[t], r[pj] = r[pj], r[t]
        while True:
            # clear column t below the pivot
            dirty = False
            for i in range(t + 1, rows):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    if q:
                        ai, at = a[i], a[t]
                        for j in range(cols):
                            ai[j] -= q * at[j]
                        ui, ut = u[i], u[t]
                        for j in range(rows):
                            ui[j] -= q * ut[j]
                    if a[i][t]:
                        # remainder is strictly smaller; promote it to pivot
                        a[t], a[i] = a[i], a[t]
                        u[t], u[i] = u[i], u[t]
                        dirty = True
            if dirty:
                continue
            # clear row t right of the pivot
            for j in range(t + 1, cols):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    if q:
                        for r in a:
                            r[j] -= q * r[t]
                        for r in v:
                            r[j] -= q * r[t]
                    if a[t][j]:
                        for r in a:
                            r[t], r[j] = r[j], r[t]
                        for r in v:
                            r[t], r[j] = r[j], r[t]
                        dirty = True
            if dirty:
                continue
            # pivot must divide every remaining entry
            fix = None
            p = a[t][t]
            for i in range(t + 1, rows):
                ai = a[i]
                for j in range(t + 1, cols):
                    if ai[j] % p:
                        fix = i
                        break
                if fix is not None:
                    break
            if fix is None:
                break
            ai, at = a[fix], a[t]
            for j in range(cols):
                at[j] += ai[j]
            ut, uf = u[t], u[fix]
            for j in range(rows):
                ut[j] += uf[j]
        if a[t][t] < 0:
            for j in range(cols):
                a[t][j] = -a[t][j]
            for j in range(rows):
                u[t][j] = -u[t][j]
        t += 1
    return SnfDecomposition(IntMatrix(rows, rows, u), IntMatrix(rows, cols, a),
                            IntMatrix(cols, cols, v))


def kernel_basis(M: IntMatrix) -> IntMatrix:
    """Basis of the integer kernel {x : Mx = 0}, returned as matrix columns.

    Column-style gcd elimination; only the column transform is tracked, which
    keeps this usable on the wide systems that show up in cocycle spaces.
    The resulting columns freely generate the kernel, which is a direct
    summand of the ambient Z^cols.
    """
    rows, cols = M.rows, M.cols
    a = [list(M.column(j)) for j in range(cols)]     # work column-wise
    v = [[1 if i == j else 0 for i in range(cols)] for j in range(cols)]  # v[j] = column j of V
    pivot = 0
    for r in range(rows):
        live = [j for j in range(pivot, cols) if a[j][r]]
        if not live:
            continue
        while len(live) > 1:
            live.sort(key=lambda j: abs(a[j][r]))
            base = live[0]
            nxt = []
            for j in live[1:]:
                q = a[j][r] // a[base][r]
                if q:
                    ab, aj = a[base], a[j]
                    for i in range(r, rows):
                        aj[i] -= q * ab[i]
                    vb, vj = v[base], v[j]
                    for i in range(cols):
                        vj[i] -= q * vb[i]
                if a[j][r]:
                    nxt.append(j)
            live = [base] + nxt
        j = live[0]
        if j != pivot:
            a[j], a[pivot] = a[pivot], a[j]
            v[j], v[pivot] = v[pivot], v[j]
        pivot += 1
        if pivot == cols:
            break
    return IntMatrix.from_columns([tuple(v[j]) for j in range(pivot, cols)], rows=cols)


class LinearSolver:
    """Solve M x = b exactly for many right-hand sides, via one SNF of M."""

    def __init__(self, M: IntMatrix):
        self.M = M
        self.snf = smith_normal_form(M)
        self._diag = self.snf.diagonal()

    def solve(self, b: Sequence[int]) -> Vector | None:
        if len(b) != self.M.rows:
            raise DimensionMismatch("right-hand side length mismatch")
        ub = self.snf.U.apply(b)
        y = [0] * self.M.cols
        for i in range(self.M.rows):
            d = self._diag[i] if i < len(self._diag) else 0
            if d == 0:
                if ub[i] != 0:
                    return None
            else:
                if ub[i] % d:
                    return None
                if i < self.M.cols:
                    y[i] = ub[i] // d
        return self.snf.V.apply(y)


def image_membership(M: IntMatrix, b: Sequence[int]) -> Vector | None:
    """A witness x with Mx = b, or None when b is not in the image."""
    return LinearSolver(M).solve(b)


def summand_retraction(S: IntMatrix) -> IntMatrix:
    """R with R @ S = identity, when the column span of S is a direct summand.

    Raises DependentColumns when the columns are not independent, and
    NotASummand when the span has finite index > 1 in its saturation
    (e.g. the column (2) inside Z).
    """
    snf = smith_normal_form(S)
    diag = snf.diagonal()
    if len(diag) < S.cols or any(d == 0 for d in diag[:S.cols]):
        raise DependentColumns("columns are not independent")
    if any(d != 1 for d in diag[:S.cols]):
        raise NotASummand("column span is a proper finite-index subgroup of its saturation")
    # U S V = [I; 0]  =>  (V @ pinv(D) @ U) S = identity
    dplus = IntMatrix.diagonal(S.cols, S.rows, [1] * S.cols)
    return snf.V @ dplus @ snf.U


def unimodular_inverse(U: IntMatrix) -> IntMatrix:
    """Exact inverse of a unimodular integer matrix."""
    if U.rows != U.cols:
        raise DimensionMismatch("inverse of a non-square matrix")
    solver = LinearSolver(U)
    cols = []
    for i in range(U.rows):
        e = [1 if k == i else 0 for k in range(U.rows)]
        x = solver.solve(e)
        if x is None:
            raise DependentColumns("matrix is not invertible over the integers")
        cols.append(x)
    return IntMatrix.from_columns(cols, rows=U.rows)


def matrix_rank(M: IntMatrix) -> int:
    return sum(1 for d in smith_normal_form(M).diagonal() if d != 0)
