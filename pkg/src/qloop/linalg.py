"""Exact sparse linear algebra over an arbitrary field of Python scalars.

Entries may be ``Fraction`` or ``RationalFunction``; nothing here looks
at the type, only at ``+ - * /`` and truthiness.  Vectors are plain
``{index: value}`` dicts with no zero entries stored.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

Vector = Dict[int, object]


class SparseMatrix:
    """Row-major dict-of-dicts matrix; zero entries are never stored."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows: int, ncols: int, rows: Optional[Dict[int, Dict[int, object]]] = None):
        self.nrows = nrows
        self.ncols = ncols
        self.rows: Dict[int, Dict[int, object]] = {}
        if rows:
            for i, row in rows.items():
                clean = {j: v for j, v in row.items() if v}
                if clean:
                    self.rows[i] = clean

    @classmethod
    def zeros(cls, n: int, m: Optional[int] = None) -> "SparseMatrix":
        return cls(n, n if m is None else m)

    @classmethod
    def identity(cls, n: int, one=1) -> "SparseMatrix":
        return cls(n, n, {i: {i: one} for i in range(n)})

    @classmethod
    def diagonal(cls, values: Sequence) -> "SparseMatrix":
        return cls(len(values), len(values), {i: {i: v} for i, v in enumerate(values)})

    @classmethod
    def from_entries(cls, n: int, m: int, entries: Iterable[Tuple[int, int, object]]) -> "SparseMatrix":
        rows: Dict[int, Dict[int, object]] = {}
        for i, j, v in entries:
            row = rows.setdefault(i, {})
            row[j] = row.get(j, 0) + v
        return cls(n, m, rows)

    @classmethod
    def from_dense(cls, data: Sequence[Sequence]) -> "SparseMatrix":
        n = len(data)
        m = len(data[0]) if n else 0
        return cls(n, m, {i: {j: v for j, v in enumerate(r) if v} for i, r in enumerate(data)})

    def to_dense(self, zero=0) -> List[List]:
        out = [[zero] * self.ncols for _ in range(self.nrows)]
        for i, row in self.rows.items():
            for j, v in row.items():
                out[i][j] = v
        return out

    def entries(self):
        for i in sorted(self.rows):
            row = self.rows[i]
            for j in sorted(row):
                yield i, j, row[j]

    def __getitem__(self, ij):
        i, j = ij
        return self.rows.get(i, {}).get(j, 0)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def nnz(self) -> int:
        return sum(len(r) for r in self.rows.values())

    def is_zero(self) -> bool:
        return not self.rows

    def copy(self) -> "SparseMatrix":
        return SparseMatrix(self.nrows, self.ncols, {i: dict(r) for i, r in self.rows.items()})

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and (self - other).is_zero()

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        rows = {i: dict(r) for i, r in self.rows.items()}
        for i, r in other.rows.items():
            row = rows.setdefault(i, {})
            for j, v in r.items():
                row[j] = row.get(j, 0) + v
        return SparseMatrix(self.nrows, self.ncols, rows)

    def __neg__(self):
        return SparseMatrix(self.nrows, self.ncols, {i: {j: -v for j, v in r.items()} for i, r in self.rows.items()})

    def __sub__(self, other: "SparseMatrix") -> "SparseMatrix":
        return self + (-other)

    def scale(self, c) -> "SparseMatrix":
        if not c:
            return SparseMatrix(self.nrows, self.ncols)
        return SparseMatrix(self.nrows, self.ncols, {i: {j: c * v for j, v in r.items()} for i, r in self.rows.items()})

    def __rmul__(self, c):
        return self.scale(c)

    def __matmul__(self, other):
        if isinstance(other, dict):
            return self.apply(other)
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        rows: Dict[int, Dict[int, object]] = {}
        orows = other.rows
        for i, r in self.rows.items():
            acc: Dict[int, object] = {}
            for k, a in r.items():
                ok = orows.get(k)
                if not ok:
                    continue
                for j, b in ok.items():
                    acc[j] = acc.get(j, 0) + a * b
            if acc:
                rows[i] = acc
        return SparseMatrix(self.nrows, other.ncols, rows)

    def __pow__(self, n: int) -> "SparseMatrix":
        if n < 0:
            return inverse(self) ** (-n)
        result = SparseMatrix.identity(self.nrows)
        base = self
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result

    def apply(self, v: Vector) -> Vector:
        out: Vector = {}
        for i, r in self.rows.items():
            acc = 0
            for j, a in r.items():
                x = v.get(j)
                if x:
                    acc = acc + a * x
            if acc:
                out[i] = acc
        return out

    def transpose(self) -> "SparseMatrix":
        rows: Dict[int, Dict[int, object]] = {}
        for i, r in self.rows.items():
            for j, v in r.items():
                rows.setdefault(j, {})[i] = v
        return SparseMatrix(self.ncols, self.nrows, rows)

    T = property(transpose)

    def kron(self, other: "SparseMatrix") -> "SparseMatrix":
        """Kronecker product; basis index of ``a (x) b`` is ``a*dim(B) + b``."""
        m = other.nrows
        n = other.ncols
        rows: Dict[int, Dict[int, object]] = {}
        for i1, r1 in self.rows.items():
            for i2, r2 in other.rows.items():
                row = {}
                for j1, a in r1.items():
                    for j2, b in r2.items():
                        row[j1 * n + j2] = a * b
                rows[i1 * m + i2] = row
        return SparseMatrix(self.nrows * m, self.ncols * n, rows)

    def is_diagonal(self) -> bool:
        return all(set(r) <= {i} for i, r in self.rows.items())

    def __repr__(self):
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={self.nnz()})"


def commutator(a: SparseMatrix, b: SparseMatrix) -> SparseMatrix:
    return a @ b - b @ a


def kron_all(mats: Sequence[SparseMatrix]) -> SparseMatrix:
    out = mats[0]
    for m in mats[1:]:
        out = out.kron(m)
    return out


def vec_add(u: Vector, v: Vector, c=1) -> Vector:
    out = dict(u)
    for j, x in v.items():
        y = out.get(j, 0) + c * x
        if y:
            out[j] = y
        else:
            out.pop(j, None)
    return out


def vec_scale(v: Vector, c) -> Vector:
    if not c:
        return {}
    return {j: c * x for j, x in v.items()}


def reduce_against(v: Vector, basis: Dict[int, Vector]) -> Vector:
    """Reduce ``v`` modulo an echelon basis keyed by pivot column.

    Each basis row has a 1 at its pivot and zeros at the other pivots.
    """
    v = dict(v)
    for p in sorted(basis):
        c = v.get(p)
        if c:
            v = vec_add(v, basis[p], -c)
    return v


class Echelon:
    """Incrementally maintained reduced row echelon basis.

    Leftmost pivot, exact arithmetic, no magnitude heuristics, so the
    resulting basis is deterministic.
    """

    def __init__(self, dim: int):
        self.dim = dim
        self.rows: Dict[int, Vector] = {}

    def __len__(self):
        return len(self.rows)

    def reduce(self, v: Vector) -> Vector:
        return reduce_against(v, self.rows)

    def contains(self, v: Vector) -> bool:
        return not self.reduce(v)

    def add(self, v: Vector) -> Optional[Vector]:
        """Insert ``v``; returns the new reduced row or None if dependent."""
        r = self.reduce(v)
        if not r:
            return None
        p = min(r)
        c = r[p]
        if isinstance(c, int):
            c = Fraction(c)
        r = {j: x / c for j, x in r.items()}
        for q, row in list(self.rows.items()):
            a = row.get(p)
            if a:
                self.rows[q] = vec_add(row, r, -a)
        self.rows[p] = r
        return r

    def basis(self) -> List[Vector]:
        return [self.rows[p] for p in sorted(self.rows)]

    def pivots(self) -> List[int]:
        return sorted(self.rows)


def rank(mat: SparseMatrix) -> int:
    ech = Echelon(mat.ncols)
    for i in sorted(mat.rows):
        ech.add(mat.rows[i])
    return len(ech)


def nullspace(rows: Iterable[Vector], nvars: int) -> List[Vector]:
    """Basis of ``{x : r.x = 0 for all r}`` from sparse equation rows."""
    ech = Echelon(nvars)
    for r in rows:
        if r:
            ech.add(r)
    pivots = set(ech.rows)
    free = [j for j in range(nvars) if j not in pivots]
    out = []
    for f in free:
        x = {f: Fraction(1)}
        for p, row in ech.rows.items():
            c = row.get(f)
            if c:
                x[p] = -c
        out.append(x)
    return out


def inverse(mat: SparseMatrix) -> SparseMatrix:
    """Exact inverse by Gauss-Jordan on ``[A | I]``."""
    n = mat.nrows
    if n != mat.ncols:
        raise ValueError("inverse of a non-square matrix")
    aug = Echelon(2 * n)
    for i in range(n):
        row = dict(mat.rows.get(i, {}))
        row[n + i] = 1
        aug.add(row)
    if any(p >= n for p in aug.rows):
        raise ZeroDivisionError("matrix is singular")
    rows = {}
    for p in range(n):
        r = aug.rows[p]
        rows[p] = {j - n: v for j, v in r.items() if j >= n}
    return SparseMatrix(n, n, rows)


def is_invertible(mat: SparseMatrix) -> bool:
    return mat.nrows == mat.ncols and rank(mat) == mat.nrows
