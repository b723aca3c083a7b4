"""Exact rational vectors, matrices and the linear-algebra kernel.

Scalars are :class:`fractions.Fraction`. Vectors are plain tuples of
fractions; matrices are immutable :class:`Mat` instances stored row-major.
Every routine here is exact and deterministic (first nonzero pivot in
column order).
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Optional, Sequence

Rational = Fraction
Vec = tuple  # tuple[Fraction, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


class DimensionError(ValueError):
    """Operands have incompatible shapes."""


def as_rational(x) -> Fraction:
    """Coerce ints, fractions and ``"p/q"`` strings to a Fraction.

    Floats are rejected: they would silently import rounding error into the
    exact engine.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, (int, _RationalABC)):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        if "/" in s:
            num, _, den = s.partition("/")
            try:
                p, q = int(num), int(den)
            except ValueError:
                raise ValueError(f"not a rational literal: {x!r}") from None
            if q == 0:
                raise ValueError(f"zero denominator in {x!r}")
            return Fraction(p, q)
        try:
            return Fraction(int(s))
        except ValueError:
            raise ValueError(f"not a rational literal: {x!r}") from None
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def vec(entries: Iterable) -> Vec:
    return tuple(as_rational(e) for e in entries)


def zeros(n: int) -> Vec:
    return (ZERO,) * n


def unit(n: int, i: int) -> Vec:
    return tuple(ONE if k == i else ZERO for k in range(n))


def dot(a: Sequence, b: Sequence) -> Fraction:
    if len(a) != len(b):
        raise DimensionError(f"dot of lengths {len(a)} and {len(b)}")
    s = ZERO
    for x, y in zip(a, b):
        if x and y:
            s += x * y
    return s


def vadd(a: Sequence, b: Sequence) -> Vec:
    if len(a) != len(b):
        raise DimensionError(f"add of lengths {len(a)} and {len(b)}")
    return tuple(x + y for x, y in zip(a, b))


def vsub(a: Sequence, b: Sequence) -> Vec:
    if len(a) != len(b):
        raise DimensionError(f"sub of lengths {len(a)} and {len(b)}")
    return tuple(x - y for x, y in zip(a, b))


def vscale(c, a: Sequence) -> Vec:
    c = as_rational(c)
    return tuple(c * x for x in a)


class Mat:
    """Immutable dense rational matrix."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, data: Iterable[Iterable] = (), cols: Optional[int] = None):
        rows = tuple(vec(r) for r in data)
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise DimensionError("ragged matrix rows")
        self.rows = len(rows)
        self.cols = cols
        self._data = rows

    @classmethod
    def from_columns(cls, columns: Iterable[Iterable], rows: Optional[int] = None) -> "Mat":
        cols = [vec(c) for c in columns]
        if not cols:
            return cls((() for _ in range(rows or 0)), cols=0)
        return cls(zip(*cols), cols=len(cols))

    @classmethod
    def identity(cls, n: int) -> "Mat":
        return cls((unit(n, i) for i in range(n)), cols=n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Mat":
        return cls((zeros(cols) for _ in range(rows)), cols=cols)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def row(self, i: int) -> Vec:
        return self._data[i]

    def col(self, j: int) -> Vec:
        return tuple(r[j] for r in self._data)

    def row_list(self) -> list[Vec]:
        return list(self._data)

    def columns(self) -> list[Vec]:
        return [self.col(j) for j in range(self.cols)]

    def __getitem__(self, ij):
        i, j = ij
        return self._data[i][j]

    @property
    def T(self) -> "Mat":
        return Mat.from_columns(self._data, rows=self.cols) if self.rows else Mat.zeros(self.cols, 0)

    def __matmul__(self, other):
        if isinstance(other, Mat):
            if self.cols != other.rows:
                raise DimensionError(f"matmul {self.shape} @ {other.shape}")
            ocols = other.columns()
            return Mat(((dot(r, c) for c in ocols) for r in self._data), cols=other.cols)
        other = tuple(other)
        if self.cols != len(other):
            raise DimensionError(f"matvec {self.shape} @ ({len(other)},)")
        return tuple(dot(r, other) for r in self._data)

    def __add__(self, other: "Mat") -> "Mat":
        if self.shape != other.shape:
            raise DimensionError(f"add {self.shape} + {other.shape}")
        return Mat((vadd(a, b) for a, b in zip(self._data, other._data)), cols=self.cols)

    def __sub__(self, other: "Mat") -> "Mat":
        if self.shape != other.shape:
            raise DimensionError(f"sub {self.shape} - {other.shape}")
        return Mat((vsub(a, b) for a, b in zip(self._data, other._data)), cols=self.cols)

    def __neg__(self) -> "Mat":
        return Mat((tuple(-x for x in r) for r in self._data), cols=self.cols)

    def scale(self, c) -> "Mat":
        return Mat((vscale(c, r) for r in self._data), cols=self.cols)

    def hstack(self, other: "Mat") -> "Mat":
        if self.rows != other.rows:
            raise DimensionError(f"hstack {self.shape} | {other.shape}")
        return Mat((a + b for a, b in zip(self._data, other._data)), cols=self.cols + other.cols)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self._data for x in r)

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._data]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Mat):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self._data))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(format_rational(x) for x in r) for r in self._data)
        return f"Mat({self.rows}x{self.cols}: [{body}])"


def _rref(rows: list[list[Fraction]], ncols: int) -> list[int]:
    """Reduce ``rows`` in place to reduced row echelon form; return pivot columns."""
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r][c]
        if piv != 1:
            rows[r] = [x / piv for x in rows[r]]
        prow = rows[r]
        for i in range(nrows):
            if i != r:
                f = rows[i][c]
                if f != 0:
                    rows[i] = [a - f * b for a, b in zip(rows[i], prow)]
        pivots.append(c)
        r += 1
    return pivots


def rank(A: Mat) -> int:
    rows = [list(r) for r in A.row_list()]
    return len(_rref(rows, A.cols))


def solve_linear(A: Mat, b: Sequence) -> Optional[Vec]:
    """Return some exact solution of ``A x = b`` or ``None`` if inconsistent.

    Free variables are set to zero, so the answer is the unique solution
    supported on the pivot columns of the reduced echelon form.
    """
    b = vec(b)
    if A.rows != len(b):
        raise DimensionError(f"system {A.shape} with rhs of length {len(b)}")
    n = A.cols
    rows = [list(r) + [bi] for r, bi in zip(A.row_list(), b)]
    pivots = _rref(rows, n)
    for r in rows[len(pivots):]:
        if r[n] != 0:
            return None
    x = [ZERO] * n
    for i, c in enumerate(pivots):
        x[c] = rows[i][n]
    return tuple(x)


def kernel_basis(A: Mat) -> list[Vec]:
    """Basis of ``{x : A x = 0}``, each vector scaled so its first nonzero entry is 1."""
    n = A.cols
    rows = [list(r) for r in A.row_list()]
    pivots = _rref(rows, n)
    pivot_set = set(pivots)
    basis = []
    for j in range(n):
        if j in pivot_set:
            continue
        x = [ZERO] * n
        x[j] = ONE
        for i, c in enumerate(pivots):
            x[c] = -rows[i][j]
        lead = next(v for v in x if v != 0)
        basis.append(tuple(v / lead for v in x))
    return basis


def inverse(A: Mat) -> Mat:
    if A.rows != A.cols:
        raise DimensionError(f"inverse of non-square {A.shape}")
    n = A.rows
    rows = [list(r) + list(unit(n, i)) for i, r in enumerate(A.row_list())]
    pivots = _rref(rows, n)
    if len(pivots) != n:
        raise ZeroDivisionError("matrix is singular")
    return Mat((r[n:] for r in rows), cols=n)
