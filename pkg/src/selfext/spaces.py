"""Polyhedral normed spaces, unit-ball vertices and operator norms.

A polyhedral norm is ``||x|| = max_i |u_i . x|`` for finitely many
functionals ``u_i``. ``l1`` and ``linf`` are kept as closed-form special
cases; everything else is a :class:`PolyhedralSpace` built from a
functional matrix ``U``. Operator norms are maxima over the extreme points
of the domain ball, so all of them are exact rationals.
"""

from __future__ import annotations

import itertools
import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .exact import (
    ONE,
    ZERO,
    DimensionError,
    Mat,
    Vec,
    dot,
    inverse,
    kernel_basis,
    rank,
    solve_linear,
    unit,
    vec,
)
from .lp import EQ, LinearProgram, solve_lp

L1, LINF, MAX_ABS = "l1", "linf", "max_abs"


class CapExceeded(RuntimeError):
    """A vertex enumeration would exceed the configured size limits."""


@dataclass
class Caps:
    closed_form_dim: int = 12  # l1 / linf ambient spaces
    general_dim: int = 8  # max_abs ambient spaces
    max_systems: int = 250_000  # linear systems per enumeration


caps = Caps()


def _check_dim(space: "PolyhedralSpace"):
    limit = caps.general_dim if space.kind == MAX_ABS else caps.closed_form_dim
    if space.dim > limit:
        raise CapExceeded(
            f"{space.kind} space of dimension {space.dim} exceeds the vertex cap {limit}; "
            "raise selfext.spaces.caps to allow it"
        )


@dataclass(frozen=True)
class PolyhedralSpace:
    dim: int
    kind: str = L1
    functionals: Optional[Mat] = None

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be positive")
        if self.kind not in (L1, LINF, MAX_ABS):
            raise ValueError(f"unknown norm kind {self.kind!r}")
        if self.kind == MAX_ABS:
            U = self.functionals
            if U is None or U.cols != self.dim:
                raise DimensionError("max_abs norm needs a functional matrix with dim columns")
            if U.rows < self.dim or rank(U) != self.dim:
                raise ValueError("functionals must have rank equal to the dimension to define a norm")
        elif self.functionals is not None:
            raise ValueError(f"{self.kind} norm takes no functional matrix")

    @classmethod
    def l1(cls, n: int) -> "PolyhedralSpace":
        return cls(n, L1)

    @classmethod
    def linf(cls, n: int) -> "PolyhedralSpace":
        return cls(n, LINF)

    @classmethod
    def max_abs(cls, rows: Iterable[Iterable]) -> "PolyhedralSpace":
        U = Mat(rows)
        return cls(U.cols, MAX_ABS, U)

    def describe(self) -> str:
        if self.kind == MAX_ABS:
            return f"max_abs:{self.dim}x{self.functionals.rows}"
        return f"{self.kind}:{self.dim}"


@dataclass(frozen=True)
class Subspace:
    """Column span of ``basis`` (ambient.dim x d, full column rank)."""

    ambient: PolyhedralSpace
    basis: Mat

    def __post_init__(self):
        B = self.basis
        if B.rows != self.ambient.dim:
            raise DimensionError(f"basis has {B.rows} rows in a {self.ambient.dim}-dim space")
        if B.cols < 1 or rank(B) != B.cols:
            raise ValueError("subspace basis must have full column rank")

    @property
    def dim(self) -> int:
        return self.basis.cols

    def coords(self, x: Sequence) -> Vec:
        c = solve_linear(self.basis, x)
        if c is None:
            raise ValueError("vector is not in the subspace")
        return c

    def embed(self, c: Sequence) -> Vec:
        return self.basis @ c

    def annihilator(self) -> list[Vec]:
        """Functionals whose common kernel is the subspace."""
        return kernel_basis(self.basis.T)


@dataclass(frozen=True)
class VertexSet:
    points: tuple

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def representatives(self) -> tuple:
        """One point of each +/- pair: the one whose first nonzero entry is positive."""
        return tuple(p for p in self.points if _leading_positive(p))


def _leading_positive(p: Sequence) -> bool:
    return next(x for x in p if x != 0) > 0


def _vertex_set(points: Iterable[Vec]) -> VertexSet:
    return VertexSet(tuple(sorted(set(points))))


def norm(space: PolyhedralSpace, x: Sequence) -> Fraction:
    if len(x) != space.dim:
        raise DimensionError(f"vector of length {len(x)} in a {space.dim}-dim space")
    if space.kind == L1:
        return sum((abs(t) for t in x), ZERO)
    if space.kind == LINF:
        return max((abs(t) for t in x), default=ZERO)
    return max(abs(dot(u, x)) for u in space.functionals.row_list())


def dual_norm(space: PolyhedralSpace, f: Sequence) -> Fraction:
    """Norm of the functional ``x -> f . x``."""
    if len(f) != space.dim:
        raise DimensionError(f"functional of length {len(f)} in a {space.dim}-dim space")
    if space.kind == L1:
        return max((abs(t) for t in f), default=ZERO)
    if space.kind == LINF:
        return sum((abs(t) for t in f), ZERO)
    # min sum |lam_i| subject to f = sum lam_i u_i, lam = lp - lm
    U = space.functionals
    m = U.rows
    rows = [tuple(U[i, j] for i in range(m)) + tuple(-U[i, j] for i in range(m)) for j in range(space.dim)]
    prog = LinearProgram([1] * (2 * m), [(r, EQ, fj) for r, fj in zip(rows, f)])
    sol = solve_lp(prog)
    if sol.status != "optimal":
        raise RuntimeError(f"dual-norm program reported {sol.status}; functionals do not span")
    return sol.objective_value


def _h_vertices(rows: Sequence[Vec], d: int) -> list[Vec]:
    """Vertices of ``{c : |r . c| <= 1 for r in rows}`` (a bounded, symmetric polytope)."""
    # parallel rows: only the longest one constrains
    best = {}
    for r in rows:
        if all(x == 0 for x in r):
            continue
        lead = next(x for x in r if x != 0)
        key = tuple(x / lead for x in r)
        if key not in best or abs(lead) > abs(best[key]):
            best[key] = lead
    uniq = [tuple(x * s for x in key) for key, s in sorted(best.items())]
    m = len(uniq)
    count = math.comb(m, d) * 2 ** (d - 1)
    if count > caps.max_systems:
        raise CapExceeded(f"vertex enumeration needs {count} systems (cap {caps.max_systems})")
    signs = [(ONE,) + s for s in itertools.product((ONE, -ONE), repeat=d - 1)]
    found = set()
    for subset in itertools.combinations(range(m), d):
        M = Mat((uniq[i] for i in subset), cols=d)
        try:
            Minv = inverse(M)
        except ZeroDivisionError:
            continue
        for s in signs:
            c = Minv @ s
            if all(abs(dot(r, c)) <= 1 for r in uniq):
                found.add(c)
                found.add(tuple(-x for x in c))
    return list(found)


def ball_vertices(space: PolyhedralSpace) -> VertexSet:
    _check_dim(space)
    return _ball_vertices(space)


@functools.lru_cache(maxsize=512)
def _ball_vertices(space: PolyhedralSpace) -> VertexSet:
    n = space.dim
    if space.kind == L1:
        pts = [unit(n, i) for i in range(n)]
        return _vertex_set(pts + [tuple(-x for x in p) for p in pts])
    if space.kind == LINF:
        return _vertex_set(itertools.product((ONE, -ONE), repeat=n))
    return _vertex_set(_h_vertices(space.functionals.row_list(), n))


def _l1_section_vertices(Y: Subspace) -> list[Vec]:
    """Extreme points of the l1 ball cut by ``Y``.

    Every extreme point x lies in the relative interior of the face
    ``conv{sign(x_i) e_i : i in supp x}`` and is pinned there: the only
    d in Y with supp d inside supp x and sign(x) . d = 0 is d = 0. So x is
    the unique solution of ``A x = 0, sign . x = 1`` on its support, with
    ``A`` an annihilator of Y; support size is at most codim(Y) + 1.
    """
    n, d = Y.ambient.dim, Y.dim
    ann = Y.annihilator()
    kmax = n - d + 1
    count = sum(math.comb(n, k) * 2 ** (k - 1) for k in range(1, kmax + 1))
    if count > caps.max_systems:
        raise CapExceeded(f"section enumeration needs {count} systems (cap {caps.max_systems})")
    found = set()
    for k in range(1, kmax + 1):
        for support in itertools.combinations(range(n), k):
            for tail in itertools.product((ONE, -ONE), repeat=k - 1):
                sigma = (ONE,) + tail
                rows = [tuple(a[i] for i in support) for a in ann] + [sigma]
                A = Mat(rows, cols=k)
                if rank(A) < k:
                    continue
                xs = solve_linear(A, [ZERO] * len(ann) + [ONE])
                if xs is None or any(s * v <= 0 for s, v in zip(sigma, xs)):
                    continue
                x = [ZERO] * n
                for i, v in zip(support, xs):
                    x[i] = v
                x = tuple(x)
                found.add(x)
                found.add(tuple(-v for v in x))
    return list(found)


def subspace_ball_vertices(Y: Subspace) -> VertexSet:
    """Extreme points of ``B_X`` intersected with ``Y``, in ambient coordinates."""
    _check_dim(Y.ambient)
    return _subspace_ball_vertices(Y)


@functools.lru_cache(maxsize=2048)
def _subspace_ball_vertices(Y: Subspace) -> VertexSet:
    X = Y.ambient
    if X.kind == L1:
        return _vertex_set(_l1_section_vertices(Y))
    B = Y.basis
    U = Mat.identity(X.dim) if X.kind == LINF else X.functionals
    coords = _h_vertices((U @ B).row_list(), Y.dim)
    return _vertex_set(B @ c for c in coords)


def is_extreme(space: PolyhedralSpace, x: Sequence, Y: Optional[Subspace] = None) -> bool:
    """Whether ``x`` is an extreme point of ``B_X`` (or of ``B_X`` cut by ``Y``).

    ``x`` is extreme iff ``||x|| = 1`` and no nonzero direction inside
    the subspace keeps every active functional constant.
    """
    if norm(space, x) != 1:
        return False
    n = space.dim
    if space.kind == L1:
        active = [unit(n, i) for i in range(n) if x[i] == 0]
        sgn = tuple(ONE if v > 0 else -ONE if v < 0 else ZERO for v in x)
        active.append(sgn)
    else:
        U = Mat.identity(n) if space.kind == LINF else space.functionals
        active = [u for u in U.row_list() if abs(dot(u, x)) == 1]
    B = Y.basis if Y is not None else Mat.identity(n)
    if not active:
        return False
    return rank(Mat(active, cols=n) @ B) == B.cols


def operator_norm(domain: PolyhedralSpace, codomain: PolyhedralSpace, S: Mat) -> Fraction:
    if S.cols != domain.dim or S.rows != codomain.dim:
        raise DimensionError(f"operator {S.shape} between dims {domain.dim} -> {codomain.dim}")
    if S.is_zero():
        return ZERO
    return max(norm(codomain, S @ v) for v in ball_vertices(domain).representatives())


def subspace_operator_norm(
    Y: Subspace,
    T: Mat,
    codomain: Optional[PolyhedralSpace] = None,
    images: str = "subspace",
) -> Fraction:
    """Norm of ``T`` on ``Y`` measured in ``codomain`` (default: the ambient space).

    With ``images="subspace"`` T is d x d in basis coordinates and the
    image of a vertex v is ``B T coords(v)``; with ``images="ambient"`` T
    maps basis coordinates straight into the codomain.
    """
    codomain = codomain or Y.ambient
    if T.cols != Y.dim:
        raise DimensionError(f"operator with {T.cols} columns on a {Y.dim}-dim subspace")
    if images == "subspace":
        if T.rows != Y.dim:
            raise DimensionError(f"operator {T.shape} is not an endomorphism of a {Y.dim}-dim subspace")
        A = Y.basis @ T
    elif images == "ambient":
        A = T
    else:
        raise ValueError(f"images must be 'subspace' or 'ambient', not {images!r}")
    if A.rows != codomain.dim:
        raise DimensionError(f"images of length {A.rows} in a {codomain.dim}-dim codomain")
    if A.is_zero():
        return ZERO
    return max(norm(codomain, A @ Y.coords(v)) for v in subspace_ball_vertices(Y).representatives())


def sum_zero(n: int) -> Subspace:
    """``{x in l1^n : sum x = 0}`` with basis ``u_k = e_1 - e_k``, k = 2..n."""
    cols = [tuple(ONE if i == 0 else -ONE if i == k else ZERO for i in range(n)) for k in range(1, n)]
    return Subspace(PolyhedralSpace.l1(n), Mat.from_columns(cols))


def hyperplane(space: PolyhedralSpace, f: Sequence) -> Subspace:
    """``ker f`` with the basis ``kernel_basis`` returns."""
    f = vec(f)
    basis = kernel_basis(Mat([f]))
    return Subspace(space, Mat.from_columns(basis, rows=space.dim))
