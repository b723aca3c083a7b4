"""Minimal-norm operator extensions and their lower-bound certificates.

Given ``Y`` inside a polyhedral space ``X`` and ``T`` on ``Y``, find
``S: X -> X`` with ``S|_Y = T`` and ``||S||`` as small as possible. The
images of a coordinate complement of ``Y`` are the free unknowns; the norm
bound is imposed at every extreme point of ``B_X``. The dual multipliers of
that program become a :class:`LowerBoundCertificate`: weighted
(vertex, functional) pairs whose sum no longer depends on the unknowns and
therefore bounds the norm of every extension from below.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .exact import (
    ONE,
    ZERO,
    DimensionError,
    Mat,
    Vec,
    dot,
    inverse,
    rank,
    solve_linear,
    unit,
    vec,
)
from .lp import EQ, GE, LE, LinearProgram, solve_lp
from .spaces import (
    L1,
    LINF,
    MAX_ABS,
    PolyhedralSpace,
    Subspace,
    ball_vertices,
    dual_norm,
    norm,
    operator_norm,
    subspace_ball_vertices,
    subspace_operator_norm,
)

log = logging.getLogger(__name__)


class CertificateError(ValueError):
    """A certificate does not prove anything (it is invalid, the bound may still hold)."""


class CancellationError(CertificateError):
    """The weighted functionals do not eliminate every free unknown."""


class DualNormError(CertificateError):
    """A certificate functional has dual norm above one, or a vertex lies outside the ball."""


@dataclass(frozen=True)
class CertificateItem:
    vertex: Vec
    functional: Vec
    weight: Fraction


@dataclass(frozen=True)
class LowerBoundCertificate:
    items: tuple
    bound: Fraction

    def padded(self, n: int) -> "LowerBoundCertificate":
        """The same certificate with vertices and functionals zero-padded to length ``n``."""
        items = tuple(
            CertificateItem(
                it.vertex + (ZERO,) * (n - len(it.vertex)),
                it.functional + (ZERO,) * (n - len(it.functional)),
                it.weight,
            )
            for it in self.items
        )
        return LowerBoundCertificate(items, self.bound)


@dataclass(frozen=True)
class ExtensionProblem:
    """Extend ``op`` from ``subspace`` to the whole of ``space``.

    ``op`` is d x d in the subspace basis (``images="subspace"``) or
    n x d holding ambient images of the basis vectors (``images="ambient"``).
    """

    space: PolyhedralSpace
    subspace: Subspace
    op: Mat
    images: str = "subspace"

    def __post_init__(self):
        if self.subspace.ambient != self.space:
            raise DimensionError("subspace lives in a different space")
        d, n = self.subspace.dim, self.space.dim
        if self.op.cols != d:
            raise DimensionError(f"operator has {self.op.cols} columns for a {d}-dim subspace")
        want = d if self.images == "subspace" else n
        if self.images not in ("subspace", "ambient") or self.op.rows != want:
            raise DimensionError(f"operator {self.op.shape} does not match images={self.images!r}")

    def basis_images(self) -> Mat:
        """``n x d`` matrix of ambient images of the subspace basis."""
        if self.images == "subspace":
            return self.subspace.basis @ self.op
        return self.op

    def operator_norm(self) -> Fraction:
        return subspace_operator_norm(self.subspace, self.op, self.space, images=self.images)


@dataclass(frozen=True)
class ExtensionResult:
    extension: Mat
    value: Fraction
    t_norm: Fraction
    certificate: LowerBoundCertificate
    lp_pivots: int = field(default=0, compare=False)

    @property
    def ratio(self) -> Optional[Fraction]:
        return self.value / self.t_norm if self.t_norm else None


def complement_indices(basis: Mat) -> list[int]:
    """Coordinate vectors completing ``basis`` to a basis, first index first."""
    cols = basis.columns()
    n = basis.rows
    chosen = []
    current = len(cols)
    for k in range(n):
        if current == n:
            break
        trial = Mat.from_columns(cols + [unit(n, k)])
        if rank(trial) > current:
            cols.append(unit(n, k))
            chosen.append(k)
            current += 1
    return chosen


def _facet_rows(space: PolyhedralSpace) -> Optional[list[Vec]]:
    if space.kind == LINF:
        return [unit(space.dim, i) for i in range(space.dim)]
    if space.kind == MAX_ABS:
        return space.functionals.row_list()
    return None


def norming_functional(space: PolyhedralSpace, y: Sequence) -> Vec:
    """A functional of dual norm at most one with ``f . y = ||y||``."""
    n = space.dim
    if space.kind == L1:
        return tuple(ONE if v > 0 else -ONE if v < 0 else ZERO for v in y)
    rows = _facet_rows(space)
    best = max(range(len(rows)), key=lambda j: abs(dot(rows[j], y)))
    u = rows[best]
    return u if dot(u, y) >= 0 else tuple(-x for x in u)


def min_norm_extension(p: ExtensionProblem) -> ExtensionResult:
    """Exact minimal-norm extension with a matching dual certificate."""
    X, Y = p.space, p.subspace
    n, d = X.dim, Y.dim
    A = p.basis_images()
    comp = complement_indices(Y.basis)
    c = len(comp)
    M = Y.basis.hstack(Mat.from_columns([unit(n, k) for k in comp], rows=n)) if c else Y.basis
    Minv = inverse(M)
    verts = ball_vertices(X).representatives()

    # variable layout: Z[k][i] (k < c, i < n) | t | per-vertex auxiliaries
    nz = c * n
    t_idx = nz
    facets = _facet_rows(X)
    naux = 2 * n if X.kind == L1 else 0
    nvars = nz + 1 + naux * len(verts)
    cons = []
    groups = []  # per vertex: (fixed image, indices into cons)
    for vi, v in enumerate(verts):
        w = Minv @ v
        fixed = A @ w[:d]
        coef = w[d:]
        idx = []
        if X.kind == L1:
            base = nz + 1 + naux * vi
            for i in range(n):
                row = [ZERO] * nvars
                for k in range(c):
                    row[k * n + i] = coef[k]
                row[base + i] = -ONE
                row[base + n + i] = ONE
                idx.append(len(cons))
                cons.append((row, EQ, -fixed[i]))
            row = [ZERO] * nvars
            for j in range(2 * n):
                row[base + j] = ONE
            row[t_idx] = -ONE
            idx.append(len(cons))
            cons.append((row, LE, ZERO))
        else:
            for u in facets:
                for sgn in (ONE, -ONE):
                    row = [ZERO] * nvars
                    for k in range(c):
                        if coef[k]:
                            for i in range(n):
                                row[k * n + i] = sgn * coef[k] * u[i]
                    row[t_idx] = -ONE
                    idx.append(len(cons))
                    cons.append((row, LE, -sgn * dot(u, fixed)))
        groups.append((v, fixed, idx))
    bounds = [(None, None)] * (nz + 1) + [(ZERO, None)] * (nvars - nz - 1)
    obj = [ZERO] * nvars
    obj[t_idx] = ONE
    sol = solve_lp(LinearProgram(obj, cons, bounds))
    if sol.status != "optimal":
        raise RuntimeError(f"extension program reported {sol.status}")
    value = sol.objective_value
    x, y = sol.primal, sol.dual

    Z = [x[k * n:(k + 1) * n] for k in range(c)]
    S = Mat.from_columns(A.columns() + Z, rows=n) @ Minv

    items = []
    for v, fixed, idx in groups:
        if X.kind == L1:
            ys = [y[j] for j in idx[:-1]]
            lam = -y[idx[-1]]
            if lam == 0:
                continue
            f = tuple(-t / lam for t in ys)
        else:
            mult = [y[j] for j in idx]
            lam = -sum(mult, ZERO)
            if lam == 0:
                continue
            f = [ZERO] * n
            for fi, u in enumerate(facets):
                a, b = mult[2 * fi], mult[2 * fi + 1]
                if a != b:
                    for i in range(n):
                        f[i] += (b - a) * u[i]
            f = tuple(t / lam for t in f)
        items.append(CertificateItem(v, f, lam))
    cert = LowerBoundCertificate(tuple(items), value)

    result = ExtensionResult(S, value, p.operator_norm(), cert, sol.pivots)
    _audit(p, result)
    return result


def _audit(p: ExtensionProblem, r: ExtensionResult):
    """Re-derive every claim of an extension result; raise on any discrepancy."""
    if r.extension @ p.subspace.basis != p.basis_images():
        raise AssertionError("returned operator does not extend T")
    actual = operator_norm(p.space, p.space, r.extension)
    if actual != r.value:
        raise AssertionError(f"extension norm {actual} differs from reported value {r.value}")
    bound = verify_certificate(r.certificate, p)
    if bound != r.value:
        raise AssertionError(f"certificate proves {bound}, not the optimum {r.value}")
    if r.value < r.t_norm:
        raise AssertionError("extension norm below the norm of T")


def verify_certificate(cert: LowerBoundCertificate, p: ExtensionProblem) -> Fraction:
    """Return the lower bound on ``||S||`` that ``cert`` proves for every extension of ``p``.

    Each item contributes ``w f . S v <= w ||S v|| <= w ||S||``. Summed, the
    left side equals ``<S, G>`` with ``G = sum w f v^T``, which is the same
    for all extensions exactly when every row of ``G`` lies in ``Y``; its
    value then only involves ``S`` on ``Y``, i.e. ``T``.
    """
    X, Y = p.space, p.subspace
    n = X.dim
    total_w = ZERO
    G = [[ZERO] * n for _ in range(n)]
    for it in cert.items:
        if len(it.vertex) != n or len(it.functional) != n:
            raise DimensionError("certificate item of the wrong length")
        if it.weight < 0:
            raise CertificateError("negative weight")
        if norm(X, it.vertex) > 1:
            raise DualNormError(f"vertex {it.vertex} lies outside the unit ball")
        if dual_norm(X, it.functional) > 1:
            raise DualNormError(f"functional {it.functional} has dual norm above one")
        total_w += it.weight
        for i, fi in enumerate(it.functional):
            if fi:
                wf = it.weight * fi
                for j, vj in enumerate(it.vertex):
                    if vj:
                        G[i][j] += wf * vj
    if total_w == 0:
        raise CertificateError("certificate carries no weight")
    A = p.basis_images()
    constant = ZERO
    for i in range(n):
        ci = solve_linear(Y.basis, G[i])
        if ci is None:
            raise CancellationError(f"free unknowns survive in output coordinate {i}")
        constant += dot(A.row(i), ci)
    return constant / total_w


def subspace_dual_norm(Y: Subspace, f: Sequence) -> Fraction:
    """Norm of the functional ``c -> f . c`` (basis coordinates) on ``Y`` with the induced norm."""
    f = vec(f)
    if all(t == 0 for t in f):
        return ZERO
    return max(abs(dot(f, Y.coords(v))) for v in subspace_ball_vertices(Y).representatives())


def extend_functional(Y: Subspace, f: Sequence) -> Vec:
    """Norm-preserving extension of a functional on ``Y`` to the ambient space.

    ``f`` gives the values on the basis vectors of ``Y``. The extension is
    the optimum of a small program; that its dual norm equals the norm of
    ``f`` on ``Y`` is checked against an independent vertex computation.
    """
    f = vec(f)
    X = Y.ambient
    n, d = X.dim, Y.dim
    if len(f) != d:
        raise DimensionError(f"functional of length {len(f)} on a {d}-dim subspace")
    Bt = Y.basis.T.row_list()
    if X.kind == L1:
        # variables F (free, n) and t: min t, |F_i| <= t
        cons = [(tuple(r) + (ZERO,), EQ, fj) for r, fj in zip(Bt, f)]
        for i in range(n):
            e = unit(n, i)
            cons.append((e + (-ONE,), LE, ZERO))
            cons.append((tuple(-x for x in e) + (-ONE,), LE, ZERO))
        sol = solve_lp(LinearProgram((ZERO,) * n + (ONE,), cons, [(None, None)] * (n + 1)))
        F = sol.primal[:n]
    else:
        U = Mat.identity(n) if X.kind == LINF else X.functionals
        m = U.rows
        BU = (U @ Y.basis).T.row_list()  # d x m: coefficient of lambda_j in f . basis
        cons = [(tuple(r) + tuple(-x for x in r), EQ, fj) for r, fj in zip(BU, f)]
        sol = solve_lp(LinearProgram([ONE] * (2 * m), cons))
        lam = [a - b for a, b in zip(sol.primal[:m], sol.primal[m:])]
        F = U.T @ lam
    if sol.status != "optimal":
        raise RuntimeError(f"functional extension program reported {sol.status}")
    if Y.basis.T @ F != f:
        raise AssertionError("extension does not restrict to f")
    target = subspace_dual_norm(Y, f)
    got = dual_norm(X, F)
    if got != target or sol.objective_value != target:
        raise AssertionError(f"extension has dual norm {got}, subspace norm is {target}")
    return F


def _attained_certificate(p: ExtensionProblem, t_norm: Fraction) -> LowerBoundCertificate:
    """Single-item certificate of ``||S|| >= ||T||``: a vertex of ``B_Y`` where ``T`` attains its norm."""
    Y, X = p.subspace, p.space
    A = p.basis_images()
    if t_norm == 0:
        v = Y.basis.col(0)
        v = tuple(t / norm(X, v) for t in v)
        return LowerBoundCertificate((CertificateItem(v, (ZERO,) * X.dim, ONE),), ZERO)
    for v in subspace_ball_vertices(Y).representatives():
        img = A @ Y.coords(v)
        if norm(X, img) == t_norm:
            f = norming_functional(X, img)
            return LowerBoundCertificate((CertificateItem(v, f, ONE),), t_norm)
    raise AssertionError("operator norm not attained at a vertex")


def coordinatewise_linf_extension(Y: Subspace, T: Mat, images: str = "subspace") -> ExtensionResult:
    """Extend ``T`` row by row: row n is a Hahn-Banach extension of ``delta_n o T``."""
    X = Y.ambient
    if X.kind != LINF:
        raise ValueError("coordinatewise extension needs an l-infinity ambient space")
    p = ExtensionProblem(X, Y, T, images)
    A = p.basis_images()
    S = Mat((extend_functional(Y, A.row(i)) for i in range(X.dim)), cols=X.dim)
    t_norm = p.operator_norm()
    cert = _attained_certificate(p, t_norm)
    result = ExtensionResult(S, operator_norm(X, X, S), t_norm, cert)
    _audit(p, result)
    if result.value != t_norm:
        raise AssertionError("coordinatewise extension changed the norm")
    return result


def c0_finite_demo(basis: Mat, T: Mat, N: Optional[int] = None) -> ExtensionResult:
    """Coordinatewise extension inside a truncated copy of ``c_0``.

    The basis vectors must vanish beyond coordinate ``N``; coordinate
    functionals past the joint support vanish on ``Y`` and so do the
    matching rows of the extension.
    """
    N = basis.rows if N is None else N
    if basis.rows > N and not all(basis[i, j] == 0 for i in range(N, basis.rows) for j in range(basis.cols)):
        raise ValueError(f"basis is not supported within the first {N} coordinates")
    B = Mat(basis.row_list()[:N], cols=basis.cols)
    Y = Subspace(PolyhedralSpace.linf(N), B)
    support = max((i + 1 for i in range(N) if any(B.row(i))), default=0)
    for i in range(support, N):
        if subspace_dual_norm(Y, B.row(i)) != 0:
            raise AssertionError(f"coordinate functional {i} does not vanish on Y")
    result = coordinatewise_linf_extension(Y, T)
    for i in range(support, N):
        if any(result.extension.row(i)):
            raise AssertionError(f"row {i} beyond the support is not zero")
    return result


def power_iteration(M: np.ndarray, iters: int = 20000, tol: float = 1e-15, seed: int = 0) -> float:
    """Largest singular value of ``M`` by power iteration on ``M^T M``."""
    M = np.asarray(M, dtype=float)
    if not M.any():
        return 0.0
    G = M.T @ M
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(G.shape[0])
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(iters):
        w = G @ v
        nw = np.linalg.norm(w)
        if nw == 0:
            return 0.0
        v = w / nw
        new = float(v @ G @ v)
        if abs(new - lam) <= tol * max(1.0, new):
            lam = new
            break
        lam = new
    return float(np.sqrt(max(lam, 0.0)))


def hilbert_extension(basis: Mat, T: Mat, n: Optional[int] = None, tol: float = 1e-9) -> Mat:
    """``S = T o P`` with ``P`` the orthogonal projection onto the column span of ``basis``.

    ``S`` is exact; the norm identity ``||S||_2 = ||T||_2`` is irrational in
    general and is checked in floating point to ``tol``.
    """
    n = basis.rows if n is None else n
    if basis.rows != n:
        raise DimensionError(f"basis has {basis.rows} rows, expected {n}")
    if rank(basis) != basis.cols:
        raise ValueError("basis is rank deficient")
    if T.shape != (basis.cols, basis.cols):
        raise DimensionError(f"operator {T.shape} on a {basis.cols}-dim subspace")
    Bt = basis.T
    S = basis @ T @ inverse(Bt @ basis) @ Bt
    if S @ basis != basis @ T:
        raise AssertionError("projection extension does not restrict to T")
    s_norm = power_iteration(_to_float(S))
    t_norm = euclidean_subspace_norm(basis, T)
    if abs(s_norm - t_norm) > tol * max(1.0, t_norm):
        raise AssertionError(f"spectral norms differ: {s_norm} vs {t_norm}")
    return S


def euclidean_subspace_norm(basis: Mat, T: Mat) -> float:
    """``||T||`` on the span of ``basis`` with the Euclidean norm (floating point)."""
    B = _to_float(basis)
    L = np.linalg.cholesky(B.T @ B)
    M = B @ _to_float(T) @ np.linalg.inv(L.T)
    return power_iteration(M)


def _to_float(M: Mat) -> np.ndarray:
    return np.array([[float(x) for x in r] for r in M.row_list()], dtype=float).reshape(M.rows, M.cols)


@dataclass(frozen=True)
class LyapunovInstance:
    W: Mat
    F: Mat
    norm: PolyhedralSpace

    def __post_init__(self):
        m, n = self.W.shape
        if self.norm.dim != m:
            raise DimensionError(f"norm on dimension {self.norm.dim}, W has {m} rows")
        if self.F.shape != (n, n):
            raise DimensionError(f"F must be {n}x{n}")
        if rank(self.W) != n:
            raise ValueError("W must have full column rank")


@dataclass(frozen=True)
class LyapunovResult:
    Q: Mat
    q_norm: Fraction
    decays: bool
    induced_norm: Fraction
    certificate: LowerBoundCertificate


def lyapunov_certificate(inst: LyapunovInstance) -> LyapunovResult:
    """Smallest ``||Q||`` with ``Q W = W F``, next to the decay factor of ``V(x) = ||W x||``.

    ``induced_norm`` is the sharp contraction factor of ``V`` along
    ``x -> F x``; ``q_norm`` exceeds it only when the norm lacks the
    self-extension property on the range of ``W``.
    """
    Y = Subspace(inst.norm, inst.W)
    res = min_norm_extension(ExtensionProblem(inst.norm, Y, inst.F))
    Q = res.extension
    if Q @ inst.W != inst.W @ inst.F:
        raise AssertionError("Q W != W F")
    return LyapunovResult(Q, res.value, res.value < 1, res.t_norm, res.certificate)
