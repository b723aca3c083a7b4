"""Norm-preserving extensions from hyperplanes of three-dimensional l1.

``Y = ker f`` with pivot ``p`` (first index where ``f`` is nonzero) is
spanned by ``b_k = r_k e_p - e_k`` for the two other indices ``k``, where
``r_k = f_k / f_p``. An extension ``S`` of ``T`` is fixed by ``w = S e_p``:
``S e_k = r_k w - T b_k``. With ``||T|| = 1`` the column norms are

    ||S e_p|| = ||w - gamma||,  ||S e_k|| = |r_k| ||w - T b_k / r_k||,

so a norm-one extension is a point ``w`` within ``mu_k = 1/|r_k|`` of each
``alpha_k = T b_k / r_k`` and within 1 of ``gamma = 0``. Such a point is
built from the coordinatewise median ``z``. The arithmetic is exact and
every identity along the way is asserted.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .exact import ONE, ZERO, Mat, Vec, vec, vscale, vsub
from .extend import ExtensionProblem, ExtensionResult, _attained_certificate, _audit
from .spaces import PolyhedralSpace, Subspace, norm, operator_norm, subspace_operator_norm

_L1_3 = PolyhedralSpace.l1(3)


def _n1(x: Sequence) -> Fraction:
    return norm(_L1_3, x)


class R3InvariantError(AssertionError):
    """An identity of the construction failed; the input slipped past its preconditions."""


@dataclass(frozen=True)
class HyperplaneParams:
    pivot: int
    others: tuple  # the two remaining indices, in increasing order
    r: tuple  # r_k for k in others
    permutation: tuple  # original index playing role 1, 2, 3

    def basis(self) -> Mat:
        """Columns ``r_k e_pivot - e_k``; equals ``-e_k`` when ``r_k = 0``."""
        cols = []
        for k, rk in zip(self.others, self.r):
            v = [ZERO] * 3
            v[self.pivot] = rk
            v[k] = -ONE
            cols.append(v)
        return Mat.from_columns(cols)


@dataclass(frozen=True)
class R3Trace:
    alpha: Vec
    beta: Vec
    gamma: Vec
    mu: tuple
    s: tuple
    z: Vec
    u: Vec
    v: Vec
    w: Vec
    step: Fraction  # min(mu_2 / ||z||, 1)
    relabel: tuple  # relabel[i] = original role (0: alpha, 1: beta, 2: gamma) now in role i

    def to_json(self) -> dict:
        from .serialize import encode

        return encode(asdict(self))


def hyperplane_params(f: Sequence) -> HyperplaneParams:
    f = vec(f)
    if len(f) != 3:
        raise ValueError("functional must have three entries")
    p = next((i for i, x in enumerate(f) if x != 0), None)
    if p is None:
        raise ValueError("the zero functional does not define a hyperplane")
    others = tuple(k for k in range(3) if k != p)
    r = tuple(f[k] / f[p] for k in others)
    return HyperplaneParams(p, others, r, (p,) + others)


def median_z(alpha: Sequence, beta: Sequence, gamma: Sequence) -> Vec:
    """Coordinatewise offset of ``alpha`` from the interval spanned by ``beta`` and ``gamma``."""
    z = []
    for a, b, g in zip(alpha, beta, gamma):
        if (a - b) * (a - g) <= 0:
            z.append(ZERO)
        elif a > max(b, g):
            z.append(a - max(b, g))
        else:
            z.append(a - min(b, g))
    return tuple(z)


def _check(cond: bool, what: str):
    if not cond:
        raise R3InvariantError(what)


def _median_point(alpha: Vec, beta: Vec, mu2: Fraction, mu3: Fraction) -> tuple[Vec, R3Trace]:
    """A point within ``mu2`` of alpha, ``mu3`` of beta and 1 of the origin."""
    gamma = (ZERO,) * 3
    pts = (alpha, beta, gamma)
    mu = (mu2, mu3, ONE)
    # s attached to each point is the slack of the pair opposite to it
    s = (
        mu[1] + mu[2] - _n1(vsub(beta, gamma)),
        mu[0] + mu[2] - _n1(vsub(alpha, gamma)),
        mu[0] + mu[1] - _n1(vsub(alpha, beta)),
    )
    _check(all(x >= 0 for x in s), f"negative slack {s}: operator norm exceeds one")
    relabel = tuple(sorted(range(3), key=lambda i: -s[i]))
    a, b, g = (pts[i] for i in relabel)
    m2, m3, m4 = (mu[i] for i in relabel)
    s2, s3, s4 = (s[i] for i in relabel)
    _check(s2 >= s3 >= s4, "relabeling failed to sort the slacks")
    ab, ag, bg = _n1(vsub(a, b)), _n1(vsub(a, g)), _n1(vsub(b, g))
    _check(ab == m2 + m3 - s4 and ag == m2 + m4 - s3 and bg == m3 + m4 - s2, "slack equations")

    z = median_z(a, b, g)
    u = vsub(vsub(a, b), z)
    v = vsub(vsub(a, g), z)
    nz, nu, nv = _n1(z), _n1(u), _n1(v)
    half = Fraction(1, 2)
    _check(nz == half * (ab + ag - bg) == m2 + half * (s2 - s3 - s4), "norm of z")
    _check(nu == half * (ab + bg - ag) == m3 + half * (s3 - s2 - s4), "norm of u")
    _check(nv == half * (ag + bg - ab) == m4 + half * (s4 - s2 - s3), "norm of v")

    step = ONE if nz == 0 else min(m2 / nz, ONE)
    w = vsub(a, vscale(step, z))
    excess = max(nz - m2, ZERO)
    _check(_n1(vsub(w, a)) == step * nz <= m2, "distance to alpha")
    _check(_n1(vsub(w, b)) <= nu + excess == m3 + max(-s4, half * (s3 - s2 - s4)) <= m3, "distance to beta")
    _check(_n1(vsub(w, g)) <= nv + excess == m4 + max(-s3, half * (s4 - s2 - s3)) <= m4, "distance to gamma")
    trace = R3Trace(a, b, g, (m2, m3, m4), (s2, s3, s4), z, u, v, w, step, relabel)
    return w, trace


def r3_extend_traced(f: Sequence, T: Mat) -> tuple[ExtensionResult, HyperplaneParams, Optional[R3Trace]]:
    """Extend ``T`` (2 x 2, in the basis of :meth:`HyperplaneParams.basis`) from ``ker f`` to l1^3."""
    params = hyperplane_params(f)
    B = params.basis()
    Y = Subspace(_L1_3, B)
    if T.shape != (2, 2):
        raise ValueError("operator on a hyperplane of R^3 must be 2 x 2")
    problem = ExtensionProblem(_L1_3, Y, T)
    t_norm = subspace_operator_norm(Y, T)
    p, (k2, k3), (r2, r3) = params.pivot, params.others, params.r
    trace = None
    if t_norm == 0:
        S = Mat.zeros(3, 3)
    else:
        images = (B @ T).scale(ONE / t_norm).columns()  # T b_k for the normalised T
        tb2, tb3 = images
        if r2 == 0 and r3 == 0:
            w = (ZERO,) * 3
        elif r2 == 0 or r3 == 0:
            rk, tbk = (r3, tb3) if r2 == 0 else (r2, tb2)
            beta = vscale(ONE / rk, tbk)
            w = vscale(abs(rk) / (1 + abs(rk)), beta)
        else:
            alpha, beta = vscale(ONE / r2, tb2), vscale(ONE / r3, tb3)
            w, trace = _median_point(alpha, beta, ONE / abs(r2), ONE / abs(r3))
            _check(_n1(vsub(vscale(r2, w), tb2)) == abs(r2) * _n1(vsub(w, alpha)) <= 1, "column k2")
            _check(_n1(vsub(vscale(r3, w), tb3)) == abs(r3) * _n1(vsub(w, beta)) <= 1, "column k3")
            _check(_n1(w) <= 1, "pivot column")
        cols = [None] * 3
        cols[p] = w
        cols[k2] = vsub(vscale(r2, w), tb2)
        cols[k3] = vsub(vscale(r3, w), tb3)
        S = Mat.from_columns(cols).scale(t_norm)
    value = operator_norm(_L1_3, _L1_3, S)
    _check(value == t_norm, f"extension norm {value} differs from {t_norm}")
    result = ExtensionResult(S, value, t_norm, _attained_certificate(problem, t_norm))
    _audit(problem, result)
    return result, params, trace


def r3_extend(f: Sequence, T: Mat) -> ExtensionResult:
    return r3_extend_traced(f, T)[0]
