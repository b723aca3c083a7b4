"""Exact rational linear programming.

Two-phase primal simplex on a dense tableau of Fractions with Bland's
anti-cycling rule. Every answer leaves the solver together with a witness
(dual multipliers, a Farkas vector or an unbounded ray) and is re-checked
by :func:`check_solution`, which uses nothing but exact arithmetic on the
original program.

Sign conventions for a minimisation: a ``>=`` row has multiplier ``>= 0``,
a ``<=`` row has multiplier ``<= 0``, an ``=`` row is free. The reduced
costs ``c - A^T y`` are absorbed by the variable bounds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .exact import ZERO, ONE, Vec, as_rational, dot, vec

LE, EQ, GE = "<=", "=", ">="
_RELATIONS = (LE, EQ, GE)

Bound = tuple  # (lower | None, upper | None)


class LPError(ValueError):
    """Malformed linear program."""


class SolverError(RuntimeError):
    """The solver produced an answer that failed exact verification."""


@dataclass(frozen=True)
class Constraint:
    row: Vec
    relation: str
    rhs: Fraction

    def __post_init__(self):
        if self.relation not in _RELATIONS:
            raise LPError(f"unknown relation {self.relation!r}")
        object.__setattr__(self, "row", vec(self.row))
        object.__setattr__(self, "rhs", as_rational(self.rhs))


@dataclass(frozen=True)
class LinearProgram:
    """Minimise ``objective . x`` subject to ``constraints`` and ``bounds``.

    ``bounds`` holds one ``(lower, upper)`` pair per variable, ``None``
    meaning unbounded on that side. When omitted every variable is ``>= 0``.
    """

    objective: Vec
    constraints: tuple = ()
    bounds: Optional[tuple] = None

    def __post_init__(self):
        c = vec(self.objective)
        object.__setattr__(self, "objective", c)
        cons = tuple(
            k if isinstance(k, Constraint) else Constraint(*k) for k in self.constraints
        )
        object.__setattr__(self, "constraints", cons)
        n = len(c)
        for k in cons:
            if len(k.row) != n:
                raise LPError(f"constraint of width {len(k.row)} in a {n}-variable program")
        if self.bounds is None:
            bounds = ((ZERO, None),) * n
        else:
            bounds = tuple(
                (None if lo is None else as_rational(lo), None if hi is None else as_rational(hi))
                for lo, hi in self.bounds
            )
            if len(bounds) != n:
                raise LPError(f"{len(bounds)} bounds for {n} variables")
        object.__setattr__(self, "bounds", bounds)

    @property
    def nvars(self) -> int:
        return len(self.objective)


@dataclass(frozen=True)
class LPSolution:
    status: str  # "optimal" | "infeasible" | "unbounded"
    primal: Optional[Vec] = None
    dual: Optional[Vec] = None
    objective_value: Optional[Fraction] = None
    ray: Optional[Vec] = None
    pivots: int = field(default=0, compare=False)


def _bound_term(r: Fraction, lo, hi):
    """Contribution of reduced cost ``r`` to the dual objective, or None if infeasible."""
    if r > 0:
        return None if lo is None else r * lo
    if r < 0:
        return None if hi is None else r * hi
    return ZERO


def _reduced_costs(p: LinearProgram, y: Sequence) -> list:
    r = list(p.objective)
    for k, yi in zip(p.constraints, y):
        if yi:
            for j, a in enumerate(k.row):
                if a:
                    r[j] -= yi * a
    return r


def _dual_signs_ok(p: LinearProgram, y: Sequence) -> bool:
    for k, yi in zip(p.constraints, y):
        if k.relation == GE and yi < 0:
            return False
        if k.relation == LE and yi > 0:
            return False
    return True


def _primal_feasible(p: LinearProgram, x: Sequence) -> bool:
    for (lo, hi), xj in zip(p.bounds, x):
        if lo is not None and xj < lo:
            return False
        if hi is not None and xj > hi:
            return False
    for k in p.constraints:
        lhs = dot(k.row, x)
        if k.relation == LE and lhs > k.rhs:
            return False
        if k.relation == GE and lhs < k.rhs:
            return False
        if k.relation == EQ and lhs != k.rhs:
            return False
    return True


def _dual_objective(p: LinearProgram, y: Sequence, costs: Sequence) -> Optional[Fraction]:
    total = sum((k.rhs * yi for k, yi in zip(p.constraints, y) if yi), ZERO)
    for r, (lo, hi) in zip(costs, p.bounds):
        t = _bound_term(r, lo, hi)
        if t is None:
            return None
        total += t
    return total


def check_solution(p: LinearProgram, s: LPSolution) -> bool:
    """Re-verify a solver answer from scratch.

    optimal: primal feasibility, dual feasibility and a zero duality gap.
    infeasible: ``s.dual`` is a Farkas vector (dual ray with positive value).
    unbounded: ``s.primal`` is feasible and ``s.ray`` is an improving
    recession direction.
    """
    m = len(p.constraints)
    if s.status == "optimal":
        if s.primal is None or s.dual is None or s.objective_value is None:
            return False
        if len(s.primal) != p.nvars or len(s.dual) != m:
            return False
        if not _primal_feasible(p, s.primal):
            return False
        if not _dual_signs_ok(p, s.dual):
            return False
        if dot(p.objective, s.primal) != s.objective_value:
            return False
        d = _dual_objective(p, s.dual, _reduced_costs(p, s.dual))
        return d is not None and d == s.objective_value
    if s.status == "infeasible":
        y = s.dual
        if y is None or len(y) != m or not _dual_signs_ok(p, y):
            return False
        zero_cost = LinearProgram([0] * p.nvars, p.constraints, p.bounds)
        d = _dual_objective(zero_cost, y, _reduced_costs(zero_cost, y))
        return d is not None and d > 0
    if s.status == "unbounded":
        x, ray = s.primal, s.ray
        if x is None or ray is None or len(x) != p.nvars or len(ray) != p.nvars:
            return False
        if not _primal_feasible(p, x):
            return False
        for (lo, hi), dj in zip(p.bounds, ray):
            if (lo is not None and dj < 0) or (hi is not None and dj > 0):
                return False
        for k in p.constraints:
            a = dot(k.row, ray)
            if (k.relation == LE and a > 0) or (k.relation == GE and a < 0) or (k.relation == EQ and a != 0):
                return False
        return dot(p.objective, ray) < 0
    return False


class _Tableau:
    """Standard-form simplex tableau ``A y = b, y >= 0`` with artificial identity block."""

    def __init__(self, A: list, b: list, ncols: int):
        m = len(A)
        self.m = m
        self.n = ncols  # structural + slack columns
        width = ncols + m
        self.rows = []
        for i in range(m):
            r = A[i] + [ZERO] * m + [b[i]]
            r[ncols + i] = ONE
            self.rows.append(r)
        self.basis = [ncols + i for i in range(m)]
        self.width = width
        self.obj = None
        self.pivots = 0

    def set_objective(self, cost: list):
        """Load reduced costs for ``cost`` (length ``width``) given the current basis."""
        d = list(cost) + [ZERO]
        for r, bj in zip(self.rows, self.basis):
            cb = cost[bj]
            if cb:
                for k, a in enumerate(r):
                    if a:
                        d[k] -= cb * a
        self.obj = d

    def pivot(self, r: int, j: int):
        prow = self.rows[r]
        piv = prow[j]
        if piv != 1:
            prow = [a / piv for a in prow]
            self.rows[r] = prow
        nz = [k for k, a in enumerate(prow) if a]
        for i, row in enumerate(self.rows):
            if i != r:
                f = row[j]
                if f:
                    for k in nz:
                        row[k] -= f * prow[k]
        f = self.obj[j]
        if f:
            for k in nz:
                self.obj[k] -= f * prow[k]
        self.basis[r] = j
        self.pivots += 1

    def run(self, allowed: int) -> Optional[int]:
        """Bland-rule iterations over columns ``< allowed``; returns an unbounded column or None."""
        while True:
            j = next((k for k in range(allowed) if self.obj[k] < 0), None)
            if j is None:
                return None
            best = None
            for i, row in enumerate(self.rows):
                a = row[j]
                if a > 0:
                    key = (row[-1] / a, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return j
            self.pivot(best[1], j)

    def multipliers(self) -> list:
        """Row multipliers ``y`` with reduced cost of column j equal to ``c_j - y . A_j``."""
        return [-self.obj[self.n + i] for i in range(self.m)]


def solve_lp(p: LinearProgram) -> LPSolution:
    """Solve ``p`` exactly; the answer is always verified before it is returned."""
    n = p.nvars
    # Map each original variable to standard-form columns: x_j = shift + sum(sign * y_col).
    maps = []
    ub_rows = []
    ncols = 0
    for j, (lo, hi) in enumerate(p.bounds):
        if lo is not None:
            maps.append((lo, [(ncols, ONE)]))
            if hi is not None:
                ub_rows.append((ncols, hi - lo))
            ncols += 1
        elif hi is not None:
            maps.append((hi, [(ncols, -ONE)]))
            ncols += 1
        else:
            maps.append((ZERO, [(ncols, ONE), (ncols + 1, -ONE)]))
            ncols += 2
    nstruct = ncols
    rows_spec = []  # (coeffs over structural cols, relation, rhs)
    for k in p.constraints:
        coeffs = [ZERO] * nstruct
        rhs = k.rhs
        for j, a in enumerate(k.row):
            if a:
                shift, cols = maps[j]
                rhs -= a * shift
                for c, sgn in cols:
                    coeffs[c] += a * sgn
        rows_spec.append((coeffs, k.relation, rhs))
    for c, cap in ub_rows:
        coeffs = [ZERO] * nstruct
        coeffs[c] = ONE
        rows_spec.append((coeffs, LE, cap))
    nslack = sum(1 for _, rel, _ in rows_spec if rel != EQ)
    total = nstruct + nslack
    A, b, flips = [], [], []
    s = nstruct
    for coeffs, rel, rhs in rows_spec:
        row = coeffs + [ZERO] * nslack
        if rel == LE:
            row[s] = ONE
            s += 1
        elif rel == GE:
            row[s] = -ONE
            s += 1
        sign = ONE
        if rhs < 0:
            sign = -ONE
            row = [-a for a in row]
            rhs = -rhs
        A.append(row)
        b.append(rhs)
        flips.append(sign)
    m0 = len(p.constraints)

    tab = _Tableau(A, b, total)
    tab.set_objective([ZERO] * total + [ONE] * len(A))
    tab.run(total)
    if -tab.obj[-1] > 0:
        y_std = [ONE - tab.obj[total + i] for i in range(len(A))]
        sol = LPSolution("infeasible", dual=tuple(flips[i] * y_std[i] for i in range(m0)), pivots=tab.pivots)
        if not check_solution(p, sol):
            raise SolverError("infeasibility certificate failed verification")
        return sol

    # Drive zero-level artificials out of the basis; drop redundant rows.
    r = 0
    while r < len(tab.rows):
        if tab.basis[r] >= total:
            j = next((k for k in range(total) if tab.rows[r][k] != 0), None)
            if j is None:
                del tab.rows[r]
                del tab.basis[r]
                continue
            tab.pivot(r, j)
        r += 1

    cost = [ZERO] * total
    for j, (shift, cols) in enumerate(maps):
        cj = p.objective[j]
        for c, sgn in cols:
            cost[c] += cj * sgn
    tab.set_objective(cost + [ZERO] * len(A))
    entering = tab.run(total)

    values = [ZERO] * tab.width
    for row, bj in zip(tab.rows, tab.basis):
        values[bj] = row[-1]
    x = tuple(shift + sum((sgn * values[c] for c, sgn in cols), ZERO) for shift, cols in maps)

    if entering is not None:
        dir_std = [ZERO] * tab.width
        dir_std[entering] = ONE
        for row, bj in zip(tab.rows, tab.basis):
            dir_std[bj] = -row[entering]
        ray = tuple(sum((sgn * dir_std[c] for c, sgn in cols), ZERO) for _, cols in maps)
        sol = LPSolution("unbounded", primal=x, ray=ray, pivots=tab.pivots)
        if not check_solution(p, sol):
            raise SolverError("unbounded ray failed verification")
        return sol

    y_std = tab.multipliers()
    y = tuple(flips[i] * y_std[i] for i in range(m0))
    sol = LPSolution("optimal", primal=x, dual=y, objective_value=dot(p.objective, x), pivots=tab.pivots)
    if not check_solution(p, sol):
        raise SolverError("optimal pair failed exact verification")
    return sol
