import random
from dataclasses import replace
from fractions import Fraction

import numpy as np
import pytest
from scipy.optimize import linprog

from selfext.lp import EQ, GE, LE, LinearProgram, LPError, check_solution, solve_lp


def test_simple_minimum():
    s = solve_lp(LinearProgram([1], [([1], GE, 3)]))
    assert s.status == "optimal"
    assert s.objective_value == 3
    assert s.primal == (3,)


def test_beale_cycling_instance():
    # Dantzig's rule cycles on this one; the pivot rule used here must not.
    q = Fraction
    p = LinearProgram(
        [q(-3, 4), 20, q(-1, 2), 6],
        [
            ([q(1, 4), -8, -1, 9], LE, 0),
            ([q(1, 2), -12, q(-1, 2), 3], LE, 0),
            ([0, 0, 1, 0], LE, 1),
        ],
    )
    s = solve_lp(p)
    assert s.status == "optimal"
    assert s.objective_value == q(-5, 4)
    assert check_solution(p, s)


def test_infeasible_has_farkas_vector():
    p = LinearProgram([1, 1], [([1, 1], LE, 1), ([1, 1], GE, 2)])
    s = solve_lp(p)
    assert s.status == "infeasible"
    assert check_solution(p, s)


def test_unbounded_has_ray():
    p = LinearProgram([-1, 0], [([1, -1], LE, 1)])
    s = solve_lp(p)
    assert s.status == "unbounded"
    assert check_solution(p, s)


def test_redundant_equalities():
    p = LinearProgram([1, 2], [([1, 1], EQ, 2), ([2, 2], EQ, 4)])
    s = solve_lp(p)
    assert s.objective_value == 2
    assert check_solution(p, s)


def test_free_and_boxed_variables():
    p = LinearProgram([1, -1], [([1, 1], GE, -3)], bounds=[(None, None), (-1, 2)])
    s = solve_lp(p)
    assert s.objective_value == -7
    assert s.primal == (-5, 2)


def test_perturbed_solution_rejected():
    p = LinearProgram([1, 1], [([1, 2], GE, 3), ([3, 1], GE, 4)])
    s = solve_lp(p)
    assert check_solution(p, s)
    x = (s.primal[0] + Fraction(1, 1000),) + s.primal[1:]
    assert not check_solution(p, replace(s, primal=x))
    y = (s.dual[0] + Fraction(1, 1000),) + s.dual[1:]
    assert not check_solution(p, replace(s, dual=y))
    assert not check_solution(p, replace(s, objective_value=s.objective_value + 1))


def test_deterministic():
    p = LinearProgram([1, 1, 1], [([1, 1, 0], GE, 1), ([0, 1, 1], GE, 1), ([1, 0, 1], GE, 1)])
    a, b = solve_lp(p), solve_lp(p)
    assert a == b and a.pivots == b.pivots


def test_bad_width():
    with pytest.raises(LPError):
        LinearProgram([1, 2], [([1], LE, 0)])
    with pytest.raises(LPError):
        LinearProgram([1], [([1], "<", 0)])


@pytest.mark.parametrize("seed", range(40))
def test_against_floating_solver(seed):
    rng = random.Random(seed)
    n, m = rng.randint(1, 5), rng.randint(1, 5)
    c = [rng.randint(-5, 5) for _ in range(n)]
    cons = [([rng.randint(-4, 4) for _ in range(n)], rng.choice([LE, GE, EQ]), rng.randint(-5, 5)) for _ in range(m)]
    bounds = [(rng.choice([0, -2, None]), rng.choice([None, 3])) for _ in range(n)]
    p = LinearProgram(c, cons, bounds)
    s = solve_lp(p)
    assert check_solution(p, s)

    A_ub, b_ub, A_eq, b_eq = [], [], [], []
    for row, rel, rhs in cons:
        if rel == LE:
            A_ub.append(row), b_ub.append(rhs)
        elif rel == GE:
            A_ub.append([-a for a in row]), b_ub.append(-rhs)
        else:
            A_eq.append(row), b_eq.append(rhs)
    ref = linprog(
        c,
        A_ub=np.array(A_ub, float) if A_ub else None,
        b_ub=b_ub or None,
        A_eq=np.array(A_eq, float) if A_eq else None,
        b_eq=b_eq or None,
        bounds=bounds,
        method="highs",
    )
    status = {0: "optimal", 2: "infeasible", 3: "unbounded"}[ref.status]
    assert s.status == status
    if status == "optimal":
        assert float(s.objective_value) == pytest.approx(ref.fun, abs=1e-7)
