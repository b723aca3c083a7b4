import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from selfext.exact import Mat, dot, vadd, vscale
from selfext.lp import EQ, LinearProgram, solve_lp
from selfext.spaces import (
    CapExceeded,
    PolyhedralSpace,
    Subspace,
    ball_vertices,
    caps,
    dual_norm,
    hyperplane,
    is_extreme,
    norm,
    operator_norm,
    subspace_ball_vertices,
    subspace_operator_norm,
    sum_zero,
)

q = Fraction
small = st.fractions(min_value=-4, max_value=4, max_denominator=5)


def l1_as_max_abs(n):
    """The l1 norm written as a max over the 2^(n-1) sign functionals."""
    rows = [(1,) + eps for eps in itertools.product((1, -1), repeat=n - 1)]
    return PolyhedralSpace.max_abs(rows)


def random_subspace(rng, space, d):
    while True:
        cols = [[q(rng.randint(-3, 3), rng.randint(1, 2)) for _ in range(space.dim)] for _ in range(d)]
        try:
            return Subspace(space, Mat.from_columns(cols))
        except ValueError:
            continue


def in_hull(points, x):
    """LP oracle: is x a convex combination of points?"""
    k, n = len(points), len(x)
    cons = [([p[i] for p in points], EQ, x[i]) for i in range(n)]
    cons.append(([1] * k, EQ, 1))
    return solve_lp(LinearProgram([0] * k, cons)).status == "optimal"


def test_cross_polytope_and_cube_vertices():
    assert len(ball_vertices(PolyhedralSpace.l1(3))) == 6
    cube = ball_vertices(PolyhedralSpace.linf(3))
    assert set(cube) == set(itertools.product((1, -1), repeat=3))
    assert len(cube.representatives()) == 4


def test_max_abs_hexagon():
    hexagon = PolyhedralSpace.max_abs([(1, 0), (0, 1), (1, 1)])
    V = set(ball_vertices(hexagon))
    assert V == {(1, 0), (0, 1), (-1, 0), (0, -1), (1, -1), (-1, 1)}


def test_sum_zero_section_of_l1_4():
    half = q(1, 2)
    want = set()
    for i, j in itertools.permutations(range(4), 2):
        v = [0] * 4
        v[j], v[i] = half, -half
        want.add(tuple(q(t) for t in v))
    assert set(subspace_ball_vertices(sum_zero(4))) == want


@pytest.mark.parametrize("seed", range(12))
def test_l1_sections_match_facet_enumeration(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 4)
    d = rng.randint(1, n)
    Y = random_subspace(rng, PolyhedralSpace.l1(n), d)
    Z = Subspace(l1_as_max_abs(n), Y.basis)
    assert set(subspace_ball_vertices(Y)) == set(subspace_ball_vertices(Z))


@pytest.mark.parametrize("seed", range(8))
def test_vertices_are_irredundant_and_span_ball(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 4)
    space = rng.choice([PolyhedralSpace.l1(n), PolyhedralSpace.linf(n)])
    Y = random_subspace(rng, space, rng.randint(1, n))
    V = list(subspace_ball_vertices(Y))
    for v in V:
        assert norm(space, v) == 1
        assert is_extreme(space, v, Y)
        assert not in_hull([w for w in V if w != v], v)
    for _ in range(5):
        c = [q(rng.randint(-3, 3), 2) for _ in range(Y.dim)]
        x = Y.embed(c)
        if any(x):
            x = vscale(1 / norm(space, x), x)
            assert in_hull(V, x)


def test_is_extreme_edge_midpoint():
    L = PolyhedralSpace.l1(3)
    assert is_extreme(L, (1, 0, 0))
    assert not is_extreme(L, (q(1, 2), q(1, 2), 0))


@given(st.lists(small, min_size=3, max_size=3), st.lists(small, min_size=3, max_size=3), small)
def test_norm_axioms(x, y, c):
    for space in (PolyhedralSpace.l1(3), PolyhedralSpace.linf(3), PolyhedralSpace.max_abs([(1, 0, 0), (0, 1, 1), (1, -1, 2)])):
        assert norm(space, vadd(x, y)) <= norm(space, x) + norm(space, y)
        assert norm(space, vscale(c, x)) == abs(c) * norm(space, x)
        assert (norm(space, x) == 0) == (not any(x))


@given(st.lists(small, min_size=3, max_size=3))
def test_dual_norms(f):
    assert dual_norm(PolyhedralSpace.l1(3), f) == max(abs(t) for t in f)
    assert dual_norm(PolyhedralSpace.linf(3), f) == sum(abs(t) for t in f)
    M = PolyhedralSpace.max_abs([(1, 0, 0), (0, 1, 1), (1, -1, 2), (0, 0, 1)])
    assert dual_norm(M, f) == max(dot(f, v) for v in ball_vertices(M))


@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=3, max_size=3))
def test_operator_norm_closed_forms(rows):
    S = Mat(rows)
    L1, Loo = PolyhedralSpace.l1(3), PolyhedralSpace.linf(3)
    assert operator_norm(L1, L1, S) == max(sum(abs(t) for t in c) for c in S.columns())
    assert operator_norm(Loo, Loo, S) == max(sum(abs(t) for t in r) for r in S.row_list())


def test_subspace_operator_norm_identity_is_one():
    Y = sum_zero(4)
    assert subspace_operator_norm(Y, Mat.identity(3)) == 1


def test_hyperplane_contains_kernel():
    Y = hyperplane(PolyhedralSpace.l1(3), (1, 2, 3))
    for c in Y.basis.columns():
        assert dot((1, 2, 3), c) == 0
    assert Y.dim == 2


def test_caps():
    with pytest.raises(CapExceeded):
        ball_vertices(PolyhedralSpace.linf(caps.closed_form_dim + 1))


def test_bad_subspace():
    with pytest.raises(ValueError):
        Subspace(PolyhedralSpace.l1(3), Mat.from_columns([(1, 0, 0), (2, 0, 0)]))
