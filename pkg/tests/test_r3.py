import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from selfext.exact import Mat, vsub
from selfext.extend import ExtensionProblem, min_norm_extension
from selfext.r3 import hyperplane_params, median_z, r3_extend, r3_extend_traced
from selfext.spaces import PolyhedralSpace, Subspace, norm
from selfext.verify import random_hyperplane_instance

L = PolyhedralSpace.l1(3)
q = Fraction
coord = st.fractions(min_value=-5, max_value=5, max_denominator=4)
point = st.tuples(coord, coord, coord)


def n1(x):
    return norm(L, x)


def test_all_ones_identity():
    res, params, trace = r3_extend_traced((1, 1, 1), Mat.identity(2))
    assert res.extension == Mat.identity(3)
    assert trace.z == (0, -1, 0)
    assert trace.w == (1, 0, 0)


@given(point, point, point)
def test_median_offset_norm(a, b, g):
    z = median_z(a, b, g)
    assert 2 * n1(z) == n1(vsub(a, b)) + n1(vsub(a, g)) - n1(vsub(b, g))


@pytest.mark.parametrize("f", [(1, 0, 0), (0, 2, 0), (0, 0, -1), (1, 2, 0), (0, 1, 3), (2, -1, 5)])
def test_every_hyperplane_shape(f):
    T = Mat([[1, q(-1, 2)], [q(3, 4), 2]])
    res = r3_extend(f, T)
    params = hyperplane_params(f)
    Y = Subspace(L, params.basis())
    assert res.extension @ Y.basis == Y.basis @ T
    assert res.value == res.t_norm


def test_zero_operator():
    res = r3_extend((1, 2, 3), Mat.zeros(2, 2))
    assert res.value == 0 and res.extension.is_zero()


def test_zero_functional_rejected():
    with pytest.raises(ValueError):
        r3_extend((0, 0, 0), Mat.identity(2))


@pytest.mark.parametrize("seed", range(3))
def test_random_instances_against_lp(seed):
    rng = random.Random(seed)
    for _ in range(60):
        f, T = random_hyperplane_instance(rng)
        res, params, trace = r3_extend_traced(f, T)
        Y = Subspace(L, params.basis())
        assert res.extension @ Y.basis == Y.basis @ T
        assert res.value == res.t_norm
        assert min_norm_extension(ExtensionProblem(L, Y, T)).value == res.t_norm
        if trace is not None:
            a, b, g = trace.alpha, trace.beta, trace.gamma
            m2, m3, m4 = trace.mu
            assert trace.s[0] >= trace.s[1] >= trace.s[2] >= 0
            assert n1(vsub(trace.w, a)) <= m2
            assert n1(vsub(trace.w, b)) <= m3
            assert n1(vsub(trace.w, g)) <= m4
