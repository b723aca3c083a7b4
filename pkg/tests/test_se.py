import itertools
import math
import random
from fractions import Fraction

import pytest

from selfext.data import MT4
from selfext.exact import Mat, rank
from selfext.extend import ExtensionProblem, min_norm_extension, verify_certificate
from selfext.se import (
    bm_l1_lp,
    heredity_lift,
    l1_to_linf_embedding,
    lift_certificate,
    particr4_threshold,
    se_lower_bound_search,
    stability_bound,
)
from selfext.spaces import PolyhedralSpace, hyperplane, norm, sum_zero
from selfext.verify import r4_hand_certificate

q = Fraction


def test_embedding_shape_and_isometry():
    E = l1_to_linf_embedding(3)
    assert E.shape == (4, 3)
    assert rank(E) == 3
    rng = random.Random(0)
    for _ in range(200):
        x = tuple(q(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(3))
        assert norm(PolyhedralSpace.linf(4), E @ x) == norm(PolyhedralSpace.l1(3), x)


def test_embedding_range():
    with pytest.raises(ValueError):
        l1_to_linf_embedding(1)
    with pytest.raises(ValueError):
        l1_to_linf_embedding(13)


def test_r3_negative_control():
    L = PolyhedralSpace.l1(3)
    for f in [(1, 1, 1), (1, 2, 3)]:
        rep = se_lower_bound_search(L, hyperplane(L, f), "grid", budget=81)
        assert rep.best_ratio == 1
        assert rep.candidates_evaluated == 40  # 80 nonzero matrices up to sign


def test_r4_search_finds_counterexample():
    Y = sum_zero(4)
    rep = se_lower_bound_search(Y.ambient, Y, "grid", budget=20, candidates=[MT4])
    assert rep.best_ratio >= q(5, 4)
    assert rep.witness == MT4
    assert rep.to_json()["best_ratio_is"].startswith("lower bound")


def test_budget_caps_work():
    Y = sum_zero(4)
    rep = se_lower_bound_search(Y.ambient, Y, "grid", budget=7)
    assert rep.candidates_evaluated == 7


def test_random_is_seeded():
    Y = sum_zero(3)
    a = se_lower_bound_search(Y.ambient, Y, "random", budget=10, seed=5)
    b = se_lower_bound_search(Y.ambient, Y, "random", budget=10, seed=5)
    assert a == b


def test_bad_arguments():
    Y = sum_zero(3)
    with pytest.raises(ValueError):
        se_lower_bound_search(Y.ambient, Y, "annealing")
    with pytest.raises(ValueError):
        se_lower_bound_search(Y.ambient, Y, budget=0)


@pytest.mark.parametrize("N", [5, 6])
def test_heredity_lift(N):
    Y = sum_zero(4)
    lifted = heredity_lift(ExtensionProblem(Y.ambient, Y, MT4), N)
    assert min_norm_extension(lifted).value >= q(5, 4)
    assert verify_certificate(lift_certificate(r4_hand_certificate(), N), lifted) == q(5, 4)


def test_banach_mazur_numbers():
    p = particr4_threshold()
    assert 1.087 < p < 1.088
    assert bm_l1_lp(p) == pytest.approx(math.sqrt(5) / 2, abs=1e-9)
    assert stability_bound(1, math.sqrt(5) / 2) == pytest.approx(1.25, abs=1e-9)
    assert bm_l1_lp(1) == 1 and bm_l1_lp(2) == 2
    with pytest.raises(ValueError):
        bm_l1_lp(3)
