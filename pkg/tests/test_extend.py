import random
from fractions import Fraction

import numpy as np
import pytest
from scipy.optimize import linprog

from selfext.data import LOWER_BOUNDS, MT4, OPERATORS
from selfext.exact import Mat
from selfext.extend import (
    CancellationError,
    CertificateItem,
    DualNormError,
    ExtensionProblem,
    LowerBoundCertificate,
    LyapunovInstance,
    c0_finite_demo,
    coordinatewise_linf_extension,
    extend_functional,
    hilbert_extension,
    lyapunov_certificate,
    min_norm_extension,
    subspace_dual_norm,
    verify_certificate,
)
from selfext.spaces import PolyhedralSpace, Subspace, dual_norm, operator_norm, subspace_operator_norm, sum_zero
from selfext.verify import r4_hand_certificate

q = Fraction


def r4_problem(T=MT4):
    Y = sum_zero(4)
    return ExtensionProblem(Y.ambient, Y, T)


def float_min_l1_extension(B, A):
    """Independent float LP: min max_j ||S e_j||_1 over S with S B = A (l1 -> l1)."""
    n, d = B.shape
    nv = 2 * n * n + 1  # S entries, their absolute-value bounds P, t
    idx_s = lambda i, j: i * n + j
    idx_p = lambda i, j: n * n + i * n + j
    A_eq, b_eq, A_ub, b_ub = [], [], [], []
    for i in range(n):
        for k in range(d):
            row = np.zeros(nv)
            for j in range(n):
                row[idx_s(i, j)] = B[j, k]
            A_eq.append(row), b_eq.append(A[i, k])
    for i in range(n):
        for j in range(n):
            for sgn in (1, -1):
                row = np.zeros(nv)
                row[idx_s(i, j)], row[idx_p(i, j)] = sgn, -1
                A_ub.append(row), b_ub.append(0)
    for j in range(n):
        row = np.zeros(nv)
        for i in range(n):
            row[idx_p(i, j)] = 1
        row[-1] = -1
        A_ub.append(row), b_ub.append(0)
    c = np.zeros(nv)
    c[-1] = 1
    res = linprog(c, A_ub=np.array(A_ub), b_ub=b_ub, A_eq=np.array(A_eq), b_eq=b_eq,
                  bounds=[(None, None)] * nv, method="highs")
    return res.fun


def to_np(M):
    return np.array([[float(x) for x in r] for r in M.row_list()])


@pytest.mark.parametrize("n", [4, 5, 6])
def test_counterexample_values(n):
    Y = sum_zero(n)
    p = ExtensionProblem(Y.ambient, Y, OPERATORS[n])
    res = min_norm_extension(p)
    assert res.t_norm == 1
    assert res.value >= LOWER_BOUNDS[n]
    assert res.extension @ Y.basis == Y.basis @ OPERATORS[n]
    assert operator_norm(Y.ambient, Y.ambient, res.extension) == res.value
    assert verify_certificate(res.certificate, p) == res.value


@pytest.mark.parametrize("n", [4, 5])
def test_values_match_float_oracle(n):
    Y = sum_zero(n)
    res = min_norm_extension(ExtensionProblem(Y.ambient, Y, OPERATORS[n]))
    A = Y.basis @ OPERATORS[n]
    assert float(res.value) == pytest.approx(float_min_l1_extension(to_np(Y.basis), to_np(A)), abs=1e-7)


@pytest.mark.parametrize("seed", range(10))
def test_random_l1_instances_match_float_oracle(seed):
    rng = random.Random(seed)
    n, d = 4, rng.randint(1, 3)
    L = PolyhedralSpace.l1(n)
    while True:
        try:
            B = Mat.from_columns([[rng.randint(-2, 2) for _ in range(n)] for _ in range(d)])
            Y = Subspace(L, B)
            break
        except ValueError:
            pass
    T = Mat([[q(rng.randint(-3, 3), 2) for _ in range(d)] for _ in range(d)], cols=d)
    p = ExtensionProblem(L, Y, T)
    res = min_norm_extension(p)
    assert res.value >= res.t_norm
    assert verify_certificate(res.certificate, p) == res.value
    assert float(res.value) == pytest.approx(float_min_l1_extension(to_np(B), to_np(B @ T)), abs=1e-7)


def test_hand_certificate():
    assert verify_certificate(r4_hand_certificate(), r4_problem()) == q(5, 4)


def test_tampered_certificate_fails_cancellation():
    c = r4_hand_certificate()
    first = c.items[0]
    bad = CertificateItem(first.vertex, tuple(-x for x in first.functional), first.weight)
    with pytest.raises(CancellationError):
        verify_certificate(LowerBoundCertificate((bad,) + c.items[1:], c.bound), r4_problem())


def test_certificate_dual_norm_checked():
    c = r4_hand_certificate()
    big = CertificateItem(c.items[0].vertex, (2, -1, 1, 1), q(1))
    with pytest.raises(DualNormError):
        verify_certificate(LowerBoundCertificate((big,) + c.items[1:], c.bound), r4_problem())


def test_linf_codomain_is_injective():
    rng = random.Random(3)
    X = PolyhedralSpace.linf(4)
    for _ in range(5):
        B = Mat.from_columns([(1, 0, 1, -1), (0, 1, 1, 2)])
        T = Mat([[q(rng.randint(-3, 3), 2) for _ in range(2)] for _ in range(2)])
        res = min_norm_extension(ExtensionProblem(X, Subspace(X, B), T))
        assert res.value == res.t_norm


def test_max_abs_space():
    X = PolyhedralSpace.max_abs([(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)])
    Y = Subspace(X, Mat.from_columns([(1, -1, 0), (0, 1, -1)]))
    p = ExtensionProblem(X, Y, Mat([[0, 1], [1, 0]]))
    res = min_norm_extension(p)
    assert res.value >= res.t_norm
    assert verify_certificate(res.certificate, p) == res.value


def test_ambient_images():
    Y = sum_zero(4)
    p = ExtensionProblem(Y.ambient, Y, Y.basis @ MT4, images="ambient")
    assert min_norm_extension(p).value == min_norm_extension(r4_problem()).value


def test_extend_functional_on_linf():
    X = PolyhedralSpace.linf(3)
    Y = Subspace(X, Mat.from_columns([(1, 1, 0), (0, 1, 1)]))
    F = extend_functional(Y, (1, -1))
    assert Y.basis.T @ F == (1, -1)
    assert dual_norm(X, F) == subspace_dual_norm(Y, (1, -1))


def test_extend_functional_on_l1():
    Y = sum_zero(3)
    F = extend_functional(Y, (1, 2))
    assert dual_norm(Y.ambient, F) == subspace_dual_norm(Y, (1, 2))


def test_coordinatewise_linf():
    X = PolyhedralSpace.linf(4)
    Y = Subspace(X, Mat.from_columns([(1, 0, 1, 1), (0, 1, -1, 2)]))
    T = Mat([[1, q(1, 2)], [-1, 2]])
    res = coordinatewise_linf_extension(Y, T)
    assert res.value == subspace_operator_norm(Y, T)
    assert res.extension @ Y.basis == Y.basis @ T


def test_c0_truncation():
    basis = Mat.from_columns([(1, 1, 0, 0, 0, 0), (0, 1, -1, 0, 0, 0)])
    res = c0_finite_demo(basis, Mat([[0, 1], [1, 0]]))
    assert res.value == res.t_norm
    assert not any(res.extension.row(5))


def test_hilbert_projection():
    basis = Mat.from_columns([(1, 2, 0, 1), (0, 1, 1, -1)])
    T = Mat([[2, 1], [0, -1]])
    S = hilbert_extension(basis, T)
    assert S @ basis == basis @ T
    sv = np.linalg.norm(to_np(S), 2)
    B = to_np(basis)
    Q, R = np.linalg.qr(B)
    assert sv == pytest.approx(np.linalg.norm(R @ to_np(T) @ np.linalg.inv(R), 2), rel=1e-9)


def test_lyapunov_gap():
    Y = sum_zero(4)
    res = lyapunov_certificate(LyapunovInstance(Y.basis, MT4, Y.ambient))
    assert res.induced_norm == 1
    assert res.q_norm >= q(5, 4)
    assert not res.decays


def test_lyapunov_full_rank_decays():
    F = Mat([[q(1, 2), q(1, 4)], [0, q(-1, 3)]])
    res = lyapunov_certificate(LyapunovInstance(Mat.identity(2), F, PolyhedralSpace.l1(2)))
    assert res.decays
    assert res.q_norm == res.induced_norm == q(7, 12)  # largest column sum
