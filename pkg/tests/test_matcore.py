import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nilproj.errors import NoConvergence, NotHermitian, NotRankOneProjection, RankDeficient, Singular
from nilproj.matcore import (
    hermitian_eigenvalues,
    max_abs,
    operator_norm,
    qr_isometry,
    rank_one_extract,
    solve_linear,
)


def random_complex(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_hermitian(rng, n):
    X = random_complex(rng, n, n)
    return X + X.conj().T


def test_eigenvalues_of_identity():
    assert hermitian_eigenvalues(np.eye(2)) == [1.0, 1.0]


def test_eigenvalues_of_2x2_symmetric():
    np.testing.assert_allclose(hermitian_eigenvalues([[2, 1], [1, 2]]), [1, 3], atol=1e-12)


def test_eigenvalues_of_printed_n3_residual(fixture_matrix):
    A = fixture_matrix("q3") - fixture_matrix("t3")
    ev = hermitian_eigenvalues(A.conj().T @ A, tol=1e-9)
    np.testing.assert_allclose(ev, 0.64311, atol=5e-4)


@pytest.mark.parametrize("n", [1, 2, 3, 6, 10, 20])
def test_eigenvalues_match_lapack(rng, n):
    H = random_hermitian(rng, n)
    np.testing.assert_allclose(hermitian_eigenvalues(H), np.linalg.eigvalsh(H), atol=1e-10)


@pytest.mark.parametrize("n", [2, 4, 7])
def test_eigenvalue_trace_and_square_properties(rng, n):
    tol = 1e-12
    H = random_hermitian(rng, n)
    ev = np.array(hermitian_eigenvalues(H, tol=tol))
    assert abs(ev.sum() - np.trace(H).real) <= n * 1e-10
    ev2 = hermitian_eigenvalues(H @ H, tol=1e-10)
    np.testing.assert_allclose(np.sort(ev ** 2), ev2, atol=1e-9)


def test_eigenvalues_reject_non_hermitian():
    with pytest.raises(NotHermitian):
        hermitian_eigenvalues([[1, 2], [0, 1]])


def test_eigenvalues_sweep_limit(rng):
    with pytest.raises(NoConvergence):
        hermitian_eigenvalues(random_hermitian(rng, 6), max_sweeps=1)


def test_operator_norm_examples(fixture_matrix):
    assert operator_norm(np.zeros((3, 3))) == 0.0
    e = np.array([1, 1j, -1]) / np.sqrt(3)
    assert operator_norm(np.outer(e, e.conj())) == pytest.approx(1.0, abs=1e-12)
    A = fixture_matrix("q3") - fixture_matrix("t3")
    assert operator_norm(A) == pytest.approx(0.80194, abs=1e-4)


@pytest.mark.parametrize("shape", [(1, 1), (3, 3), (5, 2), (2, 5), (8, 8)])
def test_operator_norm_is_largest_singular_value(rng, shape):
    A = random_complex(rng, *shape)
    assert operator_norm(A) == pytest.approx(np.linalg.svd(A, compute_uv=False)[0], abs=1e-10)
    assert operator_norm(A, "lapack") == pytest.approx(operator_norm(A), abs=1e-10)


def test_operator_norm_norm_axioms(rng):
    for _ in range(50):
        A, B = random_complex(rng, 4, 4), random_complex(rng, 4, 4)
        c = complex(*rng.standard_normal(2))
        assert operator_norm(A + B) <= operator_norm(A) + operator_norm(B) + 1e-10
        assert operator_norm(c * A) == pytest.approx(abs(c) * operator_norm(A), abs=1e-10)


def test_operator_norm_unitary_invariance(rng):
    for _ in range(20):
        U = qr_isometry(random_complex(rng, 5, 5))
        A = random_complex(rng, 5, 5)
        assert operator_norm(U @ A) == pytest.approx(operator_norm(A), abs=1e-10)


def test_qr_isometry_examples():
    E = np.eye(4)[:, :2]
    assert np.array_equal(qr_isometry(E), E)
    np.testing.assert_allclose(qr_isometry([[3.0], [4.0]]), [[0.6], [0.8]], atol=1e-15)


def test_qr_isometry_random(rng):
    V = qr_isometry(random_complex(rng, 5, 2))
    assert max_abs(V.conj().T @ V - np.eye(2)) < 1e-12
    assert max_abs(qr_isometry(V) - V) < 1e-12


def test_qr_isometry_positive_diagonal(rng):
    M = random_complex(rng, 6, 3)
    V = qr_isometry(M)
    R = V.conj().T @ M
    assert np.all(np.diag(R).real > 0)
    np.testing.assert_allclose(np.diag(R).imag, 0, atol=1e-12)


def test_qr_isometry_rank_deficient():
    with pytest.raises(RankDeficient):
        qr_isometry([[1.0, 2.0], [2.0, 4.0], [0.0, 0.0]])


def test_solve_linear_examples():
    b = np.array([1 + 2j, -3, 0.5j])
    np.testing.assert_array_equal(solve_linear(np.eye(3), b), b)
    np.testing.assert_allclose(solve_linear(np.diag([2.0, 4.0]), [2, 8]), [1, 2])


def test_solve_linear_residuals(rng):
    for _ in range(1000):
        k = int(rng.integers(1, 9))
        A, b = random_complex(rng, k, k), random_complex(rng, k)
        x = solve_linear(A, b)
        assert max_abs(A @ x - b) <= 1e-10 * (1 + max_abs(b))


def test_solve_linear_singular():
    with pytest.raises(Singular):
        solve_linear([[1, 2], [2, 4]], [1, 1])


def test_rank_one_extract_basis_vector():
    P = np.zeros((3, 3))
    P[0, 0] = 1
    np.testing.assert_array_equal(rank_one_extract(P), [1, 0, 0])


def test_rank_one_extract_printed_n3(fixture_matrix):
    e = rank_one_extract(np.eye(3) - fixture_matrix("q3"), tol=1e-4)
    np.testing.assert_allclose(e, [0.59741, 0.53496, 0.59741], atol=1e-3)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_rank_one_extract_round_trip(n, seed):
    rng = np.random.default_rng(seed)
    v = random_complex(rng, n)
    v /= np.linalg.norm(v)
    e = rank_one_extract(np.outer(v, v.conj()))
    j = int(np.argmax(np.abs(e)))
    assert e[j].imag == 0 and e[j].real >= 0
    phase = v[j] / abs(v[j])
    np.testing.assert_allclose(e * phase, v, atol=1e-10)


def test_rank_one_extract_rejects_rank_two():
    with pytest.raises(NotRankOneProjection):
        rank_one_extract(np.diag([0.5, 0.5]))
