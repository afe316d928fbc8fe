"""Unit tests for the dense linear-algebra kernel."""

import numpy as np
import pytest

from mpia.linalg import (
    hermitian_eig,
    is_hermitian_psd,
    is_truncated_unitary,
    nu_min,
    random_gaussian_matrix,
    random_truncated_unitary,
)


def random_psd(n, rng, rank=None):
    A = random_gaussian_matrix(n, rank or n, rng)
    return A @ A.conj().T


def subspace_projector(X):
    return X @ X.conj().T


# ---------------------------------------------------------------- hermitian_eig

def test_eigenvalues_ascending_on_diagonal_input():
    w, X = hermitian_eig(np.diag([3.0, 1.0, 4.0, 2.0]).astype(complex))
    assert np.allclose(w, [1.0, 2.0, 3.0, 4.0])
    # Eigenvectors of a diagonal matrix are coordinate axes; the phase
    # convention pins the nonzero entry to +1.
    order = [1, 3, 0, 2]
    for col, axis in enumerate(order):
        e = np.zeros(4)
        e[axis] = 1.0
        assert np.allclose(X[:, col], e, atol=1e-12)


def test_reconstruction_oracle():
    rng = np.random.default_rng(11)
    for _ in range(50):
        Q = random_psd(6, rng)
        w, X = hermitian_eig(Q)
        assert np.linalg.norm(X @ np.diag(w) @ X.conj().T - Q) <= 1e-10 * np.linalg.norm(Q)
        assert np.all(np.diff(w) >= 0)


def test_eigvector_residual_per_column():
    rng = np.random.default_rng(12)
    Q = random_psd(8, rng)
    w, X = hermitian_eig(Q)
    for k in range(8):
        assert np.linalg.norm(Q @ X[:, k] - w[k] * X[:, k]) <= 1e-8 * np.linalg.norm(Q)


def test_phase_convention_pins_largest_entry_real_positive():
    rng = np.random.default_rng(13)
    Q = random_psd(5, rng)
    _, X = hermitian_eig(Q)
    for k in range(5):
        pivot = X[np.abs(X[:, k]).argmax(), k]
        assert abs(pivot.imag) <= 1e-12
        assert pivot.real > 0


def test_zero_matrix_eigendecomposition():
    w, X = hermitian_eig(np.zeros((4, 4), dtype=complex))
    assert np.allclose(w, 0.0)
    assert is_truncated_unitary(X)


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        hermitian_eig(np.ones((2, 3)))
    Q = np.eye(3, dtype=complex)
    Q[0, 0] = np.nan
    with pytest.raises(ValueError):
        hermitian_eig(Q)
    Q[0, 0] = np.inf
    with pytest.raises(ValueError):
        hermitian_eig(Q)


# ------------------------------------------------------------------------ nu_min

def test_numin_picks_weakest_axes_of_diagonal():
    rng = np.random.default_rng(0)
    X = nu_min(np.diag([5.0, 1.0, 3.0, 2.0]).astype(complex), 2, rng)
    # Weakest two directions are axes 1 and 3 (eigenvalues 1 and 2).
    target = np.zeros((4, 2))
    target[1, 0] = 1.0
    target[3, 1] = 1.0
    assert np.allclose(subspace_projector(X), subspace_projector(target), atol=1e-12)


def test_numin_trace_equals_sum_of_smallest_eigenvalues():
    rng = np.random.default_rng(21)
    for _ in range(100):
        n = int(rng.integers(2, 9))
        d = int(rng.integers(1, min(3, n) + 1))
        Q = random_psd(n, rng)
        X = nu_min(Q, d, rng)
        t = np.trace(X.conj().T @ Q @ X).real
        w = np.linalg.eigvalsh(Q)
        assert abs(t - w[:d].sum()) <= 1e-8 * max(1.0, np.linalg.norm(Q))


def test_numin_minimality_spot_check():
    # No random competitor on the same manifold achieves a smaller form value.
    rng = np.random.default_rng(22)
    Q = random_psd(6, rng)
    X = nu_min(Q, 2, rng)
    best = np.trace(X.conj().T @ Q @ X).real
    for _ in range(100):
        Y = random_truncated_unitary(6, 2, rng)
        assert np.trace(Y.conj().T @ Q @ Y).real >= best - 1e-9


def test_numin_zero_input_draws_haar():
    rng1 = np.random.default_rng(7)
    rng2 = np.random.default_rng(7)
    X = nu_min(np.zeros((4, 4), dtype=complex), 2, rng1)
    Y = random_truncated_unitary(4, 2, rng2)
    # The degenerate branch consumes the stream exactly like a direct draw.
    assert np.array_equal(X, Y)
    assert is_truncated_unitary(X)


def test_numin_norm_threshold_is_absolute():
    rng = np.random.default_rng(8)
    tiny = 1e-13 * np.eye(4, dtype=complex)  # ||Q||_F = 2e-13 < 1e-12
    X = nu_min(tiny, 2, rng)
    rng2 = np.random.default_rng(8)
    assert np.array_equal(X, random_truncated_unitary(4, 2, rng2))
    small = 1e-5 * np.diag([1.0, 2.0, 3.0, 4.0]).astype(complex)
    Y = nu_min(small, 2, rng)  # above threshold: deterministic
    target = np.zeros((4, 2))
    target[0, 0] = 1.0
    target[1, 1] = 1.0
    assert np.allclose(subspace_projector(Y), subspace_projector(target), atol=1e-12)


def test_numin_dimension_validation():
    rng = np.random.default_rng(9)
    Q = np.eye(3, dtype=complex)
    with pytest.raises(ValueError):
        nu_min(Q, 0, rng)
    with pytest.raises(ValueError):
        nu_min(Q, 4, rng)
    X = nu_min(random_psd(3, rng), 3, rng)
    assert is_truncated_unitary(X)


def test_numin_output_orthonormal():
    rng = np.random.default_rng(10)
    for _ in range(50):
        Q = random_psd(5, rng)
        assert is_truncated_unitary(nu_min(Q, 2, rng))


# --------------------------------------------------------------- random sampling

def test_gaussian_matrix_moments():
    rng = np.random.default_rng(1234)
    samples = random_gaussian_matrix(400, 250, rng).ravel()
    n = samples.size
    # E a = 0, per-part variance 1/2, E|a|^2 = 1; 3-sigma bands on estimators.
    assert abs(samples.real.mean()) <= 3 * np.sqrt(0.5 / n)
    assert abs(samples.imag.mean()) <= 3 * np.sqrt(0.5 / n)
    assert abs(np.mean(np.abs(samples) ** 2) - 1.0) <= 3 / np.sqrt(n)
    assert abs(samples.real.var() - 0.5) <= 3 * np.sqrt(2 * 0.25 / n)
    assert abs(samples.imag.var() - 0.5) <= 3 * np.sqrt(2 * 0.25 / n)


def test_gaussian_matrix_seed_determinism():
    A = random_gaussian_matrix(4, 4, np.random.default_rng(7))
    B = random_gaussian_matrix(4, 4, np.random.default_rng(7))
    assert np.array_equal(A, B)


def test_truncated_unitary_orthonormal_and_deterministic():
    rng = np.random.default_rng(5)
    for _ in range(20):
        X = random_truncated_unitary(6, 3, rng)
        assert np.linalg.norm(X.conj().T @ X - np.eye(3)) <= 1e-10
    A = random_truncated_unitary(5, 2, np.random.default_rng(99))
    B = random_truncated_unitary(5, 2, np.random.default_rng(99))
    assert np.array_equal(A, B)


def test_square_haar_has_unit_determinant_modulus():
    rng = np.random.default_rng(6)
    for _ in range(10):
        X = random_truncated_unitary(4, 4, rng)
        assert abs(abs(np.linalg.det(X)) - 1.0) <= 1e-10


def test_haar_isotropy_mean_projector():
    # E[X X^H] = (p/n) I for Haar draws; check each entry within 3 standard
    # errors estimated from the sample itself.
    rng = np.random.default_rng(77)
    n, p, m = 4, 2, 10000
    stack = np.empty((m, n, n), dtype=complex)
    for k in range(m):
        X = random_truncated_unitary(n, p, rng)
        stack[k] = X @ X.conj().T
    mean = stack.mean(axis=0)
    stderr = stack.std(axis=0) / np.sqrt(m)
    target = (p / n) * np.eye(n)
    assert np.all(np.abs(mean - target) <= 3 * stderr + 1e-12)


def test_truncated_unitary_validation():
    rng = np.random.default_rng(3)
    with pytest.raises(ValueError):
        random_truncated_unitary(2, 3, rng)
    with pytest.raises(ValueError):
        random_truncated_unitary(2, 0, rng)


# ------------------------------------------------------------------- predicates

def test_predicates():
    rng = np.random.default_rng(42)
    X = random_truncated_unitary(5, 2, rng)
    assert is_truncated_unitary(X)
    assert not is_truncated_unitary(X + 0.1)
    Q = random_psd(4, rng)
    assert is_hermitian_psd(Q)
    assert not is_hermitian_psd(Q - 2 * np.eye(4))
    S = Q.copy()
    S[0, 1] += 1.0  # break hermiticity
    assert not is_hermitian_psd(S)
