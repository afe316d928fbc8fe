"""Small dense complex linear algebra kernel.

Everything downstream (message updates, baselines, harness) goes through the
handful of primitives below so that eigenvector phase conventions, degeneracy
handling and random sampling are decided in exactly one place.
"""

from __future__ import annotations

import numpy as np

# Frobenius tolerance for X^H X = I on truncated unitaries.
UNITARY_TOL = 1e-10
# Relative Hermitian-deviation tolerance on quadratic-form matrices.
HERMITIAN_TOL = 1e-10
# Eigenvalues above -PSD_REL_TOL * max(1, lambda_max) count as nonnegative.
PSD_REL_TOL = 1e-9
# ||Q||_F at or below this means "no information": nu_min falls back to a random draw.
ZERO_FORM_TOL = 1e-12


def _check_finite_square(Q: np.ndarray) -> np.ndarray:
    Q = np.asarray(Q)
    if Q.ndim != 2 or Q.shape[0] != Q.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {Q.shape}")
    if not np.isfinite(Q).all():
        raise ValueError("matrix has non-finite entries")
    return Q


def hermitian_eig(Q: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    Returns (w, X) with Q approximately equal to X @ diag(w) @ X^H. Each
    eigenvector is rotated so its largest-magnitude entry is real positive,
    which pins the per-column phase and makes the output deterministic for a
    given input. Ties inside degenerate eigenspaces are resolved by the
    underlying LAPACK ordering, which is deterministic per matrix.
    """
    Q = _check_finite_square(Q)
    w, X = np.linalg.eigh(Q)
    # Phase convention: largest-|entry| of every column made real positive.
    anchor = np.abs(X).argmax(axis=0)
    pivots = X[anchor, np.arange(X.shape[1])]
    mags = np.abs(pivots)
    # A unit-norm column always has a nonzero anchor entry.
    X = X * (pivots.conj() / mags)
    return w, X


def nu_min(Q: np.ndarray, d: int, rng: np.random.Generator) -> np.ndarray:
    """Orthonormal basis (n x d) of the span of the d smallest eigenvalues of Q.

    Degenerate rule: if ||Q||_F <= ZERO_FORM_TOL the quadratic form carries no
    preference, and a Haar-random truncated unitary is drawn from rng instead.
    This is the only code path in the package where optimization consumes
    randomness.
    """
    Q = _check_finite_square(Q)
    n = Q.shape[0]
    if not 1 <= d <= n:
        raise ValueError(f"need 1 <= d <= {n}, got d={d}")
    if np.linalg.norm(Q) <= ZERO_FORM_TOL:
        return random_truncated_unitary(n, d, rng)
    _, X = hermitian_eig(Q)
    return X[:, :d]


def random_gaussian_matrix(n: int, m: int, rng: np.random.Generator) -> np.ndarray:
    """n x m matrix of i.i.d. circularly symmetric complex Gaussians, unit variance.

    Real and imaginary parts are independent N(0, 1/2) so E|a_ij|^2 = 1.
    """
    if n < 1 or m < 1:
        raise ValueError(f"dimensions must be positive, got ({n}, {m})")
    scale = np.sqrt(0.5)
    return scale * (rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m)))


def random_truncated_unitary(n: int, p: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed n x p truncated unitary (orthonormal columns).

    QR of a complex Ginibre draw with the R-diagonal phases absorbed into Q,
    i.e. the unique QR factorization with real positive diagonal. That makes
    the result both exactly Haar and a deterministic function of the draw.
    """
    if not 1 <= p <= n:
        raise ValueError(f"need 1 <= p <= n, got (n, p) = ({n}, {p})")
    G = random_gaussian_matrix(n, p, rng)
    Q, R = np.linalg.qr(G, mode="reduced")
    diag = np.diagonal(R)
    return Q * (diag / np.abs(diag))


def is_truncated_unitary(X: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    """True when X has orthonormal columns within Frobenius tolerance tol."""
    X = np.asarray(X)
    if X.ndim != 2 or X.shape[0] < X.shape[1]:
        return False
    gram = X.conj().T @ X
    return bool(np.linalg.norm(gram - np.eye(X.shape[1])) <= tol)


def hermitian_deviation(Q: np.ndarray) -> float:
    """||Q - Q^H||_F, absolute."""
    Q = np.asarray(Q)
    return float(np.linalg.norm(Q - Q.conj().T))


def is_hermitian_psd(Q: np.ndarray) -> bool:
    """Hermitian within HERMITIAN_TOL (relative) and PSD within PSD_REL_TOL."""
    Q = np.asarray(Q)
    if Q.ndim != 2 or Q.shape[0] != Q.shape[1]:
        return False
    scale = max(1.0, float(np.linalg.norm(Q)))
    if hermitian_deviation(Q) > HERMITIAN_TOL * scale:
        return False
    w = np.linalg.eigvalsh(0.5 * (Q + Q.conj().T))
    return bool(w[0] >= -PSD_REL_TOL * max(1.0, float(w[-1])))


def hermitize(Q: np.ndarray) -> np.ndarray:
    """(Q + Q^H) / 2, the Hermitian part of Q."""
    return 0.5 * (Q + np.asarray(Q).conj().T)
