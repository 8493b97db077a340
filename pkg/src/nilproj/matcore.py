"""Small dense complex linear algebra.

Matrices are plain ``numpy`` arrays of dtype ``complex128``; vectors are 1-D
arrays of the same dtype. The routines here are sized for n up to about 100.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import (
    DimensionMismatch,
    NoConvergence,
    NotHermitian,
    NotRankOneProjection,
    RankDeficient,
    Singular,
)

PIVOT_TOL = 1e-12
_EPS = np.finfo(float).eps


def as_matrix(A, name: str = "matrix") -> np.ndarray:
    """Return ``A`` as a finite 2-D complex array (a copy)."""
    M = np.array(A, dtype=complex, ndmin=2)
    if M.ndim != 2 or M.size == 0:
        raise DimensionMismatch(f"{name} must be a non-empty 2-D array, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise DimensionMismatch(f"{name} has non-finite entries")
    return M


def as_vector(b, name: str = "vector") -> np.ndarray:
    v = np.array(b, dtype=complex).reshape(-1)
    if v.size == 0 or not np.all(np.isfinite(v)):
        raise DimensionMismatch(f"{name} must be a non-empty finite vector")
    return v


def max_abs(A) -> float:
    """Entrywise max-norm."""
    A = np.asarray(A)
    return float(np.max(np.abs(A))) if A.size else 0.0


def hermitian_eigenvalues(H, tol: float = 1e-12, max_sweeps: int = 100) -> list[float]:
    """Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations.

    Each rotation first turns the pivot entry real with a diagonal phase and
    then applies a real plane rotation that annihilates it. Sweeps stop once
    every off-diagonal magnitude is below ``tol`` (or below ``eps * ||H||_F``,
    whichever is larger, so that large inputs can still converge).

    Returns:
        The eigenvalues in ascending order.

    Raises:
        NotHermitian: if ``max|H - H*| > tol``.
        NoConvergence: if ``max_sweeps`` sweeps do not suffice.
    """
    A = as_matrix(H, "H")
    n, m = A.shape
    if n != m:
        raise DimensionMismatch(f"H must be square, got {A.shape}")
    if max_abs(A - A.conj().T) > tol:
        raise NotHermitian(f"max|H - H*| = {max_abs(A - A.conj().T):.3e} exceeds {tol:.1e}")
    A = (A + A.conj().T) / 2
    thresh = max(tol, _EPS * float(np.linalg.norm(A)))

    for _ in range(max_sweeps):
        off = max_abs(A - np.diag(np.diag(A)))
        if off < thresh:
            return sorted(float(x) for x in np.diag(A).real)
        for p in range(n - 1):
            for q in range(p + 1, n):
                g = abs(A[p, q])
                if g < thresh:
                    continue
                d = A[p, q] / g
                theta = 0.5 * math.atan2(2.0 * g, A[q, q].real - A[p, p].real)
                c, s = math.cos(theta), math.sin(theta)
                G = np.array([[c, s], [-s * d.conjugate(), c * d.conjugate()]])
                idx = [p, q]
                A[:, idx] = A[:, idx] @ G
                A[idx, :] = G.conj().T @ A[idx, :]
                A[p, q] = A[q, p] = 0.0
                A[p, p] = A[p, p].real
                A[q, q] = A[q, q].real
    raise NoConvergence(f"Jacobi iteration did not converge in {max_sweeps} sweeps")


def operator_norm(A, method: str = "jacobi") -> float:
    """Largest singular value of ``A``.

    ``method="jacobi"`` takes the square root of the top eigenvalue of the
    smaller Gram matrix via :func:`hermitian_eigenvalues`; ``method="lapack"``
    defers to ``numpy.linalg.norm(A, 2)``.
    """
    A = np.asarray(A, dtype=complex)
    if A.size == 0:
        return 0.0
    if method == "lapack":
        return float(np.linalg.norm(A, 2))
    if method != "jacobi":
        raise ValueError(f"unknown method {method!r}")
    G = A.conj().T @ A if A.shape[1] <= A.shape[0] else A @ A.conj().T
    scale = float(np.linalg.norm(G))
    if scale == 0.0:
        return 0.0
    top = hermitian_eigenvalues(G, tol=1e-13 * scale)[-1]
    return math.sqrt(max(top, 0.0))


def qr_isometry(M) -> np.ndarray:
    """Orthonormalize the columns of an n x r matrix.

    The triangular factor is normalized to a real positive diagonal, so an
    isometry that already satisfies that convention is returned unchanged up
    to rounding.
    """
    M = as_matrix(M, "M")
    n, r = M.shape
    if n < r:
        raise RankDeficient(f"cannot orthonormalize {r} columns in dimension {n}")
    Qf, R = np.linalg.qr(M)
    d = np.diag(R)
    mags = np.abs(d)
    if mags.min() < PIVOT_TOL:
        raise RankDeficient(f"pivot magnitude {mags.min():.3e} below {PIVOT_TOL:.0e}")
    return Qf * (d / mags)


def solve_linear(A, b) -> np.ndarray:
    """Solve ``A x = b`` by Gaussian elimination with partial pivoting."""
    A = as_matrix(A, "A")
    x = as_vector(b, "b")
    k = A.shape[0]
    if A.shape != (k, k) or x.size != k:
        raise DimensionMismatch(f"incompatible system: A {A.shape}, b ({x.size},)")
    for col in range(k):
        piv = col + int(np.argmax(np.abs(A[col:, col])))
        if abs(A[piv, col]) < PIVOT_TOL:
            raise Singular(f"pivot {abs(A[piv, col]):.3e} in column {col}")
        if piv != col:
            A[[col, piv]] = A[[piv, col]]
            x[[col, piv]] = x[[piv, col]]
        factors = A[col + 1:, col] / A[col, col]
        A[col + 1:, col:] -= np.outer(factors, A[col, col:])
        x[col + 1:] -= factors * x[col]
    for row in range(k - 1, -1, -1):
        x[row] = (x[row] - A[row, row + 1:] @ x[row + 1:]) / A[row, row]
    return x


def rank_one_extract(P, tol: float = 1e-8) -> np.ndarray:
    """Unit vector ``e`` with ``P = e e*`` for a rank-one projection ``P``.

    The phase is fixed by making the largest-magnitude entry of ``e`` real and
    nonnegative.
    """
    P = as_matrix(P, "P")
    n = P.shape[0]
    if P.shape != (n, n):
        raise NotRankOneProjection(f"P must be square, got {P.shape}")
    if max_abs(P - P.conj().T) > tol:
        raise NotRankOneProjection("P is not Hermitian")
    tr = float(np.trace(P).real)
    if abs(tr - 1.0) > tol:
        raise NotRankOneProjection(f"trace {tr:.12g} differs from 1")
    if max_abs(P @ P - P) > tol:
        raise NotRankOneProjection("P is not idempotent")

    j = int(np.argmax(np.diag(P).real))
    e = P[:, j] / math.sqrt(P[j, j].real)
    e /= np.linalg.norm(e)
    j = int(np.argmax(np.abs(e)))
    e *= abs(e[j]) / e[j]
    e[j] = abs(e[j])
    if max_abs(P - np.outer(e, e.conj())) > 10 * tol:
        raise NotRankOneProjection("P is not of rank one")
    return e
