"""Closest projection-nilpotent pairs in corank one.

For an optimal rank n-1 projection Q, the nearest strictly upper triangular
T is unique and Q - T is nu times a unitary. T is recovered column by
column: column k of Q - T must be orthogonal to the k-1 columns before it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .arveson import corner_profile
from .corank1 import nu_corank1, optimal_projection
from .errors import DimensionMismatch, NotCorankOne, NotRankOneProjection, NotUnitary, ProfileMismatch
from .matcore import as_matrix, max_abs, operator_norm, rank_one_extract, solve_linear


@dataclass(frozen=True)
class ClosestPair:
    n: int
    Q: np.ndarray
    T: np.ndarray
    U: np.ndarray
    nu: float

    def certificates(self) -> dict[str, float]:
        """Defect magnitudes of every pair invariant (all should be ~0)."""
        n, Q, T, U, nu = self.n, self.Q, self.T, self.U, self.nu
        I = np.eye(n)
        profile = corner_profile(Q)
        return {
            "hermitian": max_abs(Q - Q.conj().T),
            "idempotent": max_abs(Q @ Q - Q),
            "trace": abs(np.trace(Q).real - (n - 1)),
            "lower_triangle": max_abs(np.tril(T)),
            "residual": max_abs(Q - T - nu * U),
            "unitary": max_abs(U.conj().T @ U - I),
            "profile_spread": profile.spread,
            "norm_gap": abs(operator_norm(Q - T) - nu),
            "distance_gap": abs(profile.max_norm - nu),
        }


def closest_nilpotent(Q, nu: float) -> np.ndarray:
    """The strictly upper triangular matrix nearest to an optimal projection.

    Raises:
        ProfileMismatch: if some corner norm of ``Q`` is more than 1e-6 away
            from ``nu``, or if a column of ``Q - T`` does not come out with
            norm ``nu``.
        Singular: if one of the column systems is degenerate.
    """
    Q = as_matrix(Q, "Q")
    n = Q.shape[0]
    if n < 2 or Q.shape != (n, n):
        raise DimensionMismatch(f"Q must be square with n >= 2, got {Q.shape}")
    norms = np.array(corner_profile(Q).norms)
    if np.max(np.abs(norms - nu)) > 1e-6:
        raise ProfileMismatch(f"corner norms {norms} are not all equal to nu={nu}")

    T = np.zeros_like(Q)
    for k in range(1, n):
        C = Q[:, :k] - T[:, :k]
        # <c_i, q_k - t_k> = 0 for i < k, with t_k supported on rows 0..k-1
        T[:k, k] = solve_linear(C[:k, :].conj().T, C.conj().T @ Q[:, k])
    col_norms = np.linalg.norm(Q - T, axis=0)
    if np.max(np.abs(col_norms - nu)) > 1e-7:
        raise ProfileMismatch(f"columns of Q - T have norms {col_norms}, expected {nu}")
    return T


def residual_unitary(Q, T, nu: float, tol: float = 1e-6) -> np.ndarray:
    """``(Q - T) / nu``, checked to be unitary within ``tol``."""
    if nu <= 0:
        raise ValueError(f"nu must be positive, got {nu}")
    U = (as_matrix(Q, "Q") - as_matrix(T, "T")) / nu
    defect = max_abs(U.conj().T @ U - np.eye(U.shape[0]))
    if defect > tol:
        raise NotUnitary(defect, tol)
    return U


def closest_pair(n: int, phases=None) -> ClosestPair:
    """Build and verify an optimal (Q, T, U, nu) for dimension ``n``."""
    nu = nu_corank1(n)
    Q = optimal_projection(n, phases)
    T = closest_nilpotent(Q, nu)
    U = residual_unitary(Q, T, nu)
    return ClosestPair(n=n, Q=Q, T=T, U=U, nu=nu)


def canonical_phases(Q) -> tuple[np.ndarray, np.ndarray]:
    """Conjugate a corank-one projection by a diagonal unitary into real form.

    Returns ``(D, D* Q D)``; the off-diagonal entries of the second matrix are
    real and nonpositive.
    """
    Q = as_matrix(Q, "Q")
    n = Q.shape[0]
    try:
        e = rank_one_extract(np.eye(n) - Q, tol=1e-6)
    except NotRankOneProjection as exc:
        raise NotCorankOne(str(exc)) from exc
    mags = np.abs(e)
    z = np.where(mags > 1e-300, e / np.where(mags > 1e-300, mags, 1.0), 1.0)
    D = np.diag(z)
    return D, D.conj().T @ Q @ D


def pairs_unitarily_equivalent(p1: ClosestPair, p2: ClosestPair, tol: float = 1e-8) -> tuple[bool, float]:
    """Compare two closest pairs through their canonical phase forms.

    Returns the verdict and the largest entrywise discrepancy found.
    """
    if p1.n != p2.n:
        raise DimensionMismatch(f"dimensions differ: {p1.n} vs {p2.n}")
    D1, Q1 = canonical_phases(p1.Q)
    D2, Q2 = canonical_phases(p2.Q)
    T1 = D1.conj().T @ p1.T @ D1
    T2 = D2.conj().T @ p2.T @ D2
    defect = max(max_abs(Q1 - Q2), max_abs(T1 - T2))
    return defect <= tol, defect


def antidiagonal_defect(Q) -> float:
    """Largest violation of ``Q[i, j] == Q[n-1-j, n-1-i]``."""
    Q = np.asarray(Q)
    return max_abs(Q - Q[::-1, ::-1].T)
