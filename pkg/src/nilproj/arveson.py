"""Corner norms and the distance to the strictly upper triangular matrices.

For the standard basis e_1..e_n let E_k project onto span(e_1..e_k). The
distance from A to the strictly upper triangular algebra equals the largest
corner norm ||(I - E_{k-1}) A E_k||, k = 1..n.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, IndexOutOfRange
from .matcore import as_matrix, operator_norm


@dataclass(frozen=True)
class CornerProfile:
    n: int
    norms: tuple[float, ...]
    max_norm: float

    @property
    def spread(self) -> float:
        """Gap between the largest and smallest corner norm."""
        return max(self.norms) - min(self.norms)


def truncation_projection(n: int, k: int) -> np.ndarray:
    """Diagonal projection onto the first ``k`` standard basis vectors."""
    if n < 1 or not 0 <= k <= n:
        raise IndexOutOfRange(f"need 0 <= k <= n with n >= 1, got n={n}, k={k}")
    d = np.zeros(n, dtype=complex)
    d[:k] = 1.0
    return np.diag(d)


def corner_block(A: np.ndarray, k: int) -> np.ndarray:
    """Nonzero block of the k-th corner (1-based): rows k..n, columns 1..k."""
    return A[k - 1:, :k]


def corner_profile(A, method: str = "jacobi") -> CornerProfile:
    A = as_matrix(A, "A")
    n = A.shape[0]
    if A.shape != (n, n):
        raise DimensionMismatch(f"A must be square, got {A.shape}")
    norms = []
    for k in range(1, n + 1):
        block = corner_block(A, k)
        norms.append(operator_norm(block, method) if block.size else 0.0)
    return CornerProfile(n=n, norms=tuple(norms), max_norm=max(norms))


def arveson_distance(A, method: str = "jacobi") -> float:
    """Distance from ``A`` to the strictly upper triangular matrices."""
    return corner_profile(A, method).max_norm


def corner_norms_batched(A: np.ndarray) -> np.ndarray:
    """All n corner norms with one stacked LAPACK SVD call.

    Hot path for the search module; agrees with :func:`corner_profile` to
    rounding.
    """
    n = A.shape[0]
    rows = np.arange(n)
    # stack[k-1] keeps rows >= k-1 and columns < k of A
    mask = (rows[None, :, None] >= rows[:, None, None]) & (rows[None, None, :] <= rows[:, None, None])
    stack = np.where(mask, A[None, :, :], 0)
    return np.linalg.svd(stack, compute_uv=False)[:, 0]
