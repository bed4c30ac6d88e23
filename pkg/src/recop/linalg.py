"""Dense linear algebra at a single point.

Rank decisions use modified Gram-Schmidt with column pivoting (not SVD)
so that rank thresholds behave identically everywhere: a pivot column is
accepted iff its residual norm exceeds tol_rank times the largest column
norm of the input, ties going to the lowest column index. Orthogonality
uses the Euclidean inner product of the chart throughout; for an
antisymmetric matrix the kernel is exactly the orthogonal complement of
the image, so this choice gives a genuine splitting of the tangent space.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AmbientMismatchError, SingularMatrixError
from .rng import SplitMix64

DEFAULT_TOL_RANK = 1e-9
DEFAULT_TOL_SUBSPACE = 1e-8

_SINGULAR_PIVOT_REL = 1e-13


def max_abs(matrix) -> float:
    """Entrywise max-abs norm; 0 for empty arrays."""
    arr = np.asarray(matrix, dtype=float)
    return float(np.max(np.abs(arr))) if arr.size else 0.0


@dataclass(frozen=True)
class Subspace:
    """A linear subspace of R^n held as an orthonormal basis matrix."""

    basis: np.ndarray  # shape (n, k), orthonormal columns
    ambient_dim: int
    rank: int
    tol_used: float

    def projector(self) -> np.ndarray:
        """Orthogonal projector onto the subspace (n x n)."""
        return self.basis @ self.basis.T


def column_space(matrix, tol_rank: float = DEFAULT_TOL_RANK) -> Subspace:
    """Orthonormal basis of the column space.

    Modified Gram-Schmidt with column pivoting; a pivot is accepted iff
    its residual norm > tol_rank * max column norm of the input. One
    re-orthogonalization pass keeps the basis orthonormal to ~1e-15.
    Deterministic: pivot ties break toward the lowest column index.
    """
    if tol_rank <= 0:
        raise ValueError("tol_rank must be positive")
    a = np.array(matrix, dtype=float)
    if a.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    n, m = a.shape
    norms = np.linalg.norm(a, axis=0)
    threshold = tol_rank * (float(np.max(norms)) if m else 0.0)
    basis_cols: list[np.ndarray] = []
    remaining = list(range(m))
    residual = a.copy()
    while remaining:
        best = max(remaining, key=lambda j: (np.linalg.norm(residual[:, j]), -j))
        norm_best = float(np.linalg.norm(residual[:, best]))
        if norm_best <= threshold:
            break
        q = residual[:, best].copy()
        for prev in basis_cols:  # second pass, orthogonality to working precision
            q -= (prev @ q) * prev
        q /= np.linalg.norm(q)
        basis_cols.append(q)
        remaining.remove(best)
        for j in remaining:
            residual[:, j] -= (q @ residual[:, j]) * q
    basis = np.column_stack(basis_cols) if basis_cols else np.zeros((n, 0))
    return Subspace(basis=basis, ambient_dim=n, rank=len(basis_cols), tol_used=tol_rank)


def subspace_equal(
    s1: Subspace, s2: Subspace, tol_sub: float = DEFAULT_TOL_SUBSPACE
) -> tuple[bool, float]:
    """Whether two subspaces coincide, plus the coincidence defect.

    The defect is the spectral norm of (I - P2) P1, i.e. the sine of the
    largest principal angle; it is reported even when ranks differ.
    """
    if s1.ambient_dim != s2.ambient_dim:
        raise AmbientMismatchError(
            f"ambient dimensions differ: {s1.ambient_dim} vs {s2.ambient_dim}"
        )
    n = s1.ambient_dim
    p1 = s1.projector()
    p2 = s2.projector()
    defect = float(np.linalg.norm((np.eye(n) - p2) @ p1, 2)) if s1.rank else 0.0
    return (s1.rank == s2.rank and defect <= tol_sub), defect


def invert(matrix) -> tuple[np.ndarray, float]:
    """Inverse by Gaussian elimination with partial pivoting.

    Returns (inverse, condition_estimate) with the estimate taken as
    max pivot / min pivot magnitude. Raises SingularMatrixError when a
    pivot falls below 1e-13 times the largest input entry.
    """
    a = np.array(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("expected a square matrix")
    k = a.shape[0]
    if k == 0:
        return np.zeros((0, 0)), 1.0
    scale = max_abs(a)
    cutoff = _SINGULAR_PIVOT_REL * scale
    work = np.hstack([a, np.eye(k)])
    pivots = []
    for col in range(k):
        rows = np.abs(work[col:, col])
        pivot_row = col + int(np.argmax(rows))
        pivot = work[pivot_row, col]
        if abs(pivot) <= cutoff:
            raise SingularMatrixError(
                f"pivot {abs(pivot):.3e} below threshold {cutoff:.3e} at column {col}"
            )
        if pivot_row != col:
            work[[col, pivot_row]] = work[[pivot_row, col]]
        pivots.append(abs(pivot))
        work[col] /= pivot
        for row in range(k):
            if row != col and work[row, col] != 0.0:
                work[row] -= work[row, col] * work[col]
    condition = max(pivots) / min(pivots)
    return work[:, k:], condition


def random_orthogonal(k: int, rng: SplitMix64) -> np.ndarray:
    """Random k x k orthogonal matrix from the documented generator
    (Gaussian entries, then Gram-Schmidt). Deterministic per rng state."""
    if k == 0:
        return np.zeros((0, 0))
    while True:
        g = np.array([[rng.normal() for _ in range(k)] for _ in range(k)])
        q = np.zeros((k, k))
        ok = True
        for j in range(k):
            v = g[:, j].copy()
            for i in range(j):
                v -= (q[:, i] @ v) * q[:, i]
            for i in range(j):
                v -= (q[:, i] @ v) * q[:, i]
            norm = np.linalg.norm(v)
            if norm < 1e-8:
                ok = False
                break
            q[:, j] = v / norm
        if ok:
            return q
