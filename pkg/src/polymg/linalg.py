"""Sparse and dense linear algebra shared by the solver stack.

Sparse operators are CSR (``scipy.sparse.csr_array``); vectors are 1-D
float64 arrays.  Everything here is deterministic: SpMV accumulates in
stored order, and iterative estimates draw their start vectors from an
explicit seed.
"""

from __future__ import annotations

from typing import Callable, NamedTuple

import numpy as np
import scipy.io
import scipy.linalg
import scipy.sparse as sp

__all__ = [
    "PowerResult",
    "CholeskySolver",
    "as_csr",
    "validate_csr",
    "spmv",
    "weighted_inner",
    "power_method",
    "dense_cholesky_solve",
    "save_matrix_market",
    "load_matrix_market",
]


def as_csr(A) -> sp.csr_array:
    """Return ``A`` as a canonical CSR array (sorted indices, summed duplicates)."""
    A = sp.csr_array(A)
    A.sum_duplicates()
    A.sort_indices()
    return A


def validate_csr(A, symmetric: bool = False, tol: float = 0.0) -> None:
    """Check CSR structural invariants, raising ``ValueError`` on violation.

    Verifies monotone row offsets and strictly increasing column indices
    within each row (which also rules out duplicates).  With ``symmetric``,
    additionally requires ``max|A - A^T| <= tol``.
    """
    if not sp.issparse(A) or A.format != "csr":
        raise ValueError("expected a CSR matrix")
    n_rows, n_cols = A.shape
    indptr, indices = A.indptr, A.indices
    if len(indptr) != n_rows + 1 or indptr[0] != 0 or indptr[-1] != len(indices):
        raise ValueError("row offsets are inconsistent with the index array")
    if np.any(np.diff(indptr) < 0):
        raise ValueError("row offsets must be nondecreasing")
    for row in range(n_rows):
        cols = indices[indptr[row]:indptr[row + 1]]
        if cols.size and (np.any(np.diff(cols) <= 0) or cols[0] < 0 or cols[-1] >= n_cols):
            raise ValueError(f"row {row}: column indices not strictly increasing in range")
    if symmetric:
        if n_rows != n_cols:
            raise ValueError("symmetry requires a square matrix")
        diff = (A - A.T).tocoo()
        err = np.max(np.abs(diff.data)) if diff.nnz else 0.0
        if err > tol:
            raise ValueError(f"matrix is not symmetric: max|A - A^T| = {err:.3e}")


def spmv(A, x: np.ndarray) -> np.ndarray:
    """Sparse matrix-vector product ``A @ x`` with shape validation."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or A.shape[1] != x.shape[0]:
        raise ValueError(f"dimension mismatch: A is {A.shape}, x has shape {x.shape}")
    return A @ x


def weighted_inner(u: np.ndarray, v: np.ndarray, weight=None) -> float:
    """Inner product ``<u, v>_W = u^T W v``.

    ``weight`` is ``None`` (identity), a 1-D array (diagonal W), or a
    matrix operator applied as ``W @ v``.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape:
        raise ValueError("u and v must have identical shapes")
    if weight is None:
        return float(u @ v)
    if isinstance(weight, np.ndarray) and weight.ndim == 1:
        if weight.shape != v.shape:
            raise ValueError("diagonal weight length must match the vectors")
        return float(u @ (weight * v))
    return float(u @ (weight @ v))


class PowerResult(NamedTuple):
    """Dominant-eigenpair estimate from :func:`power_method`."""

    value: float
    vector: np.ndarray
    converged: bool
    iterations: int


def power_method(
    apply_operator: Callable[[np.ndarray], np.ndarray],
    inner: Callable[[np.ndarray, np.ndarray], float],
    n: int,
    tol: float = 1e-10,
    max_iter: int = 5000,
    seed: int = 0,
    v0: np.ndarray | None = None,
) -> PowerResult:
    """Estimate the dominant eigenvalue of a self-adjoint operator.

    The operator must be self-adjoint in the given inner product (e.g.
    ``B A`` is self-adjoint in the A-inner product).  Iterates
    ``v <- apply(v) / ||apply(v)||`` and tracks the Rayleigh quotient until
    its successive relative change drops below ``tol``.

    Returns the best estimate flagged ``converged=False`` when ``max_iter``
    is exhausted; the caller decides whether that is acceptable.
    """
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(n) if v0 is None else np.asarray(v0, dtype=float).copy()
    nv = np.sqrt(inner(v, v))
    if nv == 0.0:
        raise ValueError("start vector has zero norm in the given inner product")
    v /= nv
    value = 0.0
    for it in range(1, max_iter + 1):
        w = apply_operator(v)
        new_value = inner(v, w)  # Rayleigh quotient; v has unit norm
        nw = np.sqrt(max(inner(w, w), 0.0))
        if nw == 0.0:
            return PowerResult(0.0, v, True, it)
        v = w / nw
        if it >= 3 and abs(new_value - value) <= tol * max(abs(new_value), 1e-300):
            return PowerResult(float(new_value), v, True, it)
        value = new_value
    return PowerResult(float(value), v, False, max_iter)


class CholeskySolver:
    """Cached dense Cholesky factorization of an SPD matrix."""

    def __init__(self, M: np.ndarray):
        M = np.asarray(M, dtype=float)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise ValueError("expected a square dense matrix")
        if not np.allclose(M, M.T, rtol=0.0, atol=1e-12 * max(1.0, float(np.max(np.abs(M))))):
            raise ValueError("matrix is not symmetric")
        try:
            self._factor = scipy.linalg.cho_factor(M, lower=True)
        except scipy.linalg.LinAlgError as exc:
            raise ValueError("matrix is not SPD (non-positive pivot)") from exc
        self.n = M.shape[0]

    def solve(self, b: np.ndarray) -> np.ndarray:
        b = np.asarray(b, dtype=float)
        if b.shape != (self.n,):
            raise ValueError("right-hand side length mismatch")
        return scipy.linalg.cho_solve(self._factor, b)


def dense_cholesky_solve(M: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve ``M x = b`` for dense SPD ``M``; raises ``ValueError`` if not SPD."""
    return CholeskySolver(M).solve(b)


def save_matrix_market(path, A) -> None:
    """Export a symmetric sparse matrix in Matrix Market coordinate format.

    Writes 1-based indices with a
    ``%%MatrixMarket matrix coordinate real symmetric`` header (lower
    triangle stored).
    """
    A = as_csr(A)
    validate_csr(A, symmetric=True, tol=1e-12 * max(1.0, float(np.max(np.abs(A.data)))))
    scipy.io.mmwrite(str(path), sp.coo_matrix(A), field="real", symmetry="symmetric")


def load_matrix_market(path) -> sp.csr_array:
    """Import a Matrix Market file written by :func:`save_matrix_market`."""
    return as_csr(scipy.io.mmread(str(path)))
