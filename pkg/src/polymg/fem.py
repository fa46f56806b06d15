"""Bilinear (Q1) finite elements for the anisotropic Poisson model problem.

The domain is a rectangle meshed by ``2^m x 2^m`` axis-aligned elements of
size ``hx x hy`` with ``hx/hy = aspect``; homogeneous Dirichlet conditions
leave ``(2^m - 1)^2`` interior unknowns.  Stretching the elements makes
point-Jacobi smoothing progressively weaker: the smoothing constant grows
like ``2 * aspect^2``.
"""

from __future__ import annotations

from dataclasses import dataclass
import warnings

import numpy as np
import scipy.sparse as sp

from .linalg import power_method, weighted_inner
from .smoothers import DiagonalSmoother

__all__ = [
    "GridSpec",
    "ProlongationOp",
    "assemble_poisson_q1",
    "build_prolongation",
    "jacobi_smoother",
]


@dataclass(frozen=True)
class GridSpec:
    """Tensor grid with ``2^m`` elements per side and element aspect ``hx/hy``."""

    m: int
    aspect: float = 1.0

    def __post_init__(self):
        if self.m < 2:
            raise ValueError("need m >= 2 (at least a 3x3 interior)")
        if not self.aspect >= 1.0:
            raise ValueError("aspect ratio must be >= 1")

    @property
    def n_side(self) -> int:
        """Interior nodes per side."""
        return 2 ** self.m - 1

    @property
    def n_interior(self) -> int:
        return self.n_side ** 2

    @property
    def hy(self) -> float:
        return 1.0 / 2 ** self.m

    @property
    def hx(self) -> float:
        return self.aspect / 2 ** self.m

    def coarsen(self) -> "GridSpec":
        return GridSpec(m=self.m - 1, aspect=self.aspect)


def _element_stiffness(hx: float, hy: float) -> np.ndarray:
    """4x4 Q1 stiffness matrix from exact Gauss integration.

    Shape-function gradients on an ``hx x hy`` element are (bi)linear, so
    the entries of ``grad phi_a . grad phi_b`` are at most quadratic per
    direction and 2x2 Gauss quadrature integrates them exactly.  Node
    order: (0,0), (0,1), (1,0), (1,1) in (x, y) offsets.
    """
    g = 1.0 / np.sqrt(3.0)
    ke = np.zeros((4, 4))
    corners = [(0, 0), (0, 1), (1, 0), (1, 1)]
    for xi in (-g, g):
        for eta in (-g, g):
            # reference square [-1,1]^2; d/dx = (2/hx) d/dxi etc.
            grads = np.empty((4, 2))
            for a, (cx, cy) in enumerate(corners):
                sx, sy = 2 * cx - 1, 2 * cy - 1  # corner signs
                nx = 0.5 * (1 + sx * xi)
                ny = 0.5 * (1 + sy * eta)
                grads[a, 0] = 0.5 * sx * ny * (2.0 / hx)
                grads[a, 1] = 0.5 * sy * nx * (2.0 / hy)
            ke += (grads @ grads.T) * (hx * hy / 4.0)  # unit Gauss weights
    return ke


def assemble_poisson_q1(grid: GridSpec) -> sp.csr_array:
    """Assemble the Dirichlet Q1 stiffness matrix on the interior nodes.

    Returns a symmetric positive definite CSR matrix of size
    ``(2^m - 1)^2``; interior rows of the aspect-1 operator carry the
    stencil ``(1/3) [[-1,-1,-1], [-1, 8,-1], [-1,-1,-1]]``.
    """
    nel = 2 ** grid.m
    npts = nel + 1
    ke = _element_stiffness(grid.hx, grid.hy)
    # global ids, x-major: gid(ix, iy) = ix * npts + iy
    ex, ey = np.meshgrid(np.arange(nel), np.arange(nel), indexing="ij")
    base = (ex * npts + ey).ravel()
    # columns follow the _element_stiffness corner order (0,0), (0,1), (1,0), (1,1)
    ids = np.stack([base, base + 1, base + npts, base + npts + 1], axis=1)
    rows = np.repeat(ids, 4, axis=1).ravel()
    cols = np.tile(ids, (1, 4)).ravel()
    vals = np.tile(ke.ravel(), nel * nel)
    full = sp.coo_array((vals, (rows, cols)), shape=(npts * npts, npts * npts)).tocsr()
    interior = np.arange(npts * npts).reshape(npts, npts)[1:-1, 1:-1].ravel()
    A = full[interior][:, interior].tocsr()
    A.sum_duplicates()
    A.sort_indices()
    return sp.csr_array(A)


def _prolongation_1d(n_coarse: int) -> sp.csr_array:
    """1-D linear interpolation from ``n_coarse`` to ``2 n_coarse + 1`` interior nodes."""
    n_fine = 2 * n_coarse + 1
    c = np.arange(1, n_coarse + 1)
    # coarse node c sits at fine node 2c (1-based); weights 1/2 on its odd neighbors
    rows = np.concatenate([2 * c - 2, 2 * c - 1, 2 * c])
    cols = np.concatenate([c - 1, c - 1, c - 1])
    vals = np.concatenate([np.full(n_coarse, 0.5), np.ones(n_coarse), np.full(n_coarse, 0.5)])
    mat = sp.coo_array((vals, (rows, cols)), shape=(n_fine, n_coarse))
    return sp.csr_array(mat)


@dataclass(frozen=True)
class ProlongationOp:
    """Bilinear interpolation from a coarse grid to the next finer grid."""

    fine: GridSpec
    coarse: GridSpec
    matrix: sp.csr_array

    @property
    def shape(self):
        return self.matrix.shape


def build_prolongation(fine: GridSpec, coarse: GridSpec) -> ProlongationOp:
    """Bilinear prolongation between nested grids (factor-2 coarsening).

    Coarse node ``(I, J)`` coincides with fine node ``(2I, 2J)``; the
    interpolation weights are 1 at coincident nodes, 1/2 along edges and
    1/4 at cell centers.  Interior rows not adjacent to the boundary sum
    to one.
    """
    if coarse.m != fine.m - 1:
        raise ValueError("coarse grid must be one refinement level below the fine grid")
    if coarse.aspect != fine.aspect:
        raise ValueError("grids must share the aspect ratio")
    p1 = _prolongation_1d(coarse.n_side)
    matrix = sp.csr_array(sp.kron(p1, p1, format="csr"))
    matrix.sum_duplicates()
    matrix.sort_indices()
    return ProlongationOp(fine=fine, coarse=coarse, matrix=matrix)


def jacobi_smoother(A, tol: float = 1e-10, max_iter: int = 5000,
                    seed: int = 0) -> DiagonalSmoother:
    """Point-Jacobi preconditioner ``B = diag(A)^{-1}`` with measured ``rho(BA)``.

    The spectral radius is estimated by the power method in the A-inner
    product, where ``BA`` is self-adjoint.  A non-converged estimate is
    used but reported via a warning.
    """
    diag = A.diagonal()
    if np.any(diag <= 0.0):
        raise ValueError("matrix diagonal must be positive")
    inv_diag = 1.0 / diag
    result = power_method(
        lambda v: inv_diag * (A @ v),
        lambda u, v: weighted_inner(u, v, A),
        A.shape[0],
        tol=tol,
        max_iter=max_iter,
        seed=seed,
    )
    if not result.converged:
        warnings.warn(
            f"rho(BA) power iteration reached {max_iter} iterations "
            f"(last estimate {result.value:.12g})",
            stacklevel=2,
        )
    return DiagonalSmoother(inverse_diagonal=inv_diag, rho_BA=result.value)
