"""Q1 Poisson assembly, grid bookkeeping, and bilinear prolongation."""

import numpy as np
import pytest
import scipy.linalg

from polymg.fem import (
    GridSpec,
    assemble_poisson_q1,
    build_prolongation,
    jacobi_smoother,
)
from polymg.linalg import validate_csr


def _center_row(A, n_side):
    mid = n_side // 2
    gid = mid * n_side + mid
    return A.toarray()[gid], gid


def test_grid_spec_geometry():
    g = GridSpec(m=3, aspect=2.0)
    assert g.n_side == 7
    assert g.n_interior == 49
    assert g.hy == pytest.approx(1.0 / 8.0)
    assert g.hx == pytest.approx(2.0 / 8.0)
    c = g.coarsen()
    assert (c.m, c.aspect) == (2, 2.0)


def test_grid_spec_validation():
    with pytest.raises(ValueError):
        GridSpec(m=1, aspect=1.0)
    with pytest.raises(ValueError):
        GridSpec(m=3, aspect=0.5)
    with pytest.raises(ValueError):
        GridSpec(m=2, aspect=1.0).coarsen()


def test_unit_aspect_stencil():
    # interior stencil (1/3) * [[-1,-1,-1],[-1,8,-1],[-1,-1,-1]], h-independent
    A = assemble_poisson_q1(GridSpec(m=3, aspect=1.0))
    row, gid = _center_row(A, 7)
    expected = np.zeros(49)
    expected[gid] = 8.0 / 3.0
    for off in (-8, -7, -6, -1, 1, 6, 7, 8):
        expected[gid + off] = -1.0 / 3.0
    assert np.allclose(row, expected, atol=1e-14)


def test_aspect_two_stencil():
    # hx = 2 hy: weak x-coupling turns positive, y-coupling strengthens
    A = assemble_poisson_q1(GridSpec(m=3, aspect=2.0))
    row, gid = _center_row(A, 7)
    expected = np.zeros(49)
    expected[gid] = 10.0 / 3.0
    expected[gid - 7] = expected[gid + 7] = 1.0 / 3.0        # x neighbors
    expected[gid - 1] = expected[gid + 1] = -7.0 / 6.0       # y neighbors
    for off in (-8, -6, 6, 8):
        expected[gid + off] = -5.0 / 12.0                    # corners
    assert np.allclose(row, expected, atol=1e-14)


@pytest.mark.parametrize("aspect", [1.0, 2.0, 4.0])
def test_diagonal_is_constant(aspect):
    A = assemble_poisson_q1(GridSpec(m=3, aspect=aspect))
    expected = (4.0 / 3.0) * (aspect + 1.0 / aspect)
    assert np.allclose(A.diagonal(), expected, atol=1e-13)


@pytest.mark.parametrize("aspect", [1.0, 2.0, 8.0])
def test_assembled_matrix_is_spd(aspect):
    A = assemble_poisson_q1(GridSpec(m=3, aspect=aspect))
    validate_csr(A, symmetric=True, tol=1e-13)
    assert scipy.linalg.eigh(A.toarray(), eigvals_only=True)[0] > 0.0


def test_prolongation_weights():
    fine, coarse = GridSpec(m=3, aspect=1.0), GridSpec(m=2, aspect=1.0)
    P = build_prolongation(fine, coarse).matrix
    assert P.shape == (49, 9)
    dense = P.toarray()
    assert set(np.unique(dense[dense != 0.0])) == {0.25, 0.5, 1.0}
    assert np.allclose(dense.sum(axis=0), 4.0)
    # a coarse point injects with weight 1 and receives nothing else
    for cx in range(3):
        for cy in range(3):
            frow = dense[(2 * cx + 1) * 7 + (2 * cy + 1)]
            assert frow[cx * 3 + cy] == 1.0
            assert np.count_nonzero(frow) == 1


def test_prolongation_validation():
    with pytest.raises(ValueError):
        build_prolongation(GridSpec(m=3, aspect=1.0), GridSpec(m=3, aspect=1.0))
    with pytest.raises(ValueError):
        build_prolongation(GridSpec(m=3, aspect=1.0), GridSpec(m=2, aspect=2.0))


@pytest.mark.parametrize("aspect", [1.0, 2.0])
def test_galerkin_product_reassembles_coarse_problem(aspect):
    # bilinear coarse functions embed exactly, so P^T A P is the coarse matrix
    fine, coarse = GridSpec(m=3, aspect=aspect), GridSpec(m=2, aspect=aspect)
    A = assemble_poisson_q1(fine)
    P = build_prolongation(fine, coarse).matrix
    Ac = (P.T @ A @ P).toarray()
    assert np.allclose(Ac, assemble_poisson_q1(coarse).toarray(), atol=1e-12)


def test_jacobi_smoother_matches_dense_spectrum():
    A = assemble_poisson_q1(GridSpec(m=3, aspect=1.0))
    B = jacobi_smoother(A, tol=1e-12)
    assert np.allclose(B.inverse_diagonal, 1.0 / A.diagonal())
    d = np.sqrt(B.inverse_diagonal)
    exact = scipy.linalg.eigh(d[:, None] * A.toarray() * d[None, :], eigvals_only=True)[-1]
    assert B.rho_BA == pytest.approx(exact, rel=1e-8)


def test_jacobi_spectral_radius_approaches_three_halves():
    A = assemble_poisson_q1(GridSpec(m=5, aspect=1.0))
    B = jacobi_smoother(A)
    assert B.rho_BA == pytest.approx(1.495196, abs=1e-4)
    assert B.rho_BA < 1.5
