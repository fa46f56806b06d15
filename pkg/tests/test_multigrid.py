"""V-cycle behavior, contraction measurement, and the model-problem constants."""

import numpy as np
import pytest
import scipy.linalg

from polymg.fem import GridSpec, assemble_poisson_q1
from polymg.linalg import as_csr
from polymg.multigrid import (
    VCycleConfig,
    build_hierarchy,
    fine_space_projector,
    measure_C,
    measure_CN,
    measure_contraction,
    v_cycle,
)
from polymg.poly import PolynomialSpec, gamma_mu
from polymg.smoothers import SmootherConfig

# dense measurements of C on the m=4 model problem, by aspect ratio
C_M4 = {1.0: 1.9621, 2.0: 7.5408, 4.0: 26.2785}


def _error_operator(h, cfg):
    n = h.finest.A.shape[0]
    zero = np.zeros(n)
    cols = [v_cycle(h, cfg, e, zero) for e in np.eye(n)]
    return np.array(cols).T


def _a_norm(M, A):
    Ad = A.toarray()
    G = M.T @ Ad @ M
    vals = scipy.linalg.eigh(0.5 * (G + G.T), Ad, eigvals_only=True)
    return float(np.sqrt(max(vals[-1], 0.0)))


def test_hierarchy_structure(hierarchy_m4_a2):
    h = hierarchy_m4_a2
    assert h.n_levels == 3
    assert [lvl.grid.n_side for lvl in h.levels] == [15, 7, 3]
    assert all(lvl.grid.aspect == 2.0 for lvl in h.levels)
    for lvl in h.levels[:-1]:
        assert lvl.P is not None and lvl.smoother is not None
        assert lvl.smoother.rho_BA > 1.0
    assert h.levels[-1].P is None and h.levels[-1].smoother is None


def test_hierarchy_levels_are_galerkin(hierarchy_m4_a2):
    h = hierarchy_m4_a2
    for fine, coarse in zip(h.levels, h.levels[1:]):
        Pm = fine.P.matrix
        diff = (coarse.A - as_csr(Pm.T @ fine.A @ Pm)).toarray()
        assert np.max(np.abs(diff)) < 1e-12


def test_coarsest_solve_is_exact(hierarchy_m4_a2):
    h = hierarchy_m4_a2
    Ac = h.levels[-1].A
    b = np.random.default_rng(0).standard_normal(Ac.shape[0])
    x = h.coarse_solver.solve(b)
    assert np.max(np.abs(Ac @ x - b)) < 1e-10


def test_v_cycle_preserves_solution(hierarchy_m4_a2):
    h = hierarchy_m4_a2
    A = h.finest.A
    rng = np.random.default_rng(1)
    x_star = rng.standard_normal(A.shape[0])
    b = A @ x_star
    cfg = VCycleConfig(smoother=SmootherConfig.cheb4(2))
    out = v_cycle(h, cfg, scipy.linalg.solve(A.toarray(), b, assume_a="pos"), b)
    assert np.allclose(out, x_star, atol=1e-8)


def test_v_cycle_reduces_residual(hierarchy_m4_a2):
    h = hierarchy_m4_a2
    A = h.finest.A
    b = np.random.default_rng(2).standard_normal(A.shape[0])
    x = np.zeros_like(b)
    cfg = VCycleConfig(smoother=SmootherConfig.cheb4(2))
    res = np.linalg.norm(b)
    for _ in range(4):
        x = v_cycle(h, cfg, x, b)
        new_res = np.linalg.norm(b - A @ x)
        assert new_res < 0.5 * res
        res = new_res


def test_v_cycle_shape_validation(hierarchy_m4_a2):
    cfg = VCycleConfig(smoother=SmootherConfig.cheb4(1))
    with pytest.raises(ValueError, match="finest-level size"):
        v_cycle(hierarchy_m4_a2, cfg, np.zeros(7), np.zeros(7))


def test_cycle_config_validation():
    with pytest.raises(ValueError):
        VCycleConfig(smoother=SmootherConfig.cheb4(1), pre_steps=-1)
    assert not VCycleConfig(smoother=SmootherConfig.cheb4(1), post_steps=2).is_symmetric


def test_zero_smoothing_cycle_is_coarse_projection(two_level_m5_a2):
    # with no smoothing the two-level error propagator is pi_f exactly
    h = two_level_m5_a2
    assert h.n_levels == 2
    top = h.levels[0]
    pif = fine_space_projector(top.A, top.P.matrix, h.levels[1].A)
    cfg = VCycleConfig(smoother=SmootherConfig.cheb4(1), pre_steps=0, post_steps=0)
    e = np.random.default_rng(3).standard_normal(top.A.shape[0])
    out = v_cycle(h, cfg, e, np.zeros_like(e))
    assert np.max(np.abs(out - pif @ e)) < 1e-10 * np.linalg.norm(e)


def test_projector_pythagoras(two_level_m5_a2):
    h = two_level_m5_a2
    top = h.levels[0]
    A = top.A
    pif = fine_space_projector(A, top.P.matrix, h.levels[1].A)
    e = np.random.default_rng(4).standard_normal(A.shape[0])
    ef = pif @ e
    ec = e - ef
    total = e @ (A @ e)
    assert ef @ (A @ ef) + ec @ (A @ ec) == pytest.approx(total, rel=1e-10)
    # pi_f is idempotent and annihilates the coarse space
    assert np.max(np.abs(pif @ pif - pif)) < 1e-9
    assert np.max(np.abs(pif @ top.P.matrix.toarray())) < 1e-9


def test_measured_contraction_matches_operator_norm(hierarchy_m4_a2):
    h = hierarchy_m4_a2
    cfg = VCycleConfig(smoother=SmootherConfig.cheb4(2))
    res = measure_contraction(h, cfg, seed=0, tol=1e-10)
    assert res.converged
    norm = _a_norm(_error_operator(h, cfg), h.finest.A)
    assert res.factor == pytest.approx(norm, abs=1e-6)


def test_symmetric_cycle_norm_is_half_cycle_squared():
    h = build_hierarchy(GridSpec(m=4, aspect=2.0), min_interior=7)
    assert h.n_levels == 2
    sm = SmootherConfig.cheb4(1)
    full = _a_norm(_error_operator(h, VCycleConfig(smoother=sm)), h.finest.A)
    half = _a_norm(
        _error_operator(h, VCycleConfig(smoother=sm, pre_steps=0, post_steps=1)),
        h.finest.A,
    )
    assert full == pytest.approx(half ** 2, rel=1e-8)


def test_v_cycle_error_operator_is_a_self_adjoint(hierarchy_m4_a2):
    h = hierarchy_m4_a2
    A = h.finest.A
    cfg = VCycleConfig(smoother=SmootherConfig.cheb4(2))
    rng = np.random.default_rng(5)
    u, v = rng.standard_normal(A.shape[0]), rng.standard_normal(A.shape[0])
    zero = np.zeros_like(u)
    Eu = v_cycle(h, cfg, u, zero)
    Ev = v_cycle(h, cfg, v, zero)
    assert (A @ Eu) @ v == pytest.approx(u @ (A @ Ev), rel=1e-9)


def test_measure_contraction_requires_symmetric_cycle(hierarchy_m4_a2):
    cfg = VCycleConfig(smoother=SmootherConfig.cheb4(1), pre_steps=2, post_steps=1)
    with pytest.raises(ValueError, match="symmetric"):
        measure_contraction(hierarchy_m4_a2, cfg)


def test_measure_contraction_deterministic_and_warm_startable(hierarchy_m4_a2):
    cfg = VCycleConfig(smoother=SmootherConfig.cheb4(1))
    first = measure_contraction(hierarchy_m4_a2, cfg, seed=11)
    again = measure_contraction(hierarchy_m4_a2, cfg, seed=11)
    assert first.factor == again.factor
    warm = measure_contraction(hierarchy_m4_a2, cfg, seed=11, x0=first.vector)
    assert warm.factor == pytest.approx(first.factor, abs=1e-7)
    assert warm.n_cycles <= first.n_cycles


@pytest.mark.parametrize("aspect", sorted(C_M4))
def test_measured_C_reference_values(aspect):
    h = build_hierarchy(GridSpec(m=4, aspect=aspect), min_interior=7)
    top = h.levels[0]
    C = measure_C(top.A, top.smoother, top.P.matrix, h.levels[1].A)
    assert C == pytest.approx(C_M4[aspect], abs=2e-3)
    assert C >= 1.0
    # approaches 2 * aspect^2 from below on refined grids
    assert C < 2.0 * aspect ** 2


def test_measured_C_grows_with_anisotropy():
    values = []
    for aspect in (1.0, 2.0, 4.0):
        h = build_hierarchy(GridSpec(m=4, aspect=aspect), min_interior=7)
        top = h.levels[0]
        values.append(measure_C(top.A, top.smoother, top.P.matrix, h.levels[1].A))
    assert values[0] < values[1] < values[2]


def test_measure_C_degenerate_and_capped(hierarchy_m4_a2):
    top = hierarchy_m4_a2.levels[0]
    n = top.A.shape[0]
    eye = as_csr(np.eye(n))
    with pytest.warns(UserWarning, match="degenerate"):
        assert measure_C(top.A, top.smoother, eye, top.A) == 0.0
    with pytest.raises(ValueError, match="capped"):
        measure_C(top.A, top.smoother, top.P.matrix, hierarchy_m4_a2.levels[1].A,
                  dense_cap=10)


def test_CN_bracket_and_bound_chain(two_level_m5_a2):
    h = two_level_m5_a2
    top = h.levels[0]
    Ac = h.levels[1].A
    C = measure_C(top.A, top.smoother, top.P.matrix, Ac)
    for k in (1, 2, 3):
        p = PolynomialSpec.fourth_kind(k)
        CN = measure_CN(top.A, top.smoother, top.P.matrix, Ac, p)
        gamma = gamma_mu(p)
        assert 1.0 <= CN <= 1.0 + gamma * C + 1e-9
        cfg = VCycleConfig(smoother=SmootherConfig.cheb4(k))
        measured = measure_contraction(h, cfg, seed=0, tol=1e-9).factor
        assert measured <= 1.0 - 1.0 / CN + 1e-6
        assert 1.0 - 1.0 / CN <= C / (C + 1.0 / gamma) + 1e-9


def test_CN_reference_chain_values(two_level_m5_a2):
    # frozen k=1 chain on the aspect-2, m=5 two-level problem
    h = two_level_m5_a2
    top = h.levels[0]
    Ac = h.levels[1].A
    CN = measure_CN(top.A, top.smoother, top.P.matrix, Ac, PolynomialSpec.fourth_kind(1))
    cfg = VCycleConfig(smoother=SmootherConfig.cheb4(1))
    measured = measure_contraction(h, cfg, seed=0, tol=1e-9).factor
    assert measured == pytest.approx(0.688237, abs=1e-3)
    assert 1.0 - 1.0 / CN == pytest.approx(0.690256, abs=1e-3)


def test_measure_CN_rejects_non_contraction(two_level_m5_a2):
    h = two_level_m5_a2
    top = h.levels[0]
    bad = PolynomialSpec.from_roots(np.array([0.5]))
    with pytest.raises(ValueError, match="not a contraction"):
        measure_CN(top.A, top.smoother, top.P.matrix, h.levels[1].A, bad)
