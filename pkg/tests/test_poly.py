"""Fourth-kind Chebyshev identities and the gamma functional."""

import numpy as np
import pytest

from polymg.poly import (
    PolynomialSpec,
    cheb4_coefficients,
    cheb4_smoother_poly,
    cheb_w,
    gamma_mu,
    poly_is_valid,
)


def test_cheb_w_low_degrees():
    x = np.linspace(-1.0, 1.0, 9)
    assert np.allclose(cheb_w(0, x), 1.0)
    assert np.allclose(cheb_w(1, x), 2.0 * x + 1.0, atol=1e-15)
    assert np.allclose(cheb_w(2, x), 4.0 * x * x + 2.0 * x - 1.0, atol=1e-14)


def test_cheb_w_matches_trigonometric_form():
    # W_n(cos t) = sin((n + 1/2) t) / sin(t/2)
    t = np.linspace(0.05, np.pi - 0.05, 200)
    for n in range(11):
        closed = np.sin((n + 0.5) * t) / np.sin(0.5 * t)
        assert np.allclose(cheb_w(n, np.cos(t)), closed, atol=1e-11)


def test_cheb_w_endpoint_value():
    for n in range(30):
        assert cheb_w(n, 1.0) == pytest.approx(2 * n + 1, abs=1e-10)


def test_cheb_w_rejects_negative_degree():
    with pytest.raises(ValueError):
        cheb_w(-1, 0.0)


def test_cheb4_coefficients_explicit():
    assert np.allclose(cheb4_coefficients(1), [1.0, -4.0 / 3.0], atol=1e-15)
    assert np.allclose(cheb4_coefficients(2), [1.0, -4.0, 16.0 / 5.0], atol=1e-15)
    assert np.allclose(cheb4_coefficients(3), [1.0, -8.0, 16.0, -64.0 / 7.0], atol=1e-14)


def test_cheb4_smoother_consistency():
    lam = np.linspace(0.0, 1.0, 101)
    for k in (1, 2, 3, 6, 11):
        coeffs = cheb4_coefficients(k)
        horner = sum(c * lam ** i for i, c in enumerate(coeffs))
        assert np.allclose(cheb4_smoother_poly(k, lam), horner, atol=1e-12)
        spec = PolynomialSpec.fourth_kind(k)
        assert np.allclose(spec(lam), cheb4_smoother_poly(k, lam), atol=1e-12)


def test_fourth_kind_roots_are_zeros():
    for k in (1, 2, 5, 9):
        spec = PolynomialSpec.fourth_kind(k)
        assert np.max(np.abs(cheb4_smoother_poly(k, spec.roots))) < 1e-12
        i = np.arange(1, k + 1)
        assert np.allclose(spec.roots, np.sin(i * np.pi / (2 * k + 1)) ** 2, atol=1e-14)


def test_weighted_equioscillation():
    # sqrt(lam) |p_k| attains 1/(2k+1) at the k+1 points where the shifted
    # sine hits +-1, with alternating signs
    for k in (1, 2, 3, 8, 15):
        j = np.arange(k + 1)
        theta = (2 * j + 1) * np.pi / (2 * k + 1)
        lam = np.sin(theta / 2.0) ** 2
        vals = np.sqrt(lam) * cheb4_smoother_poly(k, lam)
        assert np.allclose(np.abs(vals), 1.0 / (2 * k + 1), atol=1e-12)
        assert np.all(vals[:-1] * vals[1:] < 0.0)
        grid = 0.5 * (1.0 - np.cos(np.linspace(0.0, np.pi, 4001)))
        sup = np.max(np.sqrt(grid) * np.abs(cheb4_smoother_poly(k, grid)))
        assert sup <= 1.0 / (2 * k + 1) + 1e-12


def test_spec_validation():
    with pytest.raises(ValueError, match="roots must be positive"):
        PolynomialSpec(degree=1, roots=np.array([-0.5]))
    with pytest.raises(ValueError, match="exactly"):
        PolynomialSpec(degree=2, roots=np.array([0.5]))
    with pytest.raises(ValueError, match="p\\(0\\)"):
        PolynomialSpec(degree=1, cheb4_coeffs=np.array([0.5, 0.5]))
    with pytest.raises(ValueError, match="roots or expansion"):
        PolynomialSpec(degree=2)
    with pytest.raises(ValueError, match="0 < omega < 2"):
        PolynomialSpec.simple(2.0, 1)


def test_from_betas_ones_is_fourth_kind():
    for k in (1, 3, 6):
        spec = PolynomialSpec.from_betas(np.ones(k))
        expected = np.zeros(k + 1)
        expected[k] = 1.0 / (2 * k + 1)
        assert np.array_equal(spec.cheb4_coeffs, expected)


def test_simple_polynomial_evaluates():
    lam = np.linspace(0.0, 1.0, 33)
    spec = PolynomialSpec.simple(1.5, 3)
    assert np.allclose(spec(lam), (1.0 - 1.5 * lam) ** 3, atol=1e-14)
    assert PolynomialSpec.simple(1.0, 0)(0.7) == 1.0


def test_derivative_at_zero_representations_agree():
    for k in (1, 2, 4, 7):
        spec = PolynomialSpec.fourth_kind(k)
        from_roots = PolynomialSpec.from_roots(spec.roots).derivative_at_zero()
        from_coeffs = PolynomialSpec.from_cheb4_coeffs(spec.cheb4_coeffs).derivative_at_zero()
        assert from_roots == pytest.approx(from_coeffs, rel=1e-12)
        assert from_roots == pytest.approx(-(2.0 / 3.0) * k * (k + 1), rel=1e-12)


def test_gamma_examples():
    # classic values: damped Jacobi at omega = 1 and 3/2, fourth kind at k = 1
    assert gamma_mu(PolynomialSpec.simple(1.0, 1)) == pytest.approx(0.5, abs=1e-10)
    assert gamma_mu(PolynomialSpec.simple(1.5, 1)) == pytest.approx(1.0 / 3.0, abs=1e-10)
    assert gamma_mu(PolynomialSpec.fourth_kind(1)) == pytest.approx(3.0 / 8.0, abs=1e-10)


def test_gamma_fourth_kind_closed_form():
    for k in range(1, 11):
        expected = 3.0 / ((2 * k + 1) ** 2 - 1)
        assert gamma_mu(PolynomialSpec.fourth_kind(k)) == pytest.approx(expected, rel=1e-9)


def test_gamma_dominates_pointwise():
    rng = np.random.default_rng(17)
    for _ in range(20):
        k = int(rng.integers(1, 5))
        roots = rng.uniform(0.6, 3.0, size=k)
        spec = PolynomialSpec.from_roots(roots)
        g = gamma_mu(spec)
        lam = rng.uniform(1e-6, 1.0, size=50)
        pv = spec(lam)
        assert np.all(lam * pv * pv / (1.0 - pv * pv) <= g + 1e-12)


def test_gamma_mu_nonincreasing_in_mu():
    spec = PolynomialSpec.fourth_kind(3)
    values = [gamma_mu(spec, mu) for mu in (0.0, 0.05, 0.1, 0.2, 0.4)]
    assert all(a >= b - 1e-13 for a, b in zip(values, values[1:]))


def test_gamma_rejects_invalid_polynomial():
    # p = 1 - 2 lam hits |p| = 1 at lam = 1
    with pytest.raises(ValueError, match="not a valid smoother"):
        gamma_mu(PolynomialSpec.from_roots(np.array([0.5])))
    with pytest.raises(ValueError, match="0 <= mu < 1"):
        gamma_mu(PolynomialSpec.fourth_kind(1), mu=1.0)


def test_poly_is_valid():
    assert poly_is_valid(PolynomialSpec.fourth_kind(3))
    assert poly_is_valid(PolynomialSpec.simple(1.5, 2))
    assert not poly_is_valid(PolynomialSpec.from_roots(np.array([0.5])))
