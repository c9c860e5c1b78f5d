"""Tests for Laplace and Helmholtz kernel evaluation."""

import math

import numpy as np
import pytest
from scipy import integrate, special

from scatterlab.kernels import (
    SingularEvaluationError,
    equal_measure_radius,
    far_field_constant,
    helmholtz_kernel,
    kernel_bounds_check,
    kernel_values,
    laplace_kernel,
    self_cell_integral,
)


def test_laplace_kernel_values() -> None:
    """Test the closed forms in 2D and 3D."""
    assert laplace_kernel([2.0, 0.0], [0.0, 0.0]).value == pytest.approx(-math.log(2.0) / (2 * math.pi))
    result = laplace_kernel([0.0, 0.0, 2.0], [0.0, 0.0, 0.0])
    assert result.value == pytest.approx(1 / (8 * math.pi))
    assert result.distance == 2.0
    assert result.value.imag == 0


def test_laplace_kernel_is_harmonic() -> None:
    """Test that the Hessian trace vanishes away from the source."""
    for x in ([0.3, -0.7], [0.3, -0.7, 0.2]):
        hessian = laplace_kernel(x, np.zeros(len(x))).hessian
        assert abs(np.trace(hessian)) < 1e-12
        assert np.allclose(hessian, hessian.T)


@pytest.mark.parametrize("dim", [2, 3])
def test_helmholtz_kernel_solves_helmholtz(dim: int) -> None:
    """Test that trace(Hessian) + k² Φ_k vanishes away from the source."""
    k = 3.7
    x = np.array([0.4, -0.25, 0.1][:dim])

    result = helmholtz_kernel(x, np.zeros(dim), k)

    assert abs(np.trace(result.hessian) + k**2 * result.value) < 1e-10


@pytest.mark.parametrize("dim", [2, 3])
def test_kernel_gradient_matches_finite_differences(dim: int) -> None:
    """Test gradients and Hessians against central differences."""
    k = 2.0
    x = np.array([0.6, 0.3, -0.2][:dim])
    y = np.zeros(dim)
    step = 1e-5
    result = helmholtz_kernel(x, y, k)

    for i in range(dim):
        offset = np.zeros(dim)
        offset[i] = step
        forward = helmholtz_kernel(x + offset, y, k)
        backward = helmholtz_kernel(x - offset, y, k)
        assert (forward.value - backward.value) / (2 * step) == pytest.approx(result.gradient[i], rel=1e-6)
        difference = (forward.gradient - backward.gradient) / (2 * step)
        assert np.allclose(difference, result.hessian[i], rtol=1e-5)


def test_helmholtz_kernel_two_dimensional_form() -> None:
    """Test Φ_k = (i/4) H0(k r) in the plane."""
    k, r = 5.0, 0.3

    result = helmholtz_kernel([r, 0.0], [0.0, 0.0], k)

    assert result.value == pytest.approx(0.25j * special.hankel1(0, k * r))


def test_helmholtz_kernel_three_dimensional_form() -> None:
    """Test Φ_k = e^{ikr} / (4πr) in space."""
    k, r = 5.0, 0.3

    result = helmholtz_kernel([0.0, r, 0.0], [0.0, 0.0, 0.0], k)

    assert result.value == pytest.approx(np.exp(1j * k * r) / (4 * math.pi * r))


def test_kernel_rejects_coincident_points() -> None:
    """Test that evaluating at x == y raises."""
    with pytest.raises(SingularEvaluationError):
        laplace_kernel([1.0, 1.0], [1.0, 1.0])
    with pytest.raises(SingularEvaluationError):
        kernel_values(np.zeros((3, 2)), 2, 1.0)


def test_kernel_rejects_bad_arguments() -> None:
    """Test validation of wavenumber and dimension."""
    with pytest.raises(ValueError, match="wavenumber"):
        helmholtz_kernel([1.0, 0.0], [0.0, 0.0], 0.0)
    with pytest.raises(ValueError, match="dimension"):
        laplace_kernel([1.0, 0.0], [0.0, 0.0], dim=3)
    with pytest.raises(ValueError, match="dimension must be 2 or 3"):
        laplace_kernel([1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, 0.0])


@pytest.mark.parametrize("dim", [2, 3])
def test_far_field_constant(dim: int) -> None:
    """Test the asymptotic form of Φ_k at a distant point."""
    k = 4.0
    distance = 1e4
    direction = np.eye(dim)[0]
    y = np.array([0.2, 0.1, 0.0][:dim])

    value = helmholtz_kernel(distance * direction, y, k).value
    asymptotic = (
        far_field_constant(k, dim)
        * np.exp(1j * k * distance)
        / distance ** ((dim - 1) / 2)
        * np.exp(-1j * k * direction @ y)
    )

    assert value == pytest.approx(asymptotic, rel=1e-3)


def test_self_cell_integral_laplace() -> None:
    """Test the Laplace self-cell integrals against radial quadrature."""
    h = 0.05
    rho2 = equal_measure_radius(h, 2)
    rho3 = equal_measure_radius(h, 3)

    planar, _ = integrate.quad(lambda r: -math.log(r) / (2 * math.pi) * 2 * math.pi * r, 0, rho2)
    spatial, _ = integrate.quad(lambda r: 1 / (4 * math.pi * r) * 4 * math.pi * r**2, 0, rho3)

    assert math.pi * rho2**2 == pytest.approx(h**2)
    assert self_cell_integral(h, 2) == pytest.approx(planar)
    assert self_cell_integral(h, 3) == pytest.approx(spatial)


@pytest.mark.parametrize("dim", [2, 3])
def test_self_cell_integral_helmholtz(dim: int) -> None:
    """Test the Helmholtz self-cell integrals against radial quadrature."""
    h, k = 0.1, 6.0
    rho = equal_measure_radius(h, dim)

    def integrand(r: float) -> complex:
        value = helmholtz_kernel(np.eye(dim)[0] * r, np.zeros(dim), k).value
        return value * (2 * math.pi * r if dim == 2 else 4 * math.pi * r**2)

    real, _ = integrate.quad(lambda r: integrand(r).real, 0, rho, limit=200)
    imag, _ = integrate.quad(lambda r: integrand(r).imag, 0, rho, limit=200)

    assert self_cell_integral(h, dim, k) == pytest.approx(complex(real, imag), rel=1e-6)


def test_kernel_bounds_check_laplace() -> None:
    """Test the fitted derivative constants for the 3D Laplace kernel."""
    samples = [([r, 0.0, 0.0], [0.0, 0.0, 0.0]) for r in (0.01, 0.1, 0.5)]

    report = kernel_bounds_check(samples)

    assert report.sample_count == 3
    assert report.gradient_constant == pytest.approx(1 / (4 * math.pi))
    assert report.hessian_constant == pytest.approx(1 / (2 * math.pi))
    assert report.gradient_pass
    assert report.hessian_pass


def test_kernel_bounds_check_rejects_far_pairs() -> None:
    """Test that pairs outside 0 < r < 1 are refused."""
    with pytest.raises(ValueError, match="0 < "):
        kernel_bounds_check([([2.0, 0.0], [0.0, 0.0])])
    with pytest.raises(ValueError, match="at least one"):
        kernel_bounds_check([])


@pytest.mark.parametrize(("dim", "k"), [(2, None), (3, None), (2, 3.0), (3, 3.0)])
def test_kernel_is_symmetric(dim: int, k: float | None) -> None:
    """Test Φ(x, y) = Φ(y, x) over 10⁴ random pairs."""
    rng = np.random.default_rng(23)
    x = rng.uniform(-2, 2, size=(10_000, dim))
    y = rng.uniform(-2, 2, size=(10_000, dim))

    assert np.array_equal(kernel_values(x - y, dim, k), kernel_values(y - x, dim, k))


@pytest.mark.parametrize("dim", [2, 3])
def test_helmholtz_kernel_is_outgoing_hankel(dim: int) -> None:
    """Test Φ_k = (i/4) H0(kr) in 2D and (ik/4π) h0(kr) in 3D."""
    k = 2.5
    r = np.linspace(0.05, 6.0, 40)
    d = np.zeros((len(r), dim))
    d[:, 0] = r

    values = kernel_values(d, dim, k)

    if dim == 2:
        expected = 0.25j * special.hankel1(0, k * r)
    else:
        expected = 1j * k / (4 * math.pi) * (special.spherical_jn(0, k * r) + 1j * special.spherical_yn(0, k * r))
    assert np.allclose(values, expected, rtol=1e-12, atol=0)
