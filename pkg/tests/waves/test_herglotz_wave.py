"""Tests for Herglotz waves and Fourier densities."""

from decimal import Decimal, getcontext

import numpy as np
import pytest
from scipy import special

from scatterlab.waves import FourierDensity, HerglotzWave, WaveError, create_wave_from_data, verify_helmholtz


def _bessel_j0_series(x: float, terms: int = 80) -> float:
    """J0 from its power series in 50-digit decimal arithmetic."""
    getcontext().prec = 50
    half = Decimal(x) / 2
    total = Decimal(0)
    term = Decimal(1)
    for m in range(terms):
        total += term
        term *= -(half * half) / Decimal((m + 1) ** 2)
    return float(total)


def test_herglotz_constant_density_is_bessel_j0() -> None:
    """Test v = J0(k|x|) against a high-precision series."""
    wave = HerglotzWave(k=5.0, density=FourierDensity.constant())
    radii = [0.0, 0.3, 1.0, 2.2]

    values = wave.evaluate([[r, 0.0] for r in radii])

    for r, value in zip(radii, values, strict=True):
        assert value.real == pytest.approx(_bessel_j0_series(5.0 * r), abs=1e-12)
        assert value.imag == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("order", [-3, 1, 2, 5])
def test_herglotz_single_mode_jacobi_anger(order: int, sample_points: np.ndarray) -> None:
    """Test v = i^n J_n(k r) e^{inθ} for φ = e^{inθ}."""
    k = 4.0
    wave = HerglotzWave(k=k, density=FourierDensity.mode(order))
    radius = np.hypot(sample_points[:, 0], sample_points[:, 1])
    angle = np.arctan2(sample_points[:, 1], sample_points[:, 0])

    values = wave.evaluate(sample_points)

    expected = 1j**order * special.jv(order, k * radius) * np.exp(1j * order * angle)
    assert np.allclose(values, expected, atol=1e-12)


def test_herglotz_wave_solves_helmholtz(sample_points: np.ndarray, rng: np.random.Generator) -> None:
    """Test the Helmholtz residual for a random density."""
    wave = HerglotzWave(k=3.0, density=FourierDensity.random(rng))

    assert verify_helmholtz(wave, sample_points) < 1e-4


def test_herglotz_from_data() -> None:
    """Test building a Herglotz wave from JSON with [re, im] coefficients."""
    wave = create_wave_from_data(
        {"type": "herglotz", "k": 2.0, "density": {"orders": [0, 1], "coefficients": [1.0, [0.0, 0.5]]}}
    )

    assert isinstance(wave, HerglotzWave)
    assert wave.density.coefficients == (1 + 0j, 0.5j)
    assert wave.to_data() == {
        "type": "herglotz",
        "k": 2.0,
        "density": {"orders": [0, 1], "coefficients": [[1.0, 0.0], [0.0, 0.5]]},
    }


def test_create_wave_from_data_errors() -> None:
    """Test unknown types and parameters."""
    with pytest.raises(WaveError, match="unknown wave type"):
        create_wave_from_data({"type": "spherical", "k": 1.0})
    with pytest.raises(WaveError, match="invalid parameters"):
        create_wave_from_data({"type": "plane", "k": 1.0, "polarization": 1})


def test_fourier_density_random(rng: np.random.Generator) -> None:
    """Test the modulus and C¹ bounds of random densities."""
    density = FourierDensity.random(rng, max_order=4, ripple=0.4)

    assert density.mean == 1.0
    assert density.max_order == 4
    assert density.min_modulus() >= 0.6 - 1e-12
    assert density.c1_norm <= 1 + 5 * 0.4 + 1e-12


def test_fourier_density_evaluation() -> None:
    """Test φ(θ) for a two-mode density."""
    density = FourierDensity(orders=(0, 2), coefficients=(1.0, 0.5))

    assert np.allclose(density(np.array([0.0, np.pi / 2])), [1.5, 0.5])
    assert np.allclose(density.scaled(2j)(np.array([0.0])), [3j])


def test_fourier_density_rejects_bad_input() -> None:
    """Test validation of orders and coefficients."""
    with pytest.raises(WaveError, match="matching"):
        FourierDensity(orders=(0, 1), coefficients=(1.0,))
    with pytest.raises(WaveError, match="distinct"):
        FourierDensity(orders=(1, 1), coefficients=(1.0, 1.0))


def test_herglotz_wave_is_linear_in_density(sample_points: np.ndarray, rng: np.random.Generator) -> None:
    """Test v[a φ1 + b φ2] = a v[φ1] + b v[φ2]."""
    a, b = 1.5 - 0.5j, -0.25 + 2j
    first, second = FourierDensity.random(rng), FourierDensity.mode(6)
    combined = FourierDensity(
        orders=(*first.orders, 6),
        coefficients=(*(a * c for c in first.coefficients), b),
    )

    def wave(density: FourierDensity) -> np.ndarray:
        return HerglotzWave(k=3.0, density=density).evaluate(sample_points)

    assert np.allclose(wave(combined), a * wave(first) + b * wave(second), rtol=1e-12, atol=1e-12)


def test_herglotz_quadrature_converges_spectrally() -> None:
    """Test that the trapezoidal error collapses as the node count doubles from 16 to 64."""
    k = 5.0
    density = FourierDensity(orders=(0, 1, -2, 4), coefficients=(1.0, 0.5j, -0.3, 0.2))
    angle = np.linspace(0, 2 * np.pi, 9)[:-1]
    points = 0.3 * np.column_stack([np.cos(angle), np.sin(angle)])
    wave = HerglotzWave(k=k, density=density)
    expected = sum(
        c * 1j**n * special.jv(n, k * 0.3) * np.exp(1j * n * angle)
        for n, c in zip(density.orders, density.coefficients, strict=True)
    )

    errors = [np.abs(wave.evaluate(points, min_nodes=count) - expected).max() for count in (16, 32, 64)]

    assert errors[0] < 1e-8
    assert errors[1] <= errors[0]
    assert errors[2] < 1e-13
