"""Fejer smoothing on the circle and the rational transfer to the line."""

import numpy as np
import pytest

from opdifflab.funcspace.fejer import (
    GrowthError,
    circle_coefficients,
    fejer_rational_approx,
    fejer_sum_circle,
    midpoint_circle_grid,
)
from opdifflab.funcspace.rational import RationalFunction
from opdifflab.funcspace.sampled import SampledFunction, log_abs


def test_single_harmonic_damped_exactly():
    n_theta = 512
    theta = midpoint_circle_grid(n_theta)
    for k, n in ((3, 8), (1, 2), (5, 40)):
        values = np.exp(1j * k * theta)
        coeffs = fejer_sum_circle(values, n)
        expected = np.zeros(2 * n + 1, dtype=complex)
        expected[n + k] = 1.0 - k / n
        assert np.max(np.abs(coeffs - expected)) <= 1e-12


def test_constant_passes_through():
    n_theta = 256
    values = np.full(n_theta, 2.5 - 1j)
    for n in (1, 7, 64):
        coeffs = fejer_sum_circle(values, n)
        assert coeffs[n] == pytest.approx(2.5 - 1j)
        other = np.delete(coeffs, n)
        assert np.max(np.abs(other)) <= 1e-12


def test_fejer_norm_never_exceeds_sup():
    rng = np.random.default_rng(3)
    n_theta = 1024
    theta = midpoint_circle_grid(n_theta)
    for _ in range(10):
        deg = int(rng.integers(2, 10))
        values = np.zeros(n_theta, dtype=complex)
        for k in range(-deg, deg + 1):
            values += (rng.standard_normal() + 1j * rng.standard_normal()) \
                * np.exp(1j * k * theta)
        n = int(rng.integers(2, 30))
        coeffs = fejer_sum_circle(values, n)
        js = np.arange(-n, n + 1)
        smoothed = np.sum(coeffs[None, :] * np.exp(1j * theta[:, None] * js), axis=1)
        assert np.max(np.abs(smoothed)) <= np.max(np.abs(values)) * (1 + 1e-12)


def test_rational_fejer_converges_pointwise():
    f = RationalFunction.single_pole(1j).as_function()
    approx = fejer_rational_approx(f, 256)
    x = np.linspace(-20.0, 20.0, 801)
    err = np.max(np.abs(approx.eval(x) - f(x)))
    assert err <= 1e-2
    # the Fejer sum of 1/(x - i) = i/2 - (i/2) zbar has explicit error 1/(2n)
    assert err == pytest.approx(1.0 / 512.0, rel=0.15)


def test_fejer_output_metadata():
    f = RationalFunction.single_pole(1j).as_function()
    approx = fejer_rational_approx(f, 16)
    poles = dict(approx.poles())
    assert set(poles) <= {1j, -1j}
    assert approx.kind == "cayley"


def test_growth_check_rejects_linear():
    f = SampledFunction(lambda x: x.astype(complex),
                        derivative=lambda x: np.ones_like(x, dtype=complex))
    with pytest.raises(GrowthError):
        fejer_rational_approx(f, 8)


def test_log_growth_accepted():
    approx = fejer_rational_approx(log_abs(), 64)
    x = np.linspace(1.0, 30.0, 50)
    assert np.max(np.abs(approx.eval(x) - np.log(x))) <= 0.5


def test_circle_coefficients_roundtrip():
    rng = np.random.default_rng(4)
    n_theta = 256
    theta = midpoint_circle_grid(n_theta)
    true = {k: rng.standard_normal() + 1j * rng.standard_normal()
            for k in (-5, -1, 0, 2, 7)}
    values = sum(c * np.exp(1j * k * theta) for k, c in true.items())
    coeffs = circle_coefficients(values, 10)
    for k, c in true.items():
        assert coeffs[10 + k] == pytest.approx(c, abs=1e-12)


def test_rational_partial_fraction_machinery():
    rf = RationalFunction(terms=[(1j, 2, 0.5), (2 - 1j, 1, 1.0)], constant=0.25)
    x = np.array([0.0, 1.5, -3.0])
    expected = 0.25 + 0.5 / (x - 1j) ** 2 + 1.0 / (x - (2 - 1j))
    assert np.allclose(rf.eval(x), expected)
    h = 1e-6
    numeric = (rf.eval(x + h) - rf.eval(x - h)) / (2 * h)
    assert np.allclose(rf.deriv(x), numeric, atol=1e-6)
    conj = rf.conjugate()
    assert np.allclose(conj.eval(x.real), np.conj(rf.eval(x.real)))
    assert rf.total_pole_multiplicity() == 3


def test_real_pole_rejected():
    with pytest.raises(ValueError):
        RationalFunction.single_pole(2.0)
