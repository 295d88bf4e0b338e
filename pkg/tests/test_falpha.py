"""The logarithmic family: sampling, Besov thresholds, transform asymptotics."""

import numpy as np
import pytest

from opdifflab.funcspace import UniformGrid, dyadic_window_build, besov_norm
from opdifflab.funcspace.falpha import (
    FAlphaSpec,
    f_alpha_fourier_asymptotics,
    f_alpha_sample,
    leading_term,
    transform_at,
)
from opdifflab.funcspace.sampled import from_samples


def test_alpha_zero_reduces_to_cutoff():
    spec = FAlphaSpec(alpha=0.0, a_plus=1.0, a_minus=1.0, c=0.5)
    grid = UniformGrid(-1.0 + 1e-3, 1.0 + 1e-3, 401)
    f = f_alpha_sample(spec, grid)
    x = grid.points
    inside = np.abs(x) < 0.5
    assert np.allclose(f.values[inside], spec.cutoff(x[inside]), atol=1e-12)
    assert np.allclose(f.values[~inside], 0.0)


def test_zero_amplitudes_give_zero():
    spec = FAlphaSpec(alpha=2.0, a_plus=0.0, a_minus=0.0)
    grid = UniformGrid(-1.0, 1.0, 101)
    assert np.allclose(f_alpha_sample(spec, grid).values, 0.0)


def test_pointwise_oracle_alpha_one():
    spec = FAlphaSpec(alpha=1.0, a_plus=2.0, a_minus=-1.0, c=0.5)
    for x in (np.exp(-2.0) * 0.5, 0.21, -0.17):
        expected = (2.0 if x > 0 else -1.0) * float(spec.cutoff(np.array([x]))[0]) \
            / abs(np.log(abs(x)))
        assert spec.eval(np.array([x]))[0] == pytest.approx(expected, rel=1e-14)
    assert spec.eval(np.array([0.0]))[0] == 0.0


def test_value_vanishes_outside_support():
    spec = FAlphaSpec(alpha=1.0, a_plus=1.0, a_minus=1.0, c=0.3)
    x = np.array([-0.9, -0.31, 0.31, 0.9, 50.0])
    assert np.allclose(spec.eval(x), 0.0)


def test_band_slope_moderate_grid():
    # smaller grid than the acceptance run: slope within a looser band
    grid = UniformGrid(-32.0, 32.0, 2 ** 18)
    window = dyadic_window_build(-2, 12)
    spec = FAlphaSpec(alpha=2.0, a_plus=1.0, a_minus=0.0)
    f = from_samples(grid, spec.eval(grid.points))
    rep = besov_norm(f, 1.0, window, grid=grid)
    slope = rep.band_slope(j_lo=8, j_hi=11)
    assert slope == pytest.approx(-2.0, abs=0.4)


def test_jump_asymptotics_ratio_improves():
    spec = FAlphaSpec(alpha=1.0, a_plus=1.0, a_minus=0.0)
    table = f_alpha_fourier_asymptotics(spec, [1e3, 1e5])
    devs = table.deviations()
    assert devs[1] < devs[0]
    assert devs[1] <= 0.15


def test_even_asymptotics_sign_and_scale():
    # the even case decays one log-power faster and comes out real negative
    spec = FAlphaSpec(alpha=1.0, a_plus=1.0, a_minus=1.0)
    t = 1e5
    value = transform_at(spec, t)
    pred = leading_term(spec, t)
    assert pred.real < 0 and abs(pred.imag) < 1e-18
    assert value.real < 0
    assert abs(value) / abs(pred) == pytest.approx(1.0, abs=0.15)


def test_smooth_case_decay():
    spec = FAlphaSpec(alpha=0.0, a_plus=1.0, a_minus=1.0)
    v1 = abs(transform_at(spec, 128.0, rel_tol=np.inf))
    v2 = abs(transform_at(spec, 256.0, rel_tol=np.inf))
    assert v2 <= 0.25 * v1


def test_small_t_rejected():
    spec = FAlphaSpec(alpha=1.0, a_plus=1.0, a_minus=0.0)
    with pytest.raises(ValueError):
        f_alpha_fourier_asymptotics(spec, [10.0])


def test_invalid_cutoff_radius():
    with pytest.raises(ValueError):
        FAlphaSpec(alpha=1.0, c=1.5)
