"""Multiplication-model smoothness: interval/resolvent norms, Bessel, family."""

import numpy as np
import pytest

from opdifflab import ensemble
from opdifflab.smoothness import (
    AnalyticFamily,
    GramDefectError,
    MultOpModel,
    WindowTooSmallError,
    bessel_property_check,
    block_counterexample,
    identity_model,
    interpolation_family,
    kato_norm_interval,
    kato_norm_resolvent,
    orthonormal_cell_family,
    smooth_norm_spectral,
    smooth_p_norm,
)


def test_identity_model_norm_one():
    assert kato_norm_interval(identity_model(16, 3)) == pytest.approx(1.0)


def test_single_hot_cell():
    g = np.zeros((5, 2, 2), dtype=complex)
    g[2] = 2.0 * np.eye(2)
    assert kato_norm_interval(MultOpModel(0.0, 5.0, g)) == pytest.approx(2.0)


def test_interval_norm_equals_max_block_norm():
    rng = ensemble.stream(0, "smoothness", 5)
    model = ensemble.random_multop_model(rng, 10, 2, 3)
    direct = max(np.linalg.norm(b, 2) for b in model.g_blocks)
    assert kato_norm_interval(model) == pytest.approx(direct, rel=1e-12)


def test_smooth_p_equals_max_block_p_norm_for_p_ge_2():
    rng = ensemble.stream(0, "smoothness", 6)
    model = ensemble.random_multop_model(rng, 8, 2, 2)
    for p in (2.0, 3.0, 8.0):
        svals = np.linalg.svd(model.g_blocks, compute_uv=False)
        direct = float(np.max(np.sum(svals ** p, axis=1) ** (1 / p)))
        assert smooth_p_norm(model, p) == pytest.approx(direct, rel=1e-12)


def test_smooth_p_monotone_in_p():
    rng = ensemble.stream(0, "smoothness", 7)
    model = ensemble.random_multop_model(rng, 8, 2, 2)
    ps = (0.5, 1.0, 2.0, 4.0, np.inf)
    vals = [smooth_p_norm(model, p) for p in ps]
    assert all(a >= b - 1e-12 for a, b in zip(vals, vals[1:]))


def test_block_lower_bound_all_p():
    rng = ensemble.stream(0, "smoothness", 8)
    model = ensemble.random_multop_model(rng, 8, 2, 2)
    svals = np.linalg.svd(model.g_blocks, compute_uv=False)
    for p in (0.5, 1.0, 1.7):
        direct = float(np.max(np.sum(svals ** p, axis=1) ** (1 / p)))
        assert smooth_p_norm(model, p) >= direct * (1 - 1e-12)


def test_counterexample_values():
    # ||G E(0, N)||_p^2 = N^{2/p}; e.g. N = 4, p = 1 gives 16
    model = block_counterexample(4)
    total = model.cell_gram().sum(axis=0)
    w = np.linalg.eigvalsh(total)
    assert float(np.sum(np.clip(w, 0, None) ** 0.5) ** 2) == pytest.approx(16.0)
    assert smooth_p_norm(model, 1.0) == pytest.approx(4 ** 0.5)
    sizes = (2, 4, 8, 16)
    vals = [smooth_p_norm(block_counterexample(n), 1.0) for n in sizes]
    assert all(a < b for a, b in zip(vals, vals[1:]))
    # for p >= 2 the same model stays bounded by the block norm
    assert smooth_p_norm(block_counterexample(16), 2.0) == pytest.approx(1.0)


def test_resolvent_estimates_identity_model():
    est = kato_norm_resolvent(identity_model(256, 1, 0.0, 1.0))
    assert est.c1_est == pytest.approx(1.0, abs=0.05)
    assert est.c2_est == pytest.approx(1.0, abs=0.05)


def test_resolvent_zero_operator():
    model = MultOpModel(0.0, 1.0, np.zeros((32, 1, 1), dtype=complex))
    est = kato_norm_resolvent(model)
    assert est.c1_est == pytest.approx(0.0, abs=1e-15)
    assert est.c2_est == pytest.approx(0.0, abs=1e-15)


def test_resolvent_quadratic_scaling():
    rng = ensemble.stream(0, "smoothness", 9)
    model = ensemble.smooth_profile_model(rng, 96, 1, 1)
    doubled = MultOpModel(model.x_min, model.x_max, 2.0 * model.g_blocks)
    e1 = kato_norm_resolvent(model)
    e2 = kato_norm_resolvent(doubled)
    assert e2.c1_est == pytest.approx(4.0 * e1.c1_est, rel=1e-10)


def test_window_too_small_rejected():
    model = identity_model(32, 1, 0.0, 1.0)
    with pytest.raises(WindowTooSmallError):
        kato_norm_resolvent(model, eps_grid=[0.1], x_window=(-0.2, 1.2))


def test_bessel_indicator_family():
    rng = ensemble.stream(0, "bessel", 1)
    model = ensemble.random_multop_model(rng, 12, 2, 2)
    # disjoint normalized indicators over 3 cell unions
    psi = np.zeros((3, 12), dtype=complex)
    for i, sl in enumerate((slice(0, 4), slice(4, 8), slice(8, 12))):
        psi[i, sl] = 1.0 / np.sqrt(4 * model.dx)
    u = ensemble.complex_gaussian(rng, 24)
    lhs, rhs, ok = bessel_property_check(model, u, psi)
    assert ok and lhs <= rhs * (1 + 1e-12)


def test_bessel_single_constant_function():
    rng = ensemble.stream(0, "bessel", 2)
    model = ensemble.random_multop_model(rng, 10, 1, 2)
    span = model.x_max - model.x_min
    psi = np.full((1, 10), 1.0 / np.sqrt(span), dtype=complex)
    u = ensemble.complex_gaussian(rng, 10)
    lhs, rhs, ok = bessel_property_check(model, u, psi)
    assert ok


def test_bessel_randomized_trials():
    for trial in range(30):
        rng = ensemble.stream(3, "bessel", trial)
        model = ensemble.random_multop_model(rng, 16, 2, 2)
        psi = orthonormal_cell_family(rng, model, int(rng.integers(1, 17)))
        u = ensemble.complex_gaussian(rng, 32)
        lhs, rhs, ok = bessel_property_check(model, u, psi)
        assert ok, f"trial {trial}: {lhs} > {rhs}"


def test_bessel_rejects_non_orthonormal():
    rng = ensemble.stream(0, "bessel", 3)
    model = ensemble.random_multop_model(rng, 8, 1, 1)
    psi = np.ones((2, 8), dtype=complex)
    with pytest.raises(GramDefectError):
        bessel_property_check(model, np.ones(8), psi)


def test_interpolation_family_endpoints():
    rng = ensemble.stream(0, "interpolation", 11)
    model = ensemble.random_multop_model(rng, 6, 3, 2)
    fam = interpolation_family(model, 4.0)
    rep = fam.endpoint_report()
    assert rep["reconstruction_rel_err"] <= 1e-10
    assert rep["unit_bound_re0"] <= 1.0 + 1e-12
    assert rep["s2_vs_sq_rel_err"] <= 1e-10
    block_max = float(np.max(np.linalg.svd(model.g_blocks, compute_uv=False)))
    assert fam.strip_bound() <= max(1.0, block_max ** 2.0) * (1 + 1e-9)


def test_interpolation_rejects_small_q():
    model = identity_model(4, 2)
    with pytest.raises(ValueError):
        AnalyticFamily(model, 1.5)


def test_interpolation_imaginary_axis_partial_isometry():
    rng = ensemble.stream(0, "interpolation", 12)
    model = ensemble.random_multop_model(rng, 5, 2, 3)
    fam = interpolation_family(model, 3.0)
    s = np.linalg.svd(fam.blocks_at(0.45j), compute_uv=False)
    assert np.all((s <= 1 + 1e-12) & ((s <= 1e-12) | (s >= 1 - 1e-12)))


def test_spectral_surrogate_matches_cell_norm_on_mult_model():
    rng = ensemble.stream(0, "smoothness", 13)
    model = ensemble.random_multop_model(rng, 9, 2, 2)
    g = model.operator_matrix()
    lam = np.repeat(model.midpoints, model.h_dim)
    for p in (np.inf, 2.0, 4.0):
        direct = kato_norm_interval(model) if np.isinf(p) else smooth_p_norm(model, p)
        surrogate = smooth_norm_spectral(g, lam, p, model.dx)
        assert surrogate == pytest.approx(direct, rel=1e-10)
