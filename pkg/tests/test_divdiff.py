"""Divided-difference kernels, Hilbert transforms, Hankel block identities."""

import numpy as np
import pytest

from opdifflab.divdiff import (
    MissingDerivativeError,
    NotInvolutiveError,
    bmo_norm_via_kernel,
    commutator_kernel,
    divided_difference_kernel,
    hankel_blocks,
    hankel_schatten_identity_check,
    hardy_projections,
    hilbert_transform,
    involution_defect_on,
)
from opdifflab.funcspace import UniformGrid
from opdifflab.funcspace.rational import RationalFunction
from opdifflab.funcspace.sampled import SampledFunction, from_samples
from opdifflab.spectral import schatten_power_sum, singular_values


GRID = UniformGrid(-8.0, 8.0, 64)


def test_resolvent_kernel_rank_one():
    f = RationalFunction.single_pole(0.5 + 1j).as_function()
    kern = divided_difference_kernel(f, GRID, diagonal_rule="derivative")
    x = GRID.points
    expected = -1.0 / np.subtract.outer(x, (0.5 + 1j) * np.ones_like(x)) \
        ** 1  # (x - z0)^{-1} row factor
    outer = -np.outer(1.0 / (x - (0.5 + 1j)), 1.0 / (x - (0.5 + 1j))) * GRID.dx
    assert np.allclose(kern.matrix, outer, atol=1e-12)
    assert kern.numerical_rank(cutoff=1e-10) == 1


def test_constant_and_linear_kernels():
    const = SampledFunction(lambda x: np.full_like(x, 3.0, dtype=complex),
                            derivative=lambda x: np.zeros_like(x, dtype=complex))
    assert np.allclose(divided_difference_kernel(const, GRID).matrix, 0.0)
    lin = SampledFunction(lambda x: x.astype(complex),
                          derivative=lambda x: np.ones_like(x, dtype=complex))
    kern = divided_difference_kernel(lin, GRID)
    assert np.allclose(kern.matrix, GRID.dx)
    assert kern.numerical_rank() == 1


def test_kernel_linearity_and_constant_invariance():
    f = RationalFunction.single_pole(1j).as_function()
    g = RationalFunction.single_pole(-2j).as_function()
    kf = divided_difference_kernel(f, GRID).matrix
    kg = divided_difference_kernel(g, GRID).matrix
    combo = RationalFunction.from_poles([(1j, 2.0), (-2j, -0.5)]).as_function()
    kc = divided_difference_kernel(combo, GRID).matrix
    assert np.allclose(kc, 2.0 * kf - 0.5 * kg, atol=1e-12)
    shifted = RationalFunction.from_poles([(1j, 1.0)], constant=7.0).as_function()
    assert np.allclose(divided_difference_kernel(shifted, GRID).matrix, kf,
                       atol=1e-12)


def test_real_function_kernel_real_symmetric():
    f = SampledFunction(lambda x: np.arctan(x).astype(complex),
                        derivative=lambda x: (1 / (1 + x ** 2)).astype(complex))
    m = divided_difference_kernel(f, GRID).matrix
    assert np.max(np.abs(m.imag)) <= 1e-14
    assert np.allclose(m, m.T)
    w = np.linalg.eigvalsh(m.real)
    assert np.max(np.abs(w)) == pytest.approx(singular_values(m)[0], rel=1e-12)


def test_rank_bounded_by_pole_multiplicity():
    rf = RationalFunction(terms=[(1j, 2, 1.0), (-2 + 1j, 1, 0.3)])
    kern = divided_difference_kernel(rf.as_function(), GRID)
    assert kern.numerical_rank(cutoff=1e-9) <= rf.total_pole_multiplicity()


def test_missing_derivative_rejected():
    vals = from_samples(GRID, np.tanh(GRID.points))
    with pytest.raises(MissingDerivativeError):
        divided_difference_kernel(vals, GRID, diagonal_rule="derivative")
    kern = divided_difference_kernel(vals, GRID, diagonal_rule="symmetric")
    assert kern.matrix.shape == (64, 64)


def test_periodic_multiplier_on_harmonics():
    n = 64
    j = hilbert_transform("periodic-multiplier", n)
    theta = 2 * np.pi * np.arange(n) / n
    plus = np.exp(1j * 3 * theta)
    minus = np.exp(-1j * 5 * theta)
    assert np.allclose(j.matrix @ plus, plus, atol=1e-12)
    assert np.allclose(j.matrix @ minus, -minus, atol=1e-12)
    assert j.involution_defect() <= 1e-12
    assert np.max(np.abs(j.matrix - j.matrix.conj().T)) <= 1e-12


def test_line_kernel_involution_on_smooth_probe():
    # the matrix itself is far from an involution at every resolution (its
    # lattice symbol sweeps [-1, 1]); the meaningful defect is on resolved
    # probes, and that one shrinks under simultaneous refinement + widening
    def defect(width, n):
        grid = UniformGrid(-width, width, n)
        j = hilbert_transform("line-kernel", n, grid=grid)
        probe = np.exp(-grid.points ** 2)
        return involution_defect_on(j, probe)

    base = defect(32.0, 512)
    assert base <= 0.2
    finer = defect(128.0, 2048)
    assert finer < base


def test_involution_projected_exact():
    grid = UniformGrid(-16.0, 16.0, 128)
    j = hilbert_transform("involution-projected", 128, grid=grid)
    assert j.involution_defect() <= 1e-12


def test_hardy_projection_structure():
    j = hilbert_transform("periodic-multiplier", 32)
    proj = hardy_projections(j)
    eye = np.eye(32)
    assert np.allclose(proj.p_plus @ proj.p_plus, proj.p_plus, atol=1e-10)
    assert np.allclose(proj.p_minus @ proj.p_minus, proj.p_minus, atol=1e-10)
    assert np.allclose(proj.p_plus @ proj.p_minus, 0.0, atol=1e-10)
    assert np.allclose(proj.p_plus + proj.p_minus, eye, atol=1e-12)
    assert proj.basis_plus.shape[1] + proj.basis_minus.shape[1] == 32
    # P+ keeps nonnegative frequencies
    theta = 2 * np.pi * np.arange(32) / 32
    mode = np.exp(1j * 2 * theta)
    assert np.allclose(proj.p_plus @ mode, mode, atol=1e-12)


def test_hardy_rejects_non_involution():
    grid = UniformGrid(-16.0, 16.0, 64)
    j = hilbert_transform("line-kernel", 64, grid=grid)
    with pytest.raises(NotInvolutiveError) as err:
        hardy_projections(j)
    assert err.value.defect > 1e-10


def test_constant_multiplier_gives_zero_blocks():
    j = hilbert_transform("periodic-multiplier", 48)
    proj = hardy_projections(j)
    blocks = hankel_blocks(np.full(48, 1.7 - 0.4j), proj)
    assert np.max(np.abs(blocks.a_block)) <= 1e-12
    assert np.max(np.abs(blocks.b_block)) <= 1e-12


def test_block_matrix_power_sum_identity():
    rng = np.random.default_rng(5)
    for p in (0.5, 1.0, 2.0, 3.0):
        a = rng.standard_normal((6, 9)) + 1j * rng.standard_normal((6, 9))
        b = rng.standard_normal((9, 6)) + 1j * rng.standard_normal((9, 6))
        x = np.block([[np.zeros((6, 6)), a], [-b, np.zeros((9, 9))]])
        lhs = schatten_power_sum(x, p, rank_tol=1e-10)
        rhs = schatten_power_sum(a, p, rank_tol=1e-10) + \
            schatten_power_sum(b, p, rank_tol=1e-10)
        assert lhs == pytest.approx(rhs, rel=1e-10)


def test_commutator_consistency_periodic():
    n = 40
    j = hilbert_transform("periodic-multiplier", n)
    proj = hardy_projections(j)
    rng = np.random.default_rng(6)
    fv = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    mf = np.diag(fv)
    direct = 2j * np.pi * (proj.p_plus @ mf - mf @ proj.p_plus)
    assert np.allclose(commutator_kernel(fv, proj), direct, atol=1e-10)


def test_hankel_identity_trig_and_rational():
    n = 96
    grid = UniformGrid(-12.0, 12.0, n)
    j = hilbert_transform("periodic-multiplier", n, grid=grid)
    proj = hardy_projections(j)
    theta = 2 * np.pi * np.arange(n) / n
    trig = 0.7 * np.exp(2j * theta) + 0.2 * np.exp(-3j * theta) + 0.1
    rep = hankel_schatten_identity_check(trig, proj, 2.0)
    assert rep.residual <= 1e-9
    f = RationalFunction.single_pole(1j).as_function()
    kern = divided_difference_kernel(f, grid, diagonal_rule="derivative")
    rep = hankel_schatten_identity_check(np.asarray(f(grid.points)), proj, 1.0,
                                         dd_matrix=kern.matrix)
    assert rep.residual <= 1e-9
    assert rep.grid_gap is not None


def test_block_form_reproduces_commutator_kernel():
    # in the (Ran P+, Ran P-) coordinates, (1/2 pi i) fcheck = [[0, A], [-B, 0]]
    n = 48
    j = hilbert_transform("periodic-multiplier", n)
    proj = hardy_projections(j)
    rng = np.random.default_rng(8)
    fv = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    blocks = hankel_blocks(fv, proj)
    basis = np.concatenate([proj.basis_plus, proj.basis_minus], axis=1)
    rotated = basis.conj().T @ (commutator_kernel(fv, proj) / (2j * np.pi)) @ basis
    r = proj.basis_plus.shape[1]
    assert np.allclose(rotated[:r, r:], blocks.a_block, atol=1e-10)
    assert np.allclose(rotated[r:, :r], -blocks.b_block, atol=1e-10)
    assert np.allclose(rotated[:r, :r], 0.0, atol=1e-10)
    assert np.allclose(rotated[r:, r:], 0.0, atol=1e-10)


def test_real_function_blocks_balance():
    n = 64
    j = hilbert_transform("periodic-multiplier", n)
    proj = hardy_projections(j)
    rng = np.random.default_rng(7)
    fv = rng.standard_normal(n).astype(complex)
    blocks = hankel_blocks(fv, proj)
    for p in (1.0, 2.0):
        assert schatten_power_sum(blocks.a_block, p) == pytest.approx(
            schatten_power_sum(blocks.b_block, p), rel=1e-9)


def test_bmo_kernel_estimator():
    grid = UniformGrid(-16.0, 16.0, 256)
    const = SampledFunction(lambda x: np.full_like(x, 2.0, dtype=complex),
                            derivative=lambda x: np.zeros_like(x, dtype=complex))
    assert bmo_norm_via_kernel(const, grid) <= 1e-12
    f = SampledFunction(lambda x: np.tanh(x).astype(complex),
                        derivative=lambda x: (1 / np.cosh(x) ** 2).astype(complex))
    est = bmo_norm_via_kernel(f, grid)
    assert est <= 1.0 + 0.1  # bounded by sup|f| + grid slack
