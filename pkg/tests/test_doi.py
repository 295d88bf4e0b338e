"""Double operator integrals: Schur-multiplier identities and bounds."""

import numpy as np
import pytest

from opdifflab import ensemble
from opdifflab.doi import (
    DoiData,
    HoelderTripleError,
    QuasiPair,
    SchurSymbol,
    birman_solomyak_residual,
    doi_apply,
    doi_norm_bound_check,
    product_form_check,
    quasicommutator,
    sharpness_pair,
)
from opdifflab.funcspace import UniformGrid
from opdifflab.funcspace.rational import RationalFunction
from opdifflab.funcspace.sampled import SampledFunction
from opdifflab.spectral import (
    HermitianOperator,
    OperatorPair,
    RectFactor,
    func_calculus,
    resolvent,
    schatten_norm,
)


def _pair(seed=0, dim=16, k=3):
    rng = ensemble.stream(seed, "sweep", 900)
    return ensemble.random_pair(rng, dim, k)


def test_constant_symbol_reproduces_perturbation():
    pair = _pair()
    out = doi_apply(pair, SchurSymbol.constant(1.0)).matrix
    assert np.allclose(out, pair.factor.perturbation(), atol=1e-12)


def test_resolvent_symbol_matches_resolvent_difference():
    pair = _pair(seed=1)
    z0 = 0.4 + 0.9j
    f = RationalFunction.single_pole(z0).as_function()
    sym = SchurSymbol.divided_difference(f)
    out = doi_apply(pair, sym).matrix
    direct = resolvent(pair.h1, z0) - resolvent(pair.h0, z0)
    assert np.linalg.norm(out - direct) <= 1e-10 * np.linalg.norm(direct)


def test_birman_solomyak_rational_random():
    pair = _pair(seed=2, dim=32)
    for rf in ensemble.rational_test_functions(5):
        assert birman_solomyak_residual(pair, rf.as_function()) <= 1e-9


def test_birman_solomyak_trivial_functions():
    pair = _pair(seed=3, dim=8)
    const = SampledFunction(lambda x: np.full_like(x, 2.0, dtype=complex),
                            derivative=lambda x: np.zeros_like(x, dtype=complex))
    diff = func_calculus(pair.h1, const) - func_calculus(pair.h0, const)
    assert np.max(np.abs(diff)) <= 1e-12
    ident = SampledFunction(lambda x: x.astype(complex),
                            derivative=lambda x: np.ones_like(x, dtype=complex))
    assert birman_solomyak_residual(pair, ident) <= 1e-12


def test_doi_linearity_in_symbol():
    pair = _pair(seed=4, dim=10)
    s1 = SchurSymbol.from_kernel(lambda x, y: np.exp(-(x - y) ** 2))
    s2 = SchurSymbol.from_kernel(lambda x, y: 1.0 / (1.0 + (x + y) ** 2))
    combo = SchurSymbol.from_kernel(
        lambda x, y: 2.0 * np.exp(-(x - y) ** 2) - 0.5 / (1.0 + (x + y) ** 2))
    out = doi_apply(pair, combo).matrix
    direct = 2.0 * doi_apply(pair, s1).matrix - 0.5 * doi_apply(pair, s2).matrix
    assert np.allclose(out, direct, atol=1e-12)


def test_doi_adjoint_symmetry():
    pair = _pair(seed=5, dim=12)
    kernel = lambda x, y: np.exp(1j * x * y) / (1.0 + (x - 2 * y) ** 2)
    out = doi_apply(pair, SchurSymbol.from_kernel(kernel)).matrix
    swapped = DoiData.from_pair(pair).swapped()
    flipped = SchurSymbol.from_kernel(lambda x, y: np.conj(kernel(y, x)))
    out_swapped = doi_apply(swapped, flipped).matrix
    assert np.allclose(out.conj().T, out_swapped, atol=1e-12)


def test_doi_vanishes_on_zero_factor():
    pair = _pair(seed=6, dim=8)
    data = DoiData(h1=pair.h1, h0=pair.h0, g1=np.zeros_like(pair.factor.g1),
                   g0=pair.factor.g0)
    out = doi_apply(data, SchurSymbol.from_kernel(lambda x, y: x + y)).matrix
    assert np.max(np.abs(out)) == 0.0


def test_quasicommutator_identity_j():
    pair = _pair(seed=7, dim=12)
    qpair = QuasiPair.from_intertwiner(pair.h0, pair.h1, np.eye(12))
    f = RationalFunction.single_pole(1j).as_function()
    rep = quasicommutator(qpair, f)
    assert rep.residual <= 1e-9
    direct = func_calculus(pair.h1, f) - func_calculus(pair.h0, f)
    assert np.allclose(rep.matrix, direct, atol=1e-12)


def test_quasicommutator_linear_function():
    rng = ensemble.stream(8, "sweep", 901)
    h0, h1, j = ensemble.random_intertwined(rng, 10)
    qpair = QuasiPair.from_intertwiner(h0, h1, j)
    ident = SampledFunction(lambda x: x.astype(complex),
                            derivative=lambda x: np.ones_like(x, dtype=complex))
    rep = quasicommutator(qpair, ident)
    assert rep.residual <= 1e-12
    assert np.allclose(rep.matrix, qpair.g1.conj().T @ qpair.g0, atol=1e-11)


def test_quasicommutator_random_intertwiner():
    rng = ensemble.stream(9, "sweep", 902)
    h0, h1, j = ensemble.random_intertwined(rng, 16)
    qpair = QuasiPair.from_intertwiner(h0, h1, j)
    f = RationalFunction.single_pole(1j).as_function()
    assert quasicommutator(qpair, f).residual <= 1e-9


def test_product_form_trivial_weights():
    pair = _pair(seed=10, dim=10)
    ones = lambda x: np.ones_like(x, dtype=complex)
    f = RationalFunction.single_pole(-1.5j).as_function()
    rep = product_form_check(pair, f, ones, ones)
    assert rep.residual_quasi <= 1e-9
    assert rep.residual_doi <= 1e-9
    diff = func_calculus(pair.h1, f) - func_calculus(pair.h0, f)
    assert np.allclose(rep.lhs, diff, atol=1e-11)


def test_product_form_spectral_indicator():
    pair = _pair(seed=11, dim=16)
    lo, hi = np.quantile(pair.h0.eigvals, [0.3, 0.8])
    ind = lambda x: ((x > lo) & (x <= hi)).astype(complex)
    f = RationalFunction.from_poles([(1j, 1.0), (-1j, 1.0)]).as_function()
    rep = product_form_check(pair, f, ind, ind)
    assert rep.residual_quasi <= 1e-9
    assert rep.residual_doi <= 1e-9
    assert rep.factor_defect <= 1e-11


def test_product_form_constant_function():
    pair = _pair(seed=12, dim=8)
    const = SampledFunction(lambda x: np.full_like(x, 1.3, dtype=complex),
                            derivative=lambda x: np.zeros_like(x, dtype=complex))
    ones = lambda x: np.ones_like(x, dtype=complex)
    rep = product_form_check(pair, const, ones, ones)
    assert np.max(np.abs(rep.lhs)) <= 1e-11


def test_shared_eigenvalue_coupling_vanishes():
    # force a shared eigenvalue; the Schur coupling entry is ~0 there, so
    # the identity holds under either diagonal rule
    rng = ensemble.stream(13, "sweep", 903)
    lam_shared = 0.5
    a0 = ensemble.random_hermitian(rng, 5, spectral_radius=3.0)
    h0 = HermitianOperator(np.block(
        [[np.array([[lam_shared]]), np.zeros((1, 5))],
         [np.zeros((5, 1)), a0.entries]]))
    g_small = ensemble.complex_gaussian(rng, (2, 5)) / 4.0
    g0 = np.concatenate([np.zeros((2, 1)), g_small], axis=1)
    signs = np.array([1.0, -1.0])
    g1 = signs[:, None] * g0
    pair = OperatorPair.from_h0(h0, RectFactor(g0=g0, g1=g1))
    assert np.min(np.abs(pair.h1.eigvals - lam_shared)) <= 1e-12
    f = RationalFunction.single_pole(1j).as_function()
    assert birman_solomyak_residual(pair, f, diagonal_rule="derivative") <= 1e-9
    assert birman_solomyak_residual(pair, f, diagonal_rule="symmetric") <= 1e-9


def test_doi_bound_zero_symbol():
    rng = ensemble.stream(14, "doi-bound", 904)
    m0 = ensemble.random_multop_model(rng, 8, 2, 2)
    m1 = ensemble.random_multop_model(rng, 8, 2, 2)
    rep = doi_norm_bound_check(m0, m1, SchurSymbol.constant(0.0), 1.0, 2.0, 2.0)
    assert rep.lhs == 0.0 and rep.passed


def test_doi_bound_rank_one_symbol():
    rng = ensemble.stream(15, "doi-bound", 905)
    m0 = ensemble.random_multop_model(rng, 10, 2, 2)
    m1 = ensemble.random_multop_model(rng, 10, 2, 2)
    sym = SchurSymbol.from_kernel(
        lambda x, y: np.exp(-x ** 2 / 2) * np.exp(-(y - 1) ** 2 / 3))
    for (p, q, r) in ((1.0, 2.0, 2.0), (2.0, 4.0, 4.0)):
        rep = doi_norm_bound_check(m0, m1, sym, p, q, r)
        assert rep.passed and rep.ratio <= 1.0 + 1e-9


def test_doi_bound_rejects_bad_triple():
    rng = ensemble.stream(16, "doi-bound", 906)
    m0 = ensemble.random_multop_model(rng, 6, 1, 1)
    with pytest.raises(HoelderTripleError):
        doi_norm_bound_check(m0, m0, SchurSymbol.constant(1.0), 1.0, 1.0, 1.0)


def test_sharpness_constant_function():
    grid = UniformGrid(-8.0, 8.0, 128)
    const = SampledFunction(lambda x: np.full_like(x, 2.0, dtype=complex),
                            derivative=lambda x: np.zeros_like(x, dtype=complex))
    rep = sharpness_pair(grid, const)
    assert rep.commutator_residual <= 1e-12
    assert rep.involution_residual <= 1e-12
    assert rep.norm_ratio is None  # zero kernel: ratio skipped


def test_sharpness_rational():
    grid = UniformGrid(-32.0, 32.0, 256)
    f = RationalFunction.from_poles([(1j, 1.0), (-1j, 1.0)]).as_function()
    rep = sharpness_pair(grid, f)
    assert rep.commutator_residual <= 1e-12
    assert rep.involution_residual <= 1e-10
    assert 0.8 <= rep.norm_ratio <= 1.2
    assert not rep.used_symmetric_diagonal


def test_sharpness_symmetric_fallback_flag():
    grid = UniformGrid(-16.0, 16.0, 128)
    f = SampledFunction(lambda x: np.exp(-x ** 2).astype(complex))  # no derivative
    rep = sharpness_pair(grid, f)
    assert rep.used_symmetric_diagonal
