"""Cross-module experiment suites at reduced sizes (acceptance runs full)."""

import numpy as np

from opdifflab import divdiff, experiments
from opdifflab.funcspace import UniformGrid, dyadic_window_build
from opdifflab.funcspace.rational import RationalFunction


def _all_pass(rows):
    failed = [r for r in rows if not r.passed]
    assert not failed, failed[:3]


def test_verify_suite_green():
    rows = experiments.verify_suite(seed=5, dims=(8, 12))
    _all_pass(rows)
    assert all(r.experiment == "verify" for r in rows)
    assert all(r.tol is not None or r.check.startswith("counterexample")
               for r in rows)


def test_doi_bound_rows_carry_raw_ratios():
    rows = experiments.doi_bound_sweep(seed=1, n_symbols=6)
    _all_pass(rows)
    assert len(rows) == 24
    assert all(r.ratio is not None for r in rows)


def test_peller_ratio_stable_under_hankel_refinement():
    # one-pole-pair rational at p = 1: ratio moves < 20% when the Hankel grid
    # doubles
    window = dyadic_window_build(-2, 11)
    besov_grid = UniformGrid(-32.0, 32.0, 2 ** 17)
    family = [RationalFunction.from_poles([(1j, 1.0), (-1j, 1.0)]).as_function()]
    r1 = divdiff.peller_two_sided_check(
        family, 1.0, window, besov_grid, UniformGrid(-32.0, 32.0, 512))
    r2 = divdiff.peller_two_sided_check(
        family, 1.0, window, besov_grid, UniformGrid(-32.0, 32.0, 1024))
    assert abs(r2.ratios[0] - r1.ratios[0]) <= 0.20 * r1.ratios[0]
    assert r1.ratios[0] > 0


def test_falpha_family_ratio_consistency():
    # F_alpha members at p = 2 have Hankel/Besov ratios within a factor 4
    rows = experiments.peller_suite(p_values=(2.0,))
    _all_pass(rows)


def test_bessel_and_interpolation_small():
    _all_pass(experiments.bessel_sweep(seed=9, trials=15))
    _all_pass(experiments.interpolation_suite(seed=9, q_values=(2.0, 5.0),
                                              n_models=2))


def test_bmo_bound_small():
    rows = experiments.bmo_bound_suite(seed=3, n_pairs=2, m_cells=12)
    _all_pass(rows)
    assert all(r.ratio is not None and r.ratio >= 0 for r in rows)


def test_smoothness_equivalence_small():
    rows = experiments.smoothness_equivalence(seed=11, n_models=2)
    _all_pass(rows)
    for r in rows:
        assert abs(r.ratio - 1.0) <= 0.05


def test_hankel_suite_reports_grid_gap():
    rows = experiments.hankel_identity_suite(seed=2, n_grid=96,
                                             p_values=(1.0,), n_functions=10)
    _all_pass(rows)
    assert "dd-matrix gap" in rows[0].notes


def test_band_suite_membership_rows_present():
    rows = experiments.besov_band_suite(
        alpha_p_pairs=((2.0, 1.0),), n_grid=2 ** 18, j_max=12, fit_from=8,
        fit_to=11)
    _all_pass(rows)
    checks = {r.check for r in rows}
    assert {"band_decay_slope", "membership_threshold", "band_term"} <= checks


def test_sharpness_custom_function_path():
    f = RationalFunction.from_poles([(1.2j, 1.0), (-1.2j, 1.0)]).as_function()
    f.label = "custom"
    rows = experiments.sharpness_suite(n_points=(256,), functions=[f])
    _all_pass(rows)
    assert any("custom" in r.notes for r in rows)


def test_bmo_consistency_bracket():
    rows = experiments.bmo_consistency_suite()
    _all_pass(rows)
    for r in rows:
        assert 1.0 / 20.0 <= r.ratio <= 20.0


def test_doi_bound_operator_norm_triple():
    # the operator-norm face: p = q = r = inf with the interval norms
    from opdifflab import doi, ensemble

    rng = ensemble.stream(21, "doi-bound", 0)
    m0 = ensemble.random_multop_model(rng, 8, 2, 2)
    m1 = ensemble.random_multop_model(rng, 8, 2, 2)
    sym = doi.SchurSymbol.from_kernel(lambda x, y: np.exp(-(x - y) ** 2 / 4))
    rep = doi.doi_norm_bound_check(m0, m1, sym, np.inf, np.inf, np.inf)
    assert rep.passed and rep.ratio <= 1.0 + 1e-9


def test_counterexample_subcritical_growth_rates():
    rows = experiments.model_norm_equalities(
        seed=4, n_models=5, counterexample_sizes=(4, 16, 64),
        counterexample_p=(0.5,))
    _all_pass(rows)
    growth = [r for r in rows if r.check == "counterexample_subcritical_growth"]
    # interval sup at p = 1/2 equals N^{1/p - 1/2} = N^{3/2}
    assert growth[0].rhs == 64.0 ** 1.5
