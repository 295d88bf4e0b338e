"""Seeded random ensembles for the property sweeps.

All randomness flows through the Philox 4x64 counter-based generator with a
documented stream layout: the key is the user seed, and the 256-bit counter
starts at [0, 0, trial_index, experiment_id].  Identical (seed, experiment,
trial) triples therefore reproduce bit-identical matrices regardless of how
many trials ran before.
"""

from __future__ import annotations

import numpy as np

from opdifflab.funcspace.rational import RationalFunction
from opdifflab.smoothness import MultOpModel
from opdifflab.spectral import HermitianOperator, OperatorPair, RectFactor

EXPERIMENT_IDS = {
    "verify": 1,
    "sweep": 2,
    "besov": 3,
    "bmo": 4,
    "sharpness": 5,
    "falpha": 6,
    "smoothness": 7,
    "interpolation": 8,
    "doi-bound": 9,
    "hankel": 10,
    "bessel": 11,
    "bmo-bound": 12,
}


def stream(seed: int, experiment: str, trial: int) -> np.random.Generator:
    """The documented Philox stream for one (experiment, trial) pair."""
    exp_id = EXPERIMENT_IDS.get(experiment)
    if exp_id is None:
        raise KeyError(f"unknown experiment stream {experiment!r}")
    bitgen = np.random.Philox(key=int(seed) & (2 ** 64 - 1),
                              counter=[0, 0, int(trial), exp_id])
    return np.random.Generator(bitgen)


def complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    """Entries with independent standard complex Gaussian law (E|z|^2 = 1)."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def random_hermitian(rng: np.random.Generator, dim: int, spectral_radius=4.0) -> HermitianOperator:
    a = complex_gaussian(rng, (dim, dim))
    h = 0.5 * (a + a.conj().T)
    w = np.linalg.eigvalsh(h)
    scale = spectral_radius / max(float(np.max(np.abs(w))), 1e-300)
    return HermitianOperator(h * scale)


def random_pair(rng: np.random.Generator, dim: int, k_dim: int) -> OperatorPair:
    """H0 with spectrum in [-4, 4]; G0 iid complex Gaussian scaled by
    1/sqrt(dim k); G1 = S G0 with random signs S, so G1 is marginally the
    same ensemble and the perturbation G1* G0 = G0* S G0 is Hermitian."""
    h0 = random_hermitian(rng, dim)
    g0 = complex_gaussian(rng, (k_dim, dim)) / np.sqrt(dim * k_dim)
    signs = np.where(rng.random(k_dim) < 0.5, -1.0, 1.0)
    g1 = signs[:, None] * g0
    factor = RectFactor(g0=g0, g1=g1)
    return OperatorPair.from_h0(h0, factor)


def random_intertwined(rng: np.random.Generator, dim: int):
    """Two random Hermitian operators and a random intertwiner J."""
    h0 = random_hermitian(rng, dim)
    h1 = random_hermitian(rng, dim)
    j = complex_gaussian(rng, (dim, dim)) / np.sqrt(dim)
    return h0, h1, j


def random_multop_model(rng: np.random.Generator, m_cells: int, h_dim: int,
                        k_dim: int, x_min=-4.0, x_max=4.0) -> MultOpModel:
    g = complex_gaussian(rng, (m_cells, k_dim, h_dim))
    return MultOpModel(x_min, x_max, g)


def smooth_profile_model(rng: np.random.Generator, m_cells: int, h_dim: int,
                         k_dim: int, x_min=-4.0, x_max=4.0,
                         modulation=0.25, plateau=0.4) -> MultOpModel:
    """One random base block under a slowly varying positive amplitude.

    The amplitude takes its maximum on an interior plateau (a smooth bump flat
    over a ``plateau`` fraction of the domain), so the resolvent and Poisson
    estimates can localize there without fighting grid resolution: this is the
    bounded-variation regime of the c1 = c2 = c3 check.
    """
    from opdifflab.funcspace.windows import smooth_step

    base = complex_gaussian(rng, (k_dim, h_dim))
    center = rng.uniform(0.35, 0.65)
    u = (np.arange(m_cells) + 0.5) / m_cells
    dist = np.abs(u - center) / (plateau / 2.0)
    amp = 1.0 + modulation * smooth_step(2.0 - dist)
    g = amp[:, None, None] * base[None, :, :]
    return MultOpModel(x_min, x_max, g)


def hermitian_coupled_model(rng: np.random.Generator, base: MultOpModel) -> MultOpModel:
    """g1 = C g0 per cell with one random Hermitian C: makes G1* G0 Hermitian."""
    k = base.k_dim
    a = complex_gaussian(rng, (k, k))
    c = 0.5 * (a + a.conj().T)
    return MultOpModel(base.x_min, base.x_max, np.einsum("ab,kbh->kah", c, base.g_blocks))


def rational_test_functions(count: int = 10) -> list[RationalFunction]:
    """A fixed family of bounded rational functions with poles off [-8, 8]."""
    fams = [
        RationalFunction.from_poles([(1j, 1.0), (-1j, 1.0)]),
        RationalFunction.from_poles([(2j, 1.0), (-2j, 1.0)], constant=0.5),
        RationalFunction.from_poles([(0.5 + 1j, 1.0), (0.5 - 1j, 1.0)]),
        RationalFunction(terms=[(1j, 2, 1.0), (-1j, 2, 1.0)]),
        RationalFunction.from_poles([(-1.5 + 0.8j, 1.0j), (-1.5 - 0.8j, -1.0j)]),
        RationalFunction.from_poles([(3j, 2.0)]),
        RationalFunction.from_poles([(1 + 1j, 1.0), (1 - 1j, 1.0), (-1 + 2j, 0.5),
                                     (-1 - 2j, 0.5)]),
        RationalFunction(terms=[(2 + 1.5j, 1, 1.0), (2 - 1.5j, 2, 0.25j)]),
        RationalFunction.from_poles([(0.3j, 0.1)]),
        RationalFunction.from_poles([(-2 + 1j, 1.0), (2 + 1j, 1.0)]),
    ]
    if count > len(fams):
        raise ValueError(f"only {len(fams)} canned rational functions available")
    return fams[:count]


def random_trig_values(rng: np.random.Generator, n: int, degree: int,
                       real: bool = False) -> np.ndarray:
    """Values of a random trigonometric polynomial on the n-point circle grid."""
    theta = 2.0 * np.pi * np.arange(n) / n
    vals = np.zeros(n, dtype=complex)
    for k in range(-degree, degree + 1):
        coef = complex_gaussian(rng, ())
        vals += coef * np.exp(1j * k * theta)
    if real:
        vals = vals.real.astype(complex)
    return vals
