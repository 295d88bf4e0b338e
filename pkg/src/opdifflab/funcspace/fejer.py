"""Rational approximation by Fejer sums transferred through the Cayley map.

A function f of at most logarithmic growth is pulled to the unit circle by
h(e^{i theta}) = f(omega(e^{i theta})), omega(zeta) = i (1 + zeta)/(1 - zeta)
(so the boundary trace is x = -cot(theta/2)), smoothed by the Fejer mean

    h_n(z) = sum_{|j| < n} (1 - |j|/n) hhat_j z^j,

and pushed back as f_n = h_n o omega^{-1}, a rational function of x with all
poles at +-i.  Fejer kernel positivity makes sup |h_n| <= sup |h|.
"""

from __future__ import annotations

import numpy as np

from opdifflab.funcspace.rational import RationalFunction
from opdifflab.funcspace.sampled import SampledFunction


class GrowthError(ValueError):
    def __init__(self, x: float, value: float, bound: float):
        super().__init__(
            f"|f({x:.3g})| = {value:.3g} exceeds {bound:.3g} (1 + log(1 + x^2)); "
            "transfer to the circle is not integrable"
        )


def midpoint_circle_grid(n_theta: int) -> np.ndarray:
    """theta_m = 2 pi (m + 1/2) / N: avoids theta = 0 where the map blows up."""
    return 2.0 * np.pi * (np.arange(n_theta) + 0.5) / n_theta


def circle_coefficients(values: np.ndarray, max_order: int) -> np.ndarray:
    """Fourier coefficients hhat_j, |j| <= max_order, from midpoint-grid samples."""
    n_theta = len(values)
    if 2 * max_order + 1 > n_theta:
        raise ValueError("need more circle samples than coefficients")
    fft = np.fft.fft(values) / n_theta
    js = np.arange(-max_order, max_order + 1)
    phases = np.exp(-1j * js * np.pi / n_theta)  # midpoint shift
    return phases * fft[js % n_theta]


def fejer_sum_circle(values: np.ndarray, n: int) -> np.ndarray:
    """Fejer-weighted coefficients (1 - |j|/n) hhat_j for j = -n..n."""
    coeffs = circle_coefficients(values, n)
    js = np.arange(-n, n + 1)
    return (1.0 - np.abs(js) / n) * coeffs


def check_growth(f: SampledFunction, bound: float = 100.0) -> None:
    probes = np.concatenate([-np.geomspace(1e-3, 1e6, 40), np.geomspace(1e-3, 1e6, 40)])
    vals = np.abs(f(probes))
    limits = bound * (1.0 + np.log1p(probes ** 2))
    bad = vals > limits
    if np.any(bad):
        i = int(np.argmax(bad))
        raise GrowthError(float(probes[i]), float(vals[i]), bound)


def fejer_rational_approx(f: SampledFunction, n: int, n_theta: int | None = None,
                          growth_bound: float = 100.0) -> RationalFunction:
    """Order-n Fejer rational approximation of f (poles at +-i)."""
    if n < 1:
        raise ValueError("order n must be >= 1")
    check_growth(f, bound=growth_bound)
    if n_theta is None:
        n_theta = max(4096, 8 * n)
    theta = midpoint_circle_grid(n_theta)
    x = -1.0 / np.tan(theta / 2.0)
    h = np.asarray(f(x), dtype=complex)
    return RationalFunction.from_cayley(fejer_sum_circle(h, n))
