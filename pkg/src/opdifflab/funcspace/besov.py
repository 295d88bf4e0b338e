"""The dyadic Besov functional governing Schatten membership of kernels.

For each band j the discrete Fourier transform of the samples is restricted to
the positive-frequency window w(xi / 2^j) and, separately, to the mirrored
window w(-xi / 2^j); the functional is

    ( sum_j 2^j ( ||P_j f||_p^p + ||P_{-j} f||_p^p ) )^{1/p},

with L^p norms taken as dx-weighted sums.  The value vanishes on constants
(every band kills frequency zero) and is invariant under dyadic dilations
(band terms shift by the dilation exponent).

The result depends on the window; the window hash is recorded with every
report.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from opdifflab.funcspace.sampled import SampledFunction, UniformGrid
from opdifflab.funcspace.windows import DyadicWindow


class NyquistError(ValueError):
    def __init__(self, j: int, limit: float):
        self.band = j
        super().__init__(
            f"band j={j} needs frequencies up to 2^{j + 1} beyond the grid Nyquist "
            f"limit {limit:.4g}; refine the grid or lower j_max"
        )


@dataclass
class BesovReport:
    norm: float
    p: float
    terms: dict[int, tuple[float, float]]  # j -> (pos-band term, neg-band term), no 2^j weight
    weighted_terms: dict[int, float] = field(default_factory=dict)  # j -> 2^j (pos + neg)
    window_hash: str = ""
    grid: UniformGrid | None = None

    def band_slope(self, j_lo: int = 4, j_hi: int | None = None) -> float:
        """Fitted log-log slope of the weighted terms over j in [j_lo, j_hi]."""
        js = sorted(j for j in self.weighted_terms if j >= j_lo and
                    (j_hi is None or j <= j_hi) and self.weighted_terms[j] > 0)
        if len(js) < 3:
            raise ValueError("not enough positive band terms for a slope fit")
        x = np.log(np.array(js, dtype=float))
        y = np.log(np.array([self.weighted_terms[j] for j in js]))
        return float(np.polyfit(x, y, 1)[0])


def besov_norm(f: SampledFunction, p: float, window: DyadicWindow,
               grid: UniformGrid | None = None) -> BesovReport:
    """Evaluate the Besov functional of f with the given window.

    ``grid`` is required for analytic functions; grid functions use their own
    grid.  Raises NyquistError when the top band is not resolved.
    """
    if p <= 0:
        raise ValueError("p must be positive")
    if grid is None:
        if f.grid is None:
            raise ValueError("analytic function needs an explicit grid")
        grid = f.grid
    n = grid.n
    dx = grid.dx
    nyquist = np.pi / dx
    if 2.0 ** (window.j_max + 1) > nyquist:
        raise NyquistError(window.j_max, nyquist)

    values = f.values_on(grid)
    spectrum = np.fft.fft(values)
    xi = 2.0 * np.pi * np.fft.fftfreq(n, d=dx)

    terms: dict[int, tuple[float, float]] = {}
    weighted: dict[int, float] = {}
    total = 0.0
    for j in range(window.j_min, window.j_max + 1):
        w_pos = window.band(j, xi)
        w_neg = window.band(j, -xi)
        piece_pos = np.fft.ifft(spectrum * w_pos)
        piece_neg = np.fft.ifft(spectrum * w_neg)
        t_pos = float(np.sum(np.abs(piece_pos) ** p) * dx)
        t_neg = float(np.sum(np.abs(piece_neg) ** p) * dx)
        terms[j] = (t_pos, t_neg)
        weighted[j] = 2.0 ** j * (t_pos + t_neg)
        total += weighted[j]
    return BesovReport(
        norm=float(total ** (1.0 / p)),
        p=float(p),
        terms=terms,
        weighted_terms=weighted,
        window_hash=window.window_hash,
        grid=grid,
    )
