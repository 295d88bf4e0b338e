"""Mean-oscillation estimator over dyadic sub-intervals of a grid.

This is the classical sup_I <|f - <f>_I|>_I, restricted to the dyadic tree of
index ranges (length >= 2 cells).  It is an equivalent norm for the duality
norm used elsewhere, not the same number: cross-estimator comparisons assert
ratio-boundedness, never equality.
"""

from __future__ import annotations

import numpy as np

from opdifflab.funcspace.sampled import SampledFunction, UniformGrid


def _level_oscillation(values: np.ndarray, pieces: int) -> float:
    """Max mean-abs-deviation over ``pieces`` near-equal dyadic intervals."""
    n = len(values)
    starts = (np.arange(pieces) * n) // pieces
    lengths = np.diff(np.append(starts, n))
    sums = np.add.reduceat(values, starts)
    means = sums / lengths
    abs_dev = np.abs(values - np.repeat(means, lengths))
    osc = np.add.reduceat(abs_dev, starts) / lengths
    osc = osc[lengths >= 2]
    return float(np.max(osc)) if osc.size else 0.0


def bmo_mean_oscillation(f: SampledFunction, grid: UniformGrid | None = None) -> float:
    """Maximum mean oscillation over all dyadic sub-intervals (>= 2 cells)."""
    if grid is None:
        if f.grid is None:
            raise ValueError("analytic function needs an explicit grid")
        grid = f.grid
    values = f.values_on(grid)
    n = len(values)
    best = 0.0
    pieces = 1
    while n // pieces >= 2:
        best = max(best, _level_oscillation(values, pieces))
        pieces *= 2
    return best
