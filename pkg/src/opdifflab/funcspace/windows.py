"""Smooth dyadic windows with an exactly telescoping partition of unity.

The bump is w(x) = chi(x) - chi(2x), where chi is the smooth step that equals
1 for x <= 1 and 0 for x >= 2.  Then w >= 0 with support exactly [1/2, 2], and

    sum_{j=a}^{b} w(x / 2^j) = chi(x / 2^b) - chi(x 2^{1-a}),

so on [2^a, 2^b] the sum is identically 1.  The formula is fixed (and hashed
into results) because the Besov functional depends on the window choice.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np


def smooth_step(t):
    """C-infinity step: 0 for t <= 0, 1 for t >= 1, e^{-1/t}/(e^{-1/t}+e^{-1/(1-t)}) between."""
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    out[t >= 1.0] = 1.0
    mid = (t > 0.0) & (t < 1.0)
    tm = t[mid]
    a = np.exp(-1.0 / tm)
    b = np.exp(-1.0 / (1.0 - tm))
    out[mid] = a / (a + b)
    return out


def smooth_cutoff(x):
    """chi(x) = 1 for x <= 1, 0 for x >= 2, smooth and decreasing between."""
    return smooth_step(2.0 - np.asarray(x, dtype=float))


def bump(x):
    """w(x) = chi(x) - chi(2x): nonnegative, supported in [1/2, 2]."""
    x = np.asarray(x, dtype=float)
    return smooth_cutoff(x) - smooth_cutoff(2.0 * x)


@dataclass(frozen=True)
class DyadicWindow:
    """The canonical bump with a dyadic index range [j_min, j_max]."""

    j_min: int
    j_max: int

    def __post_init__(self):
        if not self.j_min < self.j_max:
            raise ValueError("need j_min < j_max")

    def bump(self, x):
        return bump(x)

    def band(self, j: int, xi):
        """w(xi / 2^j), evaluated for any real xi (zero for xi <= 2^{j-1})."""
        return bump(np.asarray(xi, dtype=float) / 2.0 ** j)

    def partition_sum(self, x):
        x = np.asarray(x, dtype=float)
        total = np.zeros_like(x)
        for j in range(self.j_min, self.j_max + 1):
            total += self.band(j, x)
        return total

    def telescoped_sum(self, x):
        """Closed form chi(x/2^{j_max}) - chi(x 2^{1-j_min}) of the same sum."""
        x = np.asarray(x, dtype=float)
        return smooth_cutoff(x / 2.0 ** self.j_max) - smooth_cutoff(x * 2.0 ** (1 - self.j_min))

    @property
    def window_hash(self) -> str:
        tag = f"telescope-exp-step/j{self.j_min}..{self.j_max}"
        return hashlib.sha256(tag.encode()).hexdigest()[:12]


def dyadic_window_build(j_min: int, j_max: int) -> DyadicWindow:
    """Build the canonical window and verify its partition of unity."""
    win = DyadicWindow(j_min, j_max)
    xs = np.geomspace(2.0 ** (j_min + 1), 2.0 ** (j_max - 1), 64)
    defect = float(np.max(np.abs(win.partition_sum(xs) - 1.0)))
    if defect > 1e-9:
        raise AssertionError(f"partition of unity defect {defect:.3e}")
    return win
