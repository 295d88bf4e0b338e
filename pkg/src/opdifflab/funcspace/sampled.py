"""Scalar functions: analytic closures or uniform-grid samples."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np


@dataclass(frozen=True)
class UniformGrid:
    """N points from x_min to x_max inclusive, spacing (x_max - x_min)/(N - 1)."""

    x_min: float
    x_max: float
    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("grid needs at least two points")
        if not self.x_min < self.x_max:
            raise ValueError("need x_min < x_max")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.n - 1)

    @property
    def points(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n)

    def refine(self, factor: int = 2) -> "UniformGrid":
        return UniformGrid(self.x_min, self.x_max, (self.n - 1) * factor + 1)


class SampledFunction:
    """A scalar function given analytically or as uniform-grid samples.

    Analytic functions evaluate anywhere and may carry a derivative closure;
    grid functions evaluate on (and interpolate linearly off) their own grid.
    """

    def __init__(self, fn: Callable | None = None, *, grid: UniformGrid | None = None,
                 values=None, derivative: Callable | None = None, label: str = ""):
        if fn is None and (grid is None or values is None):
            raise ValueError("need either an analytic closure or grid + values")
        self.fn = fn
        self.grid = grid
        self.derivative = derivative
        self.label = label
        if values is not None:
            values = np.asarray(values, dtype=complex)
            if grid is None or values.shape != (grid.n,):
                raise ValueError("values must match the grid length")
            values.setflags(write=False)
        self.values = values

    @property
    def kind(self) -> str:
        return "analytic" if self.fn is not None else "grid"

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.fn is not None:
            return np.asarray(self.fn(x), dtype=complex)
        g = self.grid
        re = np.interp(x, g.points, self.values.real)
        im = np.interp(x, g.points, self.values.imag)
        return re + 1j * im

    def values_on(self, grid: UniformGrid) -> np.ndarray:
        if self.fn is None and self.grid == grid:
            return self.values
        return self(grid.points)

    def derivative_on(self, grid: UniformGrid) -> np.ndarray:
        """f' on the grid: analytic closure when present, else symmetric differences."""
        if self.derivative is not None:
            return np.asarray(self.derivative(grid.points), dtype=complex)
        x = grid.points
        h = grid.dx
        if self.fn is not None:
            return (self(x + h) - self(x - h)) / (2 * h)
        vals = self.values_on(grid)
        return np.gradient(vals, h)

    def __repr__(self):
        tag = self.label or self.kind
        return f"SampledFunction({tag})"


def from_samples(grid: UniformGrid, values, label="samples") -> SampledFunction:
    return SampledFunction(grid=grid, values=values, label=label)


def log_abs() -> SampledFunction:
    def fn(x):
        with np.errstate(divide="ignore"):
            return np.log(np.abs(x)).astype(complex)

    def dfn(x):
        return (1.0 / x).astype(complex)

    return SampledFunction(fn, derivative=dfn, label="log|x|")


def load_samples_csv(path) -> SampledFunction:
    """Two-column CSV (x, value); x must be uniform ascending."""
    data = np.loadtxt(path, delimiter=",", dtype=complex)
    if data.ndim != 2 or data.shape[1] != 2:
        raise ValueError("expected two columns: x, value")
    x = data[:, 0].real
    steps = np.diff(x)
    if len(steps) == 0 or np.any(steps <= 0) or np.max(np.abs(steps - steps[0])) > 1e-9 * abs(steps[0]):
        raise ValueError("x column must be uniformly spaced ascending")
    grid = UniformGrid(float(x[0]), float(x[-1]), len(x))
    return SampledFunction(grid=grid, values=data[:, 1], label="csv")


def parse_function_spec(spec: str) -> SampledFunction:
    """Parse a function spec string.

    Forms accepted:
      f_alpha:alpha=1,aplus=1,aminus=0,c=0.5
      rational:poles=1j;-1j,coeffs=1;1
      log_abs
      csv:/path/to/samples.csv
    """
    from opdifflab.funcspace.falpha import FAlphaSpec
    from opdifflab.funcspace.rational import RationalFunction

    kind, _, rest = spec.partition(":")
    kind = kind.strip()
    params = {}
    if rest:
        for item in rest.split(","):
            if "=" in item:
                key, _, val = item.partition("=")
                params[key.strip()] = val.strip()
    if kind == "f_alpha":
        fa = FAlphaSpec(
            alpha=float(params.get("alpha", 1.0)),
            a_plus=complex(params.get("aplus", 1)),
            a_minus=complex(params.get("aminus", 0)),
            c=float(params.get("c", 0.5)),
        )
        return fa.as_function()
    if kind == "rational":
        poles = [complex(p) for p in params.get("poles", "1j;-1j").split(";")]
        coeffs = [complex(c) for c in params.get("coeffs", "1;1").split(";")]
        if len(poles) != len(coeffs):
            raise ValueError("rational spec needs one coefficient per pole")
        rf = RationalFunction.from_poles(list(zip(poles, coeffs)),
                                         constant=complex(params.get("constant", 0)))
        return rf.as_function()
    if kind == "log_abs":
        return log_abs()
    if kind == "csv":
        return load_samples_csv(rest.strip())
    raise ValueError(f"unknown function kind {kind!r}")
