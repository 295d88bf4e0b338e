"""Scalar function spaces: Besov/BMO functionals, the logarithmic example
family with its Fourier asymptotics, Poisson smoothing and the rational
approximation generator on the Cayley transform."""

from opdifflab.funcspace.sampled import SampledFunction, UniformGrid, parse_function_spec
from opdifflab.funcspace.windows import DyadicWindow, dyadic_window_build, smooth_step
from opdifflab.funcspace.besov import BesovReport, besov_norm
from opdifflab.funcspace.bmo import bmo_mean_oscillation
from opdifflab.funcspace.falpha import (
    FAlphaSpec,
    f_alpha_fourier_asymptotics,
    f_alpha_sample,
)
from opdifflab.funcspace.poisson import poisson_smooth
from opdifflab.funcspace.rational import RationalFunction
from opdifflab.funcspace.fejer import fejer_rational_approx, fejer_sum_circle

__all__ = [
    "SampledFunction",
    "UniformGrid",
    "parse_function_spec",
    "DyadicWindow",
    "dyadic_window_build",
    "smooth_step",
    "BesovReport",
    "besov_norm",
    "bmo_mean_oscillation",
    "FAlphaSpec",
    "f_alpha_sample",
    "f_alpha_fourier_asymptotics",
    "poisson_smooth",
    "RationalFunction",
    "fejer_rational_approx",
    "fejer_sum_circle",
]
