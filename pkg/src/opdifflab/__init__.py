"""Numerical laboratory for differences of functions of self-adjoint operators.

Dense, desk-scale linear algebra only: every operator is a finite Hermitian
matrix, every scalar function is an analytic closure or a uniform-grid sample,
and every claimed identity or inequality is either checked exactly or measured
against a declared discretization allowance.
"""

__version__ = "0.1.0"

from opdifflab.spectral import (
    HermitianOperator,
    OperatorPair,
    RectFactor,
    SchattenIndex,
    eig_decompose,
    func_calculus,
    resolvent,
    schatten_norm,
    spectral_projection,
)

__all__ = [
    "__version__",
    "HermitianOperator",
    "OperatorPair",
    "RectFactor",
    "SchattenIndex",
    "eig_decompose",
    "func_calculus",
    "resolvent",
    "schatten_norm",
    "spectral_projection",
]
