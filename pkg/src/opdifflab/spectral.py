"""Dense Hermitian spectral calculus.

Everything downstream (smoothness norms, double operator integrals, Hankel
blocks) consumes the primitives in this module: eigendecompositions with a
verified round trip, spectral functional calculus f(A) = V f(L) V*, spectral
projections for half-open intervals, Schatten (quasi-)norms and resolvents.

All operations are pure; ``HermitianOperator`` caches its decomposition once
behind a lock and is immutable afterwards, so values can be shared freely
between threads.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

import numpy as np

HERMITICITY_ATOL = 1e-12
ORTHONORMALITY_TOL = 1e-10
RECONSTRUCTION_RTOL = 1e-10
FACTORIZATION_ATOL = 1e-12
DEFAULT_DIM_CAP = 512


class NonHermitianError(ValueError):
    """Input matrix fails the Hermiticity tolerance."""

    def __init__(self, asymmetry: float):
        self.asymmetry = asymmetry
        super().__init__(
            f"matrix is not Hermitian: max |A - A*| = {asymmetry:.3e} "
            f"exceeds {HERMITICITY_ATOL:.1e}"
        )


class SpectralDomainError(ValueError):
    """A scalar function could not be evaluated at an eigenvalue."""

    def __init__(self, eigenvalue: float, detail: str = ""):
        self.eigenvalue = eigenvalue
        msg = f"function undefined at eigenvalue {eigenvalue!r}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


@dataclass(frozen=True)
class SchattenIndex:
    """A Schatten exponent p with 0 < p <= inf; p = inf is the operator norm."""

    p: float

    def __post_init__(self):
        if not (self.p > 0):
            raise ValueError(f"Schatten index must be positive, got {self.p}")

    @property
    def is_operator_norm(self) -> bool:
        return np.isinf(self.p)

    @staticmethod
    def of(p) -> "SchattenIndex":
        return p if isinstance(p, SchattenIndex) else SchattenIndex(float(p))


class HermitianOperator:
    """A dense self-adjoint matrix with a lazily cached spectral decomposition.

    Invariants enforced on construction and decomposition:
      * max |A - A*| <= 1e-12
      * eigenvector columns orthonormal to 1e-10 in the max norm
      * V diag(w) V* reconstructs A to relative Frobenius error 1e-10
    """

    def __init__(self, entries, *, dim_cap: int = DEFAULT_DIM_CAP):
        a = np.array(entries, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {a.shape}")
        if a.shape[0] > dim_cap:
            raise ValueError(f"dimension {a.shape[0]} exceeds cap {dim_cap}")
        asym = float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0
        if asym > HERMITICITY_ATOL:
            raise NonHermitianError(asym)
        a.setflags(write=False)
        self._entries = a
        self._lock = threading.Lock()
        self._eig: tuple[np.ndarray, np.ndarray] | None = None

    @property
    def dim(self) -> int:
        return self._entries.shape[0]

    @property
    def entries(self) -> np.ndarray:
        return self._entries

    def _decompose(self) -> tuple[np.ndarray, np.ndarray]:
        if self._eig is None:
            with self._lock:
                if self._eig is None:
                    w, v = np.linalg.eigh(self._entries)
                    _check_decomposition(self._entries, w, v)
                    w.setflags(write=False)
                    v.setflags(write=False)
                    self._eig = (w, v)
        return self._eig

    @property
    def eigvals(self) -> np.ndarray:
        return self._decompose()[0]

    @property
    def eigvecs(self) -> np.ndarray:
        return self._decompose()[1]

    def __repr__(self):
        return f"HermitianOperator(dim={self.dim})"


def _check_decomposition(a: np.ndarray, w: np.ndarray, v: np.ndarray) -> None:
    n = a.shape[0]
    gram_defect = float(np.max(np.abs(v.conj().T @ v - np.eye(n))))
    if gram_defect > ORTHONORMALITY_TOL:
        raise ArithmeticError(f"eigenvector Gram defect {gram_defect:.3e}")
    recon = (v * w) @ v.conj().T
    scale = max(float(np.linalg.norm(a)), 1e-300)
    rel = float(np.linalg.norm(recon - a)) / scale
    if rel > RECONSTRUCTION_RTOL:
        raise ArithmeticError(f"eigendecomposition round-trip error {rel:.3e}")


def as_operator(a) -> HermitianOperator:
    return a if isinstance(a, HermitianOperator) else HermitianOperator(a)


def eig_decompose(a) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix."""
    op = as_operator(a)
    return op.eigvals, op.eigvecs


def _eval_scalar_function(f, x: np.ndarray) -> np.ndarray:
    """Evaluate f on an array of real points, mapping failures to SpectralDomainError."""
    try:
        with np.errstate(divide="raise", invalid="raise"):
            vals = np.asarray(f(x), dtype=complex)
    except (FloatingPointError, ZeroDivisionError):
        vals = np.empty(len(x), dtype=complex)
        for i, xi in enumerate(x):
            try:
                with np.errstate(divide="raise", invalid="raise"):
                    vals[i] = complex(f(np.asarray([xi]))[0])
            except (FloatingPointError, ZeroDivisionError) as exc:
                raise SpectralDomainError(float(xi), str(exc)) from exc
    bad = ~np.isfinite(vals)
    if np.any(bad):
        raise SpectralDomainError(float(x[np.argmax(bad)]), "non-finite value")
    return vals


def func_calculus(a, f) -> np.ndarray:
    """Apply a scalar function spectrally: f(A) = V diag(f(w)) V*.

    ``f`` is any vectorized callable on real points (a ``SampledFunction``
    works).  Raises SpectralDomainError, naming the offending eigenvalue, if f
    is undefined (pole, NaN) there.
    """
    op = as_operator(a)
    w, v = op.eigvals, op.eigvecs
    fw = _eval_scalar_function(f, w)
    return (v * fw) @ v.conj().T


def spectral_projection(a, interval: tuple[float, float]) -> np.ndarray:
    """Spectral projection onto the half-open interval (lo, hi]."""
    lo, hi = interval
    if not lo < hi:
        raise ValueError(f"need lo < hi, got ({lo}, {hi})")
    op = as_operator(a)
    w, v = op.eigvals, op.eigvecs
    mask = ((w > lo) & (w <= hi)).astype(float)
    return (v * mask) @ v.conj().T


def singular_values(m) -> np.ndarray:
    return np.linalg.svd(np.asarray(m, dtype=complex), compute_uv=False)


def schatten_norm(m, p, *, rank_tol: float | None = None) -> float:
    """Schatten (quasi-)norm (sum s_i^p)^(1/p); p = inf gives the operator norm.

    ``rank_tol``, when given, drops singular values below rank_tol * s_max
    before summation.  Quasi-norm identities (p < 1) are only numerically
    stable for spectra with a genuine gap at the cutoff; callers comparing two
    independently computed sides should pass the same rank_tol to both.
    """
    idx = SchattenIndex.of(p)
    s = singular_values(m)
    if s.size == 0:
        return 0.0
    if rank_tol is not None and s[0] > 0:
        s = s[s > rank_tol * s[0]]
        if s.size == 0:
            return 0.0
    if idx.is_operator_norm:
        return float(s[0])
    return float(np.sum(s ** idx.p) ** (1.0 / idx.p))


def schatten_power_sum(m, p, *, rank_tol: float | None = None) -> float:
    """sum s_i^p, the p-th power of the Schatten quasi-norm (finite p only)."""
    idx = SchattenIndex.of(p)
    if idx.is_operator_norm:
        raise ValueError("power sum undefined for p = inf")
    s = singular_values(m)
    if s.size == 0:
        return 0.0
    if rank_tol is not None and s[0] > 0:
        s = s[s > rank_tol * s[0]]
    return float(np.sum(s ** idx.p))


def resolvent(a, z: complex) -> np.ndarray:
    """(A - z)^{-1} for Im z != 0."""
    z = complex(z)
    if z.imag == 0.0:
        raise ValueError(f"resolvent requires Im z != 0, got z = {z}")
    op = as_operator(a)
    n = op.dim
    return np.linalg.solve(op.entries - z * np.eye(n), np.eye(n, dtype=complex))


@dataclass(frozen=True)
class RectFactor:
    """A pair (G0, G1) of k x n matrices factorizing a perturbation as G1* G0."""

    g0: np.ndarray
    g1: np.ndarray

    def __post_init__(self):
        g0 = np.asarray(self.g0, dtype=complex)
        g1 = np.asarray(self.g1, dtype=complex)
        if g0.ndim != 2 or g1.ndim != 2 or g0.shape != g1.shape:
            raise ValueError(
                f"factors must share one k x n shape, got {g0.shape} and {g1.shape}"
            )
        g0.setflags(write=False)
        g1.setflags(write=False)
        object.__setattr__(self, "g0", g0)
        object.__setattr__(self, "g1", g1)

    @property
    def k_dim(self) -> int:
        return self.g0.shape[0]

    @property
    def n_dim(self) -> int:
        return self.g0.shape[1]

    def perturbation(self) -> np.ndarray:
        return self.g1.conj().T @ self.g0


@dataclass(frozen=True)
class OperatorPair:
    """(H0, H1) with H1 - H0 = G1* G0 enforced entrywise to 1e-12."""

    h0: HermitianOperator
    h1: HermitianOperator
    factor: RectFactor
    defect: float = field(init=False)

    def __post_init__(self):
        if self.h0.dim != self.h1.dim or self.factor.n_dim != self.h0.dim:
            raise ValueError("dimension mismatch between operators and factor")
        gap = self.h1.entries - self.h0.entries - self.factor.perturbation()
        defect = float(np.max(np.abs(gap)))
        if defect > FACTORIZATION_ATOL:
            raise ValueError(
                f"H1 - H0 - G1*G0 has max entry {defect:.3e} > {FACTORIZATION_ATOL:.1e}"
            )
        object.__setattr__(self, "defect", defect)

    @classmethod
    def from_h0(cls, h0, factor: RectFactor) -> "OperatorPair":
        """Assemble H1 = H0 + G1*G0; the perturbation must be Hermitian."""
        h0 = as_operator(h0)
        pert = factor.perturbation()
        h1 = HermitianOperator(h0.entries + pert, dim_cap=max(h0.dim, DEFAULT_DIM_CAP))
        return cls(h0=h0, h1=h1, factor=factor)

    @property
    def dim(self) -> int:
        return self.h0.dim
