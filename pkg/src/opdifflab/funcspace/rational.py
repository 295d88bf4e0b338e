"""Bounded rational functions with no real poles.

Two internal forms share one interface:

  * partial fractions  c + sum coeff / (x - pole)^order   (hand-built tests);
  * Cayley series      sum_{|j| <= n} c_j z(x)^j,  z(x) = (x - i)/(x + i),

the latter for outputs of the circle transfer, where converting to partial
fractions would require astronomically ill-conditioned binomial sums.  On the
real line |z(x)| = 1, so Cayley evaluation is stable at any order.
"""

from __future__ import annotations

import numpy as np

from opdifflab.funcspace.sampled import SampledFunction


class RationalFunction:
    def __init__(self, *, terms=None, constant=0j, cayley_coeffs=None):
        if (terms is None) == (cayley_coeffs is None):
            raise ValueError("give either partial-fraction terms or Cayley coefficients")
        self.constant = complex(constant)
        if terms is not None:
            self.kind = "partial_fraction"
            self.terms = []
            for pole, order, coeff in terms:
                pole = complex(pole)
                if pole.imag == 0.0:
                    raise ValueError(f"real pole {pole} not allowed")
                if order < 1:
                    raise ValueError("pole order must be >= 1")
                self.terms.append((pole, int(order), complex(coeff)))
            self.cayley_coeffs = None
        else:
            self.kind = "cayley"
            coeffs = np.asarray(cayley_coeffs, dtype=complex)
            if coeffs.ndim != 1 or coeffs.size % 2 == 0:
                raise ValueError("Cayley coefficients must be an odd-length array for j = -n..n")
            self.cayley_coeffs = coeffs
            self.terms = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_poles(cls, pole_coeffs, constant=0j) -> "RationalFunction":
        """Simple poles: sum coeff / (x - pole)."""
        return cls(terms=[(p, 1, c) for p, c in pole_coeffs], constant=constant)

    @classmethod
    def single_pole(cls, z0: complex, coeff=1.0) -> "RationalFunction":
        return cls.from_poles([(z0, coeff)])

    @classmethod
    def from_cayley(cls, coeffs, constant=0j) -> "RationalFunction":
        return cls(cayley_coeffs=coeffs, constant=constant)

    # -- structure ----------------------------------------------------------

    @property
    def order(self) -> int:
        if self.kind == "cayley":
            return (self.cayley_coeffs.size - 1) // 2
        return max(o for _, o, _ in self.terms) if self.terms else 0

    def poles(self) -> list[tuple[complex, int]]:
        """Poles with multiplicities (for Cayley form: +-i up to the order)."""
        if self.kind == "partial_fraction":
            agg: dict[complex, int] = {}
            for pole, order, _ in self.terms:
                agg[pole] = max(agg.get(pole, 0), order)
            return sorted(agg.items(), key=lambda t: (t[0].real, t[0].imag))
        n = self.order
        out = []
        if np.any(self.cayley_coeffs[n + 1 :] != 0):
            out.append((-1j, n))
        if np.any(self.cayley_coeffs[:n] != 0):
            out.append((1j, n))
        return out

    def total_pole_multiplicity(self) -> int:
        if self.kind == "partial_fraction":
            agg: dict[complex, int] = {}
            for pole, order, _ in self.terms:
                agg[pole] = max(agg.get(pole, 0), order)
            return sum(agg.values())
        return sum(m for _, m in self.poles())

    def conjugate(self) -> "RationalFunction":
        """The rational function whose real-line values are conj(f(x))."""
        if self.kind == "partial_fraction":
            terms = [(np.conj(p), o, np.conj(c)) for p, o, c in self.terms]
            return RationalFunction(terms=terms, constant=np.conj(self.constant))
        return RationalFunction(cayley_coeffs=np.conj(self.cayley_coeffs[::-1]),
                                constant=np.conj(self.constant))

    # -- evaluation ---------------------------------------------------------

    def eval(self, x):
        x = np.asarray(x, dtype=complex)
        out = np.full(x.shape, self.constant, dtype=complex)
        if self.kind == "partial_fraction":
            for pole, order, coeff in self.terms:
                out = out + coeff / (x - pole) ** order
            return out
        n = self.order
        z = (x - 1j) / (x + 1j)
        zinv = (x + 1j) / (x - 1j)
        pos = np.zeros_like(x)
        for j in range(n, 0, -1):  # Horner in z for j = 1..n
            pos = (pos + self.cayley_coeffs[n + j]) * z
        neg = np.zeros_like(x)
        for j in range(n, 0, -1):
            neg = (neg + self.cayley_coeffs[n - j]) * zinv
        return out + self.cayley_coeffs[n] + pos + neg

    def deriv(self, x):
        x = np.asarray(x, dtype=complex)
        if self.kind == "partial_fraction":
            out = np.zeros(x.shape, dtype=complex)
            for pole, order, coeff in self.terms:
                out = out - order * coeff / (x - pole) ** (order + 1)
            return out
        n = self.order
        z = (x - 1j) / (x + 1j)
        dz = 2j / (x + 1j) ** 2
        total = np.zeros_like(x)
        for j in range(-n, n + 1):
            if j == 0 or self.cayley_coeffs[n + j] == 0:
                continue
            total = total + self.cayley_coeffs[n + j] * j * z ** (j - 1)
        return total * dz

    def __call__(self, x):
        return self.eval(x)

    def as_function(self) -> SampledFunction:
        return SampledFunction(self.eval, derivative=self.deriv,
                               label=f"rational({self.kind}, order={self.order})")
