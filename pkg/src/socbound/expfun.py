"""Piecewise sums of exponentials on the two half-lines.

Every eigenfunction and Green's-function kernel in this package has the form

    f(x) = sum_j c_j exp(a_j x)   for x > 0,
    f(x) = sum_j d_j exp(b_j x)   for x < 0,

with vector (spinor) or 2x2 matrix coefficients.  Keeping that structure
instead of a bare callable gives exact derivatives, one-sided limits at the
origin and closed-form L2 norms.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class PiecewiseExp:
    right_rates: np.ndarray
    right_coeffs: np.ndarray
    left_rates: np.ndarray
    left_coeffs: np.ndarray

    @classmethod
    def build(cls, right, left) -> "PiecewiseExp":
        """Build from two lists of ``(rate, coefficient)`` pairs."""
        def split(terms):
            rates = np.array([complex(r) for r, _ in terms], dtype=complex)
            coeffs = np.array([np.asarray(c, dtype=complex) for _, c in terms])
            return rates, coeffs
        return cls(*split(right), *split(left))

    @property
    def value_shape(self) -> tuple:
        return self.right_coeffs.shape[1:]

    def _side(self, positive: bool):
        if positive:
            return self.right_rates, self.right_coeffs
        return self.left_rates, self.left_coeffs

    def derivative(self, x, order: int = 0) -> np.ndarray:
        """``order``-th derivative at ``x`` (scalar or array, no zeros); shape ``x.shape + value_shape``."""
        x_arr = np.asarray(x, dtype=float)
        if np.any(x_arr == 0):
            raise DomainError("piecewise function is not defined at x = 0; use limit()")
        flat = x_arr.reshape(-1)
        out = np.zeros((flat.size,) + self.value_shape, dtype=complex)
        for positive in (True, False):
            mask = flat > 0 if positive else flat < 0
            if not np.any(mask):
                continue
            rates, coeffs = self._side(positive)
            weights = rates[None, :] ** order * np.exp(np.outer(flat[mask], rates))
            out[mask] = np.tensordot(weights, coeffs, axes=(1, 0))
        return out.reshape(x_arr.shape + self.value_shape)

    def __call__(self, x) -> np.ndarray:
        return self.derivative(x, 0)

    def limit(self, side: int, order: int = 0) -> np.ndarray:
        """One-sided limit of the ``order``-th derivative at 0 from the right (+1) or left (-1)."""
        rates, coeffs = self._side(side > 0)
        return np.tensordot(rates**order, coeffs, axes=(0, 0))

    def mean_at_zero(self) -> np.ndarray:
        """(f(0+) + f(0-)) / 2, the value assigned to f(0)."""
        return (self.limit(+1) + self.limit(-1)) / 2

    def jump(self, order: int = 0) -> np.ndarray:
        return self.limit(+1, order) - self.limit(-1, order)

    def scaled(self, factor) -> "PiecewiseExp":
        return PiecewiseExp(self.right_rates, self.right_coeffs * factor,
                            self.left_rates, self.left_coeffs * factor)

    def right_multiply(self, matrix) -> "PiecewiseExp":
        """Coefficients times ``matrix`` (a 2x2 matrix or a spinor) on the right."""
        matrix = np.asarray(matrix, dtype=complex)
        return PiecewiseExp(self.right_rates, self.right_coeffs @ matrix,
                            self.left_rates, self.left_coeffs @ matrix)

    def normalized(self) -> "PiecewiseExp":
        return self.scaled(1 / np.sqrt(self.norm_squared()))

    def norm_squared(self) -> float:
        """Exact integral of |f|^2 over the real line (requires decay on both sides)."""
        if np.any(self.right_rates.real >= 0) or np.any(self.left_rates.real <= 0):
            raise DomainError("function does not decay on both half-lines")
        total = 0.0
        for positive in (True, False):
            rates, coeffs = self._side(positive)
            flat = coeffs.reshape(len(rates), -1)
            gram = flat.conj() @ flat.T
            exps = rates.conj()[:, None] + rates[None, :]
            # int_0^inf e^{s x} dx = -1/s (Re s < 0);  int_-inf^0 e^{s x} dx = 1/s (Re s > 0)
            total += np.sum(gram * ((-1.0 if positive else 1.0) / exps)).real
        return float(total)
