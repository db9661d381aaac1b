"""Physical parameters of the 1D spin-orbit coupled Hamiltonian and shared helpers.

The Hamiltonian (mass 1/2, hbar = 1) is

    H = -d^2/dx^2 (x) I - i eta d/dx (x) sigma_2 + (Omega/2) (x) sigma_3 + gamma delta(x) (x) I

and ``ModelParams`` stores the triple (eta, Omega, gamma) under the names
``eta``, ``omega`` and ``gamma``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

SIGMA_1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_3 = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY = np.eye(2, dtype=complex)


@dataclass(frozen=True)
class ModelParams:
    """Spin-orbit strength ``eta``, Raman coupling ``omega`` and delta strength ``gamma``."""

    eta: float
    omega: float
    gamma: float

    def __post_init__(self):
        for name in ("eta", "omega", "gamma"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)

    def replace(self, **changes) -> "ModelParams":
        fields = {"eta": self.eta, "omega": self.omega, "gamma": self.gamma}
        fields.update(changes)
        return ModelParams(**fields)

    @property
    def scale(self) -> float:
        """Magnitude used to make absolute tolerances relative: max(1, |Omega|, eta^2)."""
        return max(1.0, abs(self.omega), self.eta**2)


@dataclass(frozen=True)
class SpinorValue:
    """Upper and lower components of a two-component wavefunction value."""

    up: complex
    down: complex

    def as_array(self) -> np.ndarray:
        return np.array([self.up, self.down], dtype=complex)

    @classmethod
    def from_array(cls, values) -> "SpinorValue":
        values = np.asarray(values, dtype=complex)
        return cls(values[0], values[1])


def validate(params: ModelParams) -> ModelParams:
    """Return ``params`` unchanged if eta >= 0, Omega >= 0 and gamma != 0."""
    if params.eta < 0:
        raise DomainError("eta must be nonnegative")
    if params.omega < 0:
        raise DomainError("omega must be nonnegative")
    if params.gamma == 0:
        raise DomainError("gamma must be nonzero")
    return params


def require_positive_eta(params: ModelParams) -> None:
    if not params.eta > 0:
        raise DomainError("eta must be positive for this operation")


def omega_of_eps(params: ModelParams, eps):
    """Binding rate sqrt(Omega^2 - 4 eps^2) / (2 eta) of a gap state at energy ``eps``.

    Only the open gap |eps| < Omega/2 is accepted; the band edges give a zero
    rate, which is a resonance rather than a bound state.
    """
    require_positive_eta(params)
    eps_arr = np.asarray(eps, dtype=float)
    if np.any(np.abs(eps_arr) >= params.omega / 2):
        raise DomainError(f"eps must lie strictly inside (-Omega/2, Omega/2) = "
                          f"(-{params.omega / 2}, {params.omega / 2})")
    rate = np.sqrt((params.omega - 2 * eps_arr) * (params.omega + 2 * eps_arr)) / (2 * params.eta)
    return float(rate) if rate.ndim == 0 else rate


def lambda_zero(params: ModelParams) -> float:
    """Branch-point energy -(eta^2 + (Omega/eta)^2) / 4 where the two momenta coincide."""
    require_positive_eta(params)
    return -(params.eta**2 + (params.omega / params.eta) ** 2) / 4
