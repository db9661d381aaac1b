"""Free dispersion branches and essential-spectrum edges."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .model import ModelParams, lambda_zero, require_positive_eta


@dataclass(frozen=True)
class DispersionPoint:
    p: float
    lambda_minus: float
    lambda_plus: float


def branches(params: ModelParams, p) -> DispersionPoint:
    """lambda_pm(p) = p^2 +- sqrt(eta^2 p^2 + (Omega/2)^2); ``p`` may be an array."""
    p = np.asarray(p, dtype=float)
    root = np.sqrt((params.eta * p) ** 2 + (params.omega / 2) ** 2)
    lo, hi = p**2 - root, p**2 + root
    if p.ndim == 0:
        return DispersionPoint(float(p), float(lo), float(hi))
    return DispersionPoint(p, lo, hi)


def essential_edge(params: ModelParams) -> float:
    """Bottom J(eta, Omega) of the essential spectrum of the full Hamiltonian.

    J = lambda_0 when Omega <= eta^2 (two dressed minima), -Omega/2 otherwise.
    """
    if params.eta == 0 or params.omega > params.eta**2:
        return -params.omega / 2
    return lambda_zero(params)


def dirac_essential_edge(params: ModelParams) -> float:
    """Gap edge Omega/2 of the atom-light coupling; its essential spectrum is |E| >= Omega/2."""
    return params.omega / 2


def critical_momenta(params: ModelParams) -> list[float]:
    """Stationary points of lambda_minus(p), sorted ascending."""
    require_positive_eta(params)
    eta2 = params.eta**2
    if params.omega > eta2:
        return [0.0]
    p_star = np.sqrt((eta2 - params.omega) * (eta2 + params.omega)) / (2 * params.eta)
    if p_star == 0:
        return [0.0]
    return [-float(p_star), 0.0, float(p_star)]


def lower_branch_minimum(params: ModelParams, points: int = 100_001) -> tuple[float, float]:
    """Numerical minimum of lambda_minus on a symmetric grid, refined by Brent's method.

    Independent of the closed-form edge; used to cross-check it.  Returns
    ``(p_min, lambda_min)`` with ``p_min >= 0``.
    """
    guess = abs(essential_edge(params))
    half_width = params.eta + np.sqrt(guess) + 1e-3
    if points % 2 == 0:
        points += 1
    grid = np.linspace(-half_width, half_width, points)
    values = branches(params, grid).lambda_minus
    i = int(np.argmin(values))
    step = grid[1] - grid[0]
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, points - 1)]
    res = minimize_scalar(lambda q: branches(params, q).lambda_minus,
                          bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-12 * max(1.0, step)})
    p_min, v_min = (res.x, res.fun) if res.fun < values[i] else (grid[i], values[i])
    return abs(float(p_min)), float(v_min)
