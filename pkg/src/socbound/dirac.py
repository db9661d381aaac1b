"""Spectral data of the atom-light coupling U = -i eta d/dx sigma_2 + (Omega/2) sigma_3.

With the boundary condition

    gamma f(0) = f'(0+) - f'(0-) + i eta sigma_2 (f(0+) - f(0-)),   f(0) = (f(0+) + f(0-)) / 2,

the operator (called A0 here) is a 1D Dirac operator with mass Omega/(2 eta) and a
point interaction.  Its eigenvalues lie in the gap (-Omega/2, Omega/2) and come
in two branches:

    branch '+':  gamma/2 + w + eta sqrt((Omega - 2e)/(Omega + 2e)) = 0,   f_2(0) = 0
    branch '-':  gamma/2 + w - eta sqrt((Omega + 2e)/(Omega - 2e)) = 0,   f_1(0) = 0

with w = sqrt(Omega^2 - 4 e^2) / (2 eta).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import ConvergenceError, DomainError, InconsistencyError, PoleError
from .expfun import PiecewiseExp
from .model import (IDENTITY, SIGMA_2, SIGMA_3, ModelParams, SpinorValue,
                    omega_of_eps, require_positive_eta)

BRANCHES = ("+", "-")
SCAN_POINTS = 4096
EDGE_GUARD = 1e-9
BISECT_XTOL = 1e-13


@dataclass(frozen=True)
class DiracBoundState:
    eps: float
    branch: str
    omega_val: float


@dataclass(frozen=True)
class GreenMatrix:
    entries: np.ndarray
    x: float
    z: complex


def _check_branch(branch: str) -> None:
    if branch not in BRANCHES:
        raise DomainError(f"branch must be '+' or '-', got {branch!r}")


def omega_complex(params: ModelParams, z) -> complex:
    """Binding rate at complex energy, principal branch (Re >= 0)."""
    require_positive_eta(params)
    z = complex(z)
    w = np.sqrt((params.omega - 2 * z) * (params.omega + 2 * z)) / (2 * params.eta)
    if abs(w) <= 1e-14 * max(1.0, params.omega / params.eta):
        raise DomainError("omega_z = 0: z sits on a band edge +-Omega/2")
    return complex(w)


def branch_function(params: ModelParams, eps, branch: str):
    """Left-hand side of the branch equation; works on arrays of ``eps``."""
    _check_branch(branch)
    eps = np.asarray(eps, dtype=float)
    w = omega_of_eps(params, eps)
    om = params.omega
    if branch == "+":
        tail = params.eta * np.sqrt((om - 2 * eps) / (om + 2 * eps))
    else:
        tail = -params.eta * np.sqrt((om + 2 * eps) / (om - 2 * eps))
    return params.gamma / 2 + w + tail


def branch_derivative(params: ModelParams, eps: float, branch: str) -> float:
    _check_branch(branch)
    om, eta = params.omega, params.eta
    w = omega_of_eps(params, eps)
    t = np.sqrt((om - 2 * eps) / (om + 2 * eps))
    dw = -eps / (eta**2 * w)
    dt = -2 * om / (t * (om + 2 * eps) ** 2)
    if branch == "+":
        return float(dw + eta * dt)
    return float(dw + eta * dt / t**2)


def _refine(params: ModelParams, branch: str, lo: float, hi: float) -> float:
    f = lambda e: float(branch_function(params, e, branch))
    try:
        root, info = brentq(f, lo, hi, xtol=BISECT_XTOL, rtol=4 * np.finfo(float).eps,
                            full_output=True)
    except (ValueError, RuntimeError) as exc:
        raise ConvergenceError(f"branch {branch}: refinement failed on [{lo}, {hi}]: {exc}") from exc
    if not info.converged:
        raise ConvergenceError(f"branch {branch}: brentq did not converge on [{lo}, {hi}]")
    # one Newton step, kept only if it stays in the bracket and lowers |f|
    slope = branch_derivative(params, root, branch)
    if slope != 0 and np.isfinite(slope):
        trial = root - f(root) / slope
        if lo <= trial <= hi and abs(f(trial)) < abs(f(root)):
            root = trial
    return float(root)


def a0_discrete_spectrum(params: ModelParams, diagnostics: list | None = None) -> list[DiracBoundState]:
    """All gap eigenvalues of A0, sorted by branch then energy.

    Each branch equation is scanned on a uniform grid, sign changes are
    bracketed and refined, and every root is checked against the resolvent
    denominator.  Empty for gamma > 0 or Omega = 0 (no gap).
    """
    require_positive_eta(params)
    if params.omega < 0:
        raise DomainError("omega must be nonnegative")
    if params.gamma > 0 or params.omega == 0:
        return []
    half = params.omega / 2
    delta = EDGE_GUARD * params.omega
    grid = np.linspace(-half + delta, half - delta, SCAN_POINTS)
    states = []
    for branch in BRANCHES:
        values = branch_function(params, grid, branch)
        roots = [float(e) for e, v in zip(grid, values) if v == 0]
        for i in np.nonzero(values[:-1] * values[1:] < 0)[0]:
            roots.append(_refine(params, branch, grid[i], grid[i + 1]))
        for eps in sorted(roots):
            if abs(abs(eps) - half) <= delta:
                if diagnostics is not None:
                    diagnostics.append(f"branch {branch}: root {eps!r} within edge guard, dropped")
                continue
            den = a0_resolvent_denominator(params, eps)
            if abs(den) > 1e-8 * params.scale:
                raise InconsistencyError(
                    f"branch {branch}: root {eps!r} leaves resolvent denominator {abs(den):.3e}")
            states.append(DiracBoundState(eps, branch, omega_of_eps(params, eps)))
            if diagnostics is not None:
                diagnostics.append(f"branch {branch}: root {eps!r}, denominator {abs(den):.3e}")
    return states


def a0_resolvent_denominator(params: ModelParams, z) -> complex:
    """(gamma z + 2 w (eta^2 + z))^2 - (Omega/2)^2 (gamma + 2 w)^2 at complex z."""
    w = omega_complex(params, z)
    z = complex(z)
    g = params.gamma
    return (g * z + 2 * w * (params.eta**2 + z)) ** 2 - (params.omega / 2) ** 2 * (g + 2 * w) ** 2


def a0_eigenfunction_expansion(state: DiracBoundState, params: ModelParams) -> PiecewiseExp:
    """Unnormalized eigenfunction; the nonzero component of f(0) equals 1."""
    _check_branch(state.branch)
    om, eps, w = params.omega, state.eps, state.omega_val
    r = np.sqrt((om + 2 * eps) / (om - 2 * eps))
    if state.branch == "+":
        right, left = (1.0, -1.0 / r), (1.0, 1.0 / r)
    else:
        right, left = (-r, 1.0), (r, 1.0)
    return PiecewiseExp.build([(-w, right)], [(w, left)])


def _spinor(values) -> SpinorValue | np.ndarray:
    values = np.asarray(values)
    if values.ndim == 1:
        return SpinorValue.from_array(values)
    return values


def a0_eigenfunction(state: DiracBoundState, params: ModelParams, x):
    """Eigenfunction value at x != 0 (a SpinorValue, or an (n, 2) array for array x)."""
    return _spinor(a0_eigenfunction_expansion(state, params)(x))


def a0_free_expansion(params: ModelParams, z) -> PiecewiseExp:
    """Kernel of (A0^0 - z)^{-1}: e^{-w|x|} (i eta w sgn(x) sigma_2 + (Omega/2) sigma_3 + z) / (2 eta^2 w)."""
    w = omega_complex(params, z)
    z = complex(z)
    eta = params.eta
    base = (params.omega / 2) * SIGMA_3 + z * IDENTITY
    odd = 1j * eta * w * SIGMA_2
    scale = 1 / (2 * eta**2 * w)
    return PiecewiseExp.build([(-w, scale * (base + odd))], [(w, scale * (base - odd))])


def a0_interaction_factor(params: ModelParams, z) -> np.ndarray:
    """Right factor turning the free kernel into the interacting one."""
    w = omega_complex(params, z)
    z = complex(z)
    g, eta = params.gamma, params.eta
    a = 2 * eta**2 * w
    c = g + 2 * w
    den = a0_resolvent_denominator(params, z)
    size = abs(g * z) ** 2 + abs(2 * w * (eta**2 + z)) ** 2 + abs(params.omega * c) ** 2
    if abs(den) <= 1e-14 * size:
        raise PoleError(f"z = {z} is at a pole of the A0 resolvent (|denominator| = {abs(den):.3e})")
    return a * (a * IDENTITY - c * ((params.omega / 2) * SIGMA_3 - z * IDENTITY)) / den


def a0_green_expansion(params: ModelParams, z) -> PiecewiseExp:
    return a0_free_expansion(params, z).right_multiply(a0_interaction_factor(params, z))


def _kernel(expansion: PiecewiseExp, x, z) -> GreenMatrix:
    x = float(x)
    if x == 0:
        raise DomainError("kernel is not defined at x = 0")
    return GreenMatrix(expansion(x), x, complex(z))


def a0_free_kernel(params: ModelParams, z, x) -> GreenMatrix:
    return _kernel(a0_free_expansion(params, z), x, z)


def a0_green_kernel(params: ModelParams, z, x) -> GreenMatrix:
    return _kernel(a0_green_expansion(params, z), x, z)


def b0_weak_expansion(state: DiracBoundState, params: ModelParams, f0) -> PiecewiseExp:
    f0 = f0.as_array() if isinstance(f0, SpinorValue) else np.asarray(f0, dtype=complex)
    factor = -(params.gamma + 2 * state.omega_val)
    return a0_free_expansion(params, state.eps).right_multiply(factor * f0)


def b0_weak_eigenfunction(state: DiracBoundState, params: ModelParams, f0, x):
    """Weak solution -(gamma + 2 w) (A0^0 - e)^{-1}(x) f(0)."""
    if np.any(np.asarray(x) == 0):
        raise DomainError("weak eigenfunction is not defined at x = 0")
    return _spinor(b0_weak_expansion(state, params, f0)(x))


def branch_f0(state: DiracBoundState) -> SpinorValue:
    """f(0) matching the branch: (1, 0) on '+', (0, 1) on '-'."""
    return SpinorValue(1, 0) if state.branch == "+" else SpinorValue(0, 1)
