"""Spin-orbit induced eigenvalues of the full Hamiltonian.

Every gap eigenvalue e of A0 with binding rate w gives an eigenvalue
lambda(e) = e - w^2 of H: the A0 eigenfunction is a sum of e^{-w|x|} terms, so
-f'' = -w^2 f and H f = U f - w^2 f.  These eigenfunctions jump at the origin.
Parents at the resonances e = -eta^2/2 and e = Omega/2 - eta^2 are excluded.
"""
from __future__ import annotations

from dataclasses import dataclass

from .dirac import DiracBoundState, a0_discrete_spectrum, _check_branch
from .dispersion import essential_edge
from .errors import DomainError, InconsistencyError
from .model import ModelParams, omega_of_eps, require_positive_eta

BELOW = "Below"
SIGMA1 = "EmbeddedSigma1"
SIGMA2 = "EmbeddedSigma2"
CLASS_CODES = {BELOW: "below", SIGMA1: "sigma1", SIGMA2: "sigma2"}


@dataclass(frozen=True)
class SocState:
    lambda_val: float
    source_eps: float
    branch: str
    classification: str
    parent: DiracBoundState


def lambda_of_eps(params: ModelParams, eps: float) -> float:
    return float(eps - omega_of_eps(params, eps) ** 2)


def resonance_points(params: ModelParams) -> tuple[float, float]:
    """(-eta^2/2, Omega/2 - eta^2); they fall inside the gap only when Omega > eta^2."""
    require_positive_eta(params)
    eta2 = params.eta**2
    return (-eta2 / 2, params.omega / 2 - eta2)


def exclusion_tolerance(params: ModelParams) -> float:
    return 1e-9 * max(1.0, params.omega)


def so_weak_eigenvalue(params: ModelParams, eps: float, branch: str) -> float:
    """(gamma w + Omega)/2 on branch '+', (gamma w - Omega)/2 on branch '-'."""
    _check_branch(branch)
    if not abs(eps) < params.omega / 2:
        raise DomainError("eps must lie strictly inside the gap (-Omega/2, Omega/2)")
    w = omega_of_eps(params, eps)
    sign = 1 if branch == "+" else -1
    return float((params.gamma * w + sign * params.omega) / 2)


def _interval_class(params: ModelParams, eps: float) -> str:
    if params.omega <= params.eta**2:
        return SIGMA2
    return BELOW if eps < params.omega / 2 - params.eta**2 else SIGMA1


def classify(params: ModelParams, state: SocState) -> str:
    """Class from the eps interval, cross-checked against lambda versus J."""
    label = _interval_class(params, state.source_eps)
    edge = essential_edge(params)
    tol = 1e-10 * max(1.0, abs(edge))
    below = state.lambda_val < edge - tol
    if (label == BELOW) != below and abs(state.lambda_val - edge) > tol:
        raise InconsistencyError(
            f"eps = {state.source_eps!r} classified {label} but lambda = {state.lambda_val!r}, J = {edge!r}")
    return label


def so_states(params: ModelParams, resonances: list | None = None,
              parents: list[DiracBoundState] | None = None) -> list[SocState]:
    """Spin-orbit induced states; dropped resonant parents are appended to ``resonances``."""
    require_positive_eta(params)
    if params.gamma > 0 or params.omega == 0:
        return []
    if parents is None:
        parents = a0_discrete_spectrum(params)
    tol = exclusion_tolerance(params)
    points = resonance_points(params)
    out = []
    for parent in parents:
        if any(abs(parent.eps - r) <= tol for r in points):
            if resonances is not None:
                resonances.append((parent.eps, parent.branch))
            continue
        lam = parent.eps - parent.omega_val**2
        draft = SocState(lam, parent.eps, parent.branch, "", parent)
        out.append(SocState(lam, parent.eps, parent.branch, classify(params, draft), parent))
    return out
