"""Discrete spectrum of the full Hamiltonian H = H0 + gamma delta(x).

Below the essential spectrum the free equation (H0 - z) f = 0 has two decaying
exponentials e^{i p_j |x|}, with

    p_{1,2}^2 = z + eta^2/2 +- (1/2) sqrt(eta^2 (eta^2 + 4 z) + Omega^2),   Im p_j > 0.

Writing P = p1 p2 and S = p1 + p2, the eigenvalues with continuous
eigenfunctions are the zeros of

    2 P S + i gamma (P + lambda +- Omega/2)          (resolvent condition)

whose squared-out real form is a cubic in lambda.  The cubic with sign s
carries the roots of the resolvent condition with sign -s together with
spurious roots, so every cubic root is checked against the resolvent
condition before it is accepted.  Sign '+' ("upper") gives eigenfunctions with
f_2(0) = 0, sign '-' ("lower") gives f_1(0) = 0.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import soc
from .dirac import GreenMatrix, a0_eigenfunction_expansion
from .dispersion import essential_edge
from .errors import BranchPointError, DegenerateCubicError, DomainError, PoleError
from .expfun import PiecewiseExp
from .model import (IDENTITY, SIGMA_2, SIGMA_3, ModelParams, SpinorValue,
                    lambda_zero, validate)

CONTINUOUS = "continuous"
SPIN_ORBIT = "spin-orbit"
SIGN_NAMES = {1: "upper", -1: "lower"}

REAL_ROOT_TOL = 1e-9
BRANCH_POINT_TOL = 1e-9
RESIDUAL_TOL = 1e-9
ADMISSIBLE_TOL = 1e-12


def _sign(sign) -> int:
    """Accept +1/-1, '+'/'-' or 'upper'/'lower'."""
    table = {1: 1, -1: -1, "+": 1, "-": -1, "upper": 1, "lower": -1}
    try:
        return table[sign]
    except (KeyError, TypeError):
        raise DomainError(f"sign must be one of +1, -1, '+', '-', 'upper', 'lower'; got {sign!r}") from None


@dataclass(frozen=True)
class MomentumBranch:
    p1: complex
    p2: complex
    s1: int
    s2: int
    admissible: bool


@dataclass(frozen=True)
class BoundState:
    lambda_val: float
    sign: str
    momenta: MomentumBranch
    family: str = CONTINUOUS


@dataclass(frozen=True)
class EigenState:
    """One eigenvalue of H with its family, sign/branch tag and eigenfunction."""

    lambda_val: float
    family: str
    sign: str
    source_eps: float | None
    eigenfunction: PiecewiseExp
    classification: str


@dataclass
class SpectrumReport:
    essential_edge: float
    states: list = field(default_factory=list)
    continuous: list = field(default_factory=list)
    so: list = field(default_factory=list)
    resonances: list = field(default_factory=list)
    dropped: list = field(default_factory=list)
    diagnostics: list = field(default_factory=list)

    @property
    def eigenvalues(self) -> list[float]:
        return [s.lambda_val for s in self.states]

    def of_family(self, family: str, sign: str | None = None) -> list:
        return [s for s in self.states
                if s.family == family and (sign is None or s.sign == sign)]

    @property
    def classifications(self) -> dict:
        return {s.lambda_val: s.classification for s in self.states}


# ---------------------------------------------------------------- momenta

def momentum_branch(params: ModelParams, z) -> MomentumBranch:
    """Complex momenta for energy z; each sign is chosen to make Im p_j >= 0."""
    if params.eta < 0:
        raise DomainError("eta must be nonnegative")
    z = complex(z)
    eta2 = params.eta**2
    inner = eta2 * (eta2 + 4 * z) + params.omega**2
    size = max(1.0, eta2**2, abs(4 * eta2 * z), params.omega**2)
    if abs(inner) <= 1e-14 * size:
        raise BranchPointError("p1^2 = p2^2: z is the branch point lambda_0")
    root = np.sqrt(inner)
    momenta, signs = [], []
    for q2 in (z + eta2 / 2 + root / 2, z + eta2 / 2 - root / 2):
        q = complex(np.sqrt(q2))
        s = -1 if q.imag < 0 else 1
        momenta.append(s * q)
        signs.append(s)
    p1, p2 = momenta
    ok = p1.imag > ADMISSIBLE_TOL and p2.imag > ADMISSIBLE_TOL
    return MomentumBranch(p1, p2, signs[0], signs[1], ok)


def resolvent_condition(params: ModelParams, lam, sign) -> complex:
    """2 p1 p2 (p1 + p2) + i gamma (p1 p2 + lambda +- Omega/2)."""
    s = _sign(sign)
    m = momentum_branch(params, lam)
    prod = m.p1 * m.p2
    return 2 * prod * (m.p1 + m.p2) + 1j * params.gamma * (prod + lam + s * params.omega / 2)


def weak_resolvent_denominator(params: ModelParams, p, z):
    """Delta_z(p) = (p^2 - z)^2 - eta^2 p^2 - (Omega/2)^2."""
    p = np.asarray(p)
    out = (p**2 - z) ** 2 - params.eta**2 * p**2 - (params.omega / 2) ** 2
    return out if out.ndim else out[()]


# ---------------------------------------------------------------- cubic

def cubic_coefficients(params: ModelParams, sign) -> np.ndarray:
    """Coefficients of lambda^3 .. lambda^0 of the squared-out eigenvalue equation."""
    s = _sign(sign)
    eta, om, g = params.eta, params.omega, params.gamma
    return np.array([
        (8 * eta) ** 2,
        16 * (eta**2 * (g**2 + eta**2) + om * (om + s * 4 * eta**2)),
        s * 8 * om * (2 * om**2 + (g**2 + 2 * eta**2) * (eta**2 + s * om)),
        om**2 * (4 * eta**4 + (g**2 + s * 2 * om) ** 2),
    ], dtype=float)


def _newton_polish(coeffs, root: complex, steps: int = 2) -> complex:
    deriv = np.polyder(coeffs)
    for _ in range(steps):
        value = np.polyval(coeffs, root)
        slope = np.polyval(deriv, root)
        if value == 0 or slope == 0:
            break
        trial = root - value / slope
        if abs(np.polyval(coeffs, trial)) < abs(value):
            root = trial
        else:
            break
    return root


def solve_cubic(coeffs) -> np.ndarray:
    """Three roots of c0 x^3 + c1 x^2 + c2 x + c3 (trigonometric/Cardano), Newton-polished."""
    coeffs = np.asarray(coeffs)
    if coeffs.shape != (4,):
        raise DomainError("a cubic needs exactly four coefficients")
    if abs(coeffs[0]) <= 1e-14 * np.max(np.abs(coeffs)) or coeffs[0] == 0:
        raise DegenerateCubicError("leading coefficient vanishes; the equation is not cubic")
    a, b, c = (coeffs[1:] / coeffs[0]).tolist()
    shift = a / 3
    p = b - a * a / 3
    q = 2 * a**3 / 27 - a * b / 3 + c
    if all(isinstance(v, float) for v in (p, q)):
        disc = (q / 2) ** 2 + (p / 3) ** 3
        if disc < 0:
            amp = 2 * np.sqrt(-p / 3)
            phi = np.arccos(np.clip(3 * q / (p * amp), -1.0, 1.0))
            t = [amp * np.cos((phi - 2 * np.pi * k) / 3) for k in range(3)]
        else:
            u = np.cbrt(-q / 2 + np.sqrt(disc))
            v = np.cbrt(-q / 2 - np.sqrt(disc))
            t = [u + v, complex(-(u + v) / 2, np.sqrt(3) / 2 * (u - v)),
                 complex(-(u + v) / 2, -np.sqrt(3) / 2 * (u - v))]
    else:
        disc = np.sqrt(complex((q / 2) ** 2 + (p / 3) ** 3))
        u = (-q / 2 + disc) ** (1 / 3) if abs(-q / 2 + disc) >= abs(-q / 2 - disc) else (-q / 2 - disc) ** (1 / 3)
        rot = np.exp(2j * np.pi / 3)
        t = [u * rot**k - (p / (3 * u * rot**k) if u != 0 else 0) for k in range(3)]
    roots = [_newton_polish(coeffs.astype(complex), complex(tk - shift)) for tk in t]
    return np.array(roots, dtype=complex)


# ---------------------------------------------------------------- spectrum

def _is_real(root: complex) -> bool:
    return abs(root.imag) <= REAL_ROOT_TOL * max(1.0, abs(root))


def continuous_states(params: ModelParams, perturb: float = 0.0,
                      dropped: list | None = None, diagnostics: list | None = None) -> list[BoundState]:
    """Accepted roots of both cubics; ``perturb`` is added to the constant coefficient (fault injection)."""
    validate(params)
    if params.eta == 0 or params.gamma > 0:
        return []
    dropped = [] if dropped is None else dropped
    diagnostics = [] if diagnostics is None else diagnostics
    lam0 = lambda_zero(params)
    edge = essential_edge(params)
    floor = -params.omega / 2
    accepted = []
    for cubic_sign in (1, -1):
        coeffs = cubic_coefficients(params, cubic_sign)
        coeffs[3] += perturb
        resolvent_sign = -cubic_sign
        tag = SIGN_NAMES[resolvent_sign]
        for root in solve_cubic(coeffs):
            if not _is_real(root):
                continue
            lam = float(root.real)
            if lam >= floor:
                dropped.append((lam, tag, "not below -Omega/2"))
                continue
            if abs(lam - lam0) <= BRANCH_POINT_TOL * max(1.0, abs(lam0)):
                dropped.append((lam, tag, "at the branch point lambda_0"))
                continue
            momenta = momentum_branch(params, lam)
            if lam >= edge:
                diagnostics.append(f"{tag}: root {lam!r} in the strip [J, -Omega/2), "
                                   f"admissible={momenta.admissible}")
            if not momenta.admissible:
                dropped.append((lam, tag, "inadmissible momenta (Im p_j = 0)"))
                continue
            residual = abs(resolvent_condition(params, lam, resolvent_sign))
            if residual > RESIDUAL_TOL * params.scale:
                dropped.append((lam, tag, f"resolvent residual {residual:.3e}"))
                continue
            if any(b.sign == tag and abs(b.lambda_val - lam) <= 1e-12 * max(1.0, abs(lam))
                   for b in accepted):
                continue
            accepted.append(BoundState(lam, tag, momenta))
    return sorted(accepted, key=lambda b: b.lambda_val)


def discrete_spectrum(params: ModelParams, perturb: float = 0.0) -> SpectrumReport:
    """Continuous-eigenfunction states joined with the spin-orbit induced ones."""
    validate(params)
    if params.eta == 0:
        return eta_zero_spectrum(params)
    report = SpectrumReport(essential_edge(params))
    report.continuous = continuous_states(params, perturb, report.dropped, report.diagnostics)
    report.so = soc.so_states(params, report.resonances)
    for b in report.continuous:
        report.states.append(EigenState(b.lambda_val, CONTINUOUS, b.sign, None,
                                        bound_eigenfunction_expansion(params, b),
                                        soc.CLASS_CODES[soc.BELOW]))
    for s in report.so:
        report.states.append(EigenState(s.lambda_val, SPIN_ORBIT, s.branch, s.source_eps,
                                        a0_eigenfunction_expansion(s.parent, params),
                                        soc.CLASS_CODES[s.classification]))
    report.states.sort(key=lambda e: e.lambda_val)
    return report


def eta_zero_spectrum(params: ModelParams) -> SpectrumReport:
    """Decoupled delta wells: -gamma^2/4 - Omega/2 always, -gamma^2/4 + Omega/2 if gamma < -2 sqrt(Omega)."""
    validate(params)
    if params.eta != 0:
        raise DomainError("eta_zero_spectrum requires eta = 0")
    g, om = params.gamma, params.omega
    report = SpectrumReport(-om / 2)
    if g > 0:
        return report
    levels = [(-g * g / 4 - om / 2, "lower", (0.0, 1.0))]
    if g < -2 * np.sqrt(om):
        levels.append((-g * g / 4 + om / 2, "upper", (1.0, 0.0)))
    for lam, tag, chi in levels:
        f = PiecewiseExp.build([(g / 2, chi)], [(-g / 2, chi)])
        report.states.append(EigenState(lam, CONTINUOUS, tag, None, f, soc.CLASS_CODES[soc.BELOW]))
    report.states.sort(key=lambda e: e.lambda_val)
    return report


# ---------------------------------------------------------------- eigenfunctions

def _momenta_of(state) -> MomentumBranch:
    return state.momenta if isinstance(state, BoundState) else state


def upper_expansion(params: ModelParams, lam: float, momenta: MomentumBranch, C=1.0) -> PiecewiseExp:
    eta, shift = params.eta, lam + params.omega / 2
    right, left = [], []
    for p, sgn in ((momenta.p1, 1), (momenta.p2, -1)):
        a = shift - p * p
        right.append((1j * p, sgn * C / p * np.array([a, 1j * eta * p])))
        left.append((-1j * p, sgn * C / p * np.array([a, -1j * eta * p])))
    return PiecewiseExp.build(right, left)


def lower_expansion(params: ModelParams, lam: float, momenta: MomentumBranch, C=1.0) -> PiecewiseExp:
    eta, shift = params.eta, lam + params.omega / 2
    right, left = [], []
    for p, sgn in ((momenta.p1, 1), (momenta.p2, -1)):
        a = shift - p * p
        if abs(a) <= 1e-12 * max(1.0, abs(shift), abs(p * p)):
            raise DomainError("lambda + Omega/2 - p_j^2 vanishes; lower-sign eigenfunction is singular")
        right.append((1j * p, sgn * C * np.array([1.0, 1j * eta * p / a])))
        left.append((-1j * p, -sgn * C * np.array([1.0, -1j * eta * p / a])))
    return PiecewiseExp.build(right, left)


def bound_eigenfunction_expansion(params: ModelParams, state: BoundState, C=1.0) -> PiecewiseExp:
    builder = upper_expansion if state.sign == "upper" else lower_expansion
    return builder(params, state.lambda_val, state.momenta, C)


def _evaluate(expansion: PiecewiseExp, x):
    if np.any(np.asarray(x) == 0):
        raise DomainError("eigenfunction value at x = 0 is the mean of one-sided limits; use limit()")
    values = expansion(x)
    return SpinorValue.from_array(values) if values.ndim == 1 else values


def eigenfunction_upper(params: ModelParams, state: BoundState, C, x):
    if state.sign != "upper":
        raise DomainError("state does not carry the upper sign")
    return _evaluate(upper_expansion(params, state.lambda_val, state.momenta, C), x)


def eigenfunction_lower(params: ModelParams, state: BoundState, C, x):
    if state.sign != "lower":
        raise DomainError("state does not carry the lower sign")
    return _evaluate(lower_expansion(params, state.lambda_val, state.momenta, C), x)


# ---------------------------------------------------------------- kernels

def _symbol(params: ModelParams, p) -> np.ndarray:
    return params.eta * p * SIGMA_2 + (params.omega / 2) * SIGMA_3


def a_free_expansion(params: ModelParams, z) -> PiecewiseExp:
    """Kernel of (H0 - z)^{-1} on W^2 as a two-exponential sum on each side."""
    z = complex(z)
    m = momentum_branch(params, z)
    if m.p1.imag <= 0 or m.p2.imag <= 0:
        raise DomainError("z lies on the essential spectrum of H0 (a momentum is real)")
    pref = 1j / (2 * (m.p1**2 - m.p2**2))
    right, left = [], []
    for p, sgn in ((m.p1, 1), (m.p2, -1)):
        right.append((1j * p, sgn * pref / p * ((p * p - z) * IDENTITY - _symbol(params, p))))
        left.append((-1j * p, sgn * pref / p * ((p * p - z) * IDENTITY - _symbol(params, -p))))
    return PiecewiseExp.build(right, left)


def a_interaction_factor(params: ModelParams, z) -> np.ndarray:
    z = complex(z)
    m = momentum_branch(params, z)
    g, om = params.gamma, params.omega
    P, S = m.p1 * m.p2, m.p1 + m.p2
    base = 2 * P * S + 1j * g * (P + z)
    den = base**2 + (g * om / 2) ** 2
    if abs(den) <= 1e-14 * (abs(base) ** 2 + (g * om / 2) ** 2):
        raise PoleError(f"z = {z} is at a pole of the resolvent (|denominator| = {abs(den):.3e})")
    numer = P * (1j * g + 2 * S) * IDENTITY - 1j * g * ((om / 2) * SIGMA_3 - z * IDENTITY)
    return 2 * P * S * numer / den


def a_green_expansion(params: ModelParams, z) -> PiecewiseExp:
    return a_free_expansion(params, z).right_multiply(a_interaction_factor(params, z))


def _kernel(expansion: PiecewiseExp, dx, z) -> GreenMatrix:
    dx = float(dx)
    if dx == 0:
        return GreenMatrix(expansion.mean_at_zero(), dx, complex(z))
    return GreenMatrix(expansion(dx), dx, complex(z))


def a_free_kernel(params: ModelParams, z, dx) -> GreenMatrix:
    return _kernel(a_free_expansion(params, z), dx, z)


def a_green_kernel(params: ModelParams, z, dx) -> GreenMatrix:
    return _kernel(a_green_expansion(params, z), dx, z)


def weak_expansion(params: ModelParams, lam: float, f0) -> PiecewiseExp:
    f0 = f0.as_array() if isinstance(f0, SpinorValue) else np.asarray(f0, dtype=complex)
    return a_free_expansion(params, lam).right_multiply(-params.gamma * f0)


def weak_eigenfunction_b(params: ModelParams, lam: float, f0, x):
    """Weak solution -gamma (A^0 - lambda)^{-1}(x) f(0)."""
    return _evaluate(weak_expansion(params, lam, f0), x)


def unique_f0(params: ModelParams, state: BoundState, C=1.0) -> SpinorValue:
    """f(0) for which the weak solution coincides with the strict eigenfunction of constant C."""
    m = state.momenta
    diff = m.p1**2 - m.p2**2
    if state.sign == "upper":
        return SpinorValue(-2j * C * diff / params.gamma, 0)
    return SpinorValue(0, 2 * C * diff / (params.gamma * params.eta))
