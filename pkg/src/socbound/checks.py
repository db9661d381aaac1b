"""Invariant suite run by ``socbound check``.

Every check is a pure function of the parameters and returns ``CheckResult``s.
The resolvent-root count uses a real form of the eigenvalue condition that
shares no code with the cubic route: below J one has p1 p2 = -R and
p1 + p2 = i s with R = sqrt(lambda^2 - Omega^2/4) and
s = sqrt(-2 lambda - eta^2 + 2 R), so the condition becomes

    g(lambda) = -2 R s + gamma (lambda +- Omega/2 - R) = 0.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import bound, dirac, dispersion, oracle, soc
from .model import SIGMA_2, SIGMA_3, ModelParams, lambda_zero, omega_of_eps

CANONICAL_ETA = 0.6
CANONICAL_GAMMA = -1.0
CANONICAL_OMEGAS = (0.1, 0.36, 0.5, 0.61, 1.0, 1.32)
SAMPLE_XS = np.array([-2.0, -0.5, -0.1, 0.1, 0.5, 2.0])


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


def real_resolvent(params: ModelParams, lam, sign: int):
    """g(lambda) above; valid for lambda < J."""
    lam = np.asarray(lam, dtype=float)
    R = np.sqrt(lam**2 - params.omega**2 / 4)
    s = np.sqrt(-2 * lam - params.eta**2 + 2 * R)
    return -2 * R * s + params.gamma * (lam + sign * params.omega / 2 - R)


def scan_resolvent_roots(params: ModelParams, sign: int, points: int = 20000) -> list[float]:
    """Sign changes of g on a grid below J (uniform far away, geometric near J)."""
    edge = dispersion.essential_edge(params)
    span = 4 * (params.gamma**2 + params.eta**2 + params.omega) + 1
    far = np.linspace(edge - span, edge - 1e-2, points)
    near = edge - np.logspace(-2, -10, 800)
    grid = np.concatenate([far, near[1:]])
    values = real_resolvent(params, grid, sign)
    hits = np.nonzero(np.sign(values[:-1]) * np.sign(values[1:]) < 0)[0]
    return [float((grid[i] + grid[i + 1]) / 2) for i in hits]


def _h0_residual(params, f, lam, xs=SAMPLE_XS) -> float:
    out = (-f.derivative(xs, 2) - 1j * params.eta * f.derivative(xs, 1) @ SIGMA_2.T
           + (params.omega / 2) * f(xs) @ SIGMA_3.T - lam * f(xs))
    return float(np.max(np.abs(out)))


def _u_residual(params, f, eps, xs=SAMPLE_XS) -> float:
    out = (-1j * params.eta * f.derivative(xs, 1) @ SIGMA_2.T
           + (params.omega / 2) * f(xs) @ SIGMA_3.T - eps * f(xs))
    return float(np.max(np.abs(out)))


def _check(results: list, name: str, passed: bool, detail: str = "") -> None:
    results.append(CheckResult(name, bool(passed), detail))


def check_model(params: ModelParams) -> list[CheckResult]:
    out = []
    eps = np.linspace(-0.499, 0.499, 101) * params.omega
    w = omega_of_eps(params, eps)
    err = np.max(np.abs(w**2 * (2 * params.eta) ** 2 + 4 * eps**2 - params.omega**2)) / max(params.omega**2, 1e-300)
    _check(out, "model: omega identity", err <= 1e-12, f"rel err {err:.2e}")
    _check(out, "model: lambda_0 <= -Omega/2", lambda_zero(params) <= -params.omega / 2 + 1e-15)
    return out


def check_dispersion(params: ModelParams) -> list[CheckResult]:
    out = []
    edge = dispersion.essential_edge(params)
    _, numeric = dispersion.lower_branch_minimum(params)
    _check(out, "dispersion: numeric minimum equals J", abs(numeric - edge) <= 1e-8,
           f"|diff| = {abs(numeric - edge):.2e}")
    grid = np.linspace(-3, 3, 20001)
    lower = dispersion.branches(params, grid).lambda_minus
    _check(out, "dispersion: lambda_minus >= J", np.min(lower) >= edge - 1e-12)
    crit = dispersion.critical_momenta(params)
    at_crit = min(dispersion.branches(params, p).lambda_minus for p in crit)
    _check(out, "dispersion: J attained at critical momenta", abs(at_crit - edge) <= 1e-10)
    return out


def check_dirac(params: ModelParams) -> list[CheckResult]:
    out = []
    for st in dirac.a0_discrete_spectrum(params):
        tag = f"dirac[{st.branch} {st.eps:.6f}]"
        resid = abs(float(dirac.branch_function(params, st.eps, st.branch)))
        _check(out, f"{tag}: branch equation", resid <= 1e-10, f"{resid:.2e}")
        den = abs(dirac.a0_resolvent_denominator(params, st.eps))
        _check(out, f"{tag}: resolvent pole", den <= 1e-8 * params.scale, f"{den:.2e}")
        _check(out, f"{tag}: inside the gap", abs(st.eps) < params.omega / 2)
        f = dirac.a0_eigenfunction_expansion(st, params)
        bc = oracle.boundary_check(params, f)
        _check(out, f"{tag}: boundary condition", bc <= 1e-12, f"{bc:.2e}")
        ode = _u_residual(params, f, st.eps)
        _check(out, f"{tag}: U f = eps f", ode <= 1e-12, f"{ode:.2e}")
        cont, flip = (0, 1) if st.branch == "+" else (1, 0)
        jump_ok = (abs(f.jump()[cont]) <= 1e-14
                   and abs(f.limit(1)[flip] + f.limit(-1)[flip]) <= 1e-14)
        _check(out, f"{tag}: continuity pattern", jump_ok)
    return out


def check_soc(params: ModelParams) -> list[CheckResult]:
    out = []
    edge = dispersion.essential_edge(params)
    tol = 1e-10 * max(1.0, abs(edge))
    for st in soc.so_states(params):
        tag = f"soc[{st.branch} {st.lambda_val:.6f}]"
        weak = soc.so_weak_eigenvalue(params, st.source_eps, st.branch)
        _check(out, f"{tag}: eps - w^2 = (gamma w +- Omega)/2", abs(weak - st.lambda_val) <= 1e-10,
               f"{abs(weak - st.lambda_val):.2e}")
        f = dirac.a0_eigenfunction_expansion(st.parent, params)
        u, h = _u_residual(params, f, st.source_eps), _h0_residual(params, f, st.lambda_val)
        _check(out, f"{tag}: shared eigenfunction", max(u, h) <= 1e-10, f"U {u:.2e}, H0 {h:.2e}")
        bc = oracle.boundary_check(params, f)
        _check(out, f"{tag}: boundary condition", bc <= 1e-10, f"{bc:.2e}")
        below = st.lambda_val < edge - tol
        _check(out, f"{tag}: classification", (st.classification == soc.BELOW) == below,
               st.classification)
        expected = soc.SIGMA2 if params.omega <= params.eta**2 else (
            soc.BELOW if st.source_eps < params.omega / 2 - params.eta**2 else soc.SIGMA1)
        _check(out, f"{tag}: regime", st.classification == expected)
        _check(out, f"{tag}: lambda >= lambda_0", st.lambda_val >= lambda_zero(params))
    return out


def check_bound(params: ModelParams, perturb: float = 0.0) -> list[CheckResult]:
    out = []
    edge = dispersion.essential_edge(params)
    states = bound.continuous_states(params, perturb)
    for sign, tag_name in ((1, "upper"), (-1, "lower")):
        found = [b for b in states if b.sign == tag_name]
        scanned = scan_resolvent_roots(params, sign)
        _check(out, f"bound[{tag_name}]: root count matches independent resolvent scan",
               len(found) == len(scanned), f"cubic {len(found)}, scan {len(scanned)}")
    cutoff = params.eta**2 + params.gamma**2 / 4
    has_upper = any(b.sign == "upper" for b in states)
    _check(out, "bound: upper state exists exactly below the cutoff",
           has_upper == (params.omega < cutoff), f"Omega {params.omega}, cutoff {cutoff}")
    for b in states:
        tag = f"bound[{b.sign} {b.lambda_val:.6f}]"
        res = abs(bound.resolvent_condition(params, b.lambda_val, b.sign))
        _check(out, f"{tag}: opposite-sign resolvent condition", res <= 1e-9, f"{res:.2e}")
        _check(out, f"{tag}: below J", b.lambda_val < edge - 1e-12)
        _check(out, f"{tag}: admissible momenta",
               b.momenta.p1.imag > 0 and b.momenta.p2.imag > 0)
        f = bound.bound_eigenfunction_expansion(params, b)
        zero = 1 if b.sign == "upper" else 0
        marker = abs(f.mean_at_zero()[zero]) <= 1e-12 and np.max(np.abs(f.jump())) <= 1e-12
        _check(out, f"{tag}: continuous with family marker", marker)
        ode = _h0_residual(params, f, b.lambda_val)
        _check(out, f"{tag}: H0 f = lambda f", ode <= 1e-10, f"{ode:.2e}")
        bc = oracle.boundary_check(params, f)
        _check(out, f"{tag}: boundary condition", bc <= 1e-10, f"{bc:.2e}")
    return out


def check_kernels(params: ModelParams, z: complex = -0.9 + 0.3j) -> list[CheckResult]:
    out = []
    G = bound.a_free_expansion(params, z)
    xs = SAMPLE_XS
    ode = np.max(np.abs(-G.derivative(xs, 2) - 1j * params.eta * SIGMA_2 @ G.derivative(xs, 1)
                        + (params.omega / 2) * SIGMA_3 @ G(xs) - z * G(xs)))
    _check(out, "kernel A0: ODE residual", ode <= 1e-12, f"{ode:.2e}")
    jump = np.max(np.abs(G.jump(1) + np.eye(2))) + np.max(np.abs(G.jump()))
    _check(out, "kernel A0: derivative jump -I", jump <= 1e-12, f"{jump:.2e}")
    D = dirac.a0_free_expansion(params, 0.1j)
    ode = np.max(np.abs(-1j * params.eta * SIGMA_2 @ D.derivative(xs, 1)
                        + (params.omega / 2) * SIGMA_3 @ D(xs) - 0.1j * D(xs)))
    rel = np.max(np.abs(-1j * params.eta * SIGMA_2 @ D.jump() - np.eye(2)))
    _check(out, "kernel Dirac: ODE residual and jump", max(ode, rel) <= 1e-12, f"{ode:.2e}, {rel:.2e}")
    return out


def check_oracle(params: ModelParams) -> list[CheckResult]:
    out = []
    op = oracle.build_grid_hamiltonian(params, oracle.GridSpec())
    _check(out, "oracle: Hermiticity", op.hermiticity_residual() <= 1e-12)
    numeric = [v for v, _ in oracle.lowest_eigenpairs(op, 4)]
    cmp = oracle.compare_spectra(bound.discrete_spectrum(params), numeric, 5e-3)
    _check(out, "oracle: grid matches continuous family", cmp.ok,
           f"max err {cmp.max_error:.2e}, unmatched {cmp.unmatched_analytic}")
    return out


def run_suite(omegas=CANONICAL_OMEGAS, perturb: float = 0.0, with_oracle: bool = True) -> list[CheckResult]:
    results = []
    for om in omegas:
        params = ModelParams(CANONICAL_ETA, om, CANONICAL_GAMMA)
        for group in (check_model, check_dispersion, check_dirac, check_soc, check_kernels):
            results += [CheckResult(f"Omega={om}: {r.name}", r.passed, r.detail) for r in group(params)]
        results += [CheckResult(f"Omega={om}: {r.name}", r.passed, r.detail)
                    for r in check_bound(params, perturb)]
    if with_oracle:
        params = ModelParams(CANONICAL_ETA, 0.5, CANONICAL_GAMMA)
        results += [CheckResult(f"Omega=0.5: {r.name}", r.passed, r.detail) for r in check_oracle(params)]
    return results
