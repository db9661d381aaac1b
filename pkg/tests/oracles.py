"""Independent reference computations used only by the tests.

None of these share code with the library routes they check.
"""
import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from socbound.model import SIGMA_2, SIGMA_3

ETA, GAMMA = 0.6, -1.0

# Roots of det(I + gamma G0(0; z)) found with the quadrature oracle below
# (brentq, xtol 1e-14); "upper" is the sigma_3 = +1 diagonal entry.
FROZEN_CONTINUOUS = {
    0.0: {"upper": -0.3400000000000001, "lower": -0.3400000000000001},
    0.1: {"upper": -0.30544383613805665, "lower": -0.3784533532442586},
    0.2: {"upper": -0.27679681708850734, "lower": -0.4195507335627716},
    0.36: {"upper": -0.25170702375833687, "lower": -0.4889364746006902},
    0.5: {"upper": -0.2643429188597655, "lower": -0.5520662859213639},
    1.0: {"upper": None, "lower": -0.7870415290330897},
    1.32: {"upper": None, "lower": -0.941408916603708},
    2.0: {"upper": None, "lower": -1.2738969898875707},
}


def free_green_diagonal_at_zero(eta, omega, z, sign):
    """(1/2pi) int (p^2 - z - sign Omega/2) / Delta_z(p) dp for real z below the spectrum."""
    def integrand(p):
        return (p * p - z - sign * omega / 2) / ((p * p - z) ** 2 - eta**2 * p * p - omega**2 / 4)
    value, _ = quad(integrand, 0, np.inf, epsabs=1e-13, epsrel=1e-12, limit=500)
    return value / np.pi


def quadrature_condition(eta, omega, gamma, z, sign):
    return 1 + gamma * free_green_diagonal_at_zero(eta, omega, z, sign)


def dense_scan_roots(func, lo, hi, points=1_000_000):
    """Sign changes of a vectorized ``func`` on a dense grid, refined by linear interpolation."""
    x = np.linspace(lo, hi, points)
    y = func(x)
    idx = np.nonzero(np.sign(y[:-1]) * np.sign(y[1:]) < 0)[0]
    return [float(x[i] - y[i] * (x[i + 1] - x[i]) / (y[i + 1] - y[i])) for i in idx]


def dirac_branch_lhs(eta, omega, gamma, eps, branch):
    """Branch equation written out from scratch."""
    w = np.sqrt(omega**2 - 4 * eps**2) / (2 * eta)
    if branch == "+":
        return gamma / 2 + w + eta * np.sqrt((omega - 2 * eps) / (omega + 2 * eps))
    return gamma / 2 + w - eta * np.sqrt((omega + 2 * eps) / (omega - 2 * eps))


def bisect(predicate, lo, hi, tol):
    """Boundary of a predicate that is True at lo and False at hi."""
    assert predicate(lo) and not predicate(hi)
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if predicate(mid):
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def h0_apply(params, f, xs):
    """H0 f at xs from the analytic derivatives of a PiecewiseExp spinor."""
    return (-f.derivative(xs, 2) - 1j * params.eta * f.derivative(xs, 1) @ SIGMA_2.T
            + (params.omega / 2) * f(xs) @ SIGMA_3.T)


def u_apply(params, f, xs):
    return -1j * params.eta * f.derivative(xs, 1) @ SIGMA_2.T + (params.omega / 2) * f(xs) @ SIGMA_3.T


def h0_apply_matrix(params, G, xs):
    return (-G.derivative(xs, 2) - 1j * params.eta * SIGMA_2 @ G.derivative(xs, 1)
            + (params.omega / 2) * SIGMA_3 @ G(xs))


def u_apply_matrix(params, G, xs):
    return -1j * params.eta * SIGMA_2 @ G.derivative(xs, 1) + (params.omega / 2) * SIGMA_3 @ G(xs)


def pole_order(magnitude, center, ks=range(3, 8)):
    """Slope of log|G| against log(1/dist) for z = center + 10^-k."""
    dist = np.array([10.0 ** -k for k in ks])
    values = np.array([magnitude(center + d) for d in dist])
    return float(np.polyfit(np.log(1 / dist), np.log(values), 1)[0])


def root_below(func, lo, hi):
    return brentq(func, lo, hi, xtol=1e-14)
