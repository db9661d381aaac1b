"""Finite-difference oracle with a square-well regularized delta.

The line is cut to [-L, L] with Dirichlet walls and N interior nodes per spin
component, h = 2L/(N + 1).  The delta is replaced by a well of half-width
eps_w and depth gamma/(2 eps_w); each node receives the well depth times the
fraction of its cell [x_j - h/2, x_j + h/2] covered by the well, so the
discrete well integrates to gamma exactly for any alignment.

Unknowns are ordered node-major, spin-minor (index 2j + s), which makes the
real symmetric matrix banded with half-bandwidth 3.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .bound import CONTINUOUS, SpectrumReport
from .errors import ConvergenceError, DomainError
from .expfun import PiecewiseExp
from .model import SIGMA_2, SIGMA_3, ModelParams

EIG_RESIDUAL_TOL = 1e-10
DENSE_LIMIT = 2000


@dataclass(frozen=True)
class GridSpec:
    half_length: float = 40.0
    points: int = 8000
    well_half_width: float = 1e-2

    def __post_init__(self):
        if self.points < 3:
            raise DomainError("grid needs at least 3 nodes")
        if not self.half_length > 0:
            raise DomainError("half_length must be positive")
        if not self.well_half_width > 0:
            raise DomainError("well_half_width must be positive")
        if self.well_half_width < self.step:
            raise DomainError(f"well half-width {self.well_half_width} is below one grid cell "
                              f"({self.step}); the stencil cannot see the well")

    @property
    def step(self) -> float:
        return 2 * self.half_length / (self.points + 1)

    @property
    def nodes(self) -> np.ndarray:
        return -self.half_length + self.step * np.arange(1, self.points + 1)


@dataclass(frozen=True)
class GridOperator:
    matrix: sp.csr_matrix
    spec: GridSpec
    params: ModelParams

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    def hermiticity_residual(self) -> float:
        diff = self.matrix - self.matrix.conj().T
        return float(abs(diff).max()) if diff.nnz else 0.0


def well_profile(spec: GridSpec, gamma: float) -> np.ndarray:
    """Cell-averaged square well on the nodes."""
    x, h, w = spec.nodes, spec.step, spec.well_half_width
    overlap = np.clip(np.minimum(x + h / 2, w) - np.maximum(x - h / 2, -w), 0.0, None)
    return gamma / (2 * w) * overlap / h


def build_grid_hamiltonian(params: ModelParams, spec: GridSpec) -> GridOperator:
    n, h = spec.points, spec.step
    ones = np.ones(n)
    lap = sp.diags([-ones[1:], 2 * ones, -ones[1:]], [-1, 0, 1]) / h**2
    grad = sp.diags([-ones[1:], ones[1:]], [-1, 1]) / (2 * h)
    scalar = lap + sp.diags(well_profile(spec, params.gamma))
    # -i eta d/dx sigma_2 = eta d/dx (-i sigma_2), and -i sigma_2 is real antisymmetric
    soc_block = (-1j * SIGMA_2).real
    matrix = (sp.kron(scalar, np.eye(2)) + params.eta * sp.kron(grad, soc_block)
              + (params.omega / 2) * sp.kron(sp.identity(n), SIGMA_3.real))
    return GridOperator(sp.csr_matrix(matrix), spec, params)


def _residuals(matrix, values, vectors) -> np.ndarray:
    return np.linalg.norm(matrix @ vectors - vectors * values, axis=0)


def residual_tolerance(op: GridOperator) -> float:
    """1e-10, raised to 10 ulps of |M|_1 on grids so fine that roundoff alone exceeds it."""
    norm = float(abs(op.matrix).sum(axis=0).max())
    return max(EIG_RESIDUAL_TOL, 10 * np.finfo(float).eps * norm)


def _polish(matrix, sigma: float, vectors: np.ndarray, sweeps: int = 2):
    """Shift-invert subspace iteration followed by Rayleigh-Ritz.

    Removes the high-frequency error components that dominate the residual
    when |M| ~ 1/h^2 is large.
    """
    shifted = (matrix - sigma * sp.identity(matrix.shape[0])).tocsc()
    lu = spla.splu(shifted)
    for _ in range(sweeps):
        vectors, _ = np.linalg.qr(lu.solve(vectors))
    small = vectors.T @ (matrix @ vectors)
    values, rotation = np.linalg.eigh((small + small.T) / 2)
    return values, vectors @ rotation


def count_below(op: GridOperator, sigma: float) -> int:
    """Number of eigenvalues below ``sigma`` (Sylvester inertia of M - sigma I).

    The LU factors are taken without pivoting in the natural order, so U's
    diagonal is the D of an LDL^T factorization.
    """
    shifted = (op.matrix - sigma * sp.identity(op.dimension)).tocsc()
    lu = spla.splu(shifted, permc_spec="NATURAL", diag_pivot_thresh=0,
                   options={"SymmetricMode": True})
    return int(np.sum(lu.U.diagonal() < 0))


def _gershgorin(matrix) -> tuple[float, float]:
    diag = matrix.diagonal()
    radius = np.asarray(abs(matrix).sum(axis=1)).ravel() - np.abs(diag)
    return float(np.min(diag - radius)), float(np.max(diag + radius))


def _shift_below_spectrum(op: GridOperator) -> float:
    """A shift just below the lowest eigenvalue, by bisection on count_below."""
    lo, hi = _gershgorin(op.matrix)
    lo -= 1.0
    while hi - lo > 1e-3 * max(1.0, abs(hi)):
        mid = (lo + hi) / 2
        if count_below(op, mid) == 0:
            lo = mid
        else:
            hi = mid
    return lo


def lowest_eigenpairs(op: GridOperator, k: int) -> list[tuple[float, np.ndarray]]:
    """k smallest eigenvalues with unit eigenvectors reshaped to (N, 2).

    Small matrices use a dense symmetric solver.  Large ones use shift-invert
    Lanczos from a shift just below the spectrum, a subspace-iteration
    polish, and an inertia count confirming that no eigenvalue below the
    k-th was skipped.  Residuals must be within ``residual_tolerance``
    (1e-10 on the default grid).
    """
    if k < 1:
        raise DomainError("k must be at least 1")
    n = op.dimension
    k = min(k, n)
    if n <= DENSE_LIMIT:
        values, vectors = scipy.linalg.eigh(op.matrix.toarray(), subset_by_index=(0, k - 1))
    else:
        sigma = _shift_below_spectrum(op)
        try:
            _, vectors = spla.eigsh(op.matrix.tocsc(), k=k, sigma=sigma, which="LM", tol=1e-14)
        except spla.ArpackError as exc:
            raise ConvergenceError(f"shift-invert Lanczos failed: {exc}") from exc
        values, vectors = _polish(op.matrix, sigma, vectors)
        probe = values[-1] - 1e-8 * max(1.0, abs(values[-1]))
        expected = int(np.sum(values < probe))
        found = count_below(op, probe)
        if found != expected:
            raise ConvergenceError(f"{found} eigenvalues lie below {probe!r} but Lanczos found {expected}")
    residuals = _residuals(op.matrix, values, vectors)
    tol = residual_tolerance(op)
    if np.max(residuals) > tol:
        raise ConvergenceError(f"eigen-residuals {residuals.tolist()} exceed {tol:.3e}")
    return [(float(values[i]), vectors[:, i].reshape(-1, 2)) for i in range(k)]


# ---------------------------------------------------------------- comparison

@dataclass
class Comparison:
    matches: list = field(default_factory=list)
    unmatched_analytic: list = field(default_factory=list)
    unmatched_numeric: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.unmatched_analytic

    @property
    def max_error(self) -> float:
        return max((m[2] for m in self.matches), default=0.0)


def compare_spectra(analytic: SpectrumReport, numeric, tol: float,
                    floor: float | None = None, families=(CONTINUOUS,)) -> Comparison:
    """Greedy nearest-first matching of analytic states below J to numeric values below ``floor``.

    ``floor`` defaults to the analytic essential edge J.  Unmatched analytic
    states carry their distance to the nearest numeric value (None if there
    is none).
    """
    floor = analytic.essential_edge if floor is None else floor
    targets = [s.lambda_val for s in analytic.states
               if s.family in families and s.lambda_val < analytic.essential_edge]
    values = [float(v) for v in numeric if v < floor]
    pairs = sorted(((abs(a - v), i, j) for i, a in enumerate(targets) for j, v in enumerate(values)))
    used_a, used_n = set(), set()
    out = Comparison()
    for dist, i, j in pairs:
        if dist > tol or i in used_a or j in used_n:
            continue
        used_a.add(i)
        used_n.add(j)
        out.matches.append((targets[i], values[j], dist))
    for i, a in enumerate(targets):
        if i not in used_a:
            nearest = min((abs(a - v) for v in values), default=None)
            out.unmatched_analytic.append((a, nearest))
    out.unmatched_numeric = [v for j, v in enumerate(values) if j not in used_n]
    out.matches.sort()
    return out


# ---------------------------------------------------------------- pointwise checks

def residual_check(params: ModelParams, f, lam: float, sample_xs, h: float) -> float:
    """Max over samples of |H0 f - lam f| with fourth-order central differences of step h."""
    xs = np.asarray(sample_xs, dtype=float)
    if np.any(np.abs(xs) <= 3 * h):
        raise DomainError("sample points must satisfy |x| > 3h to stay off the kink at 0")
    offsets = np.arange(-2, 3)
    stack = np.stack([np.asarray(f(xs + k * h)) for k in offsets])
    d1 = (stack[0] - 8 * stack[1] + 8 * stack[3] - stack[4]) / (12 * h)
    d2 = (-stack[0] + 16 * stack[1] - 30 * stack[2] + 16 * stack[3] - stack[4]) / (12 * h * h)
    value = stack[2]
    out = -d2 - 1j * params.eta * d1 @ SIGMA_2.T + (params.omega / 2) * value @ SIGMA_3.T - lam * value
    return float(np.max(np.linalg.norm(out, axis=-1)))


def boundary_check(params: ModelParams, f) -> float:
    """|gamma f(0) - [f'(0+) - f'(0-) + i eta sigma_2 (f(0+) - f(0-))]| with f(0) the mean.

    ``f`` is a PiecewiseExp or a tuple (f(0+), f(0-), f'(0+), f'(0-)).
    """
    if isinstance(f, PiecewiseExp):
        fp, fm, dp, dm = f.limit(+1), f.limit(-1), f.limit(+1, 1), f.limit(-1, 1)
    else:
        fp, fm, dp, dm = (np.asarray(v, dtype=complex) for v in f)
    lhs = params.gamma * (fp + fm) / 2
    rhs = dp - dm + 1j * params.eta * SIGMA_2 @ (fp - fm)
    return float(np.max(np.abs(lhs - rhs)))


# ---------------------------------------------------------------- well regularization

@dataclass(frozen=True)
class WellRow:
    well_half_width: float
    integral_mean: float
    edge_mean: float
    gap: float


@dataclass
class WellTable:
    rows: list
    order: float


def _fit_slope(xs, ys) -> float:
    return float(np.polyfit(np.log(xs), np.log(ys), 1)[0])


def _trapezoid_average(x, values, w) -> float:
    """(1/2w) * integral over [-w, w] of the linear interpolant of ``values``."""
    inside = (x > -w) & (x < w)
    xs = np.concatenate([[-w], x[inside], [w]])
    ys = np.concatenate([[np.interp(-w, x, values)], values[inside], [np.interp(w, x, values)]])
    return float(np.trapezoid(ys, xs) / (2 * w))


def well_functional_check(params: ModelParams, widths, half_length: float = 15.0,
                          points: int = 12000) -> WellTable:
    """Compare the well average of the ground state with its mean value just outside the well.

    For each eps_w the ground-state component with the larger norm is used;
    ``gap`` is |I - m| / |m|.  ``order`` is the fitted slope of log gap
    against log eps_w.
    """
    rows = []
    for w in widths:
        spec = GridSpec(half_length, points, w)
        _, vec = lowest_eigenpairs(build_grid_hamiltonian(params, spec), 1)[0]
        comp = vec[:, int(np.argmax(np.linalg.norm(vec, axis=0)))]
        x = spec.nodes
        integral = _trapezoid_average(x, comp, w)
        mean = (np.interp(w, x, comp) + np.interp(-w, x, comp)) / 2
        rows.append(WellRow(w, integral, float(mean), abs(integral - mean) / abs(mean)))
    order = _fit_slope([r.well_half_width for r in rows], [r.gap for r in rows]) if len(rows) > 1 else float("nan")
    return WellTable(rows, order)


def well_curvature(spec: GridSpec, vector: np.ndarray) -> float:
    """sqrt(|f''/f|) at the node nearest the well centre, for the dominant component."""
    comp = vector[:, int(np.argmax(np.linalg.norm(vector, axis=0)))]
    j = int(np.argmin(np.abs(spec.nodes)))
    second = (comp[j + 1] - 2 * comp[j] + comp[j - 1]) / spec.step**2
    return float(np.sqrt(abs(second / comp[j])))


def characteristic_root_scaling(params: ModelParams, widths, half_length: float = 15.0,
                                points: int = 12000) -> tuple[list[float], float]:
    """Well curvature of the ground state for each eps_w and the fitted exponent."""
    roots = []
    for w in widths:
        spec = GridSpec(half_length, points, w)
        _, vec = lowest_eigenpairs(build_grid_hamiltonian(params, spec), 1)[0]
        roots.append(well_curvature(spec, vec))
    return roots, _fit_slope(widths, roots)
