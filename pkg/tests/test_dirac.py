import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from socbound import (DomainError, ModelParams, a0_discrete_spectrum, a0_eigenfunction, a0_free_kernel,
                      a0_green_kernel, a0_resolvent_denominator, b0_weak_eigenfunction)
from socbound.dirac import (a0_eigenfunction_expansion, a0_free_expansion, a0_green_expansion,
                            a0_interaction_factor, branch_derivative, branch_f0, branch_function)
from socbound.errors import PoleError
from socbound.model import SIGMA_2
from oracles import dense_scan_roots, dirac_branch_lhs, pole_order, u_apply, u_apply_matrix

FROZEN = {
    0.5: {"+": [0.18809848359287076], "-": []},
    1.0: {"+": [0.45018202784266037], "-": []},
    1.32: {"+": [0.6171141218722688], "-": [-0.49572524088780084, 0.0]},
    1.5: {"+": [0.7103364015488588], "-": [-0.6307305497971225, 0.14248693150180944]},
}
XS = np.array([-3.0, -0.7, -0.01, 0.01, 0.7, 3.0])


def roots_by_branch(params):
    states = a0_discrete_spectrum(params)
    return {b: [s.eps for s in states if s.branch == b] for b in ("+", "-")}


@pytest.mark.parametrize("omega", sorted(FROZEN))
def test_frozen_roots(canonical, omega):
    found = roots_by_branch(canonical(omega))
    for branch, expected in FROZEN[omega].items():
        np.testing.assert_allclose(found[branch], expected, atol=1e-12)


@pytest.mark.parametrize("omega", [0.3, 0.8, 1.2, 1.32, 1.5, 2.5])
def test_roots_match_dense_scan(canonical, omega):
    params = canonical(omega)
    found = roots_by_branch(params)
    guard = 1e-7 * omega
    for branch in ("+", "-"):
        scanned = dense_scan_roots(lambda e: dirac_branch_lhs(0.6, omega, -1.0, e, branch),
                                   -omega / 2 + guard, omega / 2 - guard)
        np.testing.assert_allclose(found[branch], scanned, atol=1e-9)


def test_minus_branch_threshold(canonical):
    assert roots_by_branch(canonical(1.168))["-"] == []
    assert len(roots_by_branch(canonical(1.169))["-"]) == 2


def test_crossing_at_closed_form(canonical):
    # eps = 0 on branch '-' reduces to Omega = 2 eta^2 - eta gamma
    upper = max(roots_by_branch(canonical(1.32))["-"])
    assert abs(upper) < 1e-12


@pytest.mark.parametrize("omega", [0.5, 1.32, 1.5])
def test_roots_are_resolvent_poles(canonical, omega):
    params = canonical(omega)
    for s in a0_discrete_spectrum(params):
        assert abs(a0_resolvent_denominator(params, s.eps)) <= 1e-8 * params.scale
        assert abs(branch_function(params, s.eps, s.branch)) <= 1e-12


def test_empty_cases(canonical):
    assert a0_discrete_spectrum(ModelParams(0.6, 1.0, 1.0)) == []
    assert a0_discrete_spectrum(canonical(0.0)) == []
    with pytest.raises(DomainError):
        a0_discrete_spectrum(ModelParams(0.0, 1.0, -1.0))


def test_diagnostics_logged(canonical):
    notes = []
    a0_discrete_spectrum(canonical(1.5), notes)
    assert len(notes) == 3 and all("denominator" in n for n in notes)


def test_branch_validation(canonical):
    with pytest.raises(DomainError, match="branch"):
        branch_function(canonical(1.0), 0.0, "x")


@settings(max_examples=50)
@given(st.floats(0.2, 3.0), st.floats(-0.95, 0.95), st.sampled_from(["+", "-"]))
def test_branch_derivative(omega, t, branch):
    params = ModelParams(0.6, omega, -1.0)
    eps, h = t * omega / 2, 1e-6 * omega
    numeric = (branch_function(params, eps + h, branch) - branch_function(params, eps - h, branch)) / (2 * h)
    assert branch_derivative(params, eps, branch) == pytest.approx(float(numeric), rel=1e-5, abs=1e-6)


@pytest.mark.parametrize("omega", [0.5, 1.32, 1.5])
def test_eigenfunctions(canonical, omega):
    params = canonical(omega)
    for s in a0_discrete_spectrum(params):
        f = a0_eigenfunction_expansion(s, params)
        np.testing.assert_allclose(u_apply(params, f, XS), s.eps * f(XS), atol=1e-12)
        # continuous component is the one marked by f(0); the other one is odd at the origin
        cont = 0 if s.branch == "+" else 1
        assert abs(f.jump()[cont]) < 1e-14
        assert abs(f.limit(1)[1 - cont] + f.limit(-1)[1 - cont]) < 1e-14
        np.testing.assert_allclose(f.mean_at_zero(), branch_f0(s).as_array(), atol=1e-15)
        assert np.all(f.right_rates.real < 0) and np.all(f.left_rates.real > 0)


@pytest.mark.parametrize("omega", [0.5, 1.5])
def test_norm_against_quadrature(canonical, omega):
    params = canonical(omega)
    for s in a0_discrete_spectrum(params):
        f = a0_eigenfunction_expansion(s, params)
        density = lambda x: float(np.sum(np.abs(f(x)) ** 2))
        total = quad(density, -np.inf, 0)[0] + quad(density, 0, np.inf)[0]
        assert f.norm_squared() == pytest.approx(total, rel=1e-9)
        assert f.normalized().norm_squared() == pytest.approx(1.0)


def test_eigenfunction_evaluation(canonical):
    params = canonical(1.0)
    s = a0_discrete_spectrum(params)[0]
    value = a0_eigenfunction(s, params, 0.3)
    np.testing.assert_allclose(value.as_array(), a0_eigenfunction(s, params, np.array([0.3]))[0])
    with pytest.raises(DomainError):
        a0_eigenfunction(s, params, 0.0)


@pytest.mark.parametrize("z", [0.1j, 0.2 + 0.3j, -0.3 + 0.0j, 1.0 + 0.5j])
def test_free_kernel_equation_and_jump(canonical, z):
    params = canonical(1.0)
    G = a0_free_expansion(params, z)
    np.testing.assert_allclose(u_apply_matrix(params, G, XS), z * G(XS), atol=1e-12)
    # -i eta sigma_2 [G](0) = I
    np.testing.assert_allclose(-1j * 0.6 * SIGMA_2 @ G.jump(), np.eye(2), atol=1e-12)
    assert np.all(G.right_rates.real < 0)


@pytest.mark.parametrize("gamma", [-1.0, -0.3, -1e-12])
@pytest.mark.parametrize("z", [0.1j, -0.3 + 0.0j, 0.2 + 0.3j])
def test_interacting_kernel_source_relation(gamma, z):
    # integrating (U + V_F - z) G = delta over a vanishing interval around 0
    params = ModelParams(0.6, 1.0, gamma)
    G = a0_green_expansion(params, z)
    np.testing.assert_allclose(u_apply_matrix(params, G, XS), z * G(XS), atol=1e-12)
    resid = gamma * G.mean_at_zero() - G.jump(1) - 1j * 0.6 * SIGMA_2 @ G.jump()
    np.testing.assert_allclose(resid, np.eye(2), atol=1e-12)


@pytest.mark.parametrize("z", [0.1j, 0.2 + 0.3j])
def test_gamma_to_zero_keeps_pseudopotential(z):
    # the delta-prime pair of V_F survives gamma = 0, so the limit is not the free kernel
    params = ModelParams(0.6, 1.0, -1e-13)
    eta2 = 0.36
    limit = np.diag([eta2 / (eta2 + z + 0.5), eta2 / (eta2 + z - 0.5)])
    xs = np.array([-1.0, 0.4])
    expected = a0_free_expansion(params, z)(xs) @ limit
    np.testing.assert_allclose(a0_green_expansion(params, z)(xs), expected, atol=1e-10)
    assert np.max(np.abs(limit - np.eye(2))) > 0.1


def test_gamma_zero_denominator_vanishes_at_resonance():
    params = ModelParams(0.6, 1.0, -1e-15)
    assert abs(a0_resolvent_denominator(params, 0.5 - 0.36)) < 1e-12


def test_kernel_rejects_origin_and_band_edge(canonical):
    params = canonical(1.0)
    with pytest.raises(DomainError):
        a0_free_kernel(params, 0.1j, 0.0)
    with pytest.raises(DomainError):
        a0_free_kernel(params, 0.5, 1.0)


def test_pole_at_eigenvalue(canonical):
    params = canonical(1.0)
    s = a0_discrete_spectrum(params)[0]
    with pytest.raises(PoleError):
        a0_interaction_factor(params, s.eps)


@pytest.mark.parametrize("omega", [1.0, 1.5])
def test_simple_pole(canonical, omega):
    params = canonical(omega)
    for s in a0_discrete_spectrum(params):
        mag = lambda z: np.max(np.abs(a0_green_kernel(params, z, 0.5).entries))
        assert pole_order(mag, s.eps) == pytest.approx(1.0, abs=0.02)


@pytest.mark.parametrize("omega", [0.5, 1.32, 1.5])
def test_weak_solution_ratio(canonical, omega):
    params = canonical(omega)
    for s in a0_discrete_spectrum(params):
        weak = b0_weak_eigenfunction(s, params, branch_f0(s), XS)
        strict = a0_eigenfunction(s, params, XS)
        nz = np.abs(strict) > 1e-12
        np.testing.assert_allclose(weak[nz] / strict[nz], 1.0, atol=1e-10)


def test_weak_rejects_origin(canonical):
    params = canonical(1.0)
    s = a0_discrete_spectrum(params)[0]
    with pytest.raises(DomainError):
        b0_weak_eigenfunction(s, params, branch_f0(s), 0.0)


def test_free_kernel_parity(canonical):
    # only the sgn(x) sigma_2 part is odd in x
    params = canonical(1.0)
    G = a0_free_expansion(params, 0.1j)
    a, b = G(np.array([0.8]))[0], G(np.array([-0.8]))[0]
    np.testing.assert_allclose((a + b) / 2, np.diag(np.diag(a)), atol=1e-15)
    np.testing.assert_allclose((a - b) / 2, a[0, 1] * np.array([[0, 1], [-1, 0]]), atol=1e-15)


def test_denominator_at_zero_energy():
    params = ModelParams(0.6, 1.0, -1.0)
    w0 = 1.0 / (2 * 0.6)
    expected = (2 * w0 * 0.36) ** 2 - 0.25 * (-1.0 + 2 * w0) ** 2
    assert a0_resolvent_denominator(params, 0.0) == pytest.approx(expected, rel=1e-14)


def test_weak_solution_is_linear_in_f0(canonical):
    params = canonical(1.0)
    s = a0_discrete_spectrum(params)[0]
    np.testing.assert_array_equal(b0_weak_eigenfunction(s, params, (0, 0), XS), 0)
    far = np.abs(a0_eigenfunction(s, params, np.array([20.0, 40.0])))
    np.testing.assert_allclose(far[1] / far[0], np.exp(-20 * s.omega_val), rtol=1e-10)
