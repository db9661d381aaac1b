import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from socbound import (BranchPointError, DegenerateCubicError, DomainError, ModelParams, PoleError,
                      SocBoundError, SpinorValue, lambda_zero, omega_of_eps, validate)
from socbound.model import SIGMA_1, SIGMA_2, SIGMA_3

etas = st.floats(0.05, 3.0)
omegas = st.floats(0.0, 5.0)


def test_pauli_algebra():
    for s in (SIGMA_1, SIGMA_2, SIGMA_3):
        np.testing.assert_allclose(s @ s, np.eye(2))
    np.testing.assert_allclose(SIGMA_1 @ SIGMA_2, 1j * SIGMA_3)


def test_params_are_floats_and_frozen():
    p = ModelParams(1, 2, -1)
    assert isinstance(p.eta, float)
    with pytest.raises(AttributeError):
        p.eta = 3.0


def test_replace_and_scale():
    p = ModelParams(0.6, 0.5, -1.0)
    assert p.replace(omega=2.0) == ModelParams(0.6, 2.0, -1.0)
    assert p.scale == 1.0
    assert ModelParams(3.0, 2.0, -1.0).scale == 9.0


@pytest.mark.parametrize("field", ["eta", "omega", "gamma"])
def test_nonfinite_rejected(field):
    values = {"eta": 0.6, "omega": 0.5, "gamma": -1.0, field: math.nan}
    with pytest.raises(DomainError, match=field):
        ModelParams(**values)


@pytest.mark.parametrize("params, message", [
    (ModelParams(-0.1, 0.5, -1.0), "eta must be nonnegative"),
    (ModelParams(0.6, -0.5, -1.0), "omega must be nonnegative"),
    (ModelParams(0.6, 0.5, 0.0), "gamma must be nonzero"),
])
def test_validate_messages(params, message):
    with pytest.raises(DomainError, match=message):
        validate(params)


def test_validate_passes_through():
    p = ModelParams(0.0, 0.0, 2.0)
    assert validate(p) is p


def test_spinor_round_trip():
    s = SpinorValue(1 + 2j, -3)
    assert SpinorValue.from_array(s.as_array()) == s


def test_error_hierarchy():
    assert issubclass(BranchPointError, DomainError)
    assert issubclass(DegenerateCubicError, ValueError)
    assert issubclass(PoleError, SocBoundError)


@given(etas, st.floats(0.01, 5.0), st.floats(-0.999, 0.999))
def test_binding_rate_identity(eta, omega, t):
    p = ModelParams(eta, omega, -1.0)
    eps = t * omega / 2
    w = omega_of_eps(p, eps)
    assert w > 0
    assert math.isclose((2 * eta * w) ** 2 + 4 * eps**2, omega**2, rel_tol=1e-12, abs_tol=1e-14)


def test_binding_rate_vectorized():
    p = ModelParams(0.6, 1.0, -1.0)
    eps = np.array([-0.4, 0.0, 0.3])
    np.testing.assert_allclose(omega_of_eps(p, eps), [omega_of_eps(p, e) for e in eps])


@pytest.mark.parametrize("eps", [0.5, -0.5, 0.7])
def test_binding_rate_outside_gap(eps):
    with pytest.raises(DomainError):
        omega_of_eps(ModelParams(0.6, 1.0, -1.0), eps)


def test_binding_rate_needs_eta():
    with pytest.raises(DomainError):
        omega_of_eps(ModelParams(0.0, 1.0, -1.0), 0.1)


@given(etas, omegas)
def test_branch_point_below_band_edge(eta, omega):
    p = ModelParams(eta, omega, -1.0)
    assert lambda_zero(p) <= -omega / 2 + 1e-12
    # lambda_0 + Omega/2 = -(eta^2 - Omega)^2 / (4 eta^2)
    assert math.isclose(lambda_zero(p) + omega / 2, -(eta**2 - omega) ** 2 / (4 * eta**2),
                        rel_tol=1e-9, abs_tol=1e-12)


def test_branch_point_value():
    assert lambda_zero(ModelParams(0.6, 0.0, -1.0)) == pytest.approx(-0.09)
