"""Spectral analysis of the 1D spin-orbit coupled Hamiltonian with a delta impurity."""
from .bound import (BoundState, EigenState, MomentumBranch, SpectrumReport, a_free_kernel,
                    a_green_kernel, cubic_coefficients, discrete_spectrum, eigenfunction_lower,
                    eigenfunction_upper, eta_zero_spectrum, momentum_branch, resolvent_condition,
                    solve_cubic, weak_eigenfunction_b, weak_resolvent_denominator)
from .dirac import (DiracBoundState, GreenMatrix, a0_discrete_spectrum, a0_eigenfunction,
                    a0_free_kernel, a0_green_kernel, a0_resolvent_denominator, b0_weak_eigenfunction)
from .dispersion import (DispersionPoint, branches, critical_momenta, dirac_essential_edge,
                         essential_edge)
from .errors import (BranchPointError, ConvergenceError, DegenerateCubicError, DomainError,
                     InconsistencyError, NoSuchStateError, PoleError, SocBoundError)
from .model import ModelParams, SpinorValue, lambda_zero, omega_of_eps, validate
from .soc import SocState, classify, resonance_points, so_states, so_weak_eigenvalue

__version__ = "0.1.0"
