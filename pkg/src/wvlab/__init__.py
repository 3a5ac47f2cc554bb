"""wvlab: phase-space toolkit for the quantum oscillator with
time-dependent frequency.

Closed-form densities, wave functions and Wigner functions driven by a
width function sigma(t); Mathieu/Floquet stability of the associated
Hill problem; two independent time-dependent energy-spectrum routes; and
a battery of residual checks that verify the closed forms against the
evolution equations they solve.
"""

from .dynamics import (ConstantDriver, MathieuDriver, PhaseTrajectory,
                       PhysicalParams, SeparatrixDriver, SigmaState,
                       SigmaTrajectory, SinSquaredDriver, StabilityVerdict,
                       driver_state, floquet_classify, integrate_hill,
                       omega_squared, omega_squared_rate, sigma_eval,
                       solve_sigma_ode)
from .errors import (AccuracyError, ConditioningError, DomainError,
                     EvaluationError, IntegrationError, PoleError,
                     SingularityError, WvlabError)
from .highrank import (EtaXi, ExtendedPhasePoint, Rank2Params,
                       Rank4TransportReport, compare_rank4_variants, eta_xi,
                       moyal4_residual, potential_U12, psi_rank2, rank2_energy,
                       rank2_grid, rank4_grid, schrodinger2_residual,
                       wigner_rank4)
from .polynomials import hermite, hermite_derivative, hermite_zeros, laguerre
from .quadrature import (Axis, GridSpec, ResidualReport, central_diff,
                         convergence_ratio, integrate, rk4_step)
from .spectrum import (SpectrumSample, energy_function, energy_second_moment,
                       mean_energy_field, spectrum_by_quadrature,
                       spectrum_by_trajectory)
from .vlasov import (FlowParams, Interval, continuity_residual, density,
                     pole_intervals, pole_positions, probability_current,
                     theta_integral, velocity_field)
from .wavefunction import (PhaseAccumulator, hamilton_jacobi_residual,
                           phase_energy_rate, potential_U1, quantum_potential,
                           schrodinger_residual, sqrt_density_curvature,
                           wavefunction)
from .wigner import (EllipseGeometry, PhasePoint, ellipse_geometry, epsilon,
                     epsilon_material_derivative, mean_velocity_from_wigner,
                     moyal_residual, phase_grid, pressure_force_from_wigner,
                     second_moments, wigner, wigner_from_transform)

__version__ = "0.1.0"
