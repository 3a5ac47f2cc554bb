"""Closed-form wave function of the breathing oscillator state family,
its quadratic potential and quantum potential, and residual checks of the
Schrodinger and Hamilton-Jacobi equations.

For the regular (C = 0) flow the wave function is

    Psi_n(x,t) = (2^n n!)^(-1/2) (sqrt(2 pi) sigma)^(-1/2)
                 * exp( -x^2/(4 sigma^2)
                        - i sigma' x^2 / (4 alpha sigma)
                        - i E_n(t)/hbar )
                 * H_n(x / (sqrt(2) sigma)),

with |Psi_n|^2 equal to the transported density and the phase energy
accumulating at rate (hbar^2/2m)(n + 1/2)/sigma^2 (gauge E_n(0) = 0).
"""

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import driver_state, omega_squared, sigma_inverse_sq_integral
from .polynomials import hermite
from .quadrature import make_report


def phase_energy_rate(n, state, params):
    """dE_n/dt = (hbar^2 / 2m) (n + 1/2) / sigma^2; strictly positive."""
    if n < 0:
        raise ValueError("state number must be nonnegative")
    return params.hbar**2 * (n + 0.5) / (2.0 * params.m * state.sigma**2)


@dataclass(frozen=True)
class PhaseAccumulator:
    """Accumulated phase energy E_n(t) with the gauge E_n(0) = 0.

    E_n(t) = (hbar^2/2m)(n + 1/2) * integral_0^t sigma^-2; the integral is
    exact for closed-form drivers and rides along the ODE integration for
    the Mathieu driver.
    """

    n: int
    driver: object
    params: object

    def energy(self, t):
        j = sigma_inverse_sq_integral(self.driver, self.params, t)
        return self.params.hbar**2 * (self.n + 0.5) / (2.0 * self.params.m) * j

    def rate(self, t):
        return phase_energy_rate(self.n, driver_state(self.driver, self.params, t),
                                 self.params)


def wavefunction(n, state, params, energy, x):
    """Complex amplitude Psi_n at x given the accumulated phase energy."""
    s = state.sigma
    x = np.asarray(x, dtype=float)
    xt = x / (math.sqrt(2.0) * s)
    norm = 1.0 / math.sqrt(2.0**n * math.factorial(n)) / math.sqrt(math.sqrt(2.0 * math.pi) * s)
    phase = -state.sigma_dot * x**2 / (4.0 * params.alpha * s) - params.beta * energy
    return norm * np.exp(-(x**2) / (4.0 * s**2) + 1j * phase) * hermite(n, xt)


def potential_U1(state, params, x):
    """Quadratic oscillator potential m Omega^2(t) x^2 / 2.

    Omega^2 comes from the width function, so this single implementation
    covers both printed forms of the potential.
    """
    x = np.asarray(x, dtype=float)
    return 0.5 * params.m * omega_squared(state, params) * x**2


def quantum_potential(n, state, params, x):
    """Density-curvature (quantum) potential of state n.

    Q_n = -hbar^2/(8 m sigma^4) * [x^2 - 2 sigma^2 (1 + 2n)]; an inverted
    parabola with its maximum at the origin.
    """
    s = state.sigma
    x = np.asarray(x, dtype=float)
    return -params.hbar**2 / (8.0 * params.m * s**4) * (x**2 - 2.0 * s**2 * (1.0 + 2.0 * n))


def sqrt_density_curvature(n, state, x):
    """(1/sqrt(f)) d^2 sqrt(f)/dx^2 in closed form: (xt^2 - 1 - 2n)/(2 sigma^2).

    Valid away from the density zeros (the curvature of |Psi| has kinks
    there).
    """
    s = state.sigma
    xt = np.asarray(x, dtype=float) / (math.sqrt(2.0) * s)
    return (xt**2 - 1.0 - 2.0 * n) / (2.0 * s**2)


def _wavefunction_xx(n, state, params, energy, x):
    # second spatial derivative of the product gaussian * H_n, all analytic
    s = state.sigma
    x = np.asarray(x, dtype=float)
    c = 1.0 / (math.sqrt(2.0) * s)
    gamma = -1.0 / (4.0 * s**2) - 1j * state.sigma_dot / (4.0 * params.alpha * s)
    norm = 1.0 / math.sqrt(2.0**n * math.factorial(n)) / math.sqrt(math.sqrt(2.0 * math.pi) * s)
    envelope = norm * np.exp(gamma * x**2 - 1j * params.beta * energy)
    xt = c * x
    h = hermite(n, xt)
    h1 = hermite(n - 1, xt) if n >= 1 else 0.0
    h2 = hermite(n - 2, xt) if n >= 2 else 0.0
    poly = ((2.0 * gamma + 4.0 * gamma**2 * x**2) * h
            + 8.0 * gamma * x * c * n * h1
            + 4.0 * n * (n - 1) * c**2 * h2)
    return envelope * poly


def schrodinger_residual(n, driver, params, grid, t, dt=1e-3):
    """Residual of i hbar d_t Psi = -(hbar^2/2m) d_xx Psi + U Psi.

    d_xx is analytic (Hermite recurrences); d_t is a centered difference,
    making the normalized norm 2nd order in dt.  Normalization is by
    max |H Psi| over the grid.
    """
    acc = PhaseAccumulator(n, driver, params)
    xs = grid.nodes(0)

    def psi(at):
        return wavefunction(n, driver_state(driver, params, at, t_hint=t + 2 * dt),
                            params, acc.energy(at), xs)

    state = driver_state(driver, params, t, t_hint=t + 2 * dt)
    psi_t = (psi(t + dt) - psi(t - dt)) / (2.0 * dt)
    h_psi = (-params.hbar**2 / (2.0 * params.m)
             * _wavefunction_xx(n, state, params, acc.energy(t), xs)
             + potential_U1(state, params, xs) * psi(t))
    residual = 1j * params.hbar * psi_t - h_psi
    return make_report(residual, np.abs(h_psi).max(), dt)


def hamilton_jacobi_residual(n, driver, params, grid, t, dt=1e-3):
    """Residual of the Hamilton-Jacobi form of the evolution:

        -beta U = d_t phi + alpha (1/sqrt(f)) d_xx sqrt(f) - alpha (d_x phi)^2.

    The phase phi comes from the continuous-in-t accumulator (no 2 pi
    jumps to unwrap); only d_t phi is a centered difference.  The grid is
    guarded around density zeros where the curvature term is singular.
    """
    from .vlasov import guarded_nodes

    acc = PhaseAccumulator(n, driver, params)
    state = driver_state(driver, params, t, t_hint=t + 2 * dt)
    xs = guarded_nodes(n, state, grid)

    def phase(at):
        st = driver_state(driver, params, at, t_hint=t + 2 * dt)
        return (-st.sigma_dot * xs**2 / (4.0 * params.alpha * st.sigma)
                - params.beta * acc.energy(at))

    phi_t = (phase(t + dt) - phase(t - dt)) / (2.0 * dt)
    phi_x = -state.sigma_dot * xs / (2.0 * params.alpha * state.sigma)
    curvature = params.alpha * sqrt_density_curvature(n, state, xs)
    potential_term = params.beta * potential_U1(state, params, xs)

    residual = potential_term + phi_t + curvature - params.alpha * phi_x**2
    scale = max(np.abs(potential_term).max(), np.abs(phi_t).max(),
                np.abs(curvature).max(), np.abs(params.alpha * phi_x**2).max())
    return make_report(residual, scale, dt)
