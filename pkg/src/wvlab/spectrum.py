"""Time-dependent energy spectra of the breathing oscillator.

Two independent routes to E_n(t):

* quadrature -- average the instantaneous energy function
  p^2/2m + m Omega^2 x^2 / 2 over the Wigner function on a verified grid;
* trajectory -- launch one classical trajectory per state from
  (x, p) = (0, sqrt(2 m E_n(0))) and read the energy function along it.

The closed-form second-moment value

    E_n(t) = (2n+1) [ hbar^2/(4 m sigma^2) + (m/2)(sigma'^2 - sigma sigma'') ]

follows from the analytic moments of the Wigner quadratic form and
serves as the oracle for the quadrature route.
"""

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import driver_state, integrate_hill, omega_squared
from .errors import AccuracyError, PoleError
from .quadrature import Axis, GridSpec, integrate
from .vlasov import ZERO_GUARD, density, pole_positions
from .wigner import PhasePoint, momentum_axis, wigner


@dataclass(frozen=True)
class SpectrumSample:
    t: float
    n: int
    energy: float
    method: str


def energy_function(state, params, pt):
    """Instantaneous energy p^2/2m + m Omega^2(t) x^2/2 (negative allowed
    when Omega^2 < 0)."""
    x = np.asarray(pt.x, dtype=float)
    p = np.asarray(pt.p, dtype=float)
    return p**2 / (2.0 * params.m) + 0.5 * params.m * omega_squared(state, params) * x**2


def energy_second_moment(n, state, params):
    """Closed-form spectrum value from the analytic Wigner moments."""
    s, sd, sdd = state.sigma, state.sigma_dot, state.sigma_ddot
    return (2.0 * n + 1.0) * (params.hbar**2 / (4.0 * params.m * s**2)
                              + 0.5 * params.m * (sd**2 - s * sdd))


def spectrum_by_quadrature(n, state, params, grid=None, rtol=1e-6):
    """E_n(t) by 2-D quadrature of W_n * energy over phase space.

    With no explicit grid the integration runs in the shear-following
    coordinates (x, q = p - m sigma'/sigma x), where the distribution is
    separable; a unit Jacobian makes the value identical and the grid
    stays well-resolved however strongly the state is sheared.  The
    built-in Richardson estimate must agree with the fine value to rtol
    (relative to the energy scale), otherwise the grid is declared
    under-resolved and AccuracyError is raised.
    """
    if grid is None:
        s = state.sigma
        spread = math.sqrt(2.0 * n + 1.0)
        shear = params.m * state.sigma_dot / s
        grid = GridSpec.plane(
            Axis(0.0, 8.0 * spread * s * math.sqrt(2.0), 321),
            Axis(0.0, 8.0 * spread * params.hbar / (2.0 * s) * math.sqrt(2.0), 321))

        def integrand(x, q):
            pt = PhasePoint(x=x, p=q + shear * x)
            return wigner(n, state, params, pt) * energy_function(state, params, pt)
    else:
        def integrand(x, p):
            pt = PhasePoint(x=x, p=p)
            return wigner(n, state, params, pt) * energy_function(state, params, pt)

    value, err = integrate(integrand, grid)
    scale = max(abs(value), params.hbar**2 / (4.0 * params.m * state.sigma**2))
    if err > rtol * scale:
        raise AccuracyError(
            f"spectrum quadrature under-resolved: estimate {err:.3e} "
            f"exceeds {rtol:.1e} * {scale:.3e} (n={n}, t={state.t})")
    return SpectrumSample(t=state.t, n=n, energy=value, method="quadrature")


def spectrum_by_trajectory(n, driver, params, t_grid, h=None, grid=None,
                           launch=None):
    """E_n along one classical trajectory, sampled at the times in t_grid.

    The launch point defaults to x = 0 with all the energy in the
    momentum, p0 = sqrt(2 m E_n(0)), E_n(0) taken from the quadrature
    route; pass ``launch=(x0, p0)`` to override the phase of the launch.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or t_grid.size == 0 or np.any(t_grid < 0):
        raise ValueError("t_grid must be a nonempty 1-D array of times >= 0")
    t_end = float(t_grid.max())

    if launch is None:
        e0 = spectrum_by_quadrature(n, driver_state(driver, params, 0.0,
                                                    t_hint=t_end), params, grid).energy
        launch = (0.0, math.sqrt(2.0 * params.m * e0))

    def omega2_of_t(t):
        return omega_squared(driver_state(driver, params, t, t_hint=t_end), params)

    kwargs = {} if h is None else {"h": h}
    traj = integrate_hill(omega2_of_t, launch[0], launch[1], params,
                          max(t_end, 1e-9), **kwargs)

    samples = []
    for t in t_grid:
        x, p = traj.at(t) if t > 0 else (launch[0], launch[1])
        state = driver_state(driver, params, float(t), t_hint=t_end)
        e = float(energy_function(state, params, PhasePoint(x=x, p=p)))
        samples.append(SpectrumSample(t=float(t), n=n, energy=e, method="trajectory"))
    return samples


def mean_energy_field(n, state, params, x, grid=None):
    """Conditional energy given x: p-average of W_n (p^2/2m + U) over the
    density.  Diverges toward the density zeros, which are rejected as
    pole proximity (that divergence is the expected physics)."""
    poles = pole_positions(n, state)
    if poles.size and np.abs(poles - x).min() <= ZERO_GUARD:
        raise PoleError("conditional energy diverges at a density zero",
                        root=float(poles[np.abs(poles - x).argmin()]))
    if grid is None:
        grid = momentum_axis(n, state, params, x=float(x))
    ps = grid.nodes(0)
    w = wigner(n, state, params, PhasePoint(x=float(x), p=ps))
    kinetic = np.trapezoid(w * ps**2, dx=grid.axes[0].spacing) / (2.0 * params.m)
    potential = 0.5 * params.m * omega_squared(state, params) * float(x) ** 2
    return kinetic / density(n, state, x) + potential
