"""Probability density, flow velocity and current of the evolving
Gaussian-Hermite state family, plus the continuity-equation residual.

The density of state n is

    f_n(x,t) = 1/(2^n n!) * 1/(sqrt(2 pi) sigma) * exp(-x^2/(2 sigma^2))
               * H_n(x / (sqrt(2) sigma))^2,

normalized to unity at every instant.  The transporting velocity field is
(sigma'/sigma) x plus, for a nonzero flow constant C, a singular part
C exp(x^2/(2 sigma^2)) / H_n^2 with poles on the scaled Hermite zeros.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .dynamics import driver_state
from .errors import DomainError, PoleError
from .polynomials import hermite, hermite_zeros
from .quadrature import make_report

ZERO_GUARD = 1e-6      # stay this far from density zeros in residual grids
POLE_PROXIMITY = 1e-9  # quadrature limits must keep this distance from poles


@dataclass(frozen=True)
class FlowParams:
    """Free constant of the general velocity solution and the reference
    point of its phase integral."""

    C: float = 0.0
    x0: float = 0.0


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"need lo < hi, got ({self.lo}, {self.hi})")

    def contains(self, x, margin=0.0):
        return self.lo + margin < x < self.hi - margin


def _scaled(x, sigma):
    return np.asarray(x, dtype=float) / (math.sqrt(2.0) * sigma)


def _prefactor(n, sigma):
    return 1.0 / (2.0**n * math.factorial(n) * math.sqrt(2.0 * math.pi) * sigma)


def density(n, state, x):
    """Probability density f_n(x, t); nonnegative, zero on scaled Hermite zeros."""
    xt = _scaled(x, state.sigma)
    return _prefactor(n, state.sigma) * np.exp(-(xt**2)) * hermite(n, xt) ** 2


def density_gradient(n, state, x):
    """Analytic d f_n / dx (no Hermite ratios, finite at the zeros)."""
    s = state.sigma
    xt = _scaled(x, s)
    h = hermite(n, xt)
    h1 = hermite(n - 1, xt) if n > 0 else np.zeros_like(xt)
    bracket = 2.0 * n * h1 - xt * h
    return _prefactor(n, s) * np.exp(-(xt**2)) * 2.0 * h * bracket / (math.sqrt(2.0) * s)


def pole_positions(n, state):
    """Zeros of the density / poles of the singular velocity part, in x."""
    return math.sqrt(2.0) * state.sigma * hermite_zeros(n)


def pole_intervals(n, state):
    """The n+1 open intervals the poles cut the real line into."""
    points = [-math.inf, *pole_positions(n, state).tolist(), math.inf]
    return [Interval(points[i], points[i + 1]) for i in range(len(points) - 1)]


def velocity_field(n, state, flow, x):
    """Mean velocity of the probability flow at x.

    The C = 0 branch is (sigma'/sigma) x, identical for every state
    number.  With C != 0 the singular part is added after checking that
    no evaluation point sits on a pole (within 1e-12).
    """
    x = np.asarray(x, dtype=float)
    base = (state.sigma_dot / state.sigma) * x
    if flow.C == 0.0:
        return base
    poles = pole_positions(n, state)
    if poles.size:
        dist = np.abs(x[..., None] - poles)
        if dist.min() < 1e-12:
            worst = np.unravel_index(np.argmin(dist), dist.shape)
            raise PoleError("velocity field evaluated on a pole",
                            root=float(poles[worst[-1]]))
    xt = _scaled(x, state.sigma)
    return flow.C * np.exp(xt**2) / hermite(n, xt) ** 2 + base


def probability_current(n, state, flow, x):
    """Current density f_n * <v>; computed in the cancelled form, which is
    finite everywhere and tends to C/(2^n n! sqrt(2 pi) sigma) as |x| -> inf."""
    x = np.asarray(x, dtype=float)
    advective = density(n, state, x) * (state.sigma_dot / state.sigma) * x
    return flow.C * _prefactor(n, state.sigma) + advective


def theta_integral(n, state, x0, x):
    """Phase integral sigma*sqrt(2) * int e^{u^2} H_n(u)^-2 du between the
    scaled images of x0 and x.

    Both limits must lie strictly inside one pole interval; limits within
    1e-9 of a pole are rejected (the integrand blows up like an inverse
    square there).  Antisymmetric under swapping the limits.
    """
    poles = pole_positions(n, state)
    for limit in (x0, x):
        if poles.size and np.abs(poles - limit).min() <= POLE_PROXIMITY:
            raise PoleError("integration limit too close to a pole",
                            root=float(poles[np.abs(poles - limit).argmin()]))
    intervals = pole_intervals(n, state)
    home = [iv for iv in intervals if iv.contains(x0)]
    if not home or not home[0].contains(x):
        raise DomainError(f"limits {x0} and {x} do not share a pole interval")

    scale = math.sqrt(2.0) * state.sigma

    def integrand(u):
        return math.exp(u**2) / hermite(n, u) ** 2

    value, _ = quad(integrand, x0 / scale, x / scale,
                    epsabs=1e-12, epsrel=1e-12, limit=400)
    return scale * value


def guarded_nodes(n, state, grid, guard=ZERO_GUARD):
    """Grid nodes with a guard band removed around every density zero."""
    xs = grid.nodes(0)
    poles = pole_positions(n, state)
    if poles.size:
        keep = np.abs(xs[:, None] - poles[None, :]).min(axis=1) > guard
        xs = xs[keep]
    return xs


def continuity_residual(n, driver, params, grid, t, dt=1e-3):
    """Residual of d_t f + v d_x f + f d_x v = 0 for the C = 0 flow.

    Spatial derivatives are analytic; the time derivative is a centered
    difference of step dt, so the norm shrinks ~4x when dt is halved.
    Normalization is by max |d_t f| over the guarded grid (falling back
    to the advective terms for a stationary driver).
    """
    state = driver_state(driver, params, t, t_hint=t + 2 * dt)
    xs = guarded_nodes(n, state, grid)

    plus = driver_state(driver, params, t + dt, t_hint=t + 2 * dt)
    minus = driver_state(driver, params, t - dt)
    f_t = (density(n, plus, xs) - density(n, minus, xs)) / (2.0 * dt)

    ratio = state.sigma_dot / state.sigma
    advect = ratio * xs * density_gradient(n, state, xs)
    dilate = density(n, state, xs) * ratio

    residual = f_t + advect + dilate
    scale = max(np.abs(f_t).max(), np.abs(advect).max(), np.abs(dilate).max())
    return make_report(residual, scale, dt)
