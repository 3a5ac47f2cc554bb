"""Phase-space quasi-probability of the breathing oscillator states.

The state-n Wigner function is

    W_n(x, p, t) = (-1)^n / (pi hbar) * exp(-eps) * L_n(2 eps),

with the conserved quadratic form

    eps(x, p, t) = x^2/(2 sigma^2) + (2/hbar^2) (sigma p - m sigma' x)^2.

Level sets of eps are tilted ellipses of constant area; eps itself is a
characteristic of the quadratic-potential transport equation, which this
module verifies via residual and material-derivative probes.
"""

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import driver_state, omega_squared
from .errors import ConditioningError
from .polynomials import laguerre, laguerre_pair
from .quadrature import Axis, GridSpec, make_report
from .vlasov import ZERO_GUARD, density, pole_positions


@dataclass(frozen=True)
class PhasePoint:
    """(x, p) coordinates; fields may be floats or broadcastable arrays."""

    x: object
    p: object


def epsilon(state, params, pt):
    """Conserved phase-space quadratic form; >= 0, zero only at the origin."""
    s, sd, m = state.sigma, state.sigma_dot, params.m
    x = np.asarray(pt.x, dtype=float)
    p = np.asarray(pt.p, dtype=float)
    return x**2 / (2.0 * s**2) + 2.0 / params.hbar**2 * (s * p - m * sd * x) ** 2


def epsilon_gradients(state, params, pt):
    """(d eps/dx, d eps/dp), analytic."""
    s, sd, m = state.sigma, state.sigma_dot, params.m
    x = np.asarray(pt.x, dtype=float)
    p = np.asarray(pt.p, dtype=float)
    shifted = s * p - m * sd * x
    d_dx = x / s**2 - 4.0 * m * sd / params.hbar**2 * shifted
    d_dp = 4.0 * s / params.hbar**2 * shifted
    return d_dx, d_dp


def wigner(n, state, params, pt):
    """Wigner function of state n; real, negative somewhere for every n >= 1."""
    eps = epsilon(state, params, pt)
    return (-1.0) ** n / (math.pi * params.hbar) * np.exp(-eps) * laguerre(n, 2.0 * eps)


@dataclass(frozen=True)
class EllipseGeometry:
    """Level-set ellipse of eps in the dimensionless coordinates
    xt = x/(sqrt(2) sigma), pt = sqrt(2) sigma p / hbar."""

    a11: float
    a12: float
    a22: float
    theta: float
    det: float
    area_at_unit_level: float


def ellipse_geometry(state, params):
    """Coefficients, tilt angle and area of the eps = const ellipses.

    The determinant is exactly 1 by construction, so the area at unit
    level is pi at every instant.  For sigma' = 0 the ellipse is a circle
    and the angle is reported as 0 by convention.
    """
    shear = state.sigma * state.sigma_dot / params.alpha
    a11 = 1.0 + shear**2
    a12 = shear
    a22 = 1.0
    theta = 0.0 if shear == 0.0 else 0.5 * math.atan2(2.0 * a12, a11 - a22)
    det = a11 * a22 - a12**2
    return EllipseGeometry(a11=a11, a12=a12, a22=a22, theta=theta, det=det,
                           area_at_unit_level=math.pi / math.sqrt(det))


def second_moments(n, state, params):
    """Analytic (<x^2>, <p^2>, <xp>) of W_n from the quadratic form.

    The unimodular change of variables u = xt, v = a12 xt + pt maps eps to
    u^2 + v^2 with <u^2> = <v^2> = (2n+1)/2 and <uv> = 0.
    """
    s, sd, m = state.sigma, state.sigma_dot, params.m
    half = (2.0 * n + 1.0) / 2.0
    xx = 2.0 * s**2 * half
    pp = (params.hbar**2 / (4.0 * s**2) + m**2 * sd**2) * 2.0 * half
    xp = 2.0 * half * m * s * sd
    return xx, pp, xp


def phase_grid(n, state, params, points=(321, 321), tails=8.0):
    """Rectangular (x, p) grid covering ``tails`` standard deviations of W_n."""
    xx, pp, _ = second_moments(n, state, params)
    return GridSpec.plane(Axis(0.0, tails * math.sqrt(xx), points[0]),
                          Axis(0.0, tails * math.sqrt(pp), points[1]))


def momentum_axis(n, state, params, x=0.0, points=801, tails=8.0):
    """1-D momentum grid for conditional averages of W_n at fixed x.

    The conditional distribution rides a ridge centered on the local
    flow momentum m sigma'/sigma x with width ~ hbar/(2 sigma); centering
    the axis there keeps it resolved at any shear.
    """
    s = state.sigma
    center = params.m * state.sigma_dot / s * x
    half = tails * params.hbar / (2.0 * s) * math.sqrt(2.0 * n + 1.0)
    return GridSpec.line(center, half, points)


def _check_conditioning(n, state, x):
    poles = pole_positions(n, state)
    if poles.size and np.abs(poles - x).min() <= ZERO_GUARD:
        raise ConditioningError(
            f"x={x} is within {ZERO_GUARD} of a density zero; "
            "the conditional average is ill-conditioned there")


def mean_velocity_from_wigner(n, state, params, x, grid=None):
    """Conditional mean velocity (1/(m f)) int p W_n dp at fixed x.

    Matches the transporting field (sigma'/sigma) x for every n; the
    quadrature route makes that an independent consistency check.
    """
    _check_conditioning(n, state, x)
    if grid is None:
        grid = momentum_axis(n, state, params, x=float(x))
    ps = grid.nodes(0)
    w = wigner(n, state, params, PhasePoint(x=float(x), p=ps))
    flux = np.trapezoid(w * ps, dx=grid.axes[0].spacing)
    return flux / (params.m * density(n, state, x))


def pressure_force_from_wigner(n, state, params, x, grid=None, dx=1e-4):
    """Quantum pressure force -(1/f) d_x P11 at fixed x by p-quadrature and
    a centered x-difference; matches (alpha^2/sigma^4) x."""
    _check_conditioning(n, state, x)
    m = params.m

    def p11(at):
        axis = grid if grid is not None else momentum_axis(n, state, params, x=at)
        ps = axis.nodes(0)
        dp = axis.axes[0].spacing
        w = wigner(n, state, params, PhasePoint(x=at, p=ps))
        mean_v = np.trapezoid(w * ps, dx=dp) / (m * density(n, state, at))
        return np.trapezoid(w * (ps / m - mean_v) ** 2, dx=dp)

    gradient = (p11(x + dx) - p11(x - dx)) / (2.0 * dx)
    return -gradient / density(n, state, x)


def moyal_residual(n, driver, params, grid, t, dt=1e-3, omega2_override=None):
    """Residual of d_t W + (p/m) d_x W - d_x U d_p W = 0 on a 2-D grid.

    Phase-space derivatives go through the chain rule in eps (analytic);
    the time derivative is a centered difference.  Scale-free norms.
    omega2_override replaces the width-consistent Omega^2 in the force
    term; useful as a negative control (a mismatched potential must make
    this residual large).
    """
    state = driver_state(driver, params, t, t_hint=t + 2 * dt)
    xg, pg = grid.meshgrid()
    pt = PhasePoint(x=xg, p=pg)

    def w_at(at):
        return wigner(n, driver_state(driver, params, at, t_hint=t + 2 * dt), params, pt)

    w_t = (w_at(t + dt) - w_at(t - dt)) / (2.0 * dt)

    eps = epsilon(state, params, pt)
    l, l_prime = laguerre_pair(n, 2.0 * eps)
    shape = (-1.0) ** n / (math.pi * params.hbar) * np.exp(-eps) * (2.0 * l_prime - l)
    deps_dx, deps_dp = epsilon_gradients(state, params, pt)
    w_x = shape * deps_dx
    w_p = shape * deps_dp

    w2 = omega_squared(state, params) if omega2_override is None else omega2_override
    drift = pg / params.m * w_x
    force = params.m * w2 * xg * w_p
    residual = w_t + drift - force
    scale = max(np.abs(w_t).max(), np.abs(drift).max(), np.abs(force).max())
    return make_report(residual, scale, dt)


def epsilon_material_derivative(driver, params, t, pt, dt=1e-4):
    """d eps/dt along the classical flow; vanishes to O(dt^2) because eps
    is a conserved characteristic of the quadratic-potential transport."""
    state = driver_state(driver, params, t, t_hint=t + 2 * dt)
    eps_t = (epsilon(driver_state(driver, params, t + dt, t_hint=t + 2 * dt), params, pt)
             - epsilon(driver_state(driver, params, t - dt), params, pt)) / (2.0 * dt)
    deps_dx, deps_dp = epsilon_gradients(state, params, pt)
    p = np.asarray(pt.p, dtype=float)
    x = np.asarray(pt.x, dtype=float)
    return (eps_t + p / params.m * deps_dx
            - params.m * omega_squared(state, params) * x * deps_dp)


def wigner_from_transform(n, state, params, pt, energy=0.0, s_tails=16.0, s_points=4001):
    """Brute-force Wigner transform of the wave function (Fourier integral
    over the separation coordinate).  Slow; used as an independent oracle
    against the closed form."""
    from .wavefunction import wavefunction

    s_half = s_tails * state.sigma
    ss = np.linspace(-s_half, s_half, s_points)
    x = float(np.asarray(pt.x))
    p = float(np.asarray(pt.p))
    left = np.conj(wavefunction(n, state, params, energy, x - ss / 2.0))
    right = wavefunction(n, state, params, energy, x + ss / 2.0)
    phase = np.exp(-1j * p * ss / params.hbar)
    integrand = left * right * phase
    value = np.trapezoid(integrand, dx=ss[1] - ss[0])
    return float(np.real(value)) / (2.0 * math.pi * params.hbar)
