"""Extended phase-space layer: the rank-2 wave function on (x, v), its
quadratic potential, and the rank-4 Wigner function on (x, p, p', p'').

The rank-2 wave function is the square root of the ground-state Wigner
function dressed with the bilinear phase -(m Omega^2 x v + E12)/hbar2;
positivity of the ground state (and only the ground state) makes the
square root well defined.  The cross coefficient of the rank-2 potential
carries d(Omega^2)/dt, which is why width states track a third sigma
derivative.

The printed closed form of the rank-4 function leaves the relative sign
of one quadratic term ambiguous; both variants are implemented behind
``variant`` ("reduced" recovers the stationary-oscillator limit and is
the default, "paper" flips the sign) and the transport probe can rank
them empirically.
"""

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import (driver_state, omega_squared, omega_squared_rate,
                       sigma_sq_integral)
from .quadrature import Axis, GridSpec, make_report

VARIANTS = ("reduced", "paper")


@dataclass(frozen=True)
class ExtendedPhasePoint:
    """(x, p, p', p'') coordinates; fields may be broadcastable arrays."""

    x: object
    p: object
    p_dot: object
    p_ddot: object


@dataclass(frozen=True)
class Rank2Params:
    """Physical constants plus the accumulated rank-2 phase energy E12.

    The free gauge function of the rank-2 phase is fixed to -2 E12/hbar2,
    with dE12/dt = m hbar2^2 sigma^2 / hbar^2 (nonnegative).
    """

    params: object
    E12: float = 0.0


@dataclass(frozen=True)
class EtaXi:
    """The two auxiliary time functions of the rank-4 closed form.

    xi is undefined when sigma' = 0 (it carries a 1/sigma'^2); that case
    is signalled by xi = None, while eta is always available.
    """

    eta: float
    xi: float


def eta_xi(state, params):
    s, sd, sdd = state.sigma, state.sigma_dot, state.sigma_ddot
    m, hbar = params.m, params.hbar
    eta = (hbar**2 - 4.0 * m**2 * s**3 * sdd) / (4.0 * m * s**4)
    if sd == 0.0:
        return EtaXi(eta=eta, xi=None)
    xi = (hbar**2 + 4.0 * m**2 * s**2 * sd**2) / (4.0 * m**2 * s**2 * sd**2)
    return EtaXi(eta=eta, xi=xi)


def rank2_energy_rate(state, params):
    """dE12/dt = m hbar2^2 sigma^2 / hbar^2."""
    return params.m * params.hbar2**2 * state.sigma**2 / params.hbar**2


def rank2_energy(driver, params, t):
    """Accumulated rank-2 phase energy with the gauge E12(0) = 0."""
    return params.m * params.hbar2**2 / params.hbar**2 * sigma_sq_integral(driver, params, t)


def _rank2_modulus_exponent(state, params, x, v):
    s, sd, m = state.sigma, state.sigma_dot, params.m
    return -(x**2) / (4.0 * s**2) - m**2 / params.hbar**2 * (sd * x - s * v) ** 2


def psi_rank2(state, r2, x, v):
    """Rank-2 wave function on (x, v); |psi|^2 equals the ground-state
    Wigner function at p = m v."""
    params = r2.params
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    w2 = omega_squared(state, params)
    phase = -(params.m * w2 * x * v + r2.E12) / params.hbar2
    norm = 1.0 / math.sqrt(math.pi * params.hbar)
    return norm * np.exp(_rank2_modulus_exponent(state, params, x, v) + 1j * phase)


def potential_U12_coefficients(state, params):
    """(v^2, xv, x^2) coefficients of the rank-2 quadratic potential.

    Derived from the rank-2 evolution equation; the cross coefficient is
    d(m Omega^2)/dt - 4 hbar2^2 m^3 sigma^3 sigma' / hbar^4, which needs
    the third sigma derivative carried by SigmaState.
    """
    s, sd = state.sigma, state.sigma_dot
    m, hbar, hbar2 = params.m, params.hbar, params.hbar2
    w2 = omega_squared(state, params)
    k = hbar2**2 * m**3 / hbar**4
    c_vv = m * w2 + 2.0 * k * s**4
    c_xv = m * omega_squared_rate(state, params) - 4.0 * k * s**3 * sd
    c_xx = 2.0 * k * s**2 * sd**2 - 0.5 * m * w2**2
    return c_vv, c_xv, c_xx


def potential_U12(state, params, x, v):
    """Rank-2 potential U(x, v, t), a quadratic form in (x, v)."""
    c_vv, c_xv, c_xx = potential_U12_coefficients(state, params)
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    return c_vv * v**2 + c_xv * x * v + c_xx * x**2


def _rank4_exponent(state, params, pt, variant):
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")
    sign = 1.0 if variant == "reduced" else -1.0
    s, sd = state.sigma, state.sigma_dot
    m, hbar, hbar2 = params.m, params.hbar, params.hbar2
    eta = eta_xi(state, params).eta
    x = np.asarray(pt.x, dtype=float)
    p = np.asarray(pt.p, dtype=float)
    pd = np.asarray(pt.p_dot, dtype=float)
    pdd = np.asarray(pt.p_ddot, dtype=float)

    base = -(x**2) / (2.0 * s**2) - 2.0 / hbar**2 * (m * sd * x - s * p) ** 2
    b = pd + eta * x
    d = s * (m * pdd - eta * p) - m * sd * b
    extra = -2.0 / (m**2 * hbar2**2) * (d**2 + sign * hbar**2 / (4.0 * s**2) * b**2)
    return base + extra


def wigner_rank4(state, params, pt, variant="reduced"):
    """Rank-4 Wigner function; a strictly positive Gaussian in the
    four-dimensional kinematic space (for the default variant)."""
    return (1.0 / (math.pi * params.hbar2) ** 2
            * np.exp(_rank4_exponent(state, params, pt, variant)))


def rank2_grid(state, params, points=(81, 81), tails=6.0):
    """Rectangular (x, v) grid covering the rank-2 Gaussian support."""
    s, sd, m = state.sigma, state.sigma_dot, params.m
    x_half = tails * s
    v_half = tails * (params.hbar / (2.0 * m * s) + abs(sd))
    return GridSpec.plane(Axis(0.0, x_half, points[0]), Axis(0.0, v_half, points[1]))


def rank4_grid(state, params, points=9, tails=2.5):
    """Coarse 4-D probe grid roughly matched to the rank-4 Gaussian."""
    s, sd, m = state.sigma, state.sigma_dot, params.m
    hbar, hbar2 = params.hbar, params.hbar2
    eta = abs(eta_xi(state, params).eta)
    x_half = tails * s
    p_half = tails * (hbar / (2.0 * s) + m * abs(sd))
    b_half = tails * (m * hbar2 * s / hbar)
    pd_half = b_half + eta * x_half
    pdd_half = (tails * hbar2 / s + eta * p_half + m * abs(sd) * pd_half / s) / m
    return GridSpec((Axis(0.0, x_half, points), Axis(0.0, p_half, points),
                     Axis(0.0, pd_half, points), Axis(0.0, pdd_half, points)))


def schrodinger2_residual(driver, params, grid, t, dt=1e-3):
    """Residual of the rank-2 evolution equation

        i hbar2 (d_t + v d_x) psi = -(hbar2^2/2m) d_vv psi + U12 psi

    with analytic (x, v) derivatives and a centered time difference;
    normalized by max of the right-hand side.
    """
    state = driver_state(driver, params, t, t_hint=t + 2 * dt)
    xg, vg = grid.meshgrid()
    m, hbar, hbar2 = params.m, params.hbar, params.hbar2

    def psi_at(at):
        st = driver_state(driver, params, at, t_hint=t + 2 * dt)
        r2 = Rank2Params(params=params, E12=rank2_energy(driver, params, at))
        return psi_rank2(st, r2, xg, vg)

    psi = psi_at(t)
    psi_t = (psi_at(t + dt) - psi_at(t - dt)) / (2.0 * dt)

    s, sd = state.sigma, state.sigma_dot
    w2 = omega_squared(state, params)
    shifted = sd * xg - s * vg
    g_x = -xg / (2.0 * s**2) - 2.0 * m**2 * sd / hbar**2 * shifted
    g_v = 2.0 * m**2 * s / hbar**2 * shifted
    g_vv = -2.0 * m**2 * s**2 / hbar**2
    phi_x = -m * w2 * vg / hbar2
    phi_v = -m * w2 * xg / hbar2
    psi_x = psi * (g_x + 1j * phi_x)
    psi_vv = psi * ((g_v + 1j * phi_v) ** 2 + g_vv)

    rhs = -hbar2**2 / (2.0 * m) * psi_vv + potential_U12(state, params, xg, vg) * psi
    residual = 1j * hbar2 * (psi_t + vg * psi_x) - rhs
    return make_report(residual, np.abs(rhs).max(), dt)


@dataclass(frozen=True)
class Rank4TransportReport:
    """Transport probe of the rank-4 function at dt and dt/2.

    ``consistent`` records whether the residual both stays small and
    shrinks like dt^2; a False value flags structural disagreement of the
    probed transport equation with the closed form.
    """

    variant: str
    max_norm: float
    max_norm_half: float
    ratio: float
    consistent: bool
    scale: float
    dt: float


def _rank4_residual_once(driver, params, grid, t, dt, variant):
    state = driver_state(driver, params, t, t_hint=t + 2 * dt)
    xg, pg, pdg, pddg = grid.meshgrid()
    pt = ExtendedPhasePoint(x=xg, p=pg, p_dot=pdg, p_ddot=pddg)
    m, hbar, hbar2 = params.m, params.hbar, params.hbar2
    s, sd = state.sigma, state.sigma_dot
    sign = 1.0 if variant == "reduced" else -1.0

    def w_at(at):
        return wigner_rank4(driver_state(driver, params, at, t_hint=t + 2 * dt),
                            params, pt, variant)

    w = w_at(t)
    w_t = (w_at(t + dt) - w_at(t - dt)) / (2.0 * dt)

    eta = eta_xi(state, params).eta
    a = m * sd * xg - s * pg
    b = pdg + eta * xg
    d = s * (m * pddg - eta * pg) - m * sd * b
    pref = 2.0 / (m**2 * hbar2**2)
    q_x = (-xg / s**2 - 4.0 * m * sd / hbar**2 * a
           - pref * (-2.0 * m * sd * eta * d + sign * hbar**2 / (2.0 * s**2) * eta * b))
    q_p = 4.0 * s / hbar**2 * a + pref * 2.0 * s * eta * d
    q_pd = -pref * (-2.0 * m * sd * d + sign * hbar**2 / (2.0 * s**2) * b)
    q_pdd = -pref * 2.0 * m * s * d

    c_vv, c_xv, c_xx = potential_U12_coefficients(state, params)
    v = pg / m
    du_dv = 2.0 * c_vv * v + c_xv * xg
    du_dx = c_xv * v + 2.0 * c_xx * xg

    terms = (w_t,
             pg / m * q_x * w,
             pdg * q_p * w,
             (pddg - du_dv) * q_pd * w,
             du_dx * q_pdd * w)
    residual = sum(terms)
    scale = max(np.abs(term).max() for term in terms)
    return residual, scale


def moyal4_residual(driver, params, grid, t, dt=1e-3, variant="reduced",
                    small=1e-4, ratio_band=(2.5, 6.0)):
    """Probe the rank-4 transport equation

        [d_t + (p/m) d_x + p' d_p + (p'' - dU/dv) d_p' + dU/dx d_p''] W = 0

    on a coarse 4-D grid at dt and dt/2.  Reports normalized max-norms,
    their ratio, and whether the probe is consistent with an exactly
    transported closed form (small residual, ~4x shrink under halving).
    """
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")
    res_full, scale_full = _rank4_residual_once(driver, params, grid, t, dt, variant)
    res_half, _ = _rank4_residual_once(driver, params, grid, t, dt / 2.0, variant)
    full = make_report(res_full, scale_full, dt)
    half = make_report(res_half, scale_full, dt / 2.0)
    ratio = full.max_norm / half.max_norm if half.max_norm > 0 else math.inf
    # a tiny residual at both steps counts as consistent even though the
    # ratio is then rounding noise
    both_tiny = max(full.max_norm, half.max_norm) < 1e-10
    consistent = bool(both_tiny or (full.max_norm < small
                                    and ratio_band[0] < ratio < ratio_band[1]))
    return Rank4TransportReport(variant=variant, max_norm=full.max_norm,
                                max_norm_half=half.max_norm, ratio=ratio,
                                consistent=consistent, scale=full.scale, dt=dt)


def compare_rank4_variants(driver, params, grid, t, dt=1e-3):
    """Run the transport probe for both sign variants; returns a dict of
    reports plus the name of the better (smaller-residual) variant."""
    reports = {v: moyal4_residual(driver, params, grid, t, dt, variant=v)
               for v in VARIANTS}
    better = min(VARIANTS, key=lambda v: reports[v].max_norm)
    return {"reports": reports, "better": better}
