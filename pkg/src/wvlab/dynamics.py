"""Width-function drivers and dynamics.

A *driver* produces the width sigma(t) of the evolving Gaussian-Hermite
density together with its time derivatives, either in closed form
(constant, sin^2 modulation, separatrix hyperbola) or by integrating the
Ermakov-type ODE

    sigma''  =  alpha^2 / sigma^3  -  sigma * (a - 2 g cos 2t),

whose associated linear problem x'' + Omega^2(t) x = 0 is a Mathieu
equation.  The module also integrates that linear (Hill) problem and
classifies Mathieu stability through the Floquet monodromy trace.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .errors import SingularityError
from .quadrature import rk4_step

DEFAULT_ODE_STEP = math.pi / 2000.0
SIGMA_FLOOR = 1e-9


@dataclass(frozen=True)
class PhysicalParams:
    """Mass and the two action scales, with the derived constants.

    hbar2 is the action scale of the rank-2 (position-velocity) layer;
    it is a free parameter of the model and defaults to hbar.
    """

    m: float = 1.0
    hbar: float = 1.0
    hbar2: float = 1.0

    def __post_init__(self):
        if self.m <= 0 or self.hbar <= 0 or self.hbar2 <= 0:
            raise ValueError("m, hbar and hbar2 must all be positive")

    @property
    def alpha(self):
        return -self.hbar / (2.0 * self.m)

    @property
    def beta(self):
        return 1.0 / self.hbar

    @property
    def alpha2(self):
        return -self.hbar2 / (2.0 * self.m)


@dataclass(frozen=True)
class SigmaState:
    """Width function and its first three time derivatives at one instant.

    sigma_dddot is carried because the cross coefficient of the
    rank-2 potential needs d(Omega^2)/dt; every driver can supply it
    analytically (for the ODE driver, by differentiating the ODE).
    """

    t: float
    sigma: float
    sigma_dot: float
    sigma_ddot: float
    sigma_dddot: float = 0.0

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError(f"sigma must be strictly positive, got {self.sigma}")


def omega_squared(state, params):
    """Squared frequency Omega^2 = (alpha^2/sigma^3 - sigma'')/sigma.

    May be negative: the restoring force then flips sign.
    """
    s = state.sigma
    return (params.alpha**2 / s**3 - state.sigma_ddot) / s


def omega_squared_rate(state, params):
    """d(Omega^2)/dt from sigma', sigma'', sigma'''."""
    s, sd, sdd, sddd = state.sigma, state.sigma_dot, state.sigma_ddot, state.sigma_dddot
    return -4.0 * params.alpha**2 * sd / s**5 - (sddd * s - sdd * sd) / s**2


# ---------------------------------------------------------------------------
# drivers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConstantDriver:
    """sigma(t) = sigma0: the stationary oscillator."""

    sigma0: float

    def __post_init__(self):
        if self.sigma0 <= 0:
            raise ValueError("sigma0 must be positive")

    @classmethod
    def from_frequency(cls, omega0, params):
        """Stationary width for frequency omega0: sigma0^2 = hbar/(2 m omega0)."""
        if omega0 <= 0:
            raise ValueError("omega0 must be positive")
        return cls(math.sqrt(abs(params.alpha) / omega0))


@dataclass(frozen=True)
class SinSquaredDriver:
    """sigma(t) = sigma0 * (1 + sin^2(varpi0 t)): periodic breathing."""

    sigma0: float
    varpi0: float

    def __post_init__(self):
        if self.sigma0 <= 0:
            raise ValueError("sigma0 must be positive")


@dataclass(frozen=True)
class SeparatrixDriver:
    """sigma^2(t) = c1^2 (t +/- c2)^2 + alpha^2/c1^2: the Omega == 0 family.

    On this family the potential degenerates and the system is a free
    particle.  ``sign`` selects the branch (t + c2) or (t - c2).
    """

    c1: float
    c2: float = 0.0
    sign: int = 1

    def __post_init__(self):
        if self.c1 == 0:
            raise ValueError("c1 must be nonzero")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")


@dataclass
class MathieuDriver:
    """Width driven by the Ermakov ODE with Mathieu coefficient a - 2g cos 2t.

    sigma0 = None selects the g = 0 equilibrium (alpha^2/a)^(1/4), which
    starts the width near-stationary before the parametric growth sets in.
    Evaluation solves the ODE once per needed horizon and interpolates.
    """

    a: float
    g: float
    sigma0: float = None
    sigma_dot0: float = 0.0
    step: float = DEFAULT_ODE_STEP
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def resolved_sigma0(self, params):
        if self.sigma0 is not None:
            return self.sigma0
        if self.a <= 0:
            raise ValueError("default sigma0 needs a > 0; set sigma0 explicitly")
        return (params.alpha**2 / self.a) ** 0.25

    def trajectory(self, params, t_end):
        """Solved trajectory covering at least [0, t_end] (cached, grown on demand)."""
        key = (params.m, params.hbar, params.hbar2)
        traj = self._cache.get(key)
        if traj is None or traj.t_end < t_end:
            horizon = max(t_end * 1.25, t_end + 1.0, 2.0)
            traj = solve_sigma_ode(
                self.a, self.g, params, self.resolved_sigma0(params),
                self.sigma_dot0, horizon, self.step,
            )
            self._cache[key] = traj
        return traj


# ---------------------------------------------------------------------------
# closed-form evaluation
# ---------------------------------------------------------------------------

def sigma_eval(driver, params, t):
    """SigmaState of a closed-form driver at time t (derivatives analytic).

    The ODE-driven variant is rejected here: solve it with solve_sigma_ode
    (or evaluate through driver_state, which handles both).
    """
    if isinstance(driver, ConstantDriver):
        return SigmaState(t=t, sigma=driver.sigma0, sigma_dot=0.0, sigma_ddot=0.0,
                          sigma_dddot=0.0)
    if isinstance(driver, SinSquaredDriver):
        s0, w = driver.sigma0, driver.varpi0
        return SigmaState(
            t=t,
            sigma=s0 * (1.0 + math.sin(w * t) ** 2),
            sigma_dot=s0 * w * math.sin(2.0 * w * t),
            sigma_ddot=2.0 * s0 * w**2 * math.cos(2.0 * w * t),
            sigma_dddot=-4.0 * s0 * w**3 * math.sin(2.0 * w * t),
        )
    if isinstance(driver, SeparatrixDriver):
        u = t + driver.sign * driver.c2
        c1sq = driver.c1**2
        sigma = math.sqrt(c1sq * u**2 + params.alpha**2 / c1sq)
        sigma_dot = c1sq * u / sigma
        sigma_ddot = (c1sq - sigma_dot**2) / sigma
        return SigmaState(t=t, sigma=sigma, sigma_dot=sigma_dot,
                          sigma_ddot=sigma_ddot,
                          sigma_dddot=-3.0 * sigma_dot * sigma_ddot / sigma)
    if isinstance(driver, MathieuDriver):
        raise ValueError("MathieuDriver has no closed form; use solve_sigma_ode")
    raise TypeError(f"unknown driver {driver!r}")


def driver_state(driver, params, t, t_hint=None):
    """SigmaState of any driver at time t (solves/interpolates when needed).

    t_hint, when given, pre-extends the ODE horizon so repeated residual
    stencils around a target time reuse one cached trajectory.
    """
    if isinstance(driver, MathieuDriver):
        horizon = max(t, t_hint if t_hint is not None else 0.0)
        return driver.trajectory(params, horizon + 0.1).state(t)
    return sigma_eval(driver, params, t)


def sigma_inverse_sq_integral(driver, params, t):
    """J(t) = integral_0^t sigma(s)^-2 ds (drives the wave-function phase)."""
    if isinstance(driver, ConstantDriver):
        return t / driver.sigma0**2
    if isinstance(driver, SeparatrixDriver):
        c1sq = driver.c1**2
        k = abs(params.alpha)

        def anti(u):  # d/du [ atan(c1^2 u / k) / k ] = 1 / (c1^2 u^2 + k^2/c1^2)
            return math.atan(c1sq * u / k) / k

        return anti(t + driver.sign * driver.c2) - anti(driver.sign * driver.c2)
    if isinstance(driver, MathieuDriver):
        return driver.trajectory(params, t + 0.1).inverse_sq_integral(t)
    value, _ = quad(lambda s: sigma_eval(driver, params, s).sigma ** -2, 0.0, t,
                    epsabs=1e-13, epsrel=1e-13, limit=400)
    return value


def sigma_sq_integral(driver, params, t):
    """K(t) = integral_0^t sigma(s)^2 ds (drives the rank-2 phase)."""
    if isinstance(driver, ConstantDriver):
        return driver.sigma0**2 * t
    if isinstance(driver, SeparatrixDriver):
        c1sq = driver.c1**2
        asq = params.alpha**2

        def anti(u):
            return c1sq * u**3 / 3.0 + asq * u / c1sq

        return anti(t + driver.sign * driver.c2) - anti(driver.sign * driver.c2)
    if isinstance(driver, MathieuDriver):
        return driver.trajectory(params, t + 0.1).sq_integral(t)
    value, _ = quad(lambda s: sigma_eval(driver, params, s).sigma ** 2, 0.0, t,
                    epsabs=1e-13, epsrel=1e-13, limit=400)
    return value


# ---------------------------------------------------------------------------
# cubic Hermite interpolation on a uniform grid
# ---------------------------------------------------------------------------

def _hermite_interp(ts, values, derivs, step, t):
    i = min(max(int(t / step), 0), len(ts) - 2)
    u = (t - ts[i]) / step
    h00 = (1.0 + 2.0 * u) * (1.0 - u) ** 2
    h10 = u * (1.0 - u) ** 2
    h01 = u**2 * (3.0 - 2.0 * u)
    h11 = u**2 * (u - 1.0)
    return (h00 * values[i] + h10 * step * derivs[i]
            + h01 * values[i + 1] + h11 * step * derivs[i + 1])


@dataclass(frozen=True)
class SigmaTrajectory:
    """Uniformly sampled solution of the width ODE.

    Node values carry sigma through its 4th derivative so every
    interpolated quantity (including sigma''') is cubic-Hermite smooth,
    and the running integrals of sigma^2 and sigma^-2 ride along the
    same integration.
    """

    params: PhysicalParams
    a: float
    g: float
    step: float
    times: np.ndarray
    sigma: np.ndarray
    sigma_dot: np.ndarray
    sigma_ddot: np.ndarray
    sigma_dddot: np.ndarray
    sigma_ddddot: np.ndarray
    inv_sq: np.ndarray
    sq: np.ndarray

    @property
    def t_end(self):
        return float(self.times[-1])

    @property
    def samples(self):
        return [
            SigmaState(t=float(self.times[i]), sigma=float(self.sigma[i]),
                       sigma_dot=float(self.sigma_dot[i]),
                       sigma_ddot=float(self.sigma_ddot[i]),
                       sigma_dddot=float(self.sigma_dddot[i]))
            for i in range(len(self.times))
        ]

    def _check_range(self, t):
        if t < 0.0 or t > self.t_end + 1e-12:
            raise ValueError(f"t={t} outside solved range [0, {self.t_end}]")

    def state(self, t):
        self._check_range(t)
        return SigmaState(
            t=t,
            sigma=_hermite_interp(self.times, self.sigma, self.sigma_dot, self.step, t),
            sigma_dot=_hermite_interp(self.times, self.sigma_dot, self.sigma_ddot, self.step, t),
            sigma_ddot=_hermite_interp(self.times, self.sigma_ddot, self.sigma_dddot, self.step, t),
            sigma_dddot=_hermite_interp(self.times, self.sigma_dddot, self.sigma_ddddot, self.step, t),
        )

    def inverse_sq_integral(self, t):
        self._check_range(t)
        return _hermite_interp(self.times, self.inv_sq, self.sigma**-2, self.step, t)

    def sq_integral(self, t):
        self._check_range(t)
        return _hermite_interp(self.times, self.sq, self.sigma**2, self.step, t)


def solve_sigma_ode(a, g, params, sigma0, sigma_dot0, t_end, h=DEFAULT_ODE_STEP,
                    sigma_floor=SIGMA_FLOOR):
    """RK4 integration of the width ODE, sampled on the uniform grid of
    step h over [0, t_end].

    Steps are subdivided internally when the inverse-cube barrier makes a
    bounce faster than h (deterministic, state-based rule), so strongly
    pumped runs stay accurate without changing the output grid.  The
    width must stay above ``sigma_floor``; a collapse raises
    SingularityError carrying the failure time rather than clamping.
    """
    if sigma0 <= 0:
        raise ValueError("sigma0 must be positive")
    if h <= 0 or t_end <= 0:
        raise ValueError("h and t_end must be positive")
    alpha_sq = params.alpha**2

    def coeff(t):
        return a - 2.0 * g * math.cos(2.0 * t)

    def rhs(t, y):
        s = y[0]
        if s < sigma_floor:
            raise SingularityError(f"sigma fell below floor {sigma_floor}", t=t)
        return np.array([y[1], alpha_sq / s**3 - s * coeff(t), s**-2, s**2])

    k_abs = abs(params.alpha)

    def advance(y, t0):
        # the inverse-cube barrier makes the narrow bounces stiff (local
        # timescale ~ sigma^2/|alpha|); substep deterministically inside
        # the uniform output step whenever that scale drops below it
        remaining = h
        t = t0
        while remaining > 1e-14 * h:
            s, sd = y[0], y[1]
            tau = min(1.0, s * s / k_abs, s / (abs(sd) + 1e-300))
            dt_local = min(remaining, max(0.1 * tau, 1e-8 * h))
            y = rk4_step(y, rhs, t, dt_local)
            if y[0] < sigma_floor:
                raise SingularityError(f"sigma fell below floor {sigma_floor}",
                                       t=float(t + dt_local))
            t += dt_local
            remaining -= dt_local
        return y

    n_steps = int(math.ceil(t_end / h - 1e-12))
    times = np.arange(n_steps + 1) * h
    ys = np.empty((n_steps + 1, 4))
    ys[0] = (sigma0, sigma_dot0, 0.0, 0.0)
    y = ys[0]
    for i in range(n_steps):
        y = advance(y, times[i])
        ys[i + 1] = y

    sigma = ys[:, 0]
    sigma_dot = ys[:, 1]
    c = a - 2.0 * g * np.cos(2.0 * times)
    c_dot = 4.0 * g * np.sin(2.0 * times)
    c_ddot = 8.0 * g * np.cos(2.0 * times)
    sigma_ddot = alpha_sq / sigma**3 - sigma * c
    sigma_dddot = -3.0 * alpha_sq * sigma_dot / sigma**4 - sigma_dot * c - sigma * c_dot
    sigma_ddddot = (12.0 * alpha_sq * sigma_dot**2 / sigma**5
                    - 3.0 * alpha_sq * sigma_ddot / sigma**4
                    - sigma_ddot * c - 2.0 * sigma_dot * c_dot - sigma * c_ddot)
    return SigmaTrajectory(params=params, a=a, g=g, step=h, times=times,
                           sigma=sigma, sigma_dot=sigma_dot, sigma_ddot=sigma_ddot,
                           sigma_dddot=sigma_dddot, sigma_ddddot=sigma_ddddot,
                           inv_sq=ys[:, 2], sq=ys[:, 3])


# ---------------------------------------------------------------------------
# Hill equation and Floquet stability
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PhaseTrajectory:
    """Uniformly sampled solution of x'' + Omega^2(t) x = 0 in (x, p)."""

    params: PhysicalParams
    step: float
    times: np.ndarray
    x: np.ndarray
    p: np.ndarray
    x_dot: np.ndarray
    p_dot: np.ndarray

    @property
    def t_end(self):
        return float(self.times[-1])

    @property
    def samples(self):
        return list(zip(self.times.tolist(), self.x.tolist(), self.p.tolist()))

    def at(self, t):
        if t < 0.0 or t > self.t_end + 1e-12:
            raise ValueError(f"t={t} outside solved range [0, {self.t_end}]")
        x = _hermite_interp(self.times, self.x, self.x_dot, self.step, t)
        p = _hermite_interp(self.times, self.p, self.p_dot, self.step, t)
        return x, p


def integrate_hill(omega2_of_t, x0, p0, params, t_end, h=DEFAULT_ODE_STEP):
    """Fixed-step RK4 integration of x' = p/m, p' = -m Omega^2(t) x."""
    if h <= 0 or t_end <= 0:
        raise ValueError("h and t_end must be positive")
    m = params.m

    def rhs(t, y):
        w2 = omega2_of_t(t)
        return np.array([y[1] / m, -m * w2 * y[0]])

    n_steps = int(math.ceil(t_end / h - 1e-12))
    times = np.arange(n_steps + 1) * h
    ys = np.empty((n_steps + 1, 2))
    ys[0] = (x0, p0)
    y = ys[0]
    for i in range(n_steps):
        y = rk4_step(y, rhs, times[i], h)
        ys[i + 1] = y
    w2 = np.array([omega2_of_t(t) for t in times])
    return PhaseTrajectory(params=params, step=h, times=times,
                           x=ys[:, 0], p=ys[:, 1],
                           x_dot=ys[:, 1] / m, p_dot=-m * w2 * ys[:, 0])


@dataclass(frozen=True)
class StabilityVerdict:
    """Monodromy-trace classification of one Mathieu parameter point."""

    a: float
    g: float
    trace: float
    classification: str
    wronskian_drift: float = 0.0


def floquet_classify(a, g, h=DEFAULT_ODE_STEP, margin=1e-6):
    """Stability of x'' + (a - 2g cos 2t) x = 0 via the one-period monodromy.

    Two independent solutions are advanced over the coefficient period pi;
    |trace| > 2 + margin is unstable, < 2 - margin stable, the strip in
    between is reported as marginal (never silently binned).
    """
    period = math.pi
    n_steps = int(round(period / h))
    if n_steps < 100:
        raise ValueError("step too coarse: need >= 100 steps per period")
    step = period / n_steps

    def rhs(t, y):
        w2 = a - 2.0 * g * math.cos(2.0 * t)
        # columns: (x1, v1, x2, v2)
        return np.array([y[1], -w2 * y[0], y[3], -w2 * y[2]])

    y = np.array([1.0, 0.0, 0.0, 1.0])
    t = 0.0
    for _ in range(n_steps):
        y = rk4_step(y, rhs, t, step)
        t += step
    trace = y[0] + y[3]
    wronskian_drift = abs(y[0] * y[3] - y[2] * y[1] - 1.0)
    if abs(trace) > 2.0 + margin:
        classification = "unstable"
    elif abs(trace) < 2.0 - margin:
        classification = "stable"
    else:
        classification = "marginal"
    return StabilityVerdict(a=a, g=g, trace=float(trace),
                            classification=classification,
                            wronskian_drift=float(wronskian_drift))
