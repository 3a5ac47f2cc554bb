"""Shared numerical substrate: truncated grids, trapezoid integration with
Richardson verification, centered finite differences and the classical
fixed-step 4th-order Runge-Kutta update.

Uniform grids are preferred over Gauss-Hermite nodes here because the
integrands carry time-dependent shifted/rotated Gaussians that would
misalign with fixed nodes; the half-resolution Richardson estimate then
gives a cheap built-in accuracy check.
"""

from dataclasses import dataclass

import numpy as np

from .errors import EvaluationError, IntegrationError


@dataclass(frozen=True)
class Axis:
    """One grid axis: center, half-width and an odd point count."""

    center: float
    half_width: float
    points: int

    def __post_init__(self):
        if self.half_width <= 0:
            raise ValueError(f"half_width must be positive, got {self.half_width}")
        if self.points < 3 or self.points % 2 == 0:
            raise ValueError(f"points must be odd and >= 3, got {self.points}")

    @property
    def spacing(self):
        return 2.0 * self.half_width / (self.points - 1)

    def nodes(self):
        return np.linspace(self.center - self.half_width, self.center + self.half_width, self.points)


@dataclass(frozen=True)
class GridSpec:
    """Rectangular evaluation/quadrature grid, one Axis per dimension."""

    axes: tuple

    def __post_init__(self):
        object.__setattr__(self, "axes", tuple(self.axes))

    @classmethod
    def line(cls, center, half_width, points):
        return cls((Axis(center, half_width, points),))

    @classmethod
    def plane(cls, x_axis, y_axis):
        return cls((x_axis, y_axis))

    @property
    def ndim(self):
        return len(self.axes)

    def nodes(self, i=0):
        return self.axes[i].nodes()

    def meshgrid(self):
        return np.meshgrid(*(ax.nodes() for ax in self.axes), indexing="ij")


def _trapezoid_nd(values, spacings):
    out = np.asarray(values, dtype=values.dtype)
    for i in reversed(range(len(spacings))):
        out = np.trapezoid(out, dx=spacings[i], axis=i)
    return float(out)


def integrate(fn, grid):
    """Composite trapezoid integral of ``fn`` over ``grid``.

    Returns (value, error_estimate) where the estimate |fine - coarse| / 3
    comes from the stride-2 subgrid (trapezoid is 2nd order).  Non-finite
    samples raise EvaluationError with the offending coordinate.
    """
    coords = grid.meshgrid()
    values = np.asarray(fn(*coords), dtype=float)
    bad = ~np.isfinite(values)
    if bad.any():
        idx = tuple(np.argwhere(bad)[0])
        raise EvaluationError(
            "integrand is not finite", coord=tuple(float(c[idx]) for c in coords)
        )
    spacings = [ax.spacing for ax in grid.axes]
    fine = _trapezoid_nd(values, spacings)

    # stride-2 subgrid: odd point counts keep both endpoints
    slicer = tuple(slice(None, None, 2) for _ in range(grid.ndim))
    coarse = _trapezoid_nd(values[slicer], [2.0 * s for s in spacings])
    return fine, abs(fine - coarse) / 3.0


def central_diff(fn, at, step, order=1):
    """Centered stencil of ``fn`` at ``at``: first or second derivative, O(h^2)."""
    if order == 1:
        return (fn(at + step) - fn(at - step)) / (2.0 * step)
    if order == 2:
        return (fn(at + step) - 2.0 * fn(at) + fn(at - step)) / step**2
    raise ValueError(f"order must be 1 or 2, got {order}")


def rk4_step(state, derivative, t, h):
    """One classical Runge-Kutta step for y' = derivative(t, y)."""
    y = np.asarray(state, dtype=float)
    k1 = np.asarray(derivative(t, y))
    k2 = np.asarray(derivative(t + 0.5 * h, y + 0.5 * h * k1))
    k3 = np.asarray(derivative(t + 0.5 * h, y + 0.5 * h * k2))
    k4 = np.asarray(derivative(t + h, y + h * k3))
    if not (np.all(np.isfinite(k1)) and np.all(np.isfinite(k2))
            and np.all(np.isfinite(k3)) and np.all(np.isfinite(k4))):
        raise IntegrationError("non-finite derivative in RK4 step", t=t)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


@dataclass(frozen=True)
class ResidualReport:
    """Normalized residual norms of one verification check.

    max_norm and l2_norm are already divided by ``scale`` (the magnitude
    of the dominant term over the same grid), so tolerances are scale-free.
    """

    max_norm: float
    l2_norm: float
    scale: float
    dt: float


def make_report(residual, scale, dt):
    residual = np.asarray(residual)
    scale = float(scale)
    if scale <= 0.0 or not np.isfinite(scale):
        scale = 1.0
    r = np.abs(residual)
    return ResidualReport(
        max_norm=float(r.max()) / scale,
        l2_norm=float(np.sqrt(np.mean(r**2))) / scale,
        scale=scale,
        dt=float(dt),
    )


def convergence_ratio(residual_fn, dt):
    """Run a residual operation at dt and dt/2; return both reports and the
    max-norm ratio (≈ 4 for a clean 2nd-order check)."""
    full = residual_fn(dt)
    half = residual_fn(dt / 2.0)
    ratio = full.max_norm / half.max_norm if half.max_norm > 0 else np.inf
    return full, half, ratio
