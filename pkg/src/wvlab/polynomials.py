"""Hermite and Laguerre polynomials by upward recurrence, plus Hermite zeros.

Physicists' convention throughout: H_0 = 1, H_1 = 2x,
H_n = 2x H_{n-1} - 2(n-1) H_{n-2}.  Evaluation is capped at n <= 50;
the toolkit targets low quantum numbers and double precision.
"""

import numpy as np

# Upward recurrence in double precision loses accuracy for large n;
# everything in this toolkit uses small state numbers.
MAX_ORDER = 50


def _check_order(n, minimum=0):
    if not isinstance(n, (int, np.integer)):
        raise ValueError(f"polynomial order must be an integer, got {n!r}")
    if n < minimum:
        raise ValueError(f"polynomial order must be >= {minimum}, got {n}")
    if n > MAX_ORDER:
        raise ValueError(f"polynomial order capped at {MAX_ORDER}, got {n}")
    return int(n)


def hermite(n, x):
    """Physicists' Hermite polynomial H_n(x); vectorized in x."""
    n = _check_order(n)
    x = np.asarray(x, dtype=float)
    h_prev = np.ones_like(x)
    if n == 0:
        return h_prev if h_prev.ndim else float(h_prev)
    h = 2.0 * x
    for k in range(2, n + 1):
        h, h_prev = 2.0 * x * h - 2.0 * (k - 1) * h_prev, h
    return h if h.ndim else float(h)


def hermite_derivative(n, x):
    """H_n'(x) = 2n H_{n-1}(x); zero for the constant polynomial."""
    n = _check_order(n)
    if n == 0:
        x = np.asarray(x, dtype=float)
        z = np.zeros_like(x)
        return z if z.ndim else 0.0
    return 2.0 * n * hermite(n - 1, x)


def hermite_zeros(n, tol=1e-13):
    """All n real zeros of H_n, strictly increasing.

    Brackets by sign changes on a uniform scan of [-R, R] with
    R = sqrt(2n+1) + 1 (all zeros lie inside), then refines each bracket
    with bisection-safeguarded Newton steps.  Roots within tol of the
    origin are snapped to exactly 0 so the odd-n symmetry is testable.
    """
    n = _check_order(n)
    if n == 0:
        return np.array([])

    radius = np.sqrt(2.0 * n + 1.0) + 1.0
    grid = np.linspace(-radius, radius, max(200, 40 * n) + 1)
    values = hermite(n, grid)

    # scan nodes that are exact roots (x = 0 for odd n) carry sign 0 and
    # would otherwise defeat the sign-change bracketing
    roots = [float(g) for g, v in zip(grid, values) if v == 0.0]
    for i in np.nonzero(np.sign(values[:-1]) * np.sign(values[1:]) < 0)[0]:
        lo, hi = grid[i], grid[i + 1]
        flo = values[i]
        x = 0.5 * (lo + hi)
        for _ in range(100):
            f = hermite(n, x)
            if f == 0.0:
                break
            if np.sign(f) == np.sign(flo):
                lo = x
            else:
                hi = x
            step = f / hermite_derivative(n, x)
            x_new = x - step
            if not (lo < x_new < hi):  # Newton left the bracket: bisect
                x_new = 0.5 * (lo + hi)
            if abs(x_new - x) <= tol:
                x = x_new
                break
            x = x_new
        roots.append(0.0 if abs(x) <= tol else x)
    if len(roots) != n:
        raise RuntimeError(f"expected {n} zeros of H_{n}, found {len(roots)}")
    return np.array(sorted(roots))


def laguerre(n, x):
    """Laguerre polynomial L_n(x) via the three-term recurrence; L_n(0) = 1."""
    n = _check_order(n)
    x = np.asarray(x, dtype=float)
    l_prev = np.ones_like(x)
    if n == 0:
        return l_prev if l_prev.ndim else float(l_prev)
    l = 1.0 - x
    for k in range(1, n):
        l, l_prev = ((2 * k + 1 - x) * l - k * l_prev) / (k + 1), l
    return l if l.ndim else float(l)


def laguerre_pair(n, x):
    """(L_n(x), L_n'(x)) carried jointly through the recurrence.

    Differentiating (k+1) L_{k+1} = (2k+1-x) L_k - k L_{k-1} keeps the
    derivative free of the 1/x singularity of the closed-form identity.
    """
    n = _check_order(n)
    x = np.asarray(x, dtype=float)
    l_prev, d_prev = np.ones_like(x), np.zeros_like(x)
    if n == 0:
        return l_prev, d_prev
    l, d = 1.0 - x, -np.ones_like(x)
    for k in range(1, n):
        l, l_prev, d, d_prev = (
            ((2 * k + 1 - x) * l - k * l_prev) / (k + 1),
            l,
            ((2 * k + 1 - x) * d - l - k * d_prev) / (k + 1),
            d,
        )
    return l, d
