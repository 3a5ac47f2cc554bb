"""Parametric resonance of the width equation.

The width obeys sigma'' = alpha^2/sigma^3 - sigma (a - 2g cos 2t); the
associated linear problem is a Mathieu equation whose stability depends
on where (a, g) falls between the resonance tongues.  At (1, 0.2) the
motion is unstable: both the width envelope and a test trajectory grow
period over period, and the monodromy trace leaves the |trace| <= 2 band.
"""

import math

import numpy as np

from wvlab import (PhysicalParams, floquet_classify, integrate_hill,
                   omega_squared, solve_sigma_ode)

params = PhysicalParams()
a, g = 1.0, 0.2
sigma0 = (params.alpha**2 / a) ** 0.25

print("=== Floquet monodromy around the first tongues ===")
for aa in (0.5, 1.0, 2.0, 2.25, 4.0, 4.5):
    v = floquet_classify(aa, g)
    print(f"a = {aa:4.2f}, g = {g}: trace = {v.trace:+8.4f}  -> {v.classification}")

print("\n=== growth of the unstable (1, 0.2) run ===")
traj = solve_sigma_ode(a, g, params, sigma0, 0.0, 10 * math.pi)
hill = integrate_hill(lambda t: omega_squared(traj.state(t), params),
                      0.0, 1.0, params, 10 * math.pi)
for k in range(0, 10, 2):
    sel = (traj.times >= k * math.pi) & (traj.times < (k + 1) * math.pi)
    print(f"period {k:2d}: max sigma = {traj.sigma[sel].max():7.3f}, "
          f"max |x| = {np.abs(hill.x[sel]).max():7.3f}")

print("\n=== a coarse stability raster along g = 0 ===")
row = []
for aa in np.arange(0.25, 5.01, 0.25):
    v = floquet_classify(float(aa), 0.0)
    row.append("U" if v.classification == "unstable" else
               ("-" if v.classification == "stable" else "o"))
print("a:  0.25 " + " " * 30 + "5.0")
print("    " + "".join(row) + "   (U unstable, - stable, o marginal; flips at a = 1, 4)")
