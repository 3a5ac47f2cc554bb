"""The closed-form wave function solves its evolution equation exactly.

For any smooth positive width sigma(t) the Gaussian-Hermite wave function
solves the time-dependent oscillator problem whose quadratic potential is
set by the width itself, U = m Omega^2(t) x^2 / 2 with
Omega^2 = (alpha^2/sigma^3 - sigma'')/sigma.  Hitting it with a centered
time difference leaves only the O(dt^2) stencil error, which this script
shows shrinking by 4x per halving for both the evolution equation and its
Hamilton-Jacobi form.
"""

import numpy as np

from wvlab import (GridSpec, PhaseAccumulator, PhysicalParams,
                   SinSquaredDriver, hamilton_jacobi_residual,
                   omega_squared, potential_U1, quantum_potential,
                   schrodinger_residual, sigma_eval, wavefunction)

params = PhysicalParams()
driver = SinSquaredDriver(sigma0=1.0, varpi0=0.5)
grid = GridSpec.line(0.0, 6.0, 201)
t = 0.8

st = sigma_eval(driver, params, t)
print(f"state at t = {t}: sigma = {st.sigma:.4f}, Omega^2 = {omega_squared(st, params):+.4f}")

acc = PhaseAccumulator(2, driver, params)
psi = wavefunction(2, st, params, acc.energy(t), np.array([0.0, 0.5, 1.0]))
print("Psi_2 at x = 0, 0.5, 1:", np.array2string(psi, precision=5))

print("\npotential and quantum potential along x:")
for x in (0.0, 1.0, 2.0):
    print(f"  x = {x}: U = {float(potential_U1(st, params, x)):+.5f}, "
          f"Q_2 = {float(quantum_potential(2, st, params, x)):+.5f}")

print("\n=== residuals, centered time difference ===")
for n in (0, 2, 4):
    r1 = schrodinger_residual(n, driver, params, grid, t, dt=1e-3)
    r2 = schrodinger_residual(n, driver, params, grid, t, dt=5e-4)
    print(f"evolution eq, n = {n}: {r1.max_norm:.3e} -> {r2.max_norm:.3e} "
          f"(ratio {r1.max_norm / r2.max_norm:.2f})")
for n in (0, 2):
    r1 = hamilton_jacobi_residual(n, driver, params, grid, t, dt=1e-3)
    r2 = hamilton_jacobi_residual(n, driver, params, grid, t, dt=5e-4)
    print(f"Hamilton-Jacobi, n = {n}: {r1.max_norm:.3e} -> {r2.max_norm:.3e} "
          f"(ratio {r1.max_norm / r2.max_norm:.2f})")
