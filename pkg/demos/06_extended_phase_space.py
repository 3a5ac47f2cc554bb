"""Beyond (x, p): the position-velocity wave function and the rank-4
Wigner function on (x, p, p', p'').

Only the ground state has a nonnegative Wigner function, so its square
root plus a bilinear phase defines a wave function on (x, v) that obeys
its own evolution equation with a quadratic potential U(x, v, t).  A
second transform over (x, v) lifts it to a strictly positive Gaussian on
the four-dimensional kinematic space whose maximum at fixed (x, p) sits
on the classical force/jerk point.  The transport probe at the end
discriminates the two possible sign conventions of that Gaussian: one is
transported exactly (residual ~ dt^2), the other is not even close.
"""

import numpy as np

from wvlab import (ExtendedPhasePoint, PhysicalParams, Rank2Params,
                   SinSquaredDriver, compare_rank4_variants, eta_xi,
                   potential_U12, psi_rank2, rank2_energy, rank4_grid,
                   schrodinger2_residual, rank2_grid, sigma_eval,
                   wigner_rank4)

params = PhysicalParams()
driver = SinSquaredDriver(sigma0=1.0, varpi0=0.5)
t = 0.6
st = sigma_eval(driver, params, t)

r2 = Rank2Params(params=params, E12=rank2_energy(driver, params, t))
print(f"rank-2 wave function at t = {t} (E12 = {r2.E12:.4f}):")
for x, v in ((0.0, 0.0), (1.0, 0.5), (-0.5, 1.0)):
    psi = psi_rank2(st, r2, x, v)
    print(f"  psi(x={x:+.1f}, v={v:+.1f}) = {psi:.5f}   |psi|^2 = {abs(psi)**2:.5f}")

print(f"\nrank-2 potential coefficients at this instant: "
      f"U(0,1) = {float(potential_U12(st, params, 0.0, 1.0)):+.4f}, "
      f"U(1,0) = {float(potential_U12(st, params, 1.0, 0.0)):+.4f}, "
      f"cross = {float(potential_U12(st, params, 1.0, 1.0)) - float(potential_U12(st, params, 1.0, 0.0)) - float(potential_U12(st, params, 0.0, 1.0)):+.4f}")

rep = schrodinger2_residual(driver, params, rank2_grid(st, params), t, dt=1e-3)
print(f"rank-2 evolution residual at dt=1e-3: {rep.max_norm:.3e}")

print(f"\nauxiliary time functions: eta = {eta_xi(st, params).eta:+.4f}, "
      f"xi = {eta_xi(st, params).xi:+.4f}")

print("\nrank-4 Gaussian along a (p', p'') slice at (x, p) = (0.8, -0.4):")
pd = np.linspace(-2, 2, 5)
for v in pd:
    w = wigner_rank4(st, params, ExtendedPhasePoint(0.8, -0.4, v, 0.0))
    print(f"  p' = {v:+.1f}: W4 = {float(w):.6f}")

print("\n=== transport probe: which sign convention is the dynamical one? ===")
outcome = compare_rank4_variants(driver, params, rank4_grid(st, params), t)
for name, report in outcome["reports"].items():
    print(f"  {name:8s}: residual {report.max_norm:.3e} at dt={report.dt}, "
          f"halving ratio {report.ratio:5.2f}, consistent = {report.consistent}")
print(f"the '{outcome['better']}' variant is the transported one")
