"""Time-dependent energy spectrum, two ways.

Route one averages the instantaneous energy function over the Wigner
function (phase-space quadrature).  Route two launches one classical
trajectory per state from (0, sqrt(2 m E_n(0))) and reads the energy
function along it.  The levels stay equidistant at every instant and get
pumped upward by the instability; the single-trajectory reading follows
the quadrature curve closely at first and then drifts from the
phase-space average (the relative gap is printed, and the CLI archives
the same curve in spectrum.csv).
"""

import math

import numpy as np

from wvlab import (MathieuDriver, PhysicalParams, energy_second_moment,
                   spectrum_by_quadrature, spectrum_by_trajectory)
from wvlab.dynamics import driver_state

params = PhysicalParams()
driver = MathieuDriver(a=1.0, g=0.2)
times = [k * math.pi / 2 for k in range(11)]

print("=== equidistant levels at each instant (quadrature route) ===")
for t in (0.0, math.pi, 2 * math.pi):
    st = driver_state(driver, params, t, t_hint=times[-1])
    levels = [spectrum_by_quadrature(n, st, params).energy for n in range(4)]
    gaps = np.diff(levels)
    print(f"t = {t:6.3f}: E = {[f'{e:7.4f}' for e in levels]}  gaps = "
          f"{[f'{d:6.4f}' for d in gaps]}")

print("\n=== quadrature vs trajectory for the ground state ===")
traj = spectrum_by_trajectory(0, driver, params, times)
print("    t      E_quad    E_traj    rel.diff")
for s in traj:
    st = driver_state(driver, params, s.t, t_hint=times[-1])
    quad = spectrum_by_quadrature(0, st, params).energy
    print(f"{s.t:7.3f}  {quad:8.4f}  {s.energy:8.4f}  {abs(s.energy - quad) / quad:8.4f}")

print("\nclosed-form cross-check of the quadrature route (should be ~1e-14):")
st = driver_state(driver, params, 2.0, t_hint=times[-1])
quad = spectrum_by_quadrature(1, st, params).energy
print(f"  |quadrature - moment formula| = {abs(quad - energy_second_moment(1, st, params)):.2e}")
