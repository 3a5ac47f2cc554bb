"""Breathing density and its probability flow.

The width sigma(t) = sigma0 (1 + sin^2(varpi0 t)) makes the state
alternate between compression and expansion.  The regular velocity field
(sigma'/sigma) x pushes probability outward while the width grows and
pulls it back while it shrinks; adding a nonzero flow constant C puts
poles on the zeros of the Hermite factor and a constant current at
infinity.
"""

import numpy as np

from wvlab import (FlowParams, PhysicalParams, SinSquaredDriver, density,
                   pole_intervals, probability_current, sigma_eval,
                   velocity_field)

params = PhysicalParams()
driver = SinSquaredDriver(sigma0=1.0, varpi0=1.0)
n = 4

print("=== compression / expansion cycle (n = 4) ===")
for t in np.linspace(0.0, np.pi, 9):
    st = sigma_eval(driver, params, float(t))
    direction = {1: "expanding", 0: "turning  ", -1: "contracting"}[int(np.sign(round(st.sigma_dot, 12)))]
    print(f"t = {t:5.3f}   sigma = {st.sigma:5.3f}   sigma' = {st.sigma_dot:+6.3f}   {direction}"
          f"   f_4(0.5) = {density(n, st, 0.5):.5f}")

st = sigma_eval(driver, params, 0.7)
print("\n=== velocity field at t = 0.7 ===")
print("regular branch (C = 0), any n:", [f"{velocity_field(n, st, FlowParams(), x):+.4f}"
                                         for x in (-2.0, -1.0, 1.0, 2.0)])
print("pole intervals of the n = 4 singular branch:")
for iv in pole_intervals(n, st):
    print(f"  ({iv.lo:+.4f}, {iv.hi:+.4f})")

print("\n=== probability current with C = 1 (n = 0) ===")
for x in (0.0, 1.0, 3.0, 8.0):
    j = probability_current(0, st, FlowParams(C=1.0), x)
    print(f"  J(x = {x:3.1f}) = {float(j):.6f}")
print("the current settles on C/(2^n n! sqrt(2 pi) sigma) far from the center")
