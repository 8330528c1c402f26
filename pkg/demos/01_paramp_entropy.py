"""
Entropy of the paramp mode
==========================

A squeezed state is loaded into the paramp at t = 0.  Its entropy first
rises while the squeezing streams out through the line, then settles at
the thermal value set by the pump.
"""

import numpy as np

from paramp_flow import ParampParams, derive, paramp_entropy, squeezed_initial_covariance
from paramp_flow.paramp import asymptotic_entropy, resonant_t_max

# resonant paramp, Gamma = 1, f = 0.4: lambda1 = -0.1, lambda2 = -0.9
d = derive(ParampParams(gamma=1.0, f=0.4, delta_omega=0.0))
print(f"lambda1 = {d.lambda1:.3f}, lambda2 = {d.lambda2:.3f}")
print(f"asymptotic entropy = {asymptotic_entropy(d):.6f} nats")

ts = np.linspace(0, 10, 11)
print("\n   t " + "".join(f"    r={r:g}  " for r in (0, 1, 2, 3)))
curves = [paramp_entropy(ts, squeezed_initial_covariance(r, d), d) for r in (0, 1, 2, 3)]
for i, t in enumerate(ts):
    print(f"{t:5.1f} " + "".join(f"{c[i]:10.5f} " for c in curves))

# strongly squeezed inputs overshoot; the peak time has a closed-form estimate
fine = np.linspace(0, 10, 2001)
s3 = paramp_entropy(fine, squeezed_initial_covariance(3.0, d), d)
print(f"\nr=3 peak at t = {fine[np.argmax(s3)]:.3f}, estimate {resonant_t_max(3.0, d):.3f}")

# the relaxation time is 1/|lambda1| = 10, so the thermal value is reached much later
print(f"S_par(t=400) for r=3: {float(paramp_entropy(400.0, squeezed_initial_covariance(3.0, d), d)):.6f}")
