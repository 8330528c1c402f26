"""
Entropy of one output window
============================

The late-time output line is cut into windows of width delta_t and each
window is expanded in cosine harmonics up to k_max.  The entropy of a
window converges as k_max grows, does not depend on delta_t, and equals
twice the asymptotic entropy of the paramp.
"""

import warnings

from paramp_flow import ParampParams, derive
from paramp_flow.flux import converged_output_entropy, naive_blockwise_entropy, output_entropy
from paramp_flow.output import ModeGrid, ShortWindowWarning
from paramp_flow.paramp import asymptotic_entropy

warnings.simplefilter("ignore", ShortWindowWarning)

# off resonance: f = 0.3, f' = 0.2, so lambda1 = -0.3 and lambda2 = -0.7
d = derive(ParampParams.from_f_prime(1.0, 0.3, 0.2))

print("k_max " + "".join(f"  dt={dt:<6g}" for dt in (20, 40, 80)))
for k in (1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024):
    vals = [output_entropy(d, ModeGrid(dt, k)).delta_S_out for dt in (20.0, 40.0, 80.0)]
    print(f"{k:5d} " + "".join(f"{v:10.6f} " for v in vals))

rep = output_entropy(d, ModeGrid(40.0, 1024))
print(f"\nnontrivial symplectic eigenvalues: {rep.nontrivial_gammas}")
print(f"trivial modes: {rep.n_trivial_modes}")

conv = converged_output_entropy(d, 40.0)
print(f"converged dS_out = {conv.value:.7f} (k_max = {conv.k_max})")
print(f"2 S_par(inf)     = {2 * asymptotic_entropy(d):.7f}")

# dropping the boundary term makes every harmonic a pure squeezed mode
print(f"naive blockwise entropy = {naive_blockwise_entropy(d, ModeGrid(40.0, 1024)):.1e}")
