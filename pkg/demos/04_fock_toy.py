"""
Few-mode Fock-space toys
========================

Two small state-vector calculations.  A beamsplitter hands the squeezing
coherence of a mode over to a bath mode and leaves the mode pure.
Projecting the infalling halves of two entangled pairs onto an
entangled state leaves the outgoing halves entangled.
"""

import math

from paramp_flow.fock import beamsplitter_transfer, entanglement_swap, swap_target_state

tr = beamsplitter_transfer(1.0, 1.0)
print("transfer of (1 + a^dag^2)|0>")
print(f"  <b^2> after mixing         {tr.b_squared_coherence:.6f}")
print(f"  entropy left in mode a     {tr.residual_entanglement:.1e}")
print(f"  <n_a>, <n_b>               {tr.state.mean_number(0):.1e}, {tr.state.mean_number(1):.6f}")

sw = entanglement_swap()
print("\nentanglement swap")
print(f"  projection probability     {sw.projection_probability:.6f}")
print(f"  rejected branch            {sw.complement_probability:.6f}")
print(f"  fidelity with target       {sw.post_state.fidelity(swap_target_state()):.12f}")
print(f"  b1-b2 entanglement         {sw.b_pair_entanglement:.9f} (ln 2 = {math.log(2):.9f})")
