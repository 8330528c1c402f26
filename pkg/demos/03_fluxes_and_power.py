"""
Number, energy and entropy fluxes
=================================

Photons leave the paramp at a steady rate and each carries half a pump
quantum, so the drive power balances the output power.  The entropy per
window stays fixed as the window grows, so the entropy flux goes to zero.
"""

import warnings

from paramp_flow import ParampParams, derive
from paramp_flow.flux import delta_N, drive_power, entropy_flux_scan, number_flux, output_power
from paramp_flow.output import ModeGrid, ShortWindowWarning

warnings.simplefilter("ignore", ShortWindowWarning)

d = derive(ParampParams.from_f_prime(1.0, 0.3, 0.2, omega_p=10.0))
print(f"number flux     {number_flux(d):.7f} per 1/Gamma")
print(f"output power    {output_power(d):.7f}")
print(f"drive power     {drive_power(d):.7f}")
print(f"energy/quantum  {output_power(d) / number_flux(d):.3f} (omega_p / 2 = {d.params.omega_p / 2})")

print("\nwindowed number count")
for dt in (40.0, 80.0, 160.0):
    print(f"  dt={dt:5g}  dN/dt = {delta_N(d, ModeGrid(dt, 4096)) / dt:.9f}")

scan = entropy_flux_scan(d, [20.0, 40.0, 80.0, 160.0])
print("\nentropy per window and per unit time")
for row in scan.rows:
    print(f"  dt={row.delta_t:5g}  dS={row.value:.7f}  dS/dt={row.flux:.6f}")
print(f"slope of log(dS/dt) vs log(dt): {scan.exponent:.4f}")
