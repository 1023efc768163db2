"""Vertical trajectories of a quadratic differential and the masses they assign to boxes.

Run: python3 demos/02_trajectories_and_laminations.py
"""

import numpy as np

from teichlab import GeodesicBox, QuadraticDifferential, atom_scan, lamination_mass, trace_trajectory
from teichlab.modulus import vertical_strip_box

one = QuadraticDifferential.constant(1.0)
print("For phi = dz^2 the vertical trajectories are the vertical chords.")
tr = trace_trajectory(one, 0.0, 0.5 + 0.1j)
print(f"  leaf through 0.5+0.1i: endpoints at angles "
      f"{tr.endpoints[0].angle:.6f}, {tr.endpoints[1].angle:.6f}; "
      f"phi-length {tr.phi_length:.6f} (exact {2 * np.sqrt(0.75):.6f})")

m = lamination_mass(one, 0.0, vertical_strip_box(0.0, 0.5))
print("\nEach leaf carries transverse weight dx divided by its length.")
print(f"  chords with 0 <= x <= 1/2: {m.value:.9f} +- {m.error_estimate:.1e} (pi/12 = {np.pi / 12:.9f})")

widths = [0.4 / 2 ** k for k in range(6)]
masses = atom_scan(one, 0.0, (np.pi / 2, 3 * np.pi / 2), widths)
print("\nShrinking boxes around the vertical diameter lose all their mass (no atoms):")
for w, v in zip(widths, masses):
    print(f"  half-width {w:.4f}: {v:.6f}")

psi = QuadraticDifferential.psi_squared([2.0, 1.0])
box = GeodesicBox(0.7, 2.0, 4.6, 5.6)
print("\nA non-constant differential, phi = (z + 2)^2 dz^2, rotated by 0.4:")
for n in (512, 1024, 2048, 4096):
    r = lamination_mass(psi, 0.4, box, n)
    print(f"  {n:5d} transversal samples: {r.value:.6f} +- {r.error_estimate:.1e}")
print(f"  scaled by 9 (same lamination): {lamination_mass(psi.scaled(9.0), 0.4, box, 2048).value:.6f}")
