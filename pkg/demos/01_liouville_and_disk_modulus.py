"""Liouville measure of boxes, and how it predicts the modulus of the undeformed family.

Run: python3 demos/01_liouville_and_disk_modulus.py
"""

import numpy as np

from teichlab import GeodesicBox, MoebiusMap, apply_moebius, liouville_box, liouville_integral
from teichlab.experiments import exact_bridge_defect, run_lemma41
from teichlab.modulus import symmetric_box

print("A box of geodesics is a pair of disjoint boundary arcs [a,b] x [c,d].")
square = GeodesicBox(0, np.pi / 2, np.pi, 3 * np.pi / 2)
print(f"  quarter arcs facing each other: closed form {liouville_box(square):.12f}, "
      f"double integral {liouville_integral(square):.12f}  (log 2 = {np.log(2):.12f})")

m = MoebiusMap.from_point(0.4 - 0.3j, 1.1)
moved = apply_moebius(m, square)
print("\nMoebius maps move the arcs but keep the measure:")
print(f"  corners now at {np.round(moved.angles(), 4)}, measure {liouville_box(moved):.12f}")

print("\nFor large measure L the family joining the two arcs has modulus close to")
print("L/pi + (2/pi) log 4.  Exact defects and the finite element values at grid 257:")
boxes = [symmetric_box(L) for L in (2.0, 4.0, 6.0, 8.0)]
for r in run_lemma41(boxes, grid=257, n_boundary=2048):
    print(f"  L = {r.L:.0f}: modulus {r.mod:.6f} (exact {r.exact_mod:.6f}), "
          f"defect {r.defect:+.2e}, exact defect {exact_bridge_defect(r.L):+.2e}")
