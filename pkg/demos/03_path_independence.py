"""Normalized moduli of deformed families along several approach paths.

The family joining the arcs of the box that holds the horizontal chords with
|y| <= 1/2 is pushed through f_{s+ti}; multiplied by s/(s^2+t^2) its modulus
should approach pi/6.  Radial and ray paths get there at moderate dilatation.
The tangential path s = 1/|t| lags far behind at the same dilatation.

Run: python3 demos/03_path_independence.py [grid]   (default 257, about a minute)
"""

import sys

import numpy as np

from teichlab import QuadraticDifferential, run_theorem_main
from teichlab.experiments import ApproachPath, residual_slope, sandwich_bounds
from teichlab.modulus import strip_box

grid = int(sys.argv[1]) if len(sys.argv) > 1 else 257
one = QuadraticDifferential.constant(1.0)
box = strip_box(-0.5, 0.5)
target = np.pi / 6

paths = [ApproachPath("radial", (4, 8, 16, 32, 64)),
         ApproachPath("ray", (8, 16, 32, 64)),
         ApproachPath("horocyclic", (2, 4, 8, 16), s0=2.0),
         ApproachPath("tangential", (2, 3, 4, 5))]

print(f"target pi/6 = {target:.6f}, grid {grid}")
for path in paths:
    recs = run_theorem_main(one, 0.0, box, path, grid=grid, target=target)
    print(f"\n{path.kind}:")
    for r in recs:
        sw = sandwich_bounds(one, 0.0, box, r.parameter)
        print(f"  s={r.parameter.s:7.3f} t={r.parameter.t:7.3f} K={r.dilatation:8.1f}  "
              f"normalized {r.normalized:.5f}  [{sw.lower:.3f}, {sw.upper:.3f}]")
    print(f"  log-residual slope {residual_slope(recs):+.2f}")
