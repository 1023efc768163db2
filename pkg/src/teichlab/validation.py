"""A quick randomized invariant suite used by ``teichlab validate``.

Each check returns a ``Check`` with the largest observed violation and the
allowed slack.  The suite is deliberately small enough to run in about a
minute; the test suite covers the same invariants more thoroughly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .disk_geometry import (GeodesicBox, MoebiusMap, apply_moebius, liouville_box,
                            liouville_integral)
from .lamination import lamination_mass, mass_from_leaves, sample_leaves
from .modulus import (disk_modulus, disk_quadrilateral, parallelogram, parallelogram_lower_bound,
                      quad_modulus, rectangle, vertical_strip_box)
from .quad_diff import QuadraticDifferential, trace_trajectory
from .teich import beltrami, dilatation, dilatation_from_beltrami


@dataclass(frozen=True)
class Check:
    name: str
    worst: float
    allowed: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.worst) and self.worst <= self.allowed)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: worst {self.worst:.3g} (allowed {self.allowed:.3g})"


def random_box(rng: np.random.Generator, min_gap: float = 0.05) -> GeodesicBox:
    """Four counterclockwise angles with every gap at least ``min_gap``."""
    while True:
        gaps = rng.dirichlet(np.ones(4)) * 2 * np.pi
        if gaps.min() >= min_gap:
            start = rng.uniform(0, 2 * np.pi)
            return GeodesicBox(*(start + np.cumsum(np.r_[0.0, gaps[:3]])))


def random_moebius(rng: np.random.Generator, radius: float = 0.9) -> MoebiusMap:
    z0 = radius * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
    return MoebiusMap.from_point(z0, rng.uniform(0, 2 * np.pi))


def _moebius(rng):
    worst = 0.0
    for _ in range(50):
        b = random_box(rng)
        worst = max(worst, abs(liouville_box(apply_moebius(random_moebius(rng), b))
                               - liouville_box(b)))
    return Check("moebius invariance of the Liouville measure", worst, 1e-10)


def _quadrature(rng):
    worst = 0.0
    for _ in range(5):
        b = random_box(rng, 0.2)
        worst = max(worst, abs(liouville_integral(b, 1e-8) - liouville_box(b)))
    return Check("cross-ratio against double integral", worst, 1e-6)


def _dilatation(rng):
    worst = 0.0
    for _ in range(200):
        w = complex(rng.uniform(0.01, 50), rng.uniform(-50, 50))
        worst = max(worst, abs(dilatation(w) - dilatation_from_beltrami(beltrami(w)))
                    / dilatation(w))
    return Check("dilatation from Beltrami modulus (relative)", worst, 1e-10)


def _trajectory(rng):
    one = QuadraticDifferential.constant(1.0)
    worst = 0.0
    for _ in range(5):
        x = rng.uniform(-0.9, 0.9)
        tr = trace_trajectory(one, 0.0, complex(x, rng.uniform(-0.2, 0.2)))
        exact = {np.arccos(x), 2 * np.pi - np.arccos(x)}
        for e in tr.endpoints:
            worst = max(worst, min(abs(e.angle - v) for v in exact))
    return Check("trajectory endpoints for a constant differential", worst, 1e-3)


def _lamination(rng):
    one = QuadraticDifferential.constant(1.0)
    fine, coarse = sample_leaves(one, 0.0, 1024), sample_leaves(one, 0.0, 512)
    worst = 0.0
    for _ in range(5):
        x1, x3 = np.sort(rng.uniform(-0.9, 0.9, 2))
        x2 = 0.5 * (x1 + x3)
        parts = [mass_from_leaves(fine, coarse, vertical_strip_box(u, v), 0.0)
                 for u, v in ((x1, x2), (x2, x3), (x1, x3))]
        slack = sum(p.error_estimate for p in parts) + 1e-12
        worst = max(worst, abs(parts[0].value + parts[1].value - parts[2].value) / slack)
    scaled = lamination_mass(QuadraticDifferential.constant(9.0), 0.0,
                             vertical_strip_box(0.0, 0.5), 1024)
    base = lamination_mass(one, 0.0, vertical_strip_box(0.0, 0.5), 1024)
    worst = max(worst, abs(scaled.value - base.value)
                / (scaled.error_estimate + base.error_estimate + 1e-12))
    return Check("lamination additivity and scaling (in error units)", worst, 1.0)


def _modulus(rng):
    grid = 129
    r = quad_modulus(rectangle(2.0, 1.0), grid)
    rs = quad_modulus(rectangle(2.0, 1.0).swapped(), grid)
    worst = abs(r.value * rs.value - 1.0) / 4e-3
    b = random_box(rng, 0.4)
    d = quad_modulus(disk_quadrilateral(b, 1024), grid)
    worst = max(worst, abs(d.value - disk_modulus(b)) / 2e-3)
    p = quad_modulus(parallelogram(3.0, 4.0), grid)
    if p.value < parallelogram_lower_bound(3, 4, 1, 1) - 2 * p.error_estimate:
        worst = np.inf
    return Check("modulus duality, disk oracle, parallelogram bound (scaled)", worst, 1.0)


CHECKS = (_moebius, _quadrature, _dilatation, _trajectory, _lamination, _modulus)


def run_validation(seed: int = 0) -> list:
    rng = np.random.default_rng(seed)
    return [check(rng) for check in CHECKS]
