"""Convergence drivers: normalized moduli of deformed families against lamination masses.

Along an approach path ``s + ti -> infinity`` the normalized modulus
``s/(s^2+t^2) * mod(f_{s+ti}(Gamma_B))`` should tend to the mass of ``B`` for
the vertical lamination of ``-e^{-i theta} phi``, whatever the path.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .disk_geometry import GeodesicBox, liouville_box
from .errors import ConfigError, TeichLabError
from .lamination import Leaves, captured, lamination_mass, sample_leaves
from .modulus import (disk_modulus, disk_modulus_from_liouville, disk_quadrilateral,
                      image_quadrilateral, parallelogram_lower_bound, quad_modulus)
from .quad_diff import QuadraticDifferential
from .teich import DeformationParameter, dilatation

PATH_KINDS = ("radial", "ray", "horocyclic", "tangential")
LOG4 = np.log(4.0)
CSV_COLUMNS = ["s", "t", "lambda_re", "lambda_im", "raw_modulus", "normalized", "target",
               "residual", "bridge_liouville"]


@dataclass(frozen=True)
class ApproachPath:
    """A schedule of deformation parameters tending to infinity.

    The schedule holds ``s`` for radial and ray paths (``t = 0`` resp.
    ``t = kappa s``) and ``t`` for horocyclic (``s = s0``) and tangential
    (``s = 1/|t|``) paths.
    """

    kind: str
    schedule: tuple
    s0: float = 2.0
    kappa: float = 1.0

    def __post_init__(self):
        if self.kind not in PATH_KINDS:
            raise ValueError(f"path kind must be one of {PATH_KINDS}, got {self.kind!r}")
        object.__setattr__(self, "schedule", tuple(float(v) for v in self.schedule))
        if not self.schedule:
            raise ValueError("empty schedule")
        pts = [p.half_plane for p in self.parameters()]
        size = [w.real + abs(w.imag) for w in pts]
        if any(b <= a for a, b in zip(size, size[1:])):
            raise ValueError("s + |t| must increase strictly along the schedule")

    def point(self, u: float) -> complex:
        if self.kind == "radial":
            return complex(u, 0.0)
        if self.kind == "ray":
            return complex(u, self.kappa * u)
        if self.kind == "horocyclic":
            return complex(self.s0, u)
        if u == 0:
            raise ValueError("tangential schedule needs t != 0")
        return complex(1.0 / abs(u), u)

    def parameters(self) -> list:
        out = []
        for u in self.schedule:
            w = self.point(u)
            if not w.real > 0:
                raise ValueError("all path points need s > 0")
            out.append(DeformationParameter.from_half_plane(w.real, w.imag))
        return out

    def to_json(self) -> dict:
        out = {"kind": self.kind, "schedule": list(self.schedule)}
        if self.kind == "horocyclic":
            out["s0"] = self.s0
        if self.kind == "ray":
            out["kappa"] = self.kappa
        return out

    @classmethod
    def from_json(cls, data, path: str = "$") -> "ApproachPath":
        try:
            return cls(data["kind"], tuple(data["schedule"]), float(data.get("s0", 2.0)),
                       float(data.get("kappa", 1.0)))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(str(exc), path) from exc


@dataclass(frozen=True)
class ConvergenceRecord:
    parameter: DeformationParameter
    raw_modulus: float
    normalizer: float
    normalized: float
    target: float
    residual: float
    bridge_liouville: float
    error_estimate: float = 0.0
    error: str | None = None
    liouville_scaled: float = float("nan")

    @property
    def dilatation(self) -> float:
        return dilatation(self.parameter.half_plane)

    @property
    def liouville_residual(self) -> float:
        return abs(self.liouville_scaled - self.target)

    def row(self) -> list:
        p = self.parameter
        return [p.s, p.t, p.disk.real, p.disk.imag, self.raw_modulus, self.normalized,
                self.target, self.residual, self.bridge_liouville]


def _record(param, mod, err, target, message=None) -> ConvergenceRecord:
    norm = param.s / (param.s ** 2 + param.t ** 2)
    bridge = np.pi * mod - 2 * LOG4
    # the rotated disk parameter only enters through |lambda|
    scaled = (1 - abs(param.disk)) / (2 * np.pi) * bridge
    return ConvergenceRecord(param, mod, norm, mod * norm, target, abs(mod * norm - target),
                             bridge, err, message, scaled)


def _solve_path(phi_deformed, box, params, target, grid, n_boundary, workers):
    def one(param):
        try:
            q = image_quadrilateral(phi_deformed, param, box, n_boundary)
            r = quad_modulus(q, grid)
            return _record(param, r.value, r.error_estimate, target)
        except TeichLabError as exc:
            nan = float("nan")
            return _record(param, nan, nan, target, f"{type(exc).__name__}: {exc}")

    if workers and workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(one, params))
    return [one(p) for p in params]


def run_theorem_main(phi: QuadraticDifferential, theta: float, box: GeodesicBox,
                     path: ApproachPath, grid: int = 513, n_boundary: int = 4096,
                     n_samples: int = 4096, workers: int = 1, target: float | None = None) -> list:
    """Normalized moduli of ``f_{s+ti}(Gamma_B)`` for ``e^{-i theta} phi`` along a path.

    The target is the mass of ``box`` for the vertical lamination of
    ``-e^{-i theta} phi``.  Failed solves yield records with ``error`` set
    and NaN values.
    """
    if target is None:
        target = lamination_mass(phi, theta + np.pi, box, n_samples).value
    return _solve_path(phi.rotated(theta), box, path.parameters(), target, grid, n_boundary,
                       workers)


def run_liouville_asymptotics(phi: QuadraticDifferential, theta: float, box: GeodesicBox,
                              path: ApproachPath, grid: int = 513, n_boundary: int = 4096,
                              n_samples: int = 4096, workers: int = 1,
                              target: float | None = None) -> list:
    """``(1-|lambda|)/(2 pi) * L(h_lambda)(B)`` as ``lambda -> e^{i theta}``.

    Each path point ``s + ti`` gives ``lambda' = A(s + ti) -> -1`` and
    ``lambda = -e^{i theta} lambda'``.  The Beltrami coefficient
    ``lambda conj(phi)/|phi|`` equals ``lambda'`` measured against
    ``-e^{-i theta} phi``, so the deformed family is the image of ``Gamma_B`` in
    the natural chart of that differential.  The Liouville mass of the image
    box is read off the modulus as ``pi * mod - 2 log 4``.  The target is the
    mass of ``box`` for ``e^{-i theta} phi``.
    """
    if target is None:
        target = lamination_mass(phi, theta, box, n_samples).value
    return _solve_path(phi.rotated(theta + np.pi), box, path.parameters(), target, grid,
                       n_boundary, workers)


class BridgeRecord(NamedTuple):
    L: float
    mod: float
    defect: float
    error_estimate: float
    exact_mod: float


def run_lemma41(boxes, grid: int = 513, n_boundary: int = 4096) -> list:
    """Defects ``mod - L/pi - (2/pi) log 4`` of the undeformed disk families."""
    Ls = [liouville_box(b) for b in boxes]
    if any(b <= a for a, b in zip(Ls, Ls[1:])):
        raise ValueError("boxes must have strictly increasing Liouville measure")
    out = []
    for box, L in zip(boxes, Ls):
        r = quad_modulus(disk_quadrilateral(box, n_boundary), grid)
        out.append(BridgeRecord(L, r.value, r.value - L / np.pi - 2 / np.pi * LOG4,
                                 r.error_estimate, disk_modulus(box)))
    return out


def exact_bridge_defect(L: float) -> float:
    """Defect of the exact disk modulus for a box of Liouville measure ``L``."""
    return disk_modulus_from_liouville(L) - L / np.pi - 2 / np.pi * LOG4


@dataclass(frozen=True)
class Sandwich:
    lower: float
    upper: float
    n_strips: int


def sandwich_bounds(phi: QuadraticDifferential, theta: float, box: GeodesicBox,
                    param: DeformationParameter, leaves: Leaves | None = None,
                    strip_counts=(1, 2, 4, 8, 16)) -> Sandwich:
    """Bounds for the normalized modulus at ``param``.

    Upper: quasi-invariance gives ``K(f) mod(Gamma_B)``, with the undeformed
    modulus from the exact disk formula.  Lower: the captured horizontal
    leaves are grouped into strips; each strip sits inside a rectangle whose
    deformed family is bounded below by the parallelogram estimate, and the
    strip families are disjoint, so their bounds add.  The best strip count
    is reported.
    """
    norm = param.normalizer
    upper = dilatation(param.half_plane) * disk_modulus(box) * norm
    if leaves is None:
        leaves = sample_leaves(phi, theta + np.pi, 2048)
    inside = captured(leaves, box)
    y = leaves.x[inside]
    width = leaves.slice_length[inside]
    best, best_n = 0.0, 1
    if y.size:
        dy = leaves.dx
        s, t = param.s, param.t
        for n in strip_counts:
            groups = np.array_split(np.arange(y.size), n)
            total = 0.0
            for g in groups:
                if g.size == 0:
                    continue
                b = dy * g.size
                a = float(width[g].max())
                total += max(0.0, parallelogram_lower_bound(s, t, a, b, 0.0))
            if total * norm > best:
                best, best_n = total * norm, n
    return Sandwich(best, upper, best_n)


def residual_slope(records) -> float:
    """Least-squares slope of log(residual) against log(s + |t|)."""
    ok = [r for r in records if r.error is None and r.residual > 0]
    if len(ok) < 2:
        raise ValueError("need at least two successful records")
    x = np.log([r.parameter.s + abs(r.parameter.t) for r in ok])
    y = np.log([r.residual for r in ok])
    return float(np.polyfit(x, y, 1)[0])


def records_csv(records, extra: bool = False) -> str:
    """CSV text with 12 significant digits."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    cols = CSV_COLUMNS + (["liouville_scaled", "liouville_residual"] if extra else [])
    w.writerow(cols)
    for r in records:
        vals = r.row() + ([r.liouville_scaled, r.liouville_residual] if extra else [])
        w.writerow([f"{v:.12g}" for v in vals])
    return buf.getvalue()
