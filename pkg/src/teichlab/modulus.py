"""Moduli of curve families joining two sides of a quadrilateral.

The modulus of the family joining side A to side B of a Jordan quadrilateral
equals the Dirichlet energy of the harmonic potential that is 0 on A, 1 on B
and has zero normal derivative on the two remaining sides.
"""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass

import numpy as np
import shapely
from scipy import integrate
from scipy.optimize import brentq
from scipy.special import ellipk, ellipkm1

from . import _fem
from .disk_geometry import GeodesicBox, liouville_box
from .errors import ChartInjectivityError, ConfigError, InvalidBoxError
from .quad_diff import QuadraticDifferential
from .teich import AffineTeichMap, DeformationParameter, apply_deformation

MIN_GRID = 33
DEFAULT_N_BOUNDARY = 4096


class Quadrilateral:
    """Counterclockwise Jordan polygon with four marked vertices.

    ``marks = (i, j, k, l)`` splits the boundary into side A (vertices i..j),
    a free side (j..k), side B (k..l) and a free side (l..i).
    """

    def __init__(self, boundary, marks):
        z = np.asarray(boundary)
        if z.ndim == 2 and z.shape[1] == 2:
            z = z[:, 0] + 1j * z[:, 1]
        z = np.asarray(z, dtype=complex)
        if z.ndim != 1 or len(z) < 4:
            raise ValueError("boundary needs at least four vertices")
        marks = tuple(int(m) for m in marks)
        if len(marks) != 4 or any(b <= a for a, b in zip(marks, marks[1:])):
            raise ValueError(f"marks must be four strictly increasing indices, got {marks}")
        if marks[0] < 0 or marks[3] >= len(z):
            raise ValueError("marks out of range")
        ring = shapely.LinearRing(np.c_[z.real, z.imag])
        if not ring.is_simple:
            raise ValueError("boundary polyline is not simple")
        if not ring.is_ccw:
            raise ValueError("boundary must be counterclockwise")
        self.boundary = z
        self.marks = marks

    @property
    def points(self) -> np.ndarray:
        return np.c_[self.boundary.real, self.boundary.imag]

    def side(self, k: int) -> np.ndarray:
        """Vertices of side ``k`` (0 = A, 1, 2 = B, 3) including both marks."""
        n = len(self.boundary)
        start, stop = self.marks[k], self.marks[(k + 1) % 4]
        idx = np.arange(start, stop + (n if stop <= start else 0) + 1) % n
        return self.boundary[idx]

    def swapped(self) -> "Quadrilateral":
        """The same domain with the roles of the two pairs of sides exchanged."""
        m0, m1, m2, m3 = self.marks
        n = len(self.boundary)
        return Quadrilateral(np.roll(self.boundary, -m1), (0, m2 - m1, m3 - m1, n - m1 + m0))

    def mapped(self, f) -> "Quadrilateral":
        return Quadrilateral(f(self.boundary), self.marks)

    def to_json(self) -> dict:
        return {"boundary": self.points.tolist(), "marks": list(self.marks)}

    @classmethod
    def from_json(cls, data, path: str = "$") -> "Quadrilateral":
        if not isinstance(data, dict) or set(data) != {"boundary", "marks"}:
            raise ConfigError("quadrilateral needs exactly 'boundary' and 'marks'", path)
        try:
            return cls(np.asarray(data["boundary"], dtype=float), data["marks"])
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc), path) from exc


@dataclass(frozen=True)
class ModulusResult:
    value: float
    grid: int
    error_estimate: float
    seconds: float = 0.0

    def to_json(self) -> str:
        return json.dumps(asdict(self))


def rect_modulus(a: float, b: float) -> float:
    """Modulus ``b / a`` of the family joining the vertical sides of ``[0,a] x [0,b]``."""
    if a <= 0 or b <= 0:
        raise ValueError("a and b must be positive")
    return b / a


def rectangle(a: float, b: float) -> Quadrilateral:
    """``[0,a] x [0,b]`` with the vertical sides as A (right) and B (left)."""
    return Quadrilateral([a, a + 1j * b, 1j * b, 0.0], (0, 1, 2, 3))


def quad_modulus(q: Quadrilateral, grid: int = 257, *, estimate: bool = True) -> ModulusResult:
    """Modulus of the family joining side A to side B.

    The error estimate is the change against the solve at about half the
    resolution; pass ``estimate=False`` to skip the second solve.
    """
    if grid < MIN_GRID:
        raise ValueError(f"grid must be at least {MIN_GRID}")
    t0 = time.perf_counter()
    fine = _fem.dirichlet_energy(q.points, q.marks, grid).energy
    err = 0.0
    if estimate:
        coarse = _fem.dirichlet_energy(q.points, q.marks, (grid + 1) // 2).energy
        err = abs(fine - coarse)
    return ModulusResult(fine, grid, err, time.perf_counter() - t0)


def disk_modulus(box: GeodesicBox) -> float:
    """Exact modulus of the family joining ``[a,b]`` to ``[c,d]`` in the unit disk.

    A Moebius map sends the disk with the four corners to the upper half-plane
    with ``-1/k, -1, 1, 1/k``; the cross-ratio fixes ``k`` and the modulus is
    ``K(k') / (2 K(k))``.
    """
    return disk_modulus_from_liouville(liouville_box(box))


def disk_modulus_from_liouville(L: float) -> float:
    """Exact disk modulus as a function of the Liouville measure of the box."""
    e = np.exp(L)
    # root of k^2 + (2 - 4e) k + 1 = 0 in (0, 1), written without cancellation
    k = 1.0 / (2 * e - 1 + 2 * np.sqrt(e * (e - 1)))
    m = k * k
    return float(ellipkm1(m) / (2 * ellipk(m)))


def liouville_for_disk_modulus(mod: float) -> float:
    """Liouville measure of the disk box whose exact modulus is ``mod``."""
    def f(logk):
        m = np.exp(2 * logk)
        return ellipkm1(m) / (2 * ellipk(m)) - mod

    k = np.exp(brentq(f, -700, -1e-12))
    return float(np.log((1 + k) ** 2 / (4 * k)))


def _boundary_angles(box: GeodesicBox, n_boundary: int):
    """Uniform angles with the four corners inserted; returns angles and mark indices."""
    a = box.a.angle
    corners = np.asarray(box.lifted()) - a
    base = 2 * np.pi * np.arange(n_boundary) / n_boundary
    base = np.mod(base - a, 2 * np.pi)
    spacing = 2 * np.pi / n_boundary
    near = np.min(np.abs(base[:, None] - np.r_[corners, 2 * np.pi][None, :]), axis=1)
    offs = np.sort(np.concatenate([base[near > 0.25 * spacing], corners]))
    marks = tuple(int(np.searchsorted(offs, c)) for c in corners)
    return a + offs, marks


def image_quadrilateral(phi: QuadraticDifferential, param, box: GeodesicBox,
                        n_boundary: int = DEFAULT_N_BOUNDARY) -> Quadrilateral:
    """The quadrilateral ``f(Z(D))`` with marks at the images of the box corners.

    ``Z`` is the natural parameter of ``phi`` and ``f = f_{s+ti}``; ``param`` is
    a ``DeformationParameter`` or a complex ``s + ti``.  The four corners are
    inserted as exact vertices rather than snapped to the uniform samples.
    """
    if n_boundary < 256:
        raise ValueError("n_boundary must be at least 256")
    if not isinstance(param, DeformationParameter):
        w = complex(param)
        param = DeformationParameter.from_half_plane(w.real, w.imag)
    angles, marks = _boundary_angles(box, n_boundary)
    z = apply_deformation(AffineTeichMap(param), phi.natural(np.exp(1j * angles)))
    try:
        return Quadrilateral(z, marks)
    except ValueError as exc:
        raise ChartInjectivityError(f"image boundary is not a Jordan polygon: {exc}") from exc


def disk_quadrilateral(box: GeodesicBox, n_boundary: int = DEFAULT_N_BOUNDARY) -> Quadrilateral:
    return image_quadrilateral(QuadraticDifferential.constant(1.0), 1.0, box, n_boundary)


def parallelogram_lower_bound(s: float, t: float, a: float, b: float, mA: float = 0.0) -> float:
    """Lower bound for the modulus of ``f_{s+ti}`` applied to ``[0,a] x [0,b]``.

    ``h`` is the distance between the images of the vertical sides and ``l``
    the length of the part of them that faces each other; the endpoint set of
    measure ``mA`` is discarded from both sides.  The bound may be
    non-positive, in which case it carries no information.
    """
    if s <= 0 or a <= 0 or b <= 0:
        raise ValueError("need s, a, b > 0")
    if not 0 <= 2 * mA <= b:
        raise ValueError("need 0 <= 2 mA <= b")
    r = np.hypot(s, t)
    h = a / r
    l = (b * (s + t * t / s) - a * abs(t) / s) / r
    return float((l - 2 * mA * np.sqrt(1 + t * t / (s * s))) / h)


def parallelogram(s: float, t: float, a: float = 1.0, b: float = 1.0) -> Quadrilateral:
    """Image of ``rectangle(a, b)`` under ``f_{s+ti}``."""
    f = AffineTeichMap(DeformationParameter.from_half_plane(s, t))
    return rectangle(a, b).mapped(f)


def extremal_metric_energy(y1: float, y2: float, tol: float = 1e-10) -> float:
    """Energy of the metric ``1/l(y)`` on the horizontal strip ``y1 < y < y2`` of the disk.

    ``l(y) = 2 sqrt(1 - y^2)`` is the length of the horizontal chord at height y.
    """
    if not -1 < y1 < y2 < 1:
        raise ValueError("need -1 < y1 < y2 < 1")
    val, err = integrate.dblquad(lambda x, y: 1.0 / (4 * (1 - y * y)), y1, y2,
                                 lambda y: -np.sqrt(1 - y * y), lambda y: np.sqrt(1 - y * y),
                                 epsabs=tol, epsrel=0.0)
    return float(val)


def chord_strip_mass(y1: float, y2: float) -> float:
    """``int_{y1}^{y2} dy / l(y)`` for the horizontal chords of the unit disk."""
    return 0.5 * (np.arcsin(y2) - np.arcsin(y1))


def strip_box(y1: float, y2: float) -> GeodesicBox:
    """Box of geodesics whose chords in the disk are horizontal with ``y1 <= y <= y2``."""
    if not -1 < y1 < y2 < 1:
        raise InvalidBoxError("need -1 < y1 < y2 < 1")
    a1, a2 = np.arcsin(y1), np.arcsin(y2)
    return GeodesicBox(a1, a2, np.pi - a2, np.pi - a1)


def vertical_strip_box(x1: float, x2: float) -> GeodesicBox:
    """Box capturing exactly the vertical chords ``x1 <= x <= x2``."""
    if not -1 < x1 < x2 < 1:
        raise InvalidBoxError("need -1 < x1 < x2 < 1")
    b1, b2 = np.arccos(x1), np.arccos(x2)
    return GeodesicBox(b2, b1, -b1, -b2)


def symmetric_box(L: float) -> GeodesicBox:
    """Box with Liouville measure ``L`` symmetric about both axes, sides facing left/right."""
    g = 2 * np.arcsin(np.exp(-L / 2))
    return GeodesicBox(-np.pi / 2 + g / 2, np.pi / 2 - g / 2, np.pi / 2 + g / 2,
                       3 * np.pi / 2 - g / 2)
