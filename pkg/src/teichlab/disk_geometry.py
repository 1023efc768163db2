"""Boxes of geodesics in the unit disk, disk automorphisms and the Liouville measure.

Points of the boundary circle are stored as angles in radians.  A box
``[a, b] x [c, d]`` is the set of geodesics with one endpoint in the arc
running counterclockwise from ``a`` to ``b`` and the other endpoint in the arc
from ``c`` to ``d``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import AccuracyError, InvalidBoxError, ResolutionError

TWO_PI = 2.0 * np.pi
ANGLE_EPS = 1e-12


def normalize_angle(angle):
    """Reduce an angle (or array of angles) to ``[0, 2*pi)``."""
    a = np.mod(angle, TWO_PI)
    # np.mod can return exactly 2*pi for tiny negative inputs
    a = np.where(a >= TWO_PI - ANGLE_EPS, 0.0, a)
    return float(a) if a.ndim == 0 else a


def ccw_offset(start, angle):
    """Counterclockwise angular distance from ``start`` to ``angle`` in ``[0, 2*pi)``."""
    return np.mod(np.asarray(angle, dtype=float) - start, TWO_PI)


def chord(alpha, beta):
    """Euclidean distance between ``e^{i alpha}`` and ``e^{i beta}``."""
    return 2.0 * np.abs(np.sin(0.5 * (np.asarray(alpha) - np.asarray(beta))))


@dataclass(frozen=True, eq=False)
class BoundaryPoint:
    """A point ``e^{i angle}`` of the unit circle."""

    angle: float

    def __post_init__(self):
        if isinstance(self.angle, BoundaryPoint):
            object.__setattr__(self, "angle", self.angle.angle)
        if not np.isfinite(self.angle):
            raise ValueError(f"angle must be finite, got {self.angle!r}")
        object.__setattr__(self, "angle", normalize_angle(float(self.angle)))

    @property
    def point(self) -> complex:
        return complex(np.exp(1j * self.angle))

    def __eq__(self, other):
        if not isinstance(other, BoundaryPoint):
            return NotImplemented
        d = abs(self.angle - other.angle)
        return min(d, TWO_PI - d) <= ANGLE_EPS

    __hash__ = None

    def __float__(self):
        return self.angle


def _as_point(p) -> BoundaryPoint:
    return p if isinstance(p, BoundaryPoint) else BoundaryPoint(float(p))


@dataclass(frozen=True)
class GeodesicBox:
    """Counterclockwise quadruple ``(a, b, c, d)`` indexing the box ``[a,b] x [c,d]``.

    Accepts ``BoundaryPoint`` instances or plain angles.
    """

    a: BoundaryPoint
    b: BoundaryPoint
    c: BoundaryPoint
    d: BoundaryPoint

    def __post_init__(self):
        for name in "abcd":
            object.__setattr__(self, name, _as_point(getattr(self, name)))
        a = self.a.angle
        offs = ccw_offset(a, [self.b.angle, self.c.angle, self.d.angle])
        gaps = np.diff(np.concatenate([[0.0], offs, [TWO_PI]]))
        if np.any(gaps <= ANGLE_EPS):
            raise InvalidBoxError(
                "box corners must be pairwise distinct and in counterclockwise order, "
                f"got angles {self.angles()}")

    def angles(self) -> tuple:
        return (self.a.angle, self.b.angle, self.c.angle, self.d.angle)

    def points(self) -> np.ndarray:
        return np.exp(1j * np.array(self.angles()))

    def arcs(self):
        """The two arcs as ``(start, ccw_length)`` pairs."""
        a, b, c, d = self.angles()
        return (a, float(ccw_offset(a, b))), (c, float(ccw_offset(c, d)))

    def lifted(self) -> np.ndarray:
        """Angles ``a <= b < c < d < a + 2*pi`` as an increasing lift."""
        a = self.a.angle
        return a + np.concatenate([[0.0], ccw_offset(a, self.angles()[1:])])

    def swapped(self) -> "GeodesicBox":
        """The same set of geodesics written as ``[c,d] x [a,b]``."""
        return GeodesicBox(self.c, self.d, self.a, self.b)

    def rotated(self, theta: float) -> "GeodesicBox":
        return GeodesicBox(*(x + theta for x in self.angles()))

    def to_json(self) -> list:
        return [float(x) for x in self.angles()]

    @classmethod
    def from_json(cls, data) -> "GeodesicBox":
        if len(data) != 4:
            raise InvalidBoxError(f"a box needs four angles, got {len(data)}")
        return cls(*(float(x) for x in data))


def in_arc(angle, start: float, length: float, eps: float = ANGLE_EPS):
    """Membership of ``angle`` in the closed arc ``[start, start + length]``.

    Returns ``+1`` inside, ``0`` within ``eps`` of an arc endpoint and ``-1``
    outside.
    """
    off = ccw_offset(start, angle)
    near = (np.abs(off) <= eps) | (np.abs(off - length) <= eps) | (TWO_PI - off <= eps)
    inside = off < length
    return np.where(near, 0, np.where(inside, 1, -1))


def liouville_box(box: GeodesicBox) -> float:
    """Liouville measure of a box from the cross-ratio of its corners."""
    a, b, c, d = box.angles()
    num = np.log(chord(c, a)) + np.log(chord(d, b))
    den = np.log(chord(d, a)) + np.log(chord(c, b))
    return float(num - den)


def liouville_integral(box: GeodesicBox, tol: float = 1e-8, limit: int = 200) -> float:
    """Liouville measure of a box by adaptive quadrature of ``dα dβ / |e^{iα} - e^{iβ}|²``.

    Raises
    ------
    AccuracyError
        If the nested quadrature reports an error above ``tol``; the best
        estimate is attached to the exception.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    lo_a, lo_c = box.a.angle, box.c.angle
    (_, len_ab), (_, len_cd) = box.arcs()
    inner_tol = tol / (4.0 * max(len_ab, 1e-300))
    worst = [0.0]

    def inner(alpha):
        val, err = integrate.quad(
            lambda beta: 0.25 / np.sin(0.5 * (alpha - beta)) ** 2,
            lo_c, lo_c + len_cd, epsabs=inner_tol, epsrel=0.0, limit=limit)
        worst[0] = max(worst[0], err)
        return val

    # budget exhaustion is reported through AccuracyError below
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err = integrate.quad(inner, lo_a, lo_a + len_ab, epsabs=tol / 2, epsrel=0.0,
                                  limit=limit)
    total_err = err + worst[0] * len_ab
    if not np.isfinite(val) or total_err > tol:
        raise AccuracyError("Liouville quadrature did not converge", val, total_err)
    return float(val)


class MoebiusMap:
    """Disk automorphism ``z -> (p z + q) / (conj(q) z + conj(p))`` with ``|p|² - |q|² = 1``."""

    __slots__ = ("p", "q")

    def __init__(self, p: complex, q: complex = 0.0):
        p, q = complex(p), complex(q)
        det = abs(p) ** 2 - abs(q) ** 2
        if not abs(det - 1.0) <= 1e-10 * max(1.0, abs(p) ** 2):
            raise ValueError(f"need |p|^2 - |q|^2 = 1, got {det!r}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    def __setattr__(self, name, value):
        raise AttributeError("MoebiusMap is immutable")

    @classmethod
    def normalized(cls, p: complex, q: complex) -> "MoebiusMap":
        det = abs(p) ** 2 - abs(q) ** 2
        if det <= 0:
            raise ValueError("the map does not preserve the unit disk")
        r = np.sqrt(det)
        return cls(p / r, q / r)

    @classmethod
    def identity(cls) -> "MoebiusMap":
        return cls(1.0, 0.0)

    @classmethod
    def rotation(cls, theta: float) -> "MoebiusMap":
        return cls(np.exp(0.5j * theta), 0.0)

    @classmethod
    def from_point(cls, z0: complex, theta: float = 0.0) -> "MoebiusMap":
        """The map ``z -> e^{i theta} (z - z0) / (1 - conj(z0) z)`` sending ``z0`` to 0."""
        if abs(z0) >= 1:
            raise ValueError("z0 must lie in the open unit disk")
        u = np.exp(0.5j * theta)
        return cls.normalized(u, -u * z0)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = (self.p * z + self.q) / (np.conj(self.q) * z + np.conj(self.p))
        return out if out.ndim else complex(out)

    def compose(self, other: "MoebiusMap") -> "MoebiusMap":
        """``self o other``."""
        p = self.p * other.p + self.q * np.conj(other.q)
        q = self.p * other.q + self.q * np.conj(other.p)
        return MoebiusMap.normalized(p, q)

    def inverse(self) -> "MoebiusMap":
        return MoebiusMap(np.conj(self.p), -self.q)

    def boundary_angle(self, alpha):
        return normalize_angle(np.angle(self(np.exp(1j * np.asarray(alpha, dtype=float)))))

    def __repr__(self):
        return f"MoebiusMap(p={self.p:.6g}, q={self.q:.6g})"


def apply_moebius(m: MoebiusMap, box: GeodesicBox) -> GeodesicBox:
    """Image of a box under a disk automorphism (orientation is preserved)."""
    return GeodesicBox(*(float(x) for x in m.boundary_angle(np.array(box.angles()))))


class CircleMap:
    """Degree-one circle homeomorphism sampled by its increasing lift.

    ``angles`` are increasing sample angles spanning less than one turn and
    ``lift`` the corresponding lifted image angles.  Between samples the lift
    is interpolated linearly, and ``lift(alpha + 2 pi) = lift(alpha) + 2 pi``.
    """

    def __init__(self, angles, lift):
        angles = np.asarray(angles, dtype=float)
        lift = np.asarray(lift, dtype=float)
        if angles.shape != lift.shape or angles.ndim != 1 or len(angles) < 2:
            raise ValueError("angles and lift must be 1-d arrays of equal length >= 2")
        if np.any(np.diff(angles) <= 0) or angles[-1] - angles[0] >= TWO_PI:
            raise ValueError("sample angles must increase within one turn")
        if np.any(np.diff(lift) <= 0) or lift[-1] - lift[0] >= TWO_PI:
            raise ValueError("lift must be strictly increasing with degree one")
        self._x = np.concatenate([angles, [angles[0] + TWO_PI]])
        self._y = np.concatenate([lift, [lift[0] + TWO_PI]])

    @classmethod
    def from_function(cls, f, n: int) -> "CircleMap":
        """Sample a lift ``f`` (angle -> lifted angle) at ``n`` uniform angles."""
        alpha = TWO_PI * np.arange(n) / n
        return cls(alpha, np.asarray(f(alpha), dtype=float))

    @classmethod
    def from_moebius(cls, m: MoebiusMap, n: int) -> "CircleMap":
        alpha = TWO_PI * np.arange(n) / n
        lift = np.unwrap(np.angle(m(np.exp(1j * alpha))))
        return cls(alpha, lift)

    @classmethod
    def identity(cls, n: int = 16) -> "CircleMap":
        return cls.from_function(lambda a: a, n)

    @property
    def resolution(self) -> float:
        """Smallest gap between consecutive lifted samples."""
        return float(np.min(np.diff(self._y)))

    def __call__(self, alpha):
        alpha = np.asarray(alpha, dtype=float)
        x0 = self._x[0]
        k = np.floor((alpha - x0) / TWO_PI)
        out = np.interp(alpha - k * TWO_PI, self._x, self._y) + k * TWO_PI
        return out if out.ndim else float(out)


def pullback_liouville(h: CircleMap, box: GeodesicBox) -> float:
    """Liouville measure of the image box ``h([a,b]) x h([c,d])``."""
    images = h(np.asarray(box.lifted()))
    if np.any(np.diff(images) <= ANGLE_EPS) or images[-1] - images[0] >= TWO_PI - ANGLE_EPS:
        raise ResolutionError("image corners collide at the sampling resolution")
    try:
        image_box = GeodesicBox(*(float(x) for x in images))
    except Exception as exc:  # corners merged after normalization
        raise ResolutionError(str(exc)) from exc
    return liouville_box(image_box)
