"""Affine Teichmüller deformations in natural coordinates.

A deformation parameter lives either in the right half-plane as ``s + ti``
(``s > 0``) or in the unit disk as ``lambda``; the two charts are exchanged by
the involution ``A(z) = (1 - z) / (1 + z)``.  The affine map ``f_{s+ti}``
acts on natural coordinates ``z = x + yi`` as ``x/s - (t/s) y + yi``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

PARAM_TOL = 1e-12


def cayley_a(z):
    """The involution ``A(z) = (1 - z) / (1 + z)`` between half-plane and disk."""
    z = np.asarray(z, dtype=complex)
    out = (1.0 - z) / (1.0 + z)
    return out if out.ndim else complex(out)


def disk_from_half_plane(w: complex) -> complex:
    """``lambda = A(s + ti)``."""
    w = complex(w)
    if not w.real > 0 or not np.isfinite(w):
        raise ValueError(f"half-plane parameter needs s > 0, got {w!r}")
    return cayley_a(w)


def half_plane_from_disk(lam: complex) -> complex:
    """``s + ti = A(lambda)``; ``s`` equals ``(1 - |lambda|^2) / |1 + lambda|^2``."""
    lam = complex(lam)
    if not abs(lam) < 1:
        raise ValueError(f"disk parameter needs |lambda| < 1, got {lam!r}")
    w = cayley_a(lam)
    s = (1.0 - abs(lam) ** 2) / abs(1.0 + lam) ** 2
    return complex(s, w.imag)


def rotate_parameter(theta: float, lam: complex) -> complex:
    """``B_theta(lambda) = -e^{-i theta} lambda``."""
    return complex(-np.exp(-1j * theta) * lam)


@dataclass(frozen=True)
class DeformationParameter:
    """A deformation parameter holding both charts."""

    half_plane: complex
    disk: complex

    def __post_init__(self):
        w, lam = complex(self.half_plane), complex(self.disk)
        if not w.real > 0:
            raise ValueError("s must be positive")
        if not abs(lam) < 1:
            raise ValueError("|lambda| must be below 1")
        if abs(cayley_a(w) - lam) > PARAM_TOL * max(1.0, abs(w)):
            raise ValueError("half-plane and disk charts disagree")
        object.__setattr__(self, "half_plane", w)
        object.__setattr__(self, "disk", lam)

    @classmethod
    def from_half_plane(cls, s: float, t: float = 0.0) -> "DeformationParameter":
        w = complex(s, t)
        return cls(w, disk_from_half_plane(w))

    @classmethod
    def from_disk(cls, lam: complex) -> "DeformationParameter":
        return cls(half_plane_from_disk(lam), complex(lam))

    @property
    def s(self) -> float:
        return self.half_plane.real

    @property
    def t(self) -> float:
        return self.half_plane.imag

    @property
    def normalizer(self) -> float:
        """``s / (s^2 + t^2)``."""
        return self.s / (self.s ** 2 + self.t ** 2)

    def to_json(self) -> dict:
        return {"half_plane": [self.s, self.t]}


def parse_parameter(data, path: str = "$") -> DeformationParameter:
    """Read ``{"lambda": [re, im]}`` or ``{"half_plane": [s, t]}``."""
    if not isinstance(data, dict) or len(data) != 1:
        raise ConfigError("parameter must have exactly one of 'lambda', 'half_plane'", path)
    (key, val), = data.items()
    if key not in ("lambda", "half_plane"):
        raise ConfigError(f"unknown key {key!r}", path)
    try:
        re, im = (float(v) for v in val)
        if key == "lambda":
            return DeformationParameter.from_disk(complex(re, im))
        return DeformationParameter.from_half_plane(re, im)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc), f"{path}.{key}") from exc


class AffineTeichMap:
    """``f_{s+ti}(x + yi) = x/s - (t/s) y + yi``."""

    def __init__(self, parameter: DeformationParameter):
        self.parameter = parameter

    @property
    def matrix(self) -> np.ndarray:
        """Real 2x2 matrix acting on ``(x, y)``."""
        s, t = self.parameter.s, self.parameter.t
        return np.array([[1.0 / s, -t / s], [0.0, 1.0]])

    def __call__(self, z):
        return apply_deformation(self, z)


def apply_deformation(f: AffineTeichMap, z):
    z = np.asarray(z, dtype=complex)
    s, t = f.parameter.s, f.parameter.t
    out = (z.real - t * z.imag) / s + 1j * z.imag
    return out if out.ndim else complex(out)


def beltrami(w: complex) -> complex:
    """Beltrami coefficient ``(1 - w) / (1 + w)`` of ``f_w``, ``w = s + ti``."""
    w = complex(w)
    if not w.real > 0:
        raise ValueError("s must be positive")
    return cayley_a(w)


def dilatation(w: complex) -> float:
    """Maximal dilatation of ``f_w``.

    Uses ``(|1+w| + |1-w|)^2 / (4 s)``, algebraically equal to the quotient of
    radicals but free of cancellation for large ``|w|``.
    """
    w = complex(w)
    if not w.real > 0:
        raise ValueError("s must be positive")
    return float((abs(1 + w) + abs(1 - w)) ** 2 / (4.0 * w.real))


def affine_beltrami(matrix) -> complex:
    """Beltrami coefficient of the real-linear map with the given 2x2 matrix."""
    (a, b), (c, d) = np.asarray(matrix, dtype=float)
    return complex((a - d) + 1j * (c + b)) / complex((a + d) + 1j * (c - b))


def dilatation_from_beltrami(mu: complex) -> float:
    m = abs(mu)
    if m >= 1:
        raise ValueError("|mu| must be below 1")
    return (1 + m) / (1 - m)


def geodesic_map(t: float, z):
    """``g_t(x + yi) = x + ((1 - t)/(1 + t)) yi``."""
    if not 0 <= t < 1:
        raise ValueError("need 0 <= t < 1")
    z = np.asarray(z, dtype=complex)
    out = z.real + 1j * (1 - t) / (1 + t) * z.imag
    return out if out.ndim else complex(out)


def geodesic_dilatation(t: float) -> float:
    if not 0 <= t < 1:
        raise ValueError("need 0 <= t < 1")
    return (1 + t) / (1 - t)
