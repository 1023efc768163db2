"""Holomorphic quadratic differentials on the unit disk and their trajectories.

Only differentials with a single-valued, zero-free square root on the closed
disk are supported: constants ``c > 0`` and squares ``psi**2`` of complex
polynomials without zeros in the closed disk.  Every differential may carry a
phase, so ``QuadraticDifferential`` also represents ``e^{-i theta} phi``.

Vertical trajectories of ``phi`` are the curves along which
``phi(zeta) dzeta**2 < 0``; in the natural parameter ``z = x + iy`` they are
the vertical lines ``x = const``.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as P
from scipy import integrate

from .disk_geometry import BoundaryPoint, normalize_angle
from .errors import AccuracyError, ConfigError, NonTerminatingTrajectoryError

DEFAULT_STEP = 1e-3
DEFAULT_SHELL = 1e-4


@dataclass(frozen=True)
class QuadraticDifferential:
    """``e^{-i phase} * c`` or ``e^{-i phase} * psi(zeta)**2``.

    ``coeffs`` holds the coefficients of ``psi`` in ascending powers of zeta.
    """

    kind: str
    c: float | None = None
    coeffs: tuple = ()
    phase: float = 0.0
    _root: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.kind == "constant":
            if self.c is None or not np.isfinite(self.c) or self.c <= 0:
                raise ValueError(f"constant differential needs c > 0, got {self.c!r}")
            base = np.array([np.sqrt(float(self.c))], dtype=complex)
        elif self.kind == "psi_squared":
            base = np.trim_zeros(np.asarray(self.coeffs, dtype=complex), "b")
            if base.size == 0:
                raise ValueError("psi must be a nonzero polynomial")
            object.__setattr__(self, "coeffs", tuple(complex(v) for v in base))
            if base.size > 1:
                roots = P.polyroots(base)
                if np.any(np.abs(roots) <= 1.0 + 1e-9):
                    raise ValueError("psi must not vanish on the closed unit disk")
        else:
            raise ValueError(f"unknown differential kind {self.kind!r}")
        root = base * np.exp(-0.5j * self.phase)
        object.__setattr__(self, "_root", root)
        # integrability: |phi| is a polynomial in |zeta| here, so a fixed rule suffices
        r, wr = np.polynomial.legendre.leggauss(16)
        rr = 0.5 * (r + 1.0)
        th = np.linspace(0.0, 2 * np.pi, 32, endpoint=False)
        vals = np.abs(self.phi(rr[:, None] * np.exp(1j * th[None, :])))
        if not np.all(np.isfinite(vals)):
            raise ValueError("differential is not integrable on the disk")

    # -- construction helpers -------------------------------------------------
    @classmethod
    def constant(cls, c: float = 1.0) -> "QuadraticDifferential":
        return cls("constant", c=float(c))

    @classmethod
    def psi_squared(cls, coeffs) -> "QuadraticDifferential":
        return cls("psi_squared", coeffs=tuple(complex(v) for v in coeffs))

    def rotated(self, theta: float) -> "QuadraticDifferential":
        """The differential ``e^{-i theta} * self``."""
        return QuadraticDifferential(self.kind, self.c, self.coeffs, self.phase + theta)

    def scaled(self, factor: float) -> "QuadraticDifferential":
        """The differential ``factor * self`` for ``factor > 0``."""
        if factor <= 0:
            raise ValueError("factor must be positive")
        if self.kind == "constant":
            return QuadraticDifferential("constant", self.c * factor, phase=self.phase)
        root = np.sqrt(factor)
        return QuadraticDifferential("psi_squared", coeffs=tuple(root * np.array(self.coeffs)),
                                     phase=self.phase)

    # -- evaluation -----------------------------------------------------------
    @property
    def root_coeffs(self) -> np.ndarray:
        """Ascending coefficients of the chosen branch of the square root."""
        return self._root.copy()

    def sqrt_phi(self, zeta):
        zeta = np.asarray(zeta, dtype=complex)
        if self._root.size == 1:
            return np.full(zeta.shape, self._root[0]) if zeta.ndim else complex(self._root[0])
        out = P.polyval(zeta, self._root)
        return out if np.ndim(out) else complex(out)

    def phi(self, zeta):
        return self.sqrt_phi(zeta) ** 2

    def natural(self, zeta):
        """Natural parameter ``int_0^zeta sqrt(phi)``."""
        out = P.polyval(np.asarray(zeta, dtype=complex), P.polyint(self._root))
        return out if np.ndim(out) else complex(out)

    # -- serialization --------------------------------------------------------
    def to_dict(self) -> dict:
        if self.kind == "constant":
            out = {"kind": "constant", "c": float(self.c)}
        else:
            out = {"kind": "psi_squared",
                   "coeffs": [[float(v.real), float(v.imag)] for v in self.coeffs]}
        if self.phase:
            out["phase"] = float(self.phase)
        return out

    @classmethod
    def from_dict(cls, data: dict, path: str = "$") -> "QuadraticDifferential":
        if not isinstance(data, dict):
            raise ConfigError("differential must be an object", path)
        kind = data.get("kind")
        allowed = {"constant": {"kind", "c", "phase"},
                   "psi_squared": {"kind", "coeffs", "phase"}}
        if kind not in allowed:
            raise ConfigError(f"unknown kind {kind!r}", f"{path}.kind")
        extra = set(data) - allowed[kind]
        if extra:
            raise ConfigError(f"unknown keys {sorted(extra)}", path)
        phase = float(data.get("phase", 0.0))
        try:
            if kind == "constant":
                return cls("constant", c=float(data["c"]), phase=phase)
            coeffs = [complex(re, im) for re, im in data["coeffs"]]
            return cls("psi_squared", coeffs=tuple(coeffs), phase=phase)
        except KeyError as exc:
            raise ConfigError(f"missing key {exc.args[0]!r}", path) from exc
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc), path) from exc


def natural_parameter(phi: QuadraticDifferential, zeta):
    """``z = int_0^zeta sqrt(phi(xi)) dxi`` (exact for supported differentials)."""
    return phi.natural(zeta)


def inverse_natural_parameter(phi: QuadraticDifferential, w, guess=None,
                              tol: float = 1e-13, max_iter: int = 60):
    """Solve ``natural(zeta) = w`` for zeta by Newton's method.

    Without a guess the iteration starts from a continuation along the
    straight segment from ``0`` to ``w``; this is valid when the segment lies
    in the image of the disk (always true for convex images).
    """
    w = np.atleast_1d(np.asarray(w, dtype=complex))
    root = phi.root_coeffs
    if root.size == 1:
        return w / root[0]
    if guess is None:
        zeta = np.zeros_like(w)
        n_sub = 32
        dw = w / n_sub
        for _ in range(n_sub):
            k1 = dw / phi.sqrt_phi(zeta)
            k2 = dw / phi.sqrt_phi(zeta + 0.5 * k1)
            k3 = dw / phi.sqrt_phi(zeta + 0.5 * k2)
            k4 = dw / phi.sqrt_phi(zeta + k3)
            zeta = zeta + (k1 + 2 * k2 + 2 * k3 + k4) / 6
    else:
        zeta = np.atleast_1d(np.asarray(guess, dtype=complex)).copy()
    for _ in range(max_iter):
        res = phi.natural(zeta) - w
        zeta = zeta - res / phi.sqrt_phi(zeta)
        if np.all(np.abs(res) <= tol * np.maximum(1.0, np.abs(w))):
            break
    res = np.abs(phi.natural(zeta) - w)
    if np.any(res > 1e-9 * np.maximum(1.0, np.abs(w))):
        raise AccuracyError("natural parameter inversion did not converge", zeta, float(res.max()))
    return zeta


def integrability_norm(phi: QuadraticDifferential, tol: float = 1e-8) -> float:
    """``int_D |phi| dxi deta`` by adaptive quadrature in polar coordinates."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err = integrate.dblquad(
            lambda th, r: abs(phi.phi(r * np.exp(1j * th))) * r,
            0.0, 1.0, 0.0, 2 * np.pi, epsabs=tol / 4, epsrel=0.0)
    if err > tol:
        raise AccuracyError("integrability quadrature did not converge", val, err)
    return float(val)


@dataclass(frozen=True)
class Trajectory:
    """A traced vertical trajectory of ``e^{-i theta} phi``.

    ``points`` run from the side of ``endpoints[0]`` to the side of
    ``endpoints[1]``; ``arclength`` is the phi-length measured from the first
    sample.  ``phi_length`` also includes the two extrapolated end pieces.
    """

    points: np.ndarray
    arclength: np.ndarray
    theta: float
    endpoints: tuple
    endpoint_tol: float
    phi_length: float
    tail_lengths: tuple = (0.0, 0.0)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["index", "re", "im", "arclength"])
            for i, (z, s) in enumerate(zip(self.points, self.arclength)):
                writer.writerow([i, f"{z.real:.12g}", f"{z.imag:.12g}", f"{s:.12g}"])


def _rk4_field(phi, z, h, direction):
    f = lambda u: direction * 1j / phi.sqrt_phi(u)
    k1 = f(z)
    k2 = f(z + 0.5 * h * k1)
    k3 = f(z + 0.5 * h * k2)
    k4 = f(z + h * k3)
    return z + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


def _shell_fraction(z0, z1, radius):
    """Smallest tau in [0, 1] with |z0 + tau (z1 - z0)| = radius."""
    d = z1 - z0
    a = np.abs(d) ** 2
    b = 2 * np.real(np.conj(z0) * d)
    c = np.abs(z0) ** 2 - radius ** 2
    disc = np.sqrt(np.maximum(b * b - 4 * a * c, 0.0))
    return np.clip((-b + disc) / (2 * a), 0.0, 1.0)


def trace_rays(phi: QuadraticDifferential, seeds, direction, step=DEFAULT_STEP,
               shell=DEFAULT_SHELL, max_steps=None, record=False):
    """Follow the unit-speed vertical field of ``phi`` from many seeds at once.

    ``direction`` is ``+1`` or ``-1`` (the two halves of each trajectory).
    Returns ``(last, length, end, tail, paths)`` where ``last`` is the final
    sample on the shell, ``length`` its phi-length from the seed, ``end`` the
    linearly extrapolated boundary point and ``tail`` the phi-length of that
    extrapolation.  When ``record`` is true, ``paths`` is a list of
    ``(samples, arclength)`` array pairs.
    """
    seeds = np.atleast_1d(np.asarray(seeds, dtype=complex))
    radius = 1.0 - shell
    if np.any(np.abs(seeds) >= radius):
        raise ValueError("seeds must lie strictly inside the boundary shell")
    if max_steps is None:
        max_steps = int(np.ceil(50.0 / step))
    n = seeds.size
    z = seeds.copy()
    prev = seeds.copy()
    length = np.zeros(n)
    active = np.arange(n)
    paths = [[s] for s in seeds] if record else None
    arcs = [[0.0] for _ in seeds] if record else None
    for _ in range(max_steps):
        if active.size == 0:
            break
        za = z[active]
        zn = _rk4_field(phi, za, step, direction)
        out = np.abs(zn) >= radius
        h = np.full(active.size, step)
        if np.any(out):
            tau = _shell_fraction(za[out], zn[out], radius)
            h[out] = step * tau
            zn[out] = _rk4_field(phi, za[out], h[out], direction)
        prev[active] = za
        z[active] = zn
        length[active] += h
        if record:
            for i, p, s in zip(active, zn, length[active]):
                paths[i].append(p)
                arcs[i].append(s)
        active = active[~out]
    if active.size:
        raise NonTerminatingTrajectoryError(
            f"{active.size} trajectories did not reach |zeta| = {radius} in {max_steps} steps")
    d = z - prev
    # a degenerate last step (tau ~ 0) carries no direction; fall back to the field
    tiny = np.abs(d) < 1e-3 * step
    if np.any(tiny):
        d[tiny] = direction * 1j / phi.sqrt_phi(z[tiny])
    d = d / np.abs(d)
    a = 1.0
    b = 2 * np.real(np.conj(z) * d)
    c = np.abs(z) ** 2 - 1.0
    ext = (-b + np.sqrt(np.maximum(b * b - 4 * a * c, 0.0))) / 2
    end = z + ext * d
    tail = ext * np.abs(phi.sqrt_phi(z))
    if record:
        paths = [(np.array(p), np.array(a)) for p, a in zip(paths, arcs)]
    return z, length, end, tail, paths


def trace_trajectory(phi: QuadraticDifferential, theta: float, seed: complex,
                     step: float = DEFAULT_STEP, shell: float = DEFAULT_SHELL,
                     max_steps: int | None = None) -> Trajectory:
    """Trace the vertical trajectory of ``e^{-i theta} phi`` through ``seed``.

    Integrates the unit-speed direction field with a fixed-step fourth order
    Runge-Kutta scheme in both directions until ``|zeta| >= 1 - shell`` and
    extrapolates the last segment linearly to the unit circle.  With
    ``theta = pi`` the traced curves are the horizontal trajectories of phi.
    """
    if step <= 0 or shell <= 0:
        raise ValueError("step and shell must be positive")
    if abs(seed) >= 1 - shell:
        raise ValueError("seed must lie inside the boundary shell")
    rot = phi.rotated(theta)
    ends, pts, arcl, lens, tails = [], [], [], [], []
    for direction in (-1.0, 1.0):
        _, length, end, tail, paths = trace_rays(rot, [seed], direction, step, shell,
                                                 max_steps, record=True)
        ends.append(end[0])
        pts.append(paths[0][0])
        arcl.append(paths[0][1])
        lens.append(length[0])
        tails.append(tail[0])
    back, fwd = pts
    points = np.concatenate([back[::-1], fwd[1:]])
    arclength = np.concatenate([lens[0] - arcl[0][::-1], lens[0] + arcl[1][1:]])
    total = lens[0] + lens[1] + tails[0] + tails[1]
    endpoints = tuple(BoundaryPoint(normalize_angle(np.angle(e))) for e in ends)
    return Trajectory(points=points, arclength=arclength, theta=float(theta),
                      endpoints=endpoints, endpoint_tol=10 * shell,
                      phi_length=float(total), tail_lengths=(float(tails[0]), float(tails[1])))
