"""Masses of boxes of geodesics for the measured lamination of a differential.

For a box ``[a,b] x [c,d]`` the mass is ``int dx / l(x)`` over the vertical
leaves of ``e^{-i theta} phi`` having one endpoint in each arc, where ``x`` is
the horizontal natural coordinate and ``l`` the phi-length of the leaf.

The transversal is realized by slicing the natural-chart image of the disk
with the vertical lines ``Re w = x`` at midpoints of a uniform partition of
its x-extent.  Every connected slice is one leaf; it is seeded at its middle
and traced in the disk.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .disk_geometry import ANGLE_EPS, GeodesicBox, in_arc, normalize_angle
from .quad_diff import (DEFAULT_SHELL, DEFAULT_STEP, QuadraticDifferential,
                        inverse_natural_parameter, trace_rays)

MIN_SAMPLES = 16


@dataclass(frozen=True)
class LaminationMass:
    box: GeodesicBox
    theta: float
    value: float
    error_estimate: float
    samples_used: int
    coverage_warning: bool = False

    def to_json(self) -> str:
        return json.dumps({"box": self.box.to_json(), "theta": self.theta, "value": self.value,
                           "error_estimate": self.error_estimate,
                           "samples_used": self.samples_used})


@dataclass
class Leaves:
    """Sampled leaves of one transversal partition."""

    dx: float
    x: np.ndarray          # x-coordinate of each leaf
    ends: np.ndarray       # (n, 2) endpoint angles
    length: np.ndarray     # phi-length
    slice_length: np.ndarray  # length of the slice in the natural chart


def _x_extent(rot: QuadraticDifferential, n_boundary: int):
    alpha = 2 * np.pi * np.arange(n_boundary) / n_boundary
    xr = rot.natural(np.exp(1j * alpha)).real
    h = 2 * np.pi / n_boundary
    out = []
    for sign, k in ((1.0, np.argmin(xr)), (-1.0, np.argmax(xr))):
        res = minimize_scalar(lambda a: sign * rot.natural(np.exp(1j * a)).real,
                              bounds=(alpha[k] - h, alpha[k] + h), method="bounded",
                              options={"xatol": 1e-12})
        out.append(sign * res.fun)
    return out[0], out[1]


def _slices(rot: QuadraticDifferential, xs: np.ndarray, n_boundary: int):
    """Connected pieces of ``{Re w = x}`` inside the image polygon.

    Returns ``(x_index, y_lo, y_hi, zeta_lo)`` per piece, where ``zeta_lo`` is
    the boundary point at the lower end.
    """
    alpha = 2 * np.pi * np.arange(n_boundary + 1) / n_boundary
    zb = np.exp(1j * alpha)
    W = rot.natural(zb)
    w0, w1 = W[:-1], W[1:]
    lo = np.minimum(w0.real, w1.real)
    hi = np.maximum(w0.real, w1.real)
    i0 = np.searchsorted(xs, lo, side="right")
    i1 = np.searchsorted(xs, hi, side="right")
    counts = i1 - i0
    edge = np.repeat(np.arange(n_boundary), counts)
    start = np.repeat(np.cumsum(counts) - counts, counts)
    xi = i0[edge] + (np.arange(counts.sum()) - start)
    tau = (xs[xi] - w0.real[edge]) / (w1.real[edge] - w0.real[edge])
    y = w0.imag[edge] + tau * (w1.imag[edge] - w0.imag[edge])
    zc = np.exp(1j * (alpha[edge] + tau * (alpha[edge + 1] - alpha[edge])))
    order = np.lexsort((y, xi))
    xi, y, zc = xi[order], y[order], zc[order]
    # a vertical line meets a Jordan polygon an even number of times; drop
    # the rare lines passing exactly through a vertex
    per = np.bincount(xi, minlength=len(xs))
    good = per[xi] % 2 == 0
    xi, y, zc = xi[good], y[good], zc[good]
    return xi[0::2], y[0::2], y[1::2], zc[0::2]


def sample_leaves(phi: QuadraticDifferential, theta: float, n_samples: int,
                  step: float = DEFAULT_STEP, shell: float = DEFAULT_SHELL,
                  n_boundary: int | None = None) -> Leaves:
    """Trace one leaf through every slice of the natural image at ``n_samples`` x-values."""
    rot = phi.rotated(theta)
    if n_boundary is None:
        n_boundary = max(8192, 4 * n_samples)
    xmin, xmax = _x_extent(rot, n_boundary)
    dx = (xmax - xmin) / n_samples
    xs = xmin + dx * (np.arange(n_samples) + 0.5)
    xi, ylo, yhi, zlo = _slices(rot, xs, n_boundary)
    wmid = xs[xi] + 0.5j * (ylo + yhi)
    # start from the lower boundary crossing and follow the leaf upward
    zeta = zlo * (1 - 1e-12)
    n_sub = 16
    hs = 0.5 * (yhi - ylo) / n_sub
    f = lambda u: 1j / rot.sqrt_phi(u)
    for _ in range(n_sub):
        k1 = f(zeta)
        k2 = f(zeta + 0.5 * hs * k1)
        k3 = f(zeta + 0.5 * hs * k2)
        k4 = f(zeta + hs * k3)
        zeta = zeta + hs / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    seeds = inverse_natural_parameter(rot, wmid, guess=zeta)
    slice_len = yhi - ylo
    ends = np.empty((len(seeds), 2))
    length = slice_len.copy()
    traceable = np.abs(seeds) < 1 - 2 * shell
    # leaves too short to clear the shell keep their slice geometry
    ends[~traceable, 0] = np.angle(zlo[~traceable])
    ends[~traceable, 1] = np.angle(_upper_crossing(rot, wmid[~traceable], yhi[~traceable],
                                                   seeds[~traceable]))
    if np.any(traceable):
        seeds_t = seeds[traceable]
        _, l_dn, e_dn, t_dn, _ = trace_rays(rot, seeds_t, -1.0, step, shell)
        _, l_up, e_up, t_up, _ = trace_rays(rot, seeds_t, 1.0, step, shell)
        ends[traceable, 0] = np.angle(e_dn)
        ends[traceable, 1] = np.angle(e_up)
        length[traceable] = l_dn + l_up + t_dn + t_up
    return Leaves(dx=dx, x=xs[xi], ends=normalize_angle(ends), length=length,
                  slice_length=slice_len)


def _upper_crossing(rot, wmid, yhi, seeds):
    """Boundary point at the upper end of short slices, by Newton from the seed."""
    if len(wmid) == 0:
        return np.zeros(0, dtype=complex)
    target = wmid.real + 1j * yhi
    z = inverse_natural_parameter(rot, target, guess=seeds)
    return z / np.abs(z)


def _memberships(leaves: Leaves, box: GeodesicBox):
    (a, lab), (c, lcd) = box.arcs()
    e1, e2 = leaves.ends[:, 0], leaves.ends[:, 1]
    return (in_arc(e1, a, lab, ANGLE_EPS), in_arc(e1, c, lcd, ANGLE_EPS),
            in_arc(e2, a, lab, ANGLE_EPS), in_arc(e2, c, lcd, ANGLE_EPS))


def captured(leaves: Leaves, box: GeodesicBox) -> np.ndarray:
    """Mask of the leaves with one endpoint in each arc of the box."""
    m1a, m1c, m2a, m2c = _memberships(leaves, box)
    return ((m1a == 1) & (m2c == 1)) | ((m1c == 1) & (m2a == 1))


def _box_weights(leaves: Leaves, box: GeodesicBox):
    m1a, m1c, m2a, m2c = _memberships(leaves, box)
    inside = ((m1a == 1) & (m2c == 1)) | ((m1c == 1) & (m2a == 1))
    corner = ((m1a == 0) | (m1c == 0)) & ((m2a >= 0) | (m2c >= 0)) \
        | ((m2a == 0) | (m2c == 0)) & ((m1a >= 0) | (m1c >= 0))
    corner &= ~inside
    w = leaves.dx / leaves.length
    # a cell where membership flips is only partly in the box; charge it in full
    flip = np.flatnonzero(inside[1:] != inside[:-1])
    edge = float(np.maximum(w[flip], w[flip + 1]).sum())
    return float(w[inside].sum()), float(w[corner].sum()) + edge, int(inside.sum())


def lamination_mass(phi: QuadraticDifferential, theta: float, box: GeodesicBox,
                    n_samples: int = 4096, step: float = DEFAULT_STEP,
                    shell: float = DEFAULT_SHELL) -> LaminationMass:
    """Mass of ``box`` for the vertical lamination of ``e^{-i theta} phi``.

    Midpoint rule over ``n_samples`` transversal cells; the error estimate is
    the change against ``n_samples // 2`` cells plus the weight of leaves that
    end within the angular epsilon of a box corner or sit where box membership
    flips.
    """
    if n_samples < MIN_SAMPLES:
        raise ValueError(f"n_samples must be at least {MIN_SAMPLES}")
    fine = sample_leaves(phi, theta, n_samples, step, shell)
    coarse = sample_leaves(phi, theta, n_samples // 2, step, shell)
    return mass_from_leaves(fine, coarse, box, theta)


def mass_from_leaves(fine: Leaves, coarse: Leaves, box: GeodesicBox,
                     theta: float) -> LaminationMass:
    """Box mass from pre-sampled leaves (lets callers reuse one tracing for many boxes)."""
    v, corner, count = _box_weights(fine, box)
    vc, _, _ = _box_weights(coarse, box)
    return LaminationMass(box=box, theta=float(theta), value=v,
                          error_estimate=abs(v - vc) + corner, samples_used=len(fine.x),
                          coverage_warning=count == 0)


def atom_scan(phi: QuadraticDifferential, theta: float, geodesic, widths,
              n_samples: int = 4096) -> list:
    """Masses of the boxes ``[p - w, p + w] x [q - w, q + w]`` for decreasing ``w``.

    ``geodesic = (p, q)`` gives the two endpoint angles; ``w`` is an angular
    half-width.
    """
    p, q = (float(getattr(g, "angle", g)) for g in geodesic)
    widths = [float(w) for w in widths]
    if any(w <= 0 for w in widths) or any(b >= a for a, b in zip(widths, widths[1:])):
        raise ValueError("widths must be positive and strictly decreasing")
    fine = sample_leaves(phi, theta, n_samples)
    coarse = sample_leaves(phi, theta, n_samples // 2)
    return [mass_from_leaves(fine, coarse, GeodesicBox(p - w, p + w, q - w, q + w), theta).value
            for w in widths]
