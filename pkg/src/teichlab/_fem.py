"""Quadratic finite elements for the mixed Dirichlet/Neumann modulus problem.

The polygon is first whitened by the inverse square root of its area second
moment, so that long thin images of the disk become round.  The whitening is
an affine map ``M``; the Dirichlet energy of the original problem equals the
energy of the whitened problem in the constant metric ``G = M M^T / |det M|``.

The mesh is a Delaunay triangulation of a uniform lattice, refined in nested
disks around the four marks where the potential has square-root corner
singularities, together with a graded resampling of the boundary.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
import shapely
from scipy.spatial import Delaunay, cKDTree

from .errors import ResolutionError

# Gradients of the six P2 basis functions written as
# sum_{c,d} C[i, c, d] * lam_d * grad(lam_c), using sum_d lam_d = 1.
_C = np.zeros((6, 3, 3))
for _a in range(3):
    for _d in range(3):
        _C[_a, _a, _d] = 4 * (_a == _d) - 1
for _e, (_a, _b) in enumerate([(0, 1), (1, 2), (2, 0)]):
    _C[3 + _e, _b, _a] += 4
    _C[3 + _e, _a, _b] += 4
# integral of lam_d lam_D over the reference triangle, divided by its area
_MREF = (np.ones((3, 3)) + np.eye(3)) / 12.0
_P2_STIFF = np.einsum("icd,jCD,dD->ijcC", _C, _C, _MREF)

SIDE_A, SIDE_B = 0, 2


@dataclass
class EnergyInfo:
    energy: float
    n_dofs: int
    n_triangles: int
    area_mismatch: float


def _whiten(P):
    x, y = P[:, 0], P[:, 1]
    x1, y1 = np.roll(x, -1), np.roll(y, -1)
    cr = x * y1 - x1 * y
    area = cr.sum() / 2
    cx = ((x + x1) * cr).sum() / (6 * area)
    cy = ((y + y1) * cr).sum() / (6 * area)
    xx = ((x * x + x * x1 + x1 * x1) * cr).sum() / (12 * area) - cx * cx
    yy = ((y * y + y * y1 + y1 * y1) * cr).sum() / (12 * area) - cy * cy
    xy = ((x * y1 + 2 * x * y + 2 * x1 * y1 + x1 * y) * cr).sum() / (24 * area) - cx * cy
    w, V = np.linalg.eigh(np.array([[xx, xy], [xy, yy]]))
    M = V @ np.diag(w ** -0.5) @ V.T
    Q = (P - [cx, cy]) @ M.T
    M = M * (2.0 / (Q.max(0) - Q.min(0)).max())
    Q = (P - [cx, cy]) @ M.T
    G = M @ M.T / abs(np.linalg.det(M))
    return Q, G


def _side_labels(n, marks):
    """Label of each polygon edge ``(i, i+1)``: 0 = A, 1, 2 = B, 3."""
    idx = np.arange(n)
    lab = np.full(n, 3)
    for k in (2, 1, 0):
        lab[(idx - marks[k]) % n < (marks[k + 1] - marks[k]) % n] = k
    return lab


def _resample_boundary(Q, marks, hloc_of_sigma, h, hmin, rho):
    """Graded boundary nodes; polygon vertices are always kept."""
    n = len(Q)
    seg = np.linalg.norm(np.roll(Q, -1, axis=0) - Q, axis=1)
    sig_v = np.concatenate([[0.0], np.cumsum(seg)])
    total = sig_v[-1]
    # fine sampling of the spacing function: geometric near the marks
    geo = hmin * np.geomspace(1.0, 4 * rho * h / hmin, 200)
    extra = [np.linspace(0.0, total, int(np.ceil(total / (0.25 * h))) + 1)]
    for m in marks:
        extra.append(np.mod(sig_v[m] + np.concatenate([geo, -geo]), total))
    grid = np.unique(np.concatenate([sig_v] + extra))
    inv = 1.0 / hloc_of_sigma(grid, sig_v[list(marks)], total)
    cum = np.concatenate([[0.0], np.cumsum(0.5 * (inv[1:] + inv[:-1]) * np.diff(grid))])
    gv = np.interp(sig_v, grid, cum)
    counts = np.maximum(1, np.ceil(np.diff(gv) - 1e-9).astype(int))
    edge = np.repeat(np.arange(n), counts)
    start = np.repeat(np.cumsum(counts) - counts, counts)
    frac = (np.arange(counts.sum()) - start) / counts[edge]
    sig = np.interp(gv[edge] + frac * (gv[edge + 1] - gv[edge]), cum, grid)
    # snap each node onto its edge
    t = np.clip((sig - sig_v[edge]) / seg[edge], 0.0, 1.0)
    t[frac == 0] = 0.0
    Qn = np.roll(Q, -1, axis=0)
    pts = Q[edge] + t[:, None] * (Qn[edge] - Q[edge])
    return pts, edge, frac == 0


def dirichlet_energy(points, marks, grid: int, rho: float = 6.0, levels: int = 10) -> EnergyInfo:
    """Energy of the harmonic function equal to 0 on side A and 1 on side B.

    ``points`` is the counterclockwise polygon (N x 2) and ``marks`` four
    increasing vertex indices; side A runs from ``marks[0]`` to ``marks[1]``
    and side B from ``marks[2]`` to ``marks[3]``.  ``grid`` sets the lattice
    spacing ``D / (grid - 1)`` in units of the whitened diameter ``D``; quadratic
    elements use vertices at twice that spacing.
    """
    P = np.asarray(points, dtype=float)
    n = len(P)
    marks = [int(m) for m in marks]
    Q, G = _whiten(P)
    lo, hi = Q.min(0), Q.max(0)
    h = 2.0 * (hi - lo).max() / (grid - 1)
    hmin = h / 2 ** levels
    mk = Q[marks]
    tree = cKDTree(mk)

    def hloc(pts):
        return np.clip(tree.query(pts)[0] / rho, hmin, h)

    def hloc_sigma(sig, sig_marks, total):
        d = np.abs(sig[:, None] - sig_marks[None, :])
        d = np.minimum(d, total - d).min(axis=1)
        return np.clip(d / rho, hmin, h)

    lab = _side_labels(n, marks)
    B, edge, at_vertex = _resample_boundary(Q, marks, hloc_sigma, h, hmin, rho)
    nb = len(B)
    slab = lab[edge]
    vlab = slab.copy()
    vid = edge[at_vertex]
    # a mark vertex belongs to the Dirichlet side that it bounds
    for m, side in zip(marks, (SIDE_A, SIDE_A, SIDE_B, SIDE_B)):
        vlab[np.flatnonzero(at_vertex)[vid == m]] = side

    pts = []
    for k in range(levels + 1):
        hk = h / 2 ** k
        if k == 0:
            gx = np.arange(np.floor(lo[0] / hk), np.ceil(hi[0] / hk) + 1) * hk
            gy = np.arange(np.floor(lo[1] / hk), np.ceil(hi[1] / hk) + 1) * hk
            X, Y = np.meshgrid(gx, gy)
            pts.append(np.c_[X.ravel(), Y.ravel()])
            continue
        R = 2 * rho * hk
        off = np.arange(-np.ceil(R / hk), np.ceil(R / hk) + 1)
        OX, OY = np.meshgrid(off, off)
        for c in mk:
            base = np.round(c / hk)
            cand = (base + np.c_[OX.ravel(), OY.ravel()]) * hk
            pts.append(cand[np.hypot(*(cand - c).T) < R])
    interior = np.unique(np.round(np.vstack(pts) / hmin).astype(np.int64), axis=0) * hmin
    poly = shapely.Polygon(Q)
    interior = interior[shapely.contains_xy(poly, interior[:, 0], interior[:, 1])]
    if len(interior):
        dist = cKDTree(B).query(interior)[0]
        interior = interior[dist > 0.5 * hloc(interior)]

    a_pts = B[(vlab == SIDE_A)]
    b_pts = B[(vlab == SIDE_B)]
    gap = cKDTree(a_pts).query(b_pts)[0].min()
    if gap < 4 * hmin:
        raise ResolutionError(f"sides A and B are {gap:.3g} apart, below the mesh scale")

    X = np.vstack([B, interior])
    tri = Delaunay(X).simplices
    cen = X[tri].mean(axis=1)
    tri = tri[shapely.contains_xy(poly, cen[:, 0], cen[:, 1])]
    pa, pb, pc = X[tri[:, 0]], X[tri[:, 1]], X[tri[:, 2]]
    d1, d2 = pb - pa, pc - pa
    det = d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0]
    lmax = np.max([np.hypot(*d1.T), np.hypot(*d2.T), np.hypot(*(pc - pb).T)], axis=0)
    keep = np.abs(det) / (2 * lmax ** 2) > 1e-6
    tri, d1, d2, det = tri[keep], d1[keep], d2[keep], det[keep]
    area = 0.5 * np.abs(det)
    mismatch = abs(area.sum() - poly.area) / poly.area
    if mismatch > 1e-6:
        raise ResolutionError(f"mesh covers the polygon only up to relative area {mismatch:.2e}")

    nt = len(tri)
    g = np.empty((nt, 3, 2))
    g[:, 1, 0], g[:, 1, 1] = d2[:, 1] / det, -d2[:, 0] / det
    g[:, 2, 0], g[:, 2, 1] = -d1[:, 1] / det, d1[:, 0] / det
    g[:, 0] = -g[:, 1] - g[:, 2]
    bg = np.einsum("tak,kl,tbl->tab", g, G, g)
    kloc = np.einsum("ijcC,tcC->tij", _P2_STIFF, bg) * area[:, None, None]

    N = len(X)
    e = np.sort(np.concatenate([tri[:, [0, 1]], tri[:, [1, 2]], tri[:, [2, 0]]]), axis=1)
    ue, inv = np.unique(e, axis=0, return_inverse=True)
    inv = inv.reshape(3, nt).T
    ndof = N + len(ue)
    dofs = np.concatenate([tri, N + inv], axis=1)

    fixed = np.full(ndof, np.nan)
    fixed[:nb][vlab == SIDE_A] = 0.0
    fixed[:nb][vlab == SIDE_B] = 1.0
    # midpoints of boundary edges lying on a Dirichlet side
    cnt = np.bincount(inv.ravel(), minlength=len(ue))
    bd = np.flatnonzero(cnt == 1)
    i0, i1 = ue[bd, 0], ue[bd, 1]
    on_b = (i0 < nb) & (i1 < nb)
    first = np.where(i1 - i0 == 1, i0, i1)
    seglab = np.where(on_b, slab[np.minimum(first, nb - 1)], 1)
    fixed[N + bd[seglab == SIDE_A]] = 0.0
    fixed[N + bd[seglab == SIDE_B]] = 1.0

    rows = np.repeat(dofs, 6, axis=1).ravel()
    cols = np.tile(dofs, (1, 6)).ravel()
    K = sp.csr_matrix((kloc.ravel(), (rows, cols)), shape=(ndof, ndof))
    isfix = ~np.isnan(fixed)
    u = np.where(isfix, fixed, 0.0)
    free = ~isfix
    Kfree = K[free]
    rhs = -(Kfree[:, isfix] @ u[isfix])
    u[free] = spla.spsolve(Kfree[:, free].tocsc(), rhs, permc_spec="MMD_AT_PLUS_A")
    energy = float(u @ (K @ u))
    return EnergyInfo(energy, int(ndof), int(nt), float(mismatch))
