"""Certified delta-nets on spheres.

Every constructor returns a ``Net`` whose ``mesh`` field is a *certified*
covering radius: each point of the space is within ``mesh`` of some net
point.  Certification is analytic (per-band corner distances for ring and
suspension nets, per-face circumradii for icospheres), never by sampling
the space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import normalize

MAX_NET_POINTS = 4_000_000


class NetBudgetError(ValueError):
    def __init__(self, requested, feasible):
        self.feasible = feasible
        super().__init__(
            f"mesh {requested:g} would exceed the net budget of "
            f"{MAX_NET_POINTS} points; try mesh >= {feasible:g}")


@dataclass(frozen=True)
class Net:
    """Point net with a certified covering radius ``mesh``."""

    points: np.ndarray          # (N, dim+1) unit vectors
    mesh: float
    dim: int
    description: str = ""
    faces: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        pts = np.ascontiguousarray(self.points, dtype=np.float64)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return len(self.points)


def _band_corner_distance(theta, half, base_mesh):
    """Exact worst distance from a colatitude band [theta-half, theta+half]
    to a slice at colatitude theta whose cross-section is covered at
    ``base_mesh``.

    cos d = cos t cos theta + sin t sin theta cos(m); for t in the band the
    minimum of cos d is at a band endpoint, and it is decreasing in m.
    """
    worst = 0.0
    for t in (max(theta - half, 0.0), min(theta + half, math.pi)):
        c = (math.cos(t) * math.cos(theta)
             + math.sin(t) * math.sin(theta) * math.cos(base_mesh))
        worst = max(worst, math.acos(max(-1.0, min(1.0, c))))
    return worst


def circle_net(spacing: float) -> Net:
    """Equally spaced points on S^1; covering radius = spacing / 2."""
    if spacing <= 0:
        raise ValueError("spacing must be positive")
    n = max(3, int(math.ceil(2.0 * math.pi / spacing)))
    if n > MAX_NET_POINTS:
        raise NetBudgetError(spacing, 2.0 * math.pi / MAX_NET_POINTS)
    t = 2.0 * math.pi * np.arange(n) / n
    pts = np.stack([np.cos(t), np.sin(t)], axis=1)
    return Net(pts, math.pi / n, 1, f"circle[{n}]")


def circle_net_mesh(mesh: float) -> Net:
    """Circle net with covering radius at most ``mesh``."""
    return circle_net(2.0 * mesh)


def _build_rings(h_theta: float, h_arc: float):
    n_rings = max(2, int(math.ceil(math.pi / h_theta)) + 1)
    thetas = np.linspace(0.0, math.pi, n_rings)
    half = 0.5 * math.pi / (n_rings - 1)
    rows, cert = [], 0.0
    for th in thetas:
        s = math.sin(th)
        if th <= half + 1e-15 or th >= math.pi - half - 1e-15:
            z = 1.0 if th < math.pi / 2 else -1.0
            rows.append(np.array([[0.0, 0.0, z]]))
            cert = max(cert, min(th, math.pi - th) + half)
            continue
        m = max(3, int(math.ceil(2.0 * math.pi * s / h_arc)))
        phi = 2.0 * math.pi * np.arange(m) / m
        rows.append(np.stack([s * np.cos(phi), s * np.sin(phi),
                              np.full(m, math.cos(th))], axis=1))
        # worst point of the band: colatitude off by `half`, azimuth off by
        # half the arc spacing pi/m
        cert = max(cert, _band_corner_distance(th, half, math.pi / m))
    return normalize(np.concatenate(rows, axis=0)), cert


def ring_net_s2(mesh: float) -> Net:
    """Latitude-ring net on S^2 with certified covering radius <= mesh."""
    if mesh <= 0:
        raise ValueError("mesh must be positive")
    h = 1.30 * mesh
    pts, cert = _build_rings(h, h)
    for _ in range(6):
        if cert <= mesh:
            break
        h *= 0.97 * mesh / cert
        pts, cert = _build_rings(h, h)
    if cert > mesh:
        raise RuntimeError("ring net certification did not converge")
    if len(pts) > MAX_NET_POINTS:
        raise NetBudgetError(mesh, mesh * math.sqrt(len(pts) / MAX_NET_POINTS))
    return Net(pts, cert, 2, f"rings[{len(pts)}]")


# ---------------------------------------------------------------------------
# icosphere (triangulated; used where adjacency is needed)


def _icosahedron():
    p = (1.0 + math.sqrt(5.0)) / 2.0
    verts = np.array([
        [-1, p, 0], [1, p, 0], [-1, -p, 0], [1, -p, 0],
        [0, -1, p], [0, 1, p], [0, -1, -p], [0, 1, -p],
        [p, 0, -1], [p, 0, 1], [-p, 0, -1], [-p, 0, 1],
    ], dtype=float)
    faces = np.array([
        [0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
        [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
        [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
        [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1],
    ], dtype=np.int64)
    return normalize(verts), faces


def _subdivide(verts, faces):
    cache = {}
    verts = list(verts)

    def midpoint(i, j):
        key = (min(i, j), max(i, j))
        if key not in cache:
            cache[key] = len(verts)
            verts.append(normalize(verts[i] + verts[j]))
        return cache[key]

    out = []
    for a, b, c in faces:
        ab, bc, ca = midpoint(a, b), midpoint(b, c), midpoint(c, a)
        out.extend([[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]])
    return np.array(verts), np.array(out, dtype=np.int64)


def _face_circumradius_mesh(verts, faces):
    """Covering radius bound: the farthest point of an acute spherical
    triangle from its vertices is the circumcenter."""
    A, B, C = verts[faces[:, 0]], verts[faces[:, 1]], verts[faces[:, 2]]
    n = normalize(np.cross(B - A, C - A))
    flip = np.sum(n * A, axis=1) < 0
    n[flip] *= -1.0
    # circumcenter must project inside its face for the bound to apply
    for X, Y, Z in ((A, B, C), (B, C, A), (C, A, B)):
        inside = np.einsum("ij,ij->i", np.cross(Y - X, n - X), np.cross(Y - X, Z - X))
        if np.any(inside < -1e-9):
            raise RuntimeError("icosphere face with exterior circumcenter")
    return float(np.max(np.arccos(np.clip(np.sum(n * A, axis=1), -1, 1))))


def icosphere(level: int) -> Net:
    verts, faces = _icosahedron()
    for _ in range(level):
        verts, faces = _subdivide(verts, faces)
    mesh = _face_circumradius_mesh(verts, faces)
    return Net(verts, mesh, 2, f"icosphere[{level}]", faces=faces)


def sphere2_net(mesh: float, triangulated: bool = False) -> Net:
    """Net on S^2: an icosphere when one fits the budget, rings otherwise."""
    if triangulated:
        level, net = 0, icosphere(0)
        while net.mesh > mesh:
            level += 1
            if 10 * 4 ** level + 2 > MAX_NET_POINTS:
                raise NetBudgetError(mesh, net.mesh)
            net = icosphere(level)
        return net
    ring_budget = 2.2 * math.pi / mesh ** 2
    for level in range(9):
        n_pts = 10 * 4 ** level + 2
        if n_pts > 1.6 * ring_budget:
            break
        net = icosphere(level)
        if net.mesh <= mesh:
            return net
    return ring_net_s2(mesh)


# ---------------------------------------------------------------------------
# suspension nets for S^3 and S^4


def suspension_net(mesh: float, dim: int) -> Net:
    """Net on S^dim built slice-wise over nets of S^{dim-1}.

    Slice cross-section meshes are chosen so the exact band-corner distance
    stays below ``mesh``; the reported mesh is the certified maximum over
    bands.
    """
    if mesh <= 0:
        raise ValueError("mesh must be positive")
    dt = 1.15 * mesh
    n_slices = max(3, int(math.ceil(math.pi / dt)) + 1)
    thetas = np.linspace(0.0, math.pi, n_slices)
    half = 0.5 * math.pi / (n_slices - 1)
    rows, cert, total = [], 0.0, 0
    for th in thetas:
        s = math.sin(th)
        if min(th, math.pi - th) + half <= mesh:
            pole = np.zeros(dim + 1)
            pole[-1] = 1.0 if th < math.pi / 2 else -1.0
            rows.append(pole[None, :])
            cert = max(cert, min(th, math.pi - th) + half)
            continue
        # worst in-band factor sin(t) sin(theta) over |t - th| <= half
        peak = 1.0 if (th - half) <= math.pi / 2 <= (th + half) else \
            max(math.sin(th - half), math.sin(th + half))
        M = s * peak
        gain = (math.cos(half) - math.cos(mesh)) / M
        if gain <= 0:
            raise RuntimeError("suspension slices too coarse")
        target = math.acos(max(-1.0, 1.0 - gain))
        sub = _net_by_dim(dim - 1, target)
        block = np.empty((len(sub.points), dim + 1))
        block[:, :-1] = sub.points * s
        block[:, -1] = math.cos(th)
        rows.append(block)
        total += len(block)
        if total > MAX_NET_POINTS:
            raise NetBudgetError(mesh, mesh * 1.5)
        worst = 0.0
        for t in (th - half, th + half):
            c = (math.cos(t) * math.cos(th)
                 + math.sin(t) * s * math.cos(sub.mesh))
            worst = max(worst, math.acos(max(-1.0, min(1.0, c))))
        cert = max(cert, worst)
    pts = normalize(np.concatenate(rows, axis=0))
    return Net(pts, cert, dim, f"suspension[S{dim},{len(pts)}]")


def _net_by_dim(dim: int, mesh: float) -> Net:
    if dim == 1:
        return circle_net_mesh(mesh)
    if dim == 2:
        return sphere2_net(mesh)
    return suspension_net(mesh, dim)


def sphere_net(dim: int, mesh: float) -> Net:
    """Certified net on S^dim (dim >= 1)."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    return _net_by_dim(dim, mesh)


def fold_to_hemisphere(net: Net) -> Net:
    """Restrict a sphere net to the closed upper hemisphere.

    Points with negative last coordinate are reflected; reflection never
    increases the distance to an upper-hemisphere point, so the certified
    mesh carries over.
    """
    pts = net.points.copy()
    neg = pts[:, -1] < 0
    pts[neg, -1] *= -1.0
    pts = np.unique(np.round(pts, 12), axis=0)
    return Net(normalize(pts), net.mesh, net.dim, net.description + "|upper")


def hemisphere_net(dim: int, mesh: float) -> Net:
    return fold_to_hemisphere(sphere_net(dim, mesh))


def random_sphere_points(dim: int, n: int, rng) -> np.ndarray:
    """Quasi-uniform Gaussian-normalized sample on S^dim."""
    return normalize(rng.standard_normal((n, dim + 1)))
