"""Inscribed regular simplices and the vertex-snap surjections
S^{m+1} ->> S^m built on their Voronoi cells.

The snap map sends the open upper hemisphere to the nearest equatorial
simplex vertex (lowest index wins ties), fixes the equator pointwise and
extends to the lower hemisphere by oddness.  Its distortion equals the
diameter of one Voronoi cell, the face-diameter constant eta_m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import normalize
from .maps import SphereMap


@dataclass(frozen=True)
class RegularSimplexFrame:
    """Vertices u_1..u_{m+2} of a regular (m+1)-simplex inscribed in S^m."""

    m: int
    vertices: np.ndarray

    def __post_init__(self):
        v = np.ascontiguousarray(self.vertices, dtype=float)
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)
        gram = v @ v.T
        target = np.full_like(gram, -1.0 / (self.m + 1))
        np.fill_diagonal(target, 1.0)
        if not np.allclose(gram, target, atol=1e-12):
            raise ValueError("vertices do not form a regular simplex")
        if not np.allclose(v.sum(axis=0), 0.0, atol=1e-12):
            raise ValueError("vertices do not sum to zero")

    @property
    def edge_length(self) -> float:
        return math.acos(-1.0 / (self.m + 1))

    def voronoi_cell_corners(self, i: int) -> np.ndarray:
        """The closed Voronoi cell of u_i is the normalized convex hull of
        the negated complementary vertices."""
        others = [j for j in range(self.m + 2) if j != i]
        return -self.vertices[others]


def regular_simplex(m: int) -> RegularSimplexFrame:
    """Vertices built by the standard recursion; for m = 1, 2 this lands
    exactly on the reference coordinates (first vertex at e_1)."""
    if m < 1:
        raise ValueError("m must be >= 1")
    verts = np.array([[1.0], [-1.0]])  # S^0
    for d in range(1, m + 1):
        k = d + 2
        out = np.zeros((k, d + 1))
        out[0, 0] = 1.0
        out[1:, 0] = -1.0 / (d + 1)
        out[1:, 1:] = math.sqrt(1.0 - 1.0 / (d + 1) ** 2) * verts
        verts = out
    return RegularSimplexFrame(m, verts)


def voronoi_labels(frame: RegularSimplexFrame, points) -> np.ndarray:
    """Index of the nearest vertex; ties resolved to the lowest index."""
    dots = np.atleast_2d(points) @ frame.vertices.T
    return np.argmax(dots, axis=1)


class SimplexSnapMap(SphereMap):
    """The surjection S^{m+1} ->> S^m with distortion eta_m.

    Upper open hemisphere: snap to the nearest equatorial simplex vertex.
    Equator: identity.  Lower: odd reflection of the upper rule.
    """

    def __init__(self, m: int):
        if m < 1:
            raise ValueError("m must be >= 1")
        self.m = m
        self.frame = regular_simplex(m)
        self.source_dim = m + 1
        self.target_dim = m
        self.antipode_preserving = True
        self.name = f"phi_{m + 1}{m}" if m > 1 else "phi21"

    def apply(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        z = pts[:, -1]
        out = np.empty((len(pts), self.m + 1))
        upper = z > 0
        lower = z < 0
        equator = ~(upper | lower)
        if np.any(upper):
            lab = voronoi_labels(self.frame, pts[upper, :-1])
            out[upper] = self.frame.vertices[lab]
        if np.any(lower):
            lab = voronoi_labels(self.frame, -pts[lower, :-1])
            out[lower] = -self.frame.vertices[lab]
        if np.any(equator):
            out[equator] = normalize(pts[equator, :-1])
        return out

    # -- data used by the certification routes --

    def cell_corners(self, i: int) -> np.ndarray:
        return self.frame.voronoi_cell_corners(i)

    def witness_pair_seeds(self, eps: float = 1e-4):
        """Source pairs that approach the distortion supremum: near-diameter
        pairs inside one Voronoi cone, just above the equator."""
        from .ranges import hull_dot_witness
        corners = self.cell_corners(0)
        a, b = hull_dot_witness(corners, corners, minimize=True, iters=4000)
        lift = math.cos(math.pi / 2 - eps)
        s = math.sin(math.pi / 2 - eps)

        def emb(v):
            w = np.zeros(self.m + 2)
            w[:-1] = s * v
            w[-1] = lift
            return w / np.linalg.norm(w)

        seeds = [(emb(a), emb(b))]
        # cross-cell straddle: two points astride a cell wall, near equator
        u = self.frame.vertices
        mid = normalize(u[0] + u[1])
        axis = normalize(u[0] - u[1])
        for t in (1e-3, 1e-2):
            p = normalize(mid + t * axis)
            q = normalize(mid - t * axis)
            seeds.append((emb(p), emb(q)))
        return seeds
