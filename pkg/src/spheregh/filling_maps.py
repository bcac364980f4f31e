"""Antipode-preserving space-filling surjections between spheres.

S^1 ->> S^2 is built from eight circle arcs mapped onto the eight faces of
the cross-polytope boundary: the middle third of each arc traverses a
bisection-based triangle-filling curve, the outer thirds interpolate to
the face corners, and radial projection carries the polytope boundary to
the sphere.  Higher targets come from spherical suspension and
composition.
"""

from __future__ import annotations

import math

import numpy as np

from .geometry import normalize
from .maps import SphereMap, suspend, ComposedMap

E1 = np.array([1.0, 0.0, 0.0])
E2 = np.array([0.0, 1.0, 0.0])
E3 = np.array([0.0, 0.0, 1.0])

ARC = math.pi / 4.0


def triangle_filling_curve(t, entry, exit_, apex, levels: int):
    """Point of the depth-``levels`` bisection filling curve at t in [0,1].

    The triangle (entry, exit, apex) is split at the midpoint of the
    entry-exit side; the first half of the parameter range traverses
    (entry, apex, mid), the second (apex, exit, mid).  At the leaf level
    the curve runs linearly from entry to exit, so consecutive cells join
    continuously and the image is within one leaf diameter of every
    triangle point.
    """
    a = np.asarray(entry, dtype=float)
    b = np.asarray(exit_, dtype=float)
    c = np.asarray(apex, dtype=float)
    t = float(t)
    for _ in range(levels):
        m = 0.5 * (a + b)
        if t < 0.5:
            t = 2.0 * t
            a, b, c = a, c, m
        else:
            t = 2.0 * t - 1.0
            a, b, c = c, b, m
    return a + t * (b - a)


def filling_leaf_diameter(levels: int) -> float:
    """Exact max flat diameter over the leaf cells of the bisection scheme,
    starting from the unit cross-polytope face (equilateral, side sqrt 2).

    Computed by recursing on side-length triples (entry-exit, exit-apex,
    apex-entry) with memoization; the child triples follow from the median
    length formula.
    """
    from functools import lru_cache

    @lru_cache(maxsize=None)
    def worst(level, ab, bc, ca):
        if level == 0:
            return max(ab, bc, ca)
        am = 0.5 * ab
        # median from c to the midpoint m of ab
        cm = 0.5 * math.sqrt(max(0.0, 2 * ca ** 2 + 2 * bc ** 2 - ab ** 2))
        r = 1e-14
        left = worst(level - 1, round(ca / r) * r, round(cm / r) * r,
                     round(am / r) * r)
        right = worst(level - 1, round(bc / r) * r, round(cm / r) * r,
                      round(am / r) * r)
        return max(left, right)

    s = math.sqrt(2.0)
    return worst(levels, s, s, s)


class TriangleFillingSurjection(SphereMap):
    """psi_{1,2}: continuous antipodal surjection S^1 ->> S^2.

    ``depth`` counts diameter halvings of the filling curve's leaf cells
    (two bisection levels each); the image is guaranteed to be
    ``coverage_radius()``-dense in S^2.
    """

    # face data: (entry vertex, exit vertex, apex), arcs k = 0..3;
    # arcs 4..7 are the antipodal reflections
    FACES = (
        (E1, E2, E3),
        (E2, E3, -E1),
        (E3, -E2, E1),
        (-E2, -E1, E3),
    )

    def __init__(self, depth: int = 8):
        if depth < 1:
            raise ValueError("depth must be >= 1")
        self.depth = depth
        self.levels = 2 * depth
        self.source_dim = 1
        self.target_dim = 2
        self.antipode_preserving = True
        self.name = f"psi12[d{depth}]"

    def _face_point(self, k: int, s: float) -> np.ndarray:
        """Image of local parameter s in [0, 1] on arc k (0..3), on the
        flat cross-polytope face."""
        entry, exit_, apex = self.FACES[k]
        # outer thirds are (degenerate) linear collars to the corners, the
        # middle third carries the filling curve
        if s <= 1.0 / 3.0:
            u = 0.0
        elif s >= 2.0 / 3.0:
            u = 1.0
        else:
            u = 3.0 * s - 1.0
        return triangle_filling_curve(u, entry, exit_, apex, self.levels)

    def angle_to_point(self, angles) -> np.ndarray:
        ang = np.atleast_1d(np.asarray(angles, dtype=float))
        ang = np.mod(ang, 2.0 * math.pi)
        out = np.empty((len(ang), 3))
        for i, t in enumerate(ang):
            mirror = t >= math.pi
            if mirror:
                t -= math.pi
            k = min(int(t // ARC), 3)
            s = (t - k * ARC) / ARC
            p = self._face_point(k, s)
            out[i] = -p if mirror else p
        return normalize(out)

    def apply(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return self.angle_to_point(np.arctan2(pts[:, 1], pts[:, 0]))

    def coverage_radius(self) -> float:
        """Certified density of the image in S^2.

        Every flat face point is within one leaf diameter of the curve;
        radial projection from the face to the sphere stretches by at most
        sqrt(3) (the face plane is at distance 1/sqrt3), and chord lengths
        convert to geodesic ones with factor at most pi/2 over this range.
        """
        flat = filling_leaf_diameter(self.levels)
        return flat * math.sqrt(3.0) * (math.pi / 2.0)

    def parameter_grid(self, per_face: int = 4096) -> np.ndarray:
        return np.linspace(0.0, 2.0 * math.pi, 8 * per_face, endpoint=False)


def iterated_filling_surjection(m: int, n: int, depth: int = 6) -> SphereMap:
    """psi_{m,n}: composition of suspended copies of the S^1 ->> S^2 map."""
    if not 0 < m < n:
        raise ValueError("need 0 < m < n")
    chain = None
    for k in range(m, n):
        step: SphereMap = TriangleFillingSurjection(depth)
        for _ in range(k - 1):
            step = suspend(step)
        chain = step if chain is None else ComposedMap(step, chain)
    return chain
