"""The 32-region surjection S^3 ->> S^2 with distortion arccos(-1/3).

Built over the regular tetrahedron inscribed in the equatorial S^2: each
Voronoi cell V_i is coned into S^3 and split at colatitude ``alpha`` into a
top cone (snapped to u_i) and three bottom sub-cones (snapped to mid-arc
points u_{i,j}); the equatorial helmet is kept pointwise and the lower
hemisphere follows by oddness.  The colatitude split only works for
cos^2(alpha) in [(sqrt3-1)/(3+sqrt3), 7/9].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import normalize
from .maps import SphereMap
from .simplex_maps import regular_simplex

ALPHA_WINDOW = ((math.sqrt(3.0) - 1.0) / (3.0 + math.sqrt(3.0)), 7.0 / 9.0)


def admissible_alpha(cos2: float = 7.0 / 9.0) -> float:
    lo, hi = ALPHA_WINDOW
    if not lo - 1e-12 <= cos2 <= hi + 1e-12:
        raise ValueError(
            f"cos^2(alpha) = {cos2:g} outside the admissible window "
            f"[{lo:.6f}, {hi:.6f}]")
    return math.acos(math.sqrt(cos2))


@dataclass(frozen=True)
class TetraFrame:
    """Tetrahedron vertices, the twelve mid-arc points u_{i,j} and the
    derived cell corner data."""

    vertices: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.vertices is None:
            object.__setattr__(self, "vertices",
                               regular_simplex(2).vertices)
        v = np.ascontiguousarray(self.vertices, dtype=float)
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    @property
    def split_radius(self) -> float:
        """Arc distance from u_i to the mid-arc points: arccos(2*sqrt2/3)."""
        return math.acos(2.0 * math.sqrt(2.0) / 3.0)

    def mid_arc_point(self, i: int, j: int) -> np.ndarray:
        """Point on the shortest arc from u_i toward -u_j at distance
        arccos(2*sqrt2/3) from u_i."""
        if i == j:
            raise ValueError("need i != j")
        u = self.vertices
        r = self.split_radius
        w = -u[j] - np.dot(-u[j], u[i]) * u[i]
        w = w / np.linalg.norm(w)
        return math.cos(r) * u[i] + math.sin(r) * w

    def mid_arc_table(self) -> dict:
        return {(i, j): self.mid_arc_point(i, j)
                for i in range(4) for j in range(4) if i != j}

    def cell_corners(self, i: int) -> np.ndarray:
        return -self.vertices[[j for j in range(4) if j != i]]

    def subcell_corners(self, i: int, j: int) -> np.ndarray:
        """The sub-Voronoi cell of V_i nearest u_{i,j}: the kite spanned by
        u_i, the midpoints of the two cell edges meeting -u_j, and -u_j."""
        others = [k for k in range(4) if k not in (i, j)]
        u = self.vertices
        m1 = normalize(-(u[j] + u[others[0]]))
        m2 = normalize(-(u[j] + u[others[1]]))
        return np.array([u[i], m1, -u[j], m2])


def _first_wins_argmax(dots):
    return np.argmax(dots, axis=1)


class TetraRefinedMap(SphereMap):
    """phi_{3,2}: the 32-region piecewise-constant surjection S^3 ->> S^2."""

    def __init__(self, cos2_alpha: float = 7.0 / 9.0):
        self.alpha = admissible_alpha(cos2_alpha)
        self.cos_alpha = math.cos(self.alpha)
        self.frame = TetraFrame()
        self.source_dim = 3
        self.target_dim = 2
        self.antipode_preserving = True
        self.name = "phi32"
        self._mid = self.frame.mid_arc_table()
        self._mid_rows = {i: np.array([self._mid[(i, j)]
                                       for j in range(4) if j != i])
                          for i in range(4)}
        self._mid_cols = {i: [j for j in range(4) if j != i]
                          for i in range(4)}

    def _upper(self, pts):
        """Rule on the open upper hemisphere (last coordinate > 0)."""
        base = normalize(pts[:, :3])
        w = np.clip(pts[:, 3], -1.0, 1.0)
        cell = _first_wins_argmax(base @ self.frame.vertices.T)
        out = np.empty((len(pts), 3))
        top = w >= self.cos_alpha  # colatitude <= alpha
        for i in range(4):
            sel_top = top & (cell == i)
            out[sel_top] = self.frame.vertices[i]
            sel_bot = (~top) & (cell == i)
            if np.any(sel_bot):
                sub = _first_wins_argmax(base[sel_bot] @ self._mid_rows[i].T)
                out[sel_bot] = self._mid_rows[i][sub]
        return out

    def apply(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        w = pts[:, 3]
        out = np.empty((len(pts), 3))
        upper = w > 0
        lower = w < 0
        equator = ~(upper | lower)
        if np.any(upper):
            out[upper] = self._upper(pts[upper])
        if np.any(lower):
            out[lower] = -self._upper(-pts[lower])
        if np.any(equator):
            out[equator] = normalize(pts[equator, :3])
        return out

    # -- block decomposition for the certificate --

    def blocks(self):
        """(theta-interval, base-cell corners, representative, label)."""
        out = []
        for i in range(4):
            out.append(((0.0, self.alpha), self.frame.cell_corners(i),
                        self.frame.vertices[i], f"top{i}"))
        for i in range(4):
            for j in range(4):
                if i == j:
                    continue
                out.append(((self.alpha, math.pi / 2.0),
                            self.frame.subcell_corners(i, j),
                            self._mid[(i, j)], f"bot{i}{j}"))
        return out

    def witness_pair_seeds(self, eps: float = 2e-3):
        """Pairs approaching the binding bottom-vs-bottom term."""
        u = self.frame.vertices
        x = normalize(-(u[1] + u[2]))   # in the sub-cell of V_0 toward -u_1
        y = normalize(-(u[0] + u[2]))   # in the sub-cell of V_1 toward -u_0
        th = self.alpha + eps

        def emb(v, t):
            return np.array([math.sin(t) * v[0], math.sin(t) * v[1],
                             math.sin(t) * v[2], math.cos(t)])

        seeds = [(emb(x, th), emb(y, th))]
        # same-cell near-diameter pair in a bottom sub-cone
        seeds.append((emb(normalize(x + 0.05 * u[0]), th),
                      emb(y, th)))
        return seeds
