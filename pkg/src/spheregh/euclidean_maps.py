"""Two hand-built block correspondences between the circle and (parts of)
the 2-sphere.

* Heptagon (Euclidean flavor): seven circle vertices matched with seven
  axis-aligned regions of the closed upper hemisphere, plus seven circle
  arcs matched with seven hemisphere points; chordal distortion strictly
  below sqrt(3).  Seven geometric separation conditions are verified
  numerically at construction.

* Hexagon (geodesic flavor): six circle arcs matched with six sphere
  points and six circle vertices matched with six spherical-coordinate
  rectangles covering S^2; distortion 2*pi/3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import Flavor, chord_from_geodesic, normalize
from . import ranges
from .ranges import Interval

SQRT3 = math.sqrt(3.0)


def rho(k: int) -> float:
    """Chord lengths of the regular heptagon: sqrt(2 - 2 cos(k pi / 7))."""
    return math.sqrt(2.0 - 2.0 * math.cos(k * math.pi / 7.0))


def cyclic_gap(i: int, j: int, n: int) -> int:
    d = abs(i - j) % n
    return min(d, n - d)


# ---------------------------------------------------------------------------
# axis-aligned hemisphere boxes


@dataclass(frozen=True)
class HemisphereBox:
    """{(x, y, z) in S^2 : z >= 0, x in [x0,x1], y in [y0,y1]}."""

    x0: float = -np.inf
    x1: float = np.inf
    y0: float = -np.inf
    y1: float = np.inf

    def contains(self, pts, tol: float = 0.0) -> np.ndarray:
        p = np.atleast_2d(pts)
        return ((p[:, 2] >= -tol)
                & (p[:, 0] >= self.x0 - tol) & (p[:, 0] <= self.x1 + tol)
                & (p[:, 1] >= self.y0 - tol) & (p[:, 1] <= self.y1 + tol))

    def samples(self, mesh: float = 0.01):
        """Sample points with certified covering radius.

        Interior points come from a spherical-coordinate grid of geodesic
        mesh <= ``mesh``; boundary curves (the box walls and the equator
        edge) are sampled at mesh/5.  Any region point is within
        1.01*mesh + mesh/5 of some sample.
        """
        h = mesh / math.sqrt(2.0)
        thetas = np.arange(0.0, math.pi / 2 + h, h)
        rows = []
        for th in thetas:
            s = math.sin(th)
            m = max(8, int(math.ceil(2.0 * math.pi * max(s, 1e-9) / h)))
            phi = 2.0 * math.pi * np.arange(m) / m
            rows.append(np.stack([s * np.cos(phi), s * np.sin(phi),
                                  np.full(m, math.cos(th))], axis=1))
        grid = np.concatenate(rows, axis=0)
        keep = grid[self.contains(grid)]
        bnd = self._boundary_samples(mesh / 5.0)
        pts = np.concatenate([keep, bnd], axis=0) if len(bnd) else keep
        cover = 1.01 * mesh + mesh / 5.0
        return pts, cover

    def _boundary_samples(self, step: float):
        out = []
        # equator edge
        t = np.arange(0.0, 2.0 * math.pi, step)
        eq = np.stack([np.cos(t), np.sin(t), np.zeros_like(t)], axis=1)
        out.append(eq[self.contains(eq, tol=1e-12)])
        # walls x = const and y = const: circles on the sphere
        for axis, vals in ((0, (self.x0, self.x1)), (1, (self.y0, self.y1))):
            for v in vals:
                if not np.isfinite(v) or abs(v) >= 1.0:
                    continue
                r = math.sqrt(1.0 - v * v)
                t = np.arange(0.0, 2.0 * math.pi, step / max(r, 1e-9))
                ring = np.zeros((len(t), 3))
                ring[:, axis] = v
                ring[:, 1 - axis] = r * np.cos(t)
                ring[:, 2] = r * np.sin(t)
                out.append(ring[self.contains(ring, tol=1e-12)])
        return np.concatenate([o for o in out if len(o)], axis=0) \
            if out else np.empty((0, 3))


def box_distance_range(pa, cov_a, pb, cov_b) -> Interval:
    """Chordal distance range between two sampled regions, padded by the
    covering radii."""
    from scipy.spatial import cKDTree
    tree = cKDTree(pb)
    dmin, _ = tree.query(pa, k=1)
    lo = float(np.min(dmin))
    # max via convex hull extremes (max distance is attained at hull pts)
    hi = _max_cross_distance(pa, pb)
    return Interval(max(0.0, lo - cov_a - cov_b),
                    min(2.0, hi + cov_a + cov_b))


def _max_cross_distance(pa, pb) -> float:
    from scipy.spatial import ConvexHull
    def hull_pts(p):
        if len(p) < 5:
            return p
        try:
            return p[ConvexHull(p).vertices]
        except Exception:
            return p
    ha, hb = hull_pts(pa), hull_pts(pb)
    d2 = (np.sum(ha ** 2, axis=1)[:, None] + np.sum(hb ** 2, axis=1)[None, :]
          - 2.0 * ha @ hb.T)
    return float(math.sqrt(max(0.0, d2.max())))


def box_point_distance_range(pa, cov_a, q) -> Interval:
    d = np.linalg.norm(pa - np.asarray(q)[None, :], axis=1)
    return Interval(max(0.0, float(d.min()) - cov_a),
                    min(2.0, float(d.max()) + cov_a))


def halfcap_diameter(c: float) -> float:
    """Exact chordal diameter of {y >= c, z >= 0} on S^2 for c in (0, 1):
    the minimum inner product over the region is 2c^2 - 1, attained by the
    two equator corners (+-sqrt(1-c^2), c, 0)."""
    return 2.0 * math.sqrt(1.0 - c * c)


def band_diameter(c_lo: float, c_hi: float) -> float:
    """Exact chordal diameter of the band {c_lo <= y <= c_hi, z >= 0} when
    0 < -c_hi <= -c_lo (a band below the equator): attained at the corners
    on the wide edge y = c_hi."""
    return 2.0 * math.sqrt(1.0 - c_hi * c_hi)


# ---------------------------------------------------------------------------
# the heptagon correspondence


@dataclass(frozen=True)
class HeptagonCorrespondence:
    """Correspondence between S^1_E and the closed upper hemisphere of
    S^2_E with chordal distortion < sqrt(3)."""

    alpha: float = 0.866
    sample_mesh: float = 0.008
    vertex_angles: np.ndarray = field(init=False)
    anchors: np.ndarray = field(init=False)
    boxes: tuple = field(init=False)

    def __post_init__(self):
        a = self.alpha
        y_n = math.sqrt(1.0 - a * a)
        beta = y_n + 2.0 - SQRT3
        g5 = y_n + rho(6) - SQRT3
        g6 = y_n + (rho(6) - SQRT3) + (rho(5) - SQRT3)
        anchors = np.array([
            [math.sqrt(1.0 - beta ** 2), beta, 0.0],
            [0.0, beta, math.sqrt(1.0 - beta ** 2)],
            [0.0, y_n, a],
            [0.0, 0.0, 1.0],
            [0.0, -g5, math.sqrt(1.0 - g5 ** 2)],
            [0.0, -g6, math.sqrt(1.0 - g6 ** 2)],
            [math.sqrt(1.0 - g6 ** 2), -g6, 0.0],
        ])
        # seven axis-aligned regions covering the hemisphere; the two
        # bands through y = +-y_n are diameter-critical (2*alpha < sqrt 3)
        boxes = (
            HemisphereBox(x0=0.60, y0=-0.28),
            HemisphereBox(y0=y_n),
            HemisphereBox(x0=0.0, y0=-y_n, y1=y_n),
            HemisphereBox(x1=0.0, y0=-y_n, y1=y_n),
            HemisphereBox(y0=-0.73, y1=-y_n),
            HemisphereBox(x1=0.30, y1=-0.73),
            HemisphereBox(x0=0.30, y1=-0.73),
        )
        object.__setattr__(self, "vertex_angles",
                           2.0 * math.pi * (np.arange(7) + 1) / 7.0)
        object.__setattr__(self, "anchors", anchors)
        object.__setattr__(self, "boxes", boxes)

    @property
    def vertices(self) -> np.ndarray:
        t = self.vertex_angles
        return np.stack([np.cos(t), np.sin(t)], axis=1)

    def arc(self, i: int):
        """Arc of S^1 matched with anchor i: centered at vertex i with
        half-length pi/7 (it runs between the antipodes -u_{i+3}, -u_{i+4})."""
        return float(self.vertex_angles[i]), math.pi / 7.0

    def region_samples(self, mesh=None):
        mesh = mesh or self.sample_mesh
        return [b.samples(mesh) for b in self.boxes]

    def verify_conditions(self, mesh=None, margin: float = 1e-9):
        """Numerically verify the seven separation conditions.

        Index differences are cyclic.  Returns a dict of the worst slack
        per condition; raises if any condition fails.
        """
        samples = self.region_samples(mesh)
        a = self.anchors
        y_n = math.sqrt(1.0 - self.alpha ** 2)
        report = {}

        def need(name, ok, slack):
            report[name] = slack
            if not ok:
                raise ValueError(f"heptagon condition {name} fails "
                                 f"(slack {slack:.6f})")

        thr1 = rho(6) - SQRT3
        worst = np.inf
        for i in range(7):
            for j in range(i + 1, 7):
                if cyclic_gap(i, j, 7) != 3:
                    continue
                rij = box_distance_range(samples[i][0], samples[i][1],
                                         samples[j][0], samples[j][1])
                worst = min(worst, rij.lo - thr1)
        need("1:region-region", worst > margin, worst)

        worst = np.inf
        for i in range(7):
            for j in range(7):
                if cyclic_gap(i, j, 7) == 2:
                    worst = min(worst,
                                float(np.linalg.norm(a[i] - a[j])) - thr1)
        need("2:anchor-anchor", worst > margin, worst)

        thr3 = 2.0 - SQRT3
        worst = np.inf
        for i in range(7):
            for j in range(7):
                if cyclic_gap(i, j, 7) == 3:
                    worst = min(worst,
                                float(np.linalg.norm(a[i] - a[j])) - thr3)
        need("3:anchor-anchor-far", worst > margin, worst)

        thr4 = rho(5) - SQRT3
        worst = np.inf
        for i in range(7):
            for j in range(7):
                if cyclic_gap(i, j, 7) != 2:
                    continue
                r = box_point_distance_range(samples[i][0], samples[i][1],
                                             a[j])
                worst = min(worst, r.lo - thr4)
        need("4:region-anchor", worst > margin, worst)

        worst = np.inf
        for i in range(7):
            for j in range(7):
                if cyclic_gap(i, j, 7) != 3:
                    continue
                r = box_point_distance_range(samples[i][0], samples[i][1],
                                             a[j])
                worst = min(worst, r.lo - thr3)
        need("5:region-anchor-far", worst > margin, worst)

        worst = np.inf
        for i, (pts, cov) in enumerate(samples):
            if i == 1:
                d = halfcap_diameter(y_n)
            elif i == 4:
                d = band_diameter(-0.73, -y_n)
            else:
                d = _max_cross_distance(pts, pts) + 2.0 * cov
            worst = min(worst, SQRT3 - d)
        need("6:region-diameter", worst > margin, worst)

        worst = np.inf
        for i in range(7):
            d = float(np.linalg.norm(a[i] - a[(i + 1) % 7]))
            worst = min(worst, SQRT3 - d)
        need("7:anchor-chain", worst > margin, worst)

        # structural requirements of the correspondence itself
        member = all(self.boxes[i].contains(a[i:i + 1], tol=1e-12)[0]
                     for i in range(7))
        need("anchors-in-regions", member, 0.0 if member else -1.0)
        probe = normalize(np.random.default_rng(7).standard_normal((4000, 3)))
        probe[:, 2] = np.abs(probe[:, 2])
        covered = np.zeros(len(probe), dtype=bool)
        for b in self.boxes:
            covered |= b.contains(probe, tol=1e-12)
        need("regions-cover", bool(covered.all()),
             float(covered.mean()) - 1.0)
        return report

    # -- certification -----------------------------------------------------

    def distortion_terms(self, mesh=None):
        """Certified |d_X - d_Y| range bound per block pair (chordal)."""
        samples = self.region_samples(mesh)
        a = self.anchors
        terms = {}
        for i in range(7):
            for j in range(i, 7):
                dx = Interval(0.0, 0.0) if i == j else \
                    ranges.point_value_range(
                        float(np.linalg.norm(self.vertices[i]
                                             - self.vertices[j])))
                if i == j:
                    dy = Interval(0.0, self._region_diam(i, samples))
                else:
                    dy = box_distance_range(samples[i][0], samples[i][1],
                                            samples[j][0], samples[j][1])
                terms[f"V{i}V{j}"] = ranges.pair_term(dx, dy)
        for i in range(7):
            for j in range(i, 7):
                ci, hi = self.arc(i)
                cj, hj = self.arc(j)
                garc = ranges.arc_distance_range(ci, hi, cj, hj)
                dx = Interval(chord_from_geodesic(garc.lo),
                              chord_from_geodesic(garc.hi))
                dy = ranges.point_value_range(
                    float(np.linalg.norm(a[i] - a[j])))
                terms[f"A{i}A{j}"] = ranges.pair_term(dx, dy)
        for i in range(7):
            for j in range(7):
                cj, hj = self.arc(j)
                garc = ranges.arc_point_distance_range(
                    cj, hj, float(self.vertex_angles[i]))
                dx = Interval(chord_from_geodesic(garc.lo),
                              chord_from_geodesic(garc.hi))
                dy = box_point_distance_range(samples[i][0], samples[i][1],
                                              a[j])
                terms[f"V{i}A{j}"] = ranges.pair_term(dx, dy)
        return terms

    def _region_diam(self, i, samples):
        y_n = math.sqrt(1.0 - self.alpha ** 2)
        if i == 1:
            return halfcap_diameter(y_n)
        if i == 4:
            return band_diameter(-0.73, -y_n)
        pts, cov = samples[i]
        return _max_cross_distance(pts, pts) + 2.0 * cov

    def witness_pairs(self, mesh=None):
        """Concrete relation pairs for the lower estimate."""
        samples = self.region_samples(mesh or 0.02)
        out = []
        u = self.vertices
        for i in range(7):
            j = (i + 3) % 7
            pts_i, _ = samples[i]
            pts_j, _ = samples[j]
            from scipy.spatial import cKDTree
            tree = cKDTree(pts_j)
            d, idx = tree.query(pts_i, k=1)
            k = int(np.argmin(d))
            dx = float(np.linalg.norm(u[i] - u[j]))
            out.append((dx, float(d[k])))
        return out


# ---------------------------------------------------------------------------
# the hexagon correspondence (geodesic)


def _sphcoord(phi, theta):
    return np.array([math.cos(phi) * math.sin(theta),
                     math.sin(phi) * math.sin(theta),
                     math.cos(theta)])


@dataclass(frozen=True)
class HexagonCorrespondence:
    """Correspondence between S^1 and S^2 (geodesic) with distortion
    2*pi/3, built from six circle arcs and six spherical-coordinate
    rectangles."""

    theta0: float = field(default=None)

    def __post_init__(self):
        if self.theta0 is None:
            object.__setattr__(self, "theta0", math.asin(1.0 / SQRT3))

    @property
    def circle_angles(self) -> np.ndarray:
        return math.pi / 3.0 * np.arange(6)

    @property
    def circle_points(self) -> np.ndarray:
        t = self.circle_angles
        return np.stack([np.cos(t), np.sin(t)], axis=1)

    def arc(self, i: int):
        """Closed pi/6-ball around circle vertex i (diameter pi/3)."""
        return float(self.circle_angles[i]), math.pi / 6.0

    def rects(self):
        p = math.pi
        return (
            ((0.0, 2 * p / 3), (0.0, p / 2)),
            ((p / 3, p), (p / 2, p)),
            ((2 * p / 3, 4 * p / 3), (0.0, p / 2)),
            ((p, 5 * p / 3), (p / 2, p)),
            ((4 * p / 3, 2 * p), (0.0, p / 2)),
            ((5 * p / 3, 7 * p / 3), (p / 2, p)),
        )

    @property
    def sphere_points(self) -> np.ndarray:
        t0 = self.theta0
        p = math.pi
        cs = [(p / 3, t0), (2 * p / 3, p - t0), (p, t0),
              (4 * p / 3, p - t0), (5 * p / 3, t0), (2 * p, p - t0)]
        return np.array([_sphcoord(*c) for c in cs])

    def circle_distance_matrix(self) -> np.ndarray:
        n = 6
        out = np.zeros((n, n))
        for i in range(n):
            for j in range(n):
                k = cyclic_gap(i, j, 6)
                out[i, j] = k * math.pi / 3.0
        return out

    def sphere_distance_matrix_expected(self) -> np.ndarray:
        """The closed-form interpoint pattern: pi/3 * (2, 1, 3, 1, 2) by
        cyclic offset 1..5."""
        vals = {0: 0.0, 1: 2 * math.pi / 3, 2: math.pi / 3,
                3: math.pi}
        n = 6
        out = np.zeros((n, n))
        for i in range(n):
            for j in range(n):
                out[i, j] = vals[cyclic_gap(i, j, 6)]
        return out

    def distortion_terms(self, grid: int = 240):
        """Certified per-pair |d_X - d_Y| bounds (geodesic)."""
        y = self.sphere_points
        x_ang = self.circle_angles
        dmat_y = np.zeros((6, 6))
        for i in range(6):
            for j in range(6):
                dmat_y[i, j] = math.acos(
                    max(-1.0, min(1.0, float(y[i] @ y[j]))))
        terms = {}
        rects = self.rects()
        for i in range(6):
            for j in range(i, 6):
                ci, hi = self.arc(i)
                cj, hj = self.arc(j)
                dx = ranges.arc_distance_range(ci, hi, cj, hj)
                dy = ranges.point_value_range(dmat_y[i, j])
                terms[f"A{i}A{j}"] = ranges.pair_term(dx, dy)
                dxv = ranges.point_value_range(
                    ranges.circle_distance(float(x_ang[i]),
                                           float(x_ang[j])))
                dyv = ranges.spherical_rect_distance_range(
                    rects[i], rects[j], grid=grid)
                terms[f"B{i}B{j}"] = ranges.pair_term(dxv, dyv)
        for i in range(6):
            for j in range(6):
                ci, hi = self.arc(i)
                dx = ranges.arc_point_distance_range(ci, hi, float(x_ang[j]))
                dy = _rect_point_distance_range(rects[j], y[i], grid=grid)
                terms[f"A{i}B{j}"] = ranges.pair_term(dx, dy)
        return terms


def _rect_point_distance_range(rect, q, grid: int = 240) -> Interval:
    qa = np.asarray(q, dtype=float)
    phi_q = math.atan2(qa[1], qa[0])
    th_q = math.acos(max(-1.0, min(1.0, qa[2])))
    return ranges.spherical_rect_distance_range(
        rect, ((phi_q, phi_q), (th_q, th_q)), grid=grid)
