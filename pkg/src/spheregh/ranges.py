"""Certified ranges of inner products and distances over spherical regions.

The central tool bounds <v/|v|, w/|w|> over products of *normalized convex
hulls* (regions spanned by corner vectors, radially projected to the
sphere) with a branch-and-bound over barycentric sub-simplices.  Voronoi
cells of inscribed regular simplices are exactly such regions, so this
yields certified cell diameters and cross-cell distance ranges -- the
quantities every block-decomposition distortion certificate needs.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if self.lo > self.hi + 1e-12:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    def widen(self, pad: float) -> "Interval":
        return Interval(self.lo - pad, self.hi + pad)

    def clip(self, lo, hi) -> "Interval":
        return Interval(min(max(self.lo, lo), hi), min(max(self.hi, lo), hi))


def _simplex_norm_bounds(corners):
    """Bounds for |sum lam_i c_i| over the barycentric simplex."""
    center = corners.mean(axis=0)
    nc = float(np.linalg.norm(center))
    radius = float(np.max(np.linalg.norm(corners - center, axis=1)))
    hi = float(np.max(np.linalg.norm(corners, axis=1)))
    return max(nc - radius, 0.0), hi


def _split(corners):
    """Longest-edge bisection of a simplex given by its corner rows."""
    k = corners.shape[0]
    besti, bestj, best = 0, 1, -1.0
    for i in range(k):
        for j in range(i + 1, k):
            d = float(np.sum((corners[i] - corners[j]) ** 2))
            if d > best:
                besti, bestj, best = i, j, d
    mid = 0.5 * (corners[besti] + corners[bestj])
    a = corners.copy()
    a[besti] = mid
    b = corners.copy()
    b[bestj] = mid
    return a, b


def normalized_hull_dot_range(corners_a, corners_b, tol: float = 1e-6,
                              max_nodes: int = 200_000) -> Interval:
    """Certified range of <a/|a|, b/|b|> over the convex hulls of the two
    corner sets (equivalently over the spherical regions they project to).

    Requires both hulls to avoid the origin.
    """
    A0 = np.asarray(corners_a, dtype=float)
    B0 = np.asarray(corners_b, dtype=float)

    def node_bounds(A, B):
        G = A @ B.T
        num_lo, num_hi = float(G.min()), float(G.max())
        la, ua = _simplex_norm_bounds(A)
        lb, ub = _simplex_norm_bounds(B)
        if la <= 0.0 or lb <= 0.0:
            return -1.0, 1.0
        cands_lo = [num_lo / (la * lb), num_lo / (ua * ub)]
        cands_hi = [num_hi / (la * lb), num_hi / (ua * ub)]
        return (max(-1.0, min(cands_lo)), min(1.0, max(cands_hi)))

    def sample(A, B):
        pts_a = np.vstack([A, A.mean(axis=0)])
        pts_b = np.vstack([B, B.mean(axis=0)])
        pa = pts_a / np.linalg.norm(pts_a, axis=1, keepdims=True)
        pb = pts_b / np.linalg.norm(pts_b, axis=1, keepdims=True)
        G = pa @ pb.T
        return float(G.min()), float(G.max())

    inc_lo, inc_hi = sample(A0, B0)  # attained values
    lo0, hi0 = node_bounds(A0, B0)
    heap_min = [(lo0, 0, A0, B0)]
    heap_max = [(-hi0, 0, A0, B0)]
    counter = itertools.count(1)

    def run(heap, incumbent, sign):
        # sign=+1: certify the minimum; sign=-1: the maximum
        nodes = 0
        while heap and nodes < max_nodes:
            bound, _, A, B = heapq.heappop(heap)
            bound = bound if sign > 0 else -bound
            if sign > 0 and bound >= incumbent - tol:
                return bound, incumbent
            if sign < 0 and bound <= incumbent + tol:
                return bound, incumbent
            nodes += 1
            # split the wider hull
            wa = float(np.max(np.ptp(A, axis=0)))
            wb = float(np.max(np.ptp(B, axis=0)))
            parts = ((_split(A), (B, B)) if wa >= wb
                     else ((A, A), _split(B)))
            for Ai, Bi in zip(*parts):
                s_lo, s_hi = sample(Ai, Bi)
                n_lo, n_hi = node_bounds(Ai, Bi)
                if sign > 0:
                    incumbent = min(incumbent, s_lo)
                    if n_lo < incumbent - 1e-15:
                        heapq.heappush(heap, (n_lo, next(counter), Ai, Bi))
                else:
                    incumbent = max(incumbent, s_hi)
                    if n_hi > incumbent + 1e-15:
                        heapq.heappush(heap, (-n_hi, next(counter), Ai, Bi))
        if heap:
            residue = heap[0][0] if sign > 0 else -heap[0][0]
            return (residue, incumbent)
        return (incumbent, incumbent)

    lo_cert, lo_att = run(heap_min, inc_lo, +1)
    hi_cert, hi_att = run(heap_max, inc_hi, -1)
    return Interval(max(-1.0, min(lo_cert, lo_att)),
                    min(1.0, max(hi_cert, hi_att)))


def hull_dot_witness(corners_a, corners_b, minimize=True, iters=3000,
                     seed=0):
    """A feasible pair (a, b) nearly attaining the min/max inner product;
    used to seed distortion witnesses."""
    rng = np.random.default_rng(seed)
    A = np.asarray(corners_a, dtype=float)
    B = np.asarray(corners_b, dtype=float)

    def make(lam, mu):
        v = lam @ A
        w = mu @ B
        return v / np.linalg.norm(v), w / np.linalg.norm(w)

    def value(lam, mu):
        a, b = make(lam, mu)
        return float(a @ b)

    best_l = np.full(A.shape[0], 1.0 / A.shape[0])
    best_m = np.full(B.shape[0], 1.0 / B.shape[0])
    best = value(best_l, best_m)
    sign = 1.0 if minimize else -1.0
    # corner restarts
    for i in range(A.shape[0]):
        for j in range(B.shape[0]):
            l = np.eye(A.shape[0])[i]
            m = np.eye(B.shape[0])[j]
            v = value(l, m)
            if sign * v < sign * best:
                best, best_l, best_m = v, l, m
    step = 0.5
    for it in range(iters):
        l = np.clip(best_l + step * rng.standard_normal(A.shape[0]), 0, None)
        m = np.clip(best_m + step * rng.standard_normal(B.shape[0]), 0, None)
        if l.sum() <= 0 or m.sum() <= 0:
            continue
        l, m = l / l.sum(), m / m.sum()
        v = value(l, m)
        if sign * v < sign * best:
            best, best_l, best_m = v, l, m
        if it % 300 == 299:
            step *= 0.5
    return make(best_l, best_m)


def spherical_region_diameter(corners, tol: float = 1e-6) -> Interval:
    """Certified geodesic diameter of a normalized convex hull region.

    The interval endpoints bracket the true diameter: the upper end comes
    from the certified minimum inner product, the lower end from an
    attained pair.
    """
    rng = normalized_hull_dot_range(corners, corners, tol=tol)
    a, b = hull_dot_witness(corners, corners, minimize=True, iters=800)
    attained = math.acos(min(1.0, max(-1.0, float(a @ b))))
    hi = math.acos(min(1.0, max(-1.0, rng.lo)))
    return Interval(min(attained, hi), hi)


def geodesic_range_from_dot(rng: Interval) -> Interval:
    return Interval(math.acos(min(1.0, max(-1.0, rng.hi))),
                    math.acos(min(1.0, max(-1.0, rng.lo))))


def chord_range_from_dot(rng: Interval) -> Interval:
    g = geodesic_range_from_dot(rng)
    return Interval(2.0 * math.sin(g.lo / 2.0), 2.0 * math.sin(g.hi / 2.0))


# ---------------------------------------------------------------------------
# suspension blocks: {cos(t) pole + sin(t) x : t in [t0,t1], x in cell}


def suspension_dot_range(t_box_a, t_box_b, base_dot: Interval,
                         grid: int = 256) -> Interval:
    """Range of <p, q> for p, q in suspension blocks over cells whose
    mutual inner products lie in ``base_dot``.

    cos d = cos t cos t' + c sin t sin t'; monotone in c, and Lipschitz
    (constant 1) in t and t', so a padded grid is a certificate.
    """
    ta = np.linspace(t_box_a[0], t_box_a[1], grid)
    tb = np.linspace(t_box_b[0], t_box_b[1], grid)
    ct_a, st_a = np.cos(ta), np.sin(ta)
    ct_b, st_b = np.cos(tb), np.sin(tb)
    lo, hi = np.inf, -np.inf
    for c in (base_dot.lo, base_dot.hi):
        vals = ct_a[:, None] * ct_b[None, :] + c * st_a[:, None] * st_b[None, :]
        lo = min(lo, float(vals.min()))
        hi = max(hi, float(vals.max()))
    pad_t = max(t_box_a[1] - t_box_a[0], t_box_b[1] - t_box_b[0]) / (grid - 1)
    # |d/dt (cos t cos t' + c sin t sin t')| <= 1, two variables
    pad = 2.0 * pad_t
    return Interval(max(-1.0, lo - pad), min(1.0, hi + pad))


def suspension_point_dot_range(t_box, base_dot: Interval,
                               grid: int = 512) -> Interval:
    """Range of <p, q> for p = cos t * pole + sin t * x against an
    equatorial unit vector q: <p, q> = sin(t) <x, q>."""
    ts = np.linspace(t_box[0], t_box[1], grid)
    st = np.sin(ts)
    vals = [st * base_dot.lo, st * base_dot.hi]
    lo = float(min(v.min() for v in vals))
    hi = float(max(v.max() for v in vals))
    pad = (t_box[1] - t_box[0]) / (grid - 1)
    return Interval(max(-1.0, lo - pad), min(1.0, hi + pad))


# ---------------------------------------------------------------------------
# circle arcs


def wrap_angle(t: float) -> float:
    t = math.fmod(t, 2.0 * math.pi)
    if t < 0:
        t += 2.0 * math.pi
    return t


def circle_distance(a: float, b: float) -> float:
    d = abs(wrap_angle(a) - wrap_angle(b)) % (2.0 * math.pi)
    return min(d, 2.0 * math.pi - d)


def arc_distance_range(center_a, half_a, center_b, half_b) -> Interval:
    """Geodesic distance range between closed circle arcs."""
    base = circle_distance(center_a, center_b)
    lo = max(0.0, base - half_a - half_b)
    hi = min(math.pi, base + half_a + half_b)
    return Interval(lo, hi)


def arc_point_distance_range(center, half, point_angle) -> Interval:
    return arc_distance_range(center, half, point_angle, 0.0)


def _angle_interval_cos_range(phi_a, phi_b) -> Interval:
    """Range of cos(phi - phi') for phi, phi' in the given angle intervals."""
    ca = 0.5 * (phi_a[0] + phi_a[1])
    cb = 0.5 * (phi_b[0] + phi_b[1])
    ha = 0.5 * (phi_a[1] - phi_a[0])
    hb = 0.5 * (phi_b[1] - phi_b[0])
    gap = arc_distance_range(ca, ha, cb, hb)
    return Interval(math.cos(gap.hi), math.cos(gap.lo))


def spherical_rect_distance_range(rect_a, rect_b, grid: int = 240) -> Interval:
    """Certified geodesic distance range between two spherical-coordinate
    rectangles [phi0, phi1] x [theta0, theta1].

    cos d = cos t cos t' + sin t sin t' cos(dphi) is monotone in cos(dphi)
    and 1-Lipschitz in each colatitude, so a padded colatitude grid with
    the exact azimuth interval is a certificate.
    """
    (pa, ta), (pb, tb) = (rect_a[0], rect_a[1]), (rect_b[0], rect_b[1])
    cr = _angle_interval_cos_range(pa, pb)
    t1 = np.linspace(ta[0], ta[1], grid)
    t2 = np.linspace(tb[0], tb[1], grid)
    ct1, st1 = np.cos(t1), np.sin(t1)
    ct2, st2 = np.cos(t2), np.sin(t2)
    lo, hi = np.inf, -np.inf
    for c in (cr.lo, cr.hi):
        vals = ct1[:, None] * ct2[None, :] + c * st1[:, None] * st2[None, :]
        lo = min(lo, float(vals.min()))
        hi = max(hi, float(vals.max()))
    pad = (max(ta[1] - ta[0], tb[1] - tb[0]) / (grid - 1)) * 2.0
    dot = Interval(max(-1.0, lo - pad), min(1.0, hi + pad))
    return geodesic_range_from_dot(dot)


def point_value_range(values) -> Interval:
    v = float(values) if np.isscalar(values) else values
    if np.isscalar(v):
        return Interval(v, v)
    arr = np.asarray(values, dtype=float)
    return Interval(float(arr.min()), float(arr.max()))


def pair_term(dx: Interval, dy: Interval) -> float:
    """sup |dx - dy| over independent ranges."""
    return max(0.0, dx.hi - dy.lo, dy.hi - dx.lo)
