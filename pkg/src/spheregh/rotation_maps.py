"""Double rotations of S^3 and the fibered surjection S^3 ->> S^1.

The block rotation T_a turns the (x, y) and (z, w) planes by the same
angle, so every point moves by exactly a.  Each q outside the core circle
{z = w = 0} factors uniquely as q = T_a p with p in S^2 \\ S^1 and a in
[0, pi); applying the circle snap to p and rotating back gives a
surjection onto S^1 whose distortion stays at 2*pi/3.
"""

from __future__ import annotations

import math

import numpy as np

from .geometry import normalize
from .maps import SphereMap
from .simplex_maps import SimplexSnapMap

CORE_TOL = 1e-20  # squared distance to the core circle below which the
                  # fiber decomposition is refused


def rotation_matrix(alpha: float) -> np.ndarray:
    c, s = math.cos(alpha), math.sin(alpha)
    return np.array([
        [c, -s, 0.0, 0.0],
        [s, c, 0.0, 0.0],
        [0.0, 0.0, c, -s],
        [0.0, 0.0, s, c],
    ])


def rotation_apply(alpha: float, points) -> np.ndarray:
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[1] != 4:
        raise ValueError("double rotations act on S^3 in R^4")
    out = pts @ rotation_matrix(alpha).T
    return out[0] if np.asarray(points).ndim == 1 else out


def plane_skew(points) -> np.ndarray:
    """J p where J rotates both planes by +pi/2; <J p, q> is the
    derivative of <T_a p, q> at a = 0."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    out = np.empty_like(pts)
    out[:, 0] = -pts[:, 1]
    out[:, 1] = pts[:, 0]
    out[:, 2] = -pts[:, 3]
    out[:, 3] = pts[:, 2]
    return out


def rotation_decompose(q) -> tuple[np.ndarray, float]:
    """The unique (p, a) with q = T_a p, p in S^2 \\ S^1, a in [0, pi).

    The sign of p's third coordinate is pinned by requiring a in [0, pi).
    Points on the core circle are refused: the factorization is not unique
    there (callers route true S^1 points through the a = 0 branch).
    """
    qa = np.asarray(q, dtype=float).reshape(4)
    z, w = qa[2], qa[3]
    r2 = z * z + w * w
    if r2 < CORE_TOL:
        raise ValueError("point is on the core circle; decomposition is "
                         "not unique")
    alpha = math.atan2(w, z)
    sign = 1.0
    if alpha < 0:
        alpha += math.pi
        sign = -1.0
    p = rotation_apply(-alpha, qa)
    p[3] = 0.0
    p[2] = sign * math.sqrt(r2)
    return normalize(p), alpha


class RotationFiberMap(SphereMap):
    """The surjection S^3 ->> S^1 with distortion 2*pi/3.

    q on the embedded S^2 maps through the circle snap; otherwise q is
    factored through its fiber angle and the snapped base point is rotated
    back up.
    """

    def __init__(self):
        self.snap = SimplexSnapMap(1)
        self.source_dim = 3
        self.target_dim = 1
        self.antipode_preserving = True
        self.name = "phi31"

    def apply(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        z, w = pts[:, 2], pts[:, 3]
        r = np.hypot(z, w)
        # fiber angle in [0, pi); the base point's third coordinate keeps
        # the sign that makes the angle land there
        alpha = np.arctan2(w, z)
        sign = np.ones_like(alpha)
        neg = alpha < 0
        alpha[neg] += math.pi
        sign[neg] = -1.0
        on_s2 = w == 0.0  # the a = 0 slice, including the core circle
        alpha[on_s2] = 0.0
        sign[on_s2] = np.sign(z[on_s2]) + (z[on_s2] == 0.0)
        base_pts = np.stack([
            np.cos(alpha) * pts[:, 0] + np.sin(alpha) * pts[:, 1],
            -np.sin(alpha) * pts[:, 0] + np.cos(alpha) * pts[:, 1],
            sign * r,
        ], axis=1)
        base = self.snap(normalize(base_pts))
        c, s = np.cos(alpha), np.sin(alpha)
        out = np.stack([c * base[:, 0] - s * base[:, 1],
                        s * base[:, 0] + c * base[:, 1]], axis=1)
        return normalize(out)


def fiber_angle_of_target(xy) -> np.ndarray:
    pts = np.atleast_2d(np.asarray(xy, dtype=float))
    return np.arctan2(pts[:, 1], pts[:, 0])
