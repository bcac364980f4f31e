"""Map protocol, antipodal fundamental domains ("helmets"), odd extension
and spherical suspension."""

from __future__ import annotations

import numpy as np

from .geometry import normalize


class SphereMap:
    """A (possibly discontinuous) map between spheres.

    Subclasses implement ``apply`` on an (N, source_dim+1) array and return
    an (N, target_dim+1) array of unit vectors.
    """

    source_dim: int
    target_dim: int
    antipode_preserving: bool = False
    name: str = "map"

    def apply(self, points: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        out = self.apply(pts)
        if np.asarray(points).ndim == 1:
            return out[0]
        return out


class FunctionMap(SphereMap):
    def __init__(self, fn, source_dim, target_dim, antipode_preserving=False,
                 name="fn"):
        self.fn = fn
        self.source_dim = source_dim
        self.target_dim = target_dim
        self.antipode_preserving = antipode_preserving
        self.name = name

    def apply(self, points):
        return np.atleast_2d(np.asarray(self.fn(points), dtype=float))


# ---------------------------------------------------------------------------
# helmets: fundamental domains for the antipodal map


def helmet_contains(n: int, points) -> np.ndarray:
    """Membership in the antipodal fundamental domain of S^n.

    Recursive rule: last coordinate > 0 -> inside, < 0 -> outside, = 0 ->
    recurse on the equator; the S^0 base keeps only +1.  Exactly one of
    x, -x is a member for every unit x.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[1] != n + 1:
        raise ValueError(f"expected {n + 1} coordinates for S^{n}")
    out = np.zeros(len(pts), dtype=bool)
    todo = np.ones(len(pts), dtype=bool)
    cols = pts.copy()
    for k in range(n, 0, -1):
        z = cols[:, k]
        pos = todo & (z > 0)
        neg = todo & (z < 0)
        out[pos] = True
        todo &= ~(pos | neg)
        if not np.any(todo):
            return out
    out[todo] = cols[todo, 0] > 0
    return out


def helmet_contains_point(n: int, point) -> bool:
    return bool(helmet_contains(n, np.asarray(point)[None, :])[0])


class OddExtensionMap(SphereMap):
    """Extension of a map on C (with C and -C disjoint) by f(-x) = -f(x).

    Geodesic distortion is preserved by this extension; the Euclidean
    flavor only satisfies dis_E(f*) <= sqrt(dis_E(f) (4 - dis_E(f))).
    """

    def __init__(self, base_map, membership, name=None):
        self.base = base_map
        self.membership = membership
        self.source_dim = base_map.source_dim
        self.target_dim = base_map.target_dim
        self.antipode_preserving = True
        self.name = name or f"odd({base_map.name})"

    def apply(self, points):
        inside = np.asarray(self.membership(points), dtype=bool)
        mirrored = np.asarray(self.membership(-points), dtype=bool)
        both = inside & mirrored
        neither = ~inside & ~mirrored
        if np.any(both) or np.any(neither):
            raise ValueError(
                "membership is not an exact antipodal fundamental domain "
                f"on the sample ({int(both.sum())} doubled, "
                f"{int(neither.sum())} uncovered)")
        out = np.empty((len(points), self.target_dim + 1))
        if np.any(inside):
            out[inside] = self.base(points[inside])
        if np.any(~inside):
            out[~inside] = -self.base(-points[~inside])
        return out


def odd_extend(base_map, membership, name=None) -> OddExtensionMap:
    return OddExtensionMap(base_map, membership, name)


# ---------------------------------------------------------------------------
# spherical suspension


class SuspendedMap(SphereMap):
    """Lift of f: S^m -> S^n to S^{m+1} -> S^{n+1} acting slice-wise.

    (p sin t, cos t) maps to (f(p) sin t, cos t); poles go to poles and
    antipode preservation is inherited.
    """

    def __init__(self, base_map):
        self.base = base_map
        self.source_dim = base_map.source_dim + 1
        self.target_dim = base_map.target_dim + 1
        self.antipode_preserving = base_map.antipode_preserving
        self.name = f"susp({base_map.name})"

    def apply(self, points):
        z = points[:, -1]
        s = np.sqrt(np.maximum(0.0, 1.0 - z ** 2))
        out = np.zeros((len(points), self.target_dim + 1))
        out[:, -1] = z
        body = s > 1e-15
        if np.any(body):
            base_pts = normalize(points[body, :-1])
            out[body, :-1] = self.base(base_pts) * s[body, None]
        # at the poles s = 0 and the body part vanishes; normalize the rest
        pole = ~body
        if np.any(pole):
            out[pole, :-1] = 0.0
            out[pole, -1] = np.sign(z[pole])
        return normalize(out)


def suspend(base_map) -> SuspendedMap:
    return SuspendedMap(base_map)


class ComposedMap(SphereMap):
    def __init__(self, outer, inner):
        if inner.target_dim != outer.source_dim:
            raise ValueError("composition dimension mismatch")
        self.outer, self.inner = outer, inner
        self.source_dim = inner.source_dim
        self.target_dim = outer.target_dim
        self.antipode_preserving = (inner.antipode_preserving
                                    and outer.antipode_preserving)
        self.name = f"{outer.name}*{inner.name}"

    def apply(self, points):
        return self.outer(self.inner(points))


class IdentityMap(SphereMap):
    def __init__(self, dim):
        self.source_dim = dim
        self.target_dim = dim
        self.antipode_preserving = True
        self.name = f"id(S{dim})"

    def apply(self, points):
        return np.array(points, dtype=float, copy=True)
