"""Point types, sphere metrics and the relation/correspondence vocabulary.

Round spheres S^n live in R^{n+1}.  Two metrics are supported everywhere:
the geodesic (great-circle) distance arccos<x,y> in [0, pi] and the chordal
Euclidean distance |x-y| in [0, 2].  They are linked by

    d_E = 2 sin(d_geo / 2)

which is the identity every Euclidean-flavor result in this package leans on.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Sequence

import numpy as np

UNIT_TOL = 1e-12
TRIANGLE_TOL = 1e-9


class Flavor(str, Enum):
    """Which metric a sphere carries."""

    GEODESIC = "geodesic"
    EUCLIDEAN = "euclidean"

    @property
    def diameter(self) -> float:
        return float(np.pi) if self is Flavor.GEODESIC else 2.0


class DimensionMismatchError(ValueError):
    pass


class MetricError(ValueError):
    pass


def as_unit_vectors(points, dim=None):
    """Validate an (N, d) array of unit vectors; returns a float64 copy."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if dim is not None and pts.shape[1] != dim + 1:
        raise DimensionMismatchError(
            f"expected ambient dimension {dim + 1}, got {pts.shape[1]}")
    norms = np.linalg.norm(pts, axis=1)
    if not np.all(np.abs(norms - 1.0) <= 1e-9):
        bad = float(np.max(np.abs(norms - 1.0)))
        raise MetricError(f"points are not unit vectors (max defect {bad:g})")
    return pts


def normalize(v):
    v = np.asarray(v, dtype=float)
    n = np.linalg.norm(v, axis=-1, keepdims=True)
    return v / n


@dataclass(frozen=True)
class SpherePoint:
    """A unit vector on S^dim embedded in R^{dim+1}.

    Immutable; the coordinate array is copied and write-locked at
    construction.
    """

    coords: np.ndarray
    dim: int = field(init=False)

    def __post_init__(self):
        c = np.asarray(self.coords, dtype=float).reshape(-1).copy()
        n = np.linalg.norm(c)
        if abs(n - 1.0) > 1e-9:
            raise MetricError(f"not a unit vector (norm {n!r})")
        # renormalize the ~1e-12 float drift away so invariants hold exactly
        c /= n
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)
        object.__setattr__(self, "dim", c.size - 1)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.coords, dtype=dtype)

    def antipode(self) -> "SpherePoint":
        return SpherePoint(-self.coords)


def _coords(x):
    if isinstance(x, SpherePoint):
        return x.coords
    return np.asarray(x, dtype=float)


def geodesic_distance(x, y) -> float:
    """Great-circle distance on the unit sphere, in [0, pi].

    The inner product is clamped to [-1, 1] first: without the clamp a
    ~1e-16 drift past 1 at (near-)antipodal pairs makes arccos return NaN.
    """
    xc, yc = _coords(x), _coords(y)
    if xc.shape != yc.shape:
        raise DimensionMismatchError(f"{xc.shape} vs {yc.shape}")
    return float(np.arccos(np.clip(np.dot(xc, yc), -1.0, 1.0)))


def euclidean_distance(x, y) -> float:
    """Chordal distance |x - y|, in [0, 2]."""
    xc, yc = _coords(x), _coords(y)
    if xc.shape != yc.shape:
        raise DimensionMismatchError(f"{xc.shape} vs {yc.shape}")
    return float(np.linalg.norm(xc - yc))


def sphere_distance(x, y, flavor: Flavor = Flavor.GEODESIC) -> float:
    if flavor is Flavor.GEODESIC:
        return geodesic_distance(x, y)
    return euclidean_distance(x, y)


def pairwise_geodesic(X, Y=None):
    """All-pairs geodesic distances between rows of X (and Y), clamped."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    Y = X if Y is None else np.atleast_2d(np.asarray(Y, dtype=float))
    g = np.clip(X @ Y.T, -1.0, 1.0)
    return np.arccos(g)


def pairwise_euclidean(X, Y=None):
    X = np.atleast_2d(np.asarray(X, dtype=float))
    Y = X if Y is None else np.atleast_2d(np.asarray(Y, dtype=float))
    g = np.clip(X @ Y.T, -1.0, 1.0)
    return 2.0 * np.sin(0.5 * np.arccos(g))


def pairwise(X, Y=None, flavor: Flavor = Flavor.GEODESIC):
    if flavor is Flavor.GEODESIC:
        return pairwise_geodesic(X, Y)
    return pairwise_euclidean(X, Y)


def chord_from_geodesic(d):
    """2 sin(d/2): transfers geodesic lengths to chordal lengths."""
    return 2.0 * np.sin(np.asarray(d, dtype=float) / 2.0)


def geodesic_from_chord(c):
    return 2.0 * np.arcsin(np.clip(np.asarray(c, dtype=float) / 2.0, -1.0, 1.0))


# ---------------------------------------------------------------------------
# finite metric spaces


@dataclass(frozen=True)
class FiniteMetricSpace:
    """Labeled points with an explicit symmetric distance matrix.

    The triangle inequality is validated at construction (tolerance 1e-9);
    violations are hard errors, not warnings.
    """

    labels: tuple
    dist: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.dist, dtype=float).copy()
        labels = tuple(self.labels)
        n = len(labels)
        if d.shape != (n, n):
            raise MetricError(f"distance matrix shape {d.shape} does not "
                              f"match {n} labels")
        if not np.allclose(d, d.T, atol=1e-12, rtol=0.0):
            raise MetricError("distance matrix is not symmetric")
        d = 0.5 * (d + d.T)
        if np.any(np.abs(np.diag(d)) > 1e-12):
            raise MetricError("nonzero diagonal")
        np.fill_diagonal(d, 0.0)
        if np.any(d < -1e-12):
            raise MetricError("negative distances")
        # d[i,k] <= d[i,j] + d[j,k] for all triples, within 1e-9
        slack = d[:, None, :] - (d[:, :, None] + d[None, :, :])
        if float(slack.max(initial=0.0)) > TRIANGLE_TOL:
            raise MetricError(
                f"triangle inequality violated by {float(slack.max()):.3e}")
        d.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "dist", d)

    def __len__(self):
        return len(self.labels)

    @property
    def diameter(self) -> float:
        return float(self.dist.max(initial=0.0))

    def to_json(self) -> str:
        return json.dumps({"labels": list(self.labels),
                           "dist": self.dist.tolist()})

    @classmethod
    def from_json(cls, text: str) -> "FiniteMetricSpace":
        obj = json.loads(text)
        return cls(tuple(obj["labels"]), np.asarray(obj["dist"], dtype=float))

    @classmethod
    def from_points(cls, points, flavor: Flavor = Flavor.GEODESIC,
                    labels=None) -> "FiniteMetricSpace":
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        labels = tuple(range(len(pts))) if labels is None else tuple(labels)
        return cls(labels, pairwise(pts, flavor=flavor))


def point_space(label="*") -> FiniteMetricSpace:
    return FiniteMetricSpace((label,), np.zeros((1, 1)))


# ---------------------------------------------------------------------------
# relations and correspondences


@dataclass(frozen=True)
class Relation:
    """A finite set of matched pairs between two (finite) spaces."""

    pairs: tuple

    def __post_init__(self):
        pairs = tuple(self.pairs)
        if not pairs:
            raise MetricError("relation must be non-empty")
        object.__setattr__(self, "pairs", pairs)

    def __len__(self):
        return len(self.pairs)

    def union(self, other: "Relation") -> "Relation":
        return Relation(self.pairs + other.pairs)

    def is_correspondence(self, carrier_x: Iterable, carrier_y: Iterable) -> bool:
        xs = {id_key(p[0]) for p in self.pairs}
        ys = {id_key(p[1]) for p in self.pairs}
        return (all(id_key(x) in xs for x in carrier_x)
                and all(id_key(y) in ys for y in carrier_y))


def id_key(v):
    if isinstance(v, SpherePoint):
        return tuple(np.round(v.coords, 12))
    if isinstance(v, np.ndarray):
        return tuple(np.round(v, 12))
    return v


def distortion_of_relation(rel: Relation, dx: Callable, dy: Callable) -> float:
    """Exact max of |d_X(x,x') - d_Y(y,y')| over all pairs of matched pairs."""
    pairs = rel.pairs
    worst = 0.0
    for i in range(len(pairs)):
        xi, yi = pairs[i]
        for j in range(i + 1, len(pairs)):
            xj, yj = pairs[j]
            gap = abs(dx(xi, xj) - dy(yi, yj))
            if gap > worst:
                worst = gap
    return worst


def codistortion(phi: Callable, psi: Callable, sample_x: Sequence,
                 sample_y: Sequence, dx: Callable, dy: Callable) -> float:
    """max over sampled (x, y) of |d_X(x, psi(y)) - d_Y(phi(x), y)|.

    A lower estimate of the true sup when the samples are not exhaustive.
    """
    if len(sample_x) == 0 or len(sample_y) == 0:
        raise MetricError("codistortion needs non-empty samples")
    worst = 0.0
    for x in sample_x:
        fx = phi(x)
        for y in sample_y:
            gap = abs(dx(x, psi(y)) - dy(fx, y))
            if gap > worst:
                worst = gap
    return worst


# ---------------------------------------------------------------------------
# block correspondences (region <-> representative, plus an identity part)


@dataclass(frozen=True)
class Block:
    """One block of a correspondence: a sampleable region matched with a
    representative point (or another region) on the opposite side.

    ``x_side``/``y_side`` are region descriptors; see BlockCorrespondence.
    """

    x_side: object
    y_side: object
    name: str = ""


@dataclass(frozen=True)
class BlockCorrespondence:
    """A correspondence given by finitely many blocks.

    Continuous relations in this package are always of this form: each block
    matches everything in one side's region with everything in the other
    side's region (either side may be a single point).  An optional identity
    part matches an isometrically embedded copy pointwise.
    """

    blocks: tuple
    identity_part: object = None
    flavor: Flavor = Flavor.GEODESIC
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(self.blocks))
        if not self.blocks and self.identity_part is None:
            raise MetricError("empty block correspondence")
