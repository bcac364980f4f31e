"""Lower/upper bound formulas for the Gromov-Hausdorff distance between
round spheres, assembled into certified bound reports.

Lower bounds implemented here:
  * volume-comparison bound mu (packing/covering of balls),
  * covering-radius bound nu = pi/2 - cov_{S^m}(n+1),
  * inscribed-simplex bound zeta_m / 2, and their max q_{m,n},
  * the Euclidean-flavor antipodal bound.

Upper bounds: half max diameter (pi/2), the simplex-snap construction
(eta_m / 2 for adjacent dimensions), and sine transfer for the Euclidean
flavor.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, asdict
from enum import Enum
from functools import lru_cache

import numpy as np
from scipy import optimize, special

from .geometry import Flavor, normalize, pairwise_geodesic
from . import nets

INF = math.inf


def zeta(m: int) -> float:
    """Edge length arccos(-1/(m+1)) of the regular (m+1)-simplex in S^m."""
    if m < 0:
        raise ValueError("m must be >= 0")
    return math.acos(-1.0 / (m + 1))


def eta(m: int) -> float:
    """Diameter of one face of the regular geodesic simplex in S^m."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if m % 2 == 1:
        return math.acos(-(m + 1.0) / (m + 3.0))
    return math.acos(-math.sqrt(m / (m + 4.0)))


def normalized_ball_volume(m: int, rho) -> float | np.ndarray:
    """Volume fraction of a geodesic ball of radius rho on S^m.

    Evaluated through the regularized incomplete beta function, which is
    the closed form of (vol S^{m-1}/vol S^m) * int_0^rho sin^{m-1}; accuracy
    is well below the 1e-10 requirement.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    r = np.asarray(rho, dtype=float)
    if np.any((r < -1e-12) | (r > math.pi + 1e-12)):
        raise ValueError("rho must lie in [0, pi]")
    r = np.clip(r, 0.0, math.pi)
    s2 = np.sin(r) ** 2
    lower = 0.5 * special.betainc(m / 2.0, 0.5, s2)
    out = np.where(r <= math.pi / 2.0, lower, 1.0 - lower)
    return float(out) if np.isscalar(rho) and out.ndim == 0 else out


def ball_volume_quadrature(m: int, rho: float, tol: float = 1e-12) -> float:
    """Direct quadrature of the defining integral (test oracle)."""
    from scipy import integrate
    ratio = math.gamma((m + 1) / 2.0) / (math.sqrt(math.pi)
                                         * math.gamma(m / 2.0))
    val, _ = integrate.quad(lambda t: math.sin(t) ** (m - 1), 0.0, rho,
                            epsabs=tol, limit=200)
    return ratio * val


def invert_volume(n: int, t: float, tol: float = 1e-12) -> float:
    """rho with v_n(rho) = t, by bracketed root finding on [0, pi]."""
    if not 0.0 <= t <= 1.0:
        raise ValueError("t must lie in [0, 1]")
    if t <= 0.0:
        return 0.0
    if t >= 1.0:
        return math.pi
    return float(optimize.brentq(
        lambda r: normalized_ball_volume(n, r) - t, 0.0, math.pi,
        xtol=tol, rtol=8.9e-16))


def colding_objective(m: int, n: int, rho) -> np.ndarray:
    """v_n^{-1}(v_m(rho/2)) - rho, the inner expression of the volume bound."""
    r = np.atleast_1d(np.asarray(rho, dtype=float))
    v = normalized_ball_volume(m, r / 2.0)
    return np.array([invert_volume(n, t) for t in np.atleast_1d(v)]) - r


def colding_lower_bound(m: int, n: int, grid: int = 2048) -> float:
    """Volume-comparison lower bound for d_GH(S^m, S^n), 0 < m < n.

    The sup over rho is taken on a dense grid and then refined by
    golden-section search; a 1e-9 budget is subtracted so the returned
    value stays a valid lower bound despite the numerics.
    """
    if not 0 < m < n:
        raise ValueError("need 0 < m < n")
    rho = np.linspace(1e-9, math.pi, grid)
    vals = colding_objective(m, n, rho)
    k = int(np.argmax(vals))
    lo = rho[max(k - 1, 0)]
    hi = rho[min(k + 1, grid - 1)]
    res = optimize.minimize_scalar(
        lambda r: -float(colding_objective(m, n, r)[0]),
        bounds=(lo, hi), method="bounded",
        options={"xatol": 1e-12})
    sup = max(float(vals[k]), -float(res.fun))
    return 0.5 * sup - 1e-9


class Exactness(str, Enum):
    EXACT = "Exact"
    UPPER_BOUND = "UpperBound"


@dataclass(frozen=True)
class CoveringRadius:
    value: float
    exactness: Exactness
    k: int
    m: int


def _covering_upper_bound(m: int, k: int, seed: int = 0) -> float:
    """Upper bound on cov_{S^m}(k) from an explicitly constructed k-point
    net: greedy farthest-point seeding, Lloyd-style balancing, then a
    certified evaluation of the Hausdorff distance over a reference net."""
    mesh = 0.05 if m <= 2 else 0.12
    ref = nets.sphere_net(m, mesh)
    pts = ref.points
    rng = np.random.default_rng(seed)
    centers = [pts[rng.integers(len(pts))]]
    dmin = pairwise_geodesic(pts, np.array([centers[0]]))[:, 0]
    while len(centers) < k:
        idx = int(np.argmax(dmin))
        centers.append(pts[idx])
        dmin = np.minimum(dmin, pairwise_geodesic(
            pts, pts[idx:idx + 1])[:, 0])
    C = np.array(centers)
    for _ in range(60):
        D = pairwise_geodesic(pts, C)
        owner = np.argmin(D, axis=1)
        newC = []
        for i in range(k):
            members = pts[owner == i]
            newC.append(normalize(members.mean(axis=0)) if len(members)
                        else C[i])
        newC = np.array(newC)
        if np.max(np.abs(newC - C)) < 1e-10:
            C = newC
            break
        C = newC
    worst = float(np.min(pairwise_geodesic(pts, C), axis=1).max())
    return worst + ref.mesh


@lru_cache(maxsize=None)
def covering_radius(m: int, k: int) -> CoveringRadius:
    """k-th covering radius of S^m; exact where a closed form is known.

    Exact cases: k = 1 (antipode), m = 1 (regular k-gon net; its optimality
    is standard, though outside the sources used here), and k = m + 2
    (pi - arccos(-1/(m+1))).  Everything else is an explicit-net upper
    bound, which is the sound direction for the covering-radius GH bound.
    """
    if m < 1 or k < 1:
        raise ValueError("need m >= 1, k >= 1")
    if k == 1:
        return CoveringRadius(math.pi, Exactness.EXACT, k, m)
    if m == 1:
        return CoveringRadius(math.pi / k, Exactness.EXACT, k, m)
    if k == m + 2:
        return CoveringRadius(math.pi - zeta(m), Exactness.EXACT, k, m)
    return CoveringRadius(_covering_upper_bound(m, k),
                          Exactness.UPPER_BOUND, k, m)


@dataclass(frozen=True)
class NuBound:
    value: float
    conservative: bool  # True when built from a covering upper bound


def ls_lower_bound(m: int, n: int) -> NuBound:
    """Antipodal covering bound pi/2 - cov_{S^m}(n+1) for 1 <= m < n."""
    if not 1 <= m < n:
        raise ValueError("need 1 <= m < n")
    cov = covering_radius(m, n + 1)
    return NuBound(math.pi / 2.0 - cov.value,
                   cov.exactness is not Exactness.EXACT)


def combined_lower_bound(m: int, n: int) -> float:
    """q_{m,n} = max(zeta_m / 2, nu_{m,n}); always >= pi/4."""
    if not 1 <= m < n:
        raise ValueError("need 1 <= m < n")
    return max(0.5 * zeta(m), ls_lower_bound(m, n).value)


def euclidean_lower_bound(m: int) -> float:
    """Euclidean-flavor antipodal lower bound (2 - sqrt(2 - 2/(m+1))) / 2.

    Decreasing in m: equals 1/2 at m = 1 and tends to (2 - sqrt 2)/2.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    return 0.5 * (2.0 - math.sqrt(2.0 - 2.0 / (m + 1)))


def euclidean_distortion_transfer(dis_geodesic: float) -> float:
    """Certified chordal distortion ceiling 2 sin(d/2) for geodesic d."""
    if not -1e-12 <= dis_geodesic <= math.pi + 1e-12:
        raise ValueError("geodesic distortion must lie in [0, pi]")
    return 2.0 * math.sin(min(max(dis_geodesic, 0.0), math.pi) / 2.0)


def interval_sphere_lower_bound() -> float:
    """d_GH(S^n, I) >= pi/3 for every n >= 1 and every interval I."""
    return math.pi / 3.0


def diameter_difference_bound(diam_x: float, diam_y: float) -> float:
    return 0.5 * abs(diam_x - diam_y)


# ---------------------------------------------------------------------------
# the bound matrix


class LowerProvenance(str, Enum):
    COLDING = "Colding"
    COVERING_RADIUS = "CoveringRadius"
    SIMPLEX_ZETA = "SimplexZeta"
    DIAM_DIFFERENCE = "DiamDifference"
    COMBINED = "Combined"
    EUCLIDEAN_BU = "EuclideanBU"
    EXACT = "Exact"


class UpperProvenance(str, Enum):
    HALF_MAX_DIAM = "HalfMaxDiam"
    ETA_CONSTRUCTION = "EtaConstruction"
    CERTIFIED_CORRESPONDENCE = "CertifiedCorrespondence"
    EXACT = "Exact"


@dataclass(frozen=True)
class BoundReport:
    m: int
    n: float  # integer or math.inf
    flavor: Flavor
    lower: float
    upper: float
    lower_provenance: LowerProvenance
    upper_provenance: UpperProvenance
    exact: bool = False
    symbol: str | None = None
    note: str = ""

    def __post_init__(self):
        if self.lower > self.upper + 1e-12:
            raise ValueError(f"lower {self.lower} exceeds upper {self.upper}")
        cap = math.pi / 2 if self.flavor is Flavor.GEODESIC else 1.0
        if self.upper > cap + 1e-12:
            raise ValueError("upper bound exceeds half max diameter")

    def as_row(self):
        return {
            "m": self.m,
            "n": "inf" if self.n == INF else int(self.n),
            "flavor": self.flavor.value,
            "lower": self.lower,
            "upper": self.upper,
            "lower_provenance": self.lower_provenance.value,
            "upper_provenance": self.upper_provenance.value,
            "exact": self.exact,
            "symbol": self.symbol or "",
            "note": self.note,
        }


_EXACT_GEODESIC = {
    (1, 2): (math.pi / 3.0, "pi/3"),
    (1, 3): (math.pi / 3.0, "pi/3"),
    (2, 3): (0.5 * zeta(2), "arccos(-1/3)/2"),
}


def exact_cell(m: int, n, flavor: Flavor):
    """The closed-form cells of the bound matrix, or None."""
    if flavor is Flavor.GEODESIC:
        if m == 0 and (n == INF or n >= 1):
            return math.pi / 2.0, "pi/2"
        if n == INF:
            return math.pi / 2.0, "pi/2"
        if (m, n) in _EXACT_GEODESIC:
            return _EXACT_GEODESIC[(m, n)]
        return None
    if m == 0 and (n == INF or n >= 1):
        return 1.0, "1"
    if n == INF:
        return 1.0, "1"
    return None


def cell_report(m: int, n, flavor: Flavor) -> BoundReport:
    hit = exact_cell(m, n, flavor)
    if hit is not None:
        value, symbol = hit
        return BoundReport(m, n, flavor, value, value,
                           LowerProvenance.EXACT, UpperProvenance.EXACT,
                           exact=True, symbol=symbol)
    # non-exact cells require 1 <= m < n < inf
    zl = 0.5 * zeta(m)
    nu = ls_lower_bound(m, int(n))
    if zl >= nu.value:
        low, lp = zl, LowerProvenance.SIMPLEX_ZETA
    else:
        low, lp = nu.value, LowerProvenance.COVERING_RADIUS
    note = ""
    if n == m + 1:
        up, upv = 0.5 * eta(m), UpperProvenance.ETA_CONSTRUCTION
    else:
        up, upv = math.pi / 2.0, UpperProvenance.HALF_MAX_DIAM
        note = "strict (a continuous antipodal surjection exists but gives " \
               "no numeric margin)"
    if flavor is Flavor.EUCLIDEAN:
        low = euclidean_lower_bound(m)
        lp = LowerProvenance.EUCLIDEAN_BU
        up = min(1.0, euclidean_distortion_transfer(up))
        note = (note + "; " if note else "") + "upper sine-transferred"
    return BoundReport(m, n, flavor, low, up, lp, upv, note=note)


def assemble_g_matrix(max_dim: int, flavor: Flavor = Flavor.GEODESIC,
                      include_infinity: bool = True) -> list[BoundReport]:
    """All cells (m, n) with 0 <= m < n <= max_dim (plus the symbolic
    infinite column)."""
    if max_dim < 1:
        raise ValueError("max_dim must be >= 1")
    out = []
    for m in range(0, max_dim):
        for n in range(m + 1, max_dim + 1):
            out.append(cell_report(m, n, flavor))
    if include_infinity:
        for m in range(0, max_dim + 1):
            out.append(cell_report(m, INF, flavor))
    return out


def reports_to_csv(reports) -> str:
    buf = io.StringIO()
    rows = [r.as_row() for r in reports]
    writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()))
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def reports_to_json(reports) -> str:
    return json.dumps([r.as_row() for r in reports], indent=2)


def reports_to_table(reports) -> str:
    rows = [r.as_row() for r in reports]
    cols = ["m", "n", "flavor", "lower", "upper",
            "lower_provenance", "upper_provenance", "exact", "symbol"]
    fmt = []
    for r in rows:
        fmt.append([f"{r[c]:.12f}" if isinstance(r[c], float) else str(r[c])
                    for c in cols])
    widths = [max(len(c), *(len(row[i]) for row in fmt))
              for i, c in enumerate(cols)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(cols, widths))]
    lines.append("  ".join("-" * w for w in widths))
    for row in fmt:
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)))
    return "\n".join(lines)
