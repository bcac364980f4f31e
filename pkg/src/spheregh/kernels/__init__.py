"""Kernel backend selection: compiled extension if available, NumPy otherwise.

Set SPHEREGH_FORCE_FALLBACK=1 to insist on the NumPy implementations (used
by the benchmark to compare the two).
"""

import os

from . import _fallback

GEODESIC = _fallback.GEODESIC
EUCLIDEAN = _fallback.EUCLIDEAN
CIRCLE = _fallback.CIRCLE

if os.environ.get("SPHEREGH_FORCE_FALLBACK"):
    _impl = _fallback
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _fallback

BACKEND = _impl.BACKEND
max_pair_distortion = _impl.max_pair_distortion
dot_range = _impl.dot_range
max_rotation_distortion = _impl.max_rotation_distortion

__all__ = [
    "BACKEND", "GEODESIC", "EUCLIDEAN", "CIRCLE",
    "max_pair_distortion", "dot_range", "max_rotation_distortion",
]
