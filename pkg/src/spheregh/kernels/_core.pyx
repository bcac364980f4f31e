# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Fused pairwise kernels (compiled twin of ``_fallback``)."""

import numpy as np

cimport cython
from cython.parallel cimport prange
from libc.math cimport acos, cos, fabs, fmod, sin, sqrt

BACKEND = "cython"

GEODESIC = 0
EUCLIDEAN = 1
CIRCLE = 2

DEF PI = 3.141592653589793
DEF TWO_PI = 6.283185307179586


cdef inline double _clamp(double t) noexcept nogil:
    if t > 1.0:
        return 1.0
    if t < -1.0:
        return -1.0
    return t


cdef inline double _dist(const double* a, const double* b, int d,
                         int code) noexcept nogil:
    cdef double g = 0.0
    cdef int k
    if code == CIRCLE:
        g = fabs(a[0] - b[0])
        g = fmod(g, TWO_PI)
        if g > PI:
            g = TWO_PI - g
        return g
    for k in range(d):
        g += a[k] * b[k]
    g = acos(_clamp(g))
    if code == EUCLIDEAN:
        return 2.0 * sin(0.5 * g)
    return g


def max_pair_distortion(S, T, int src_code, int tgt_code):
    """max over row pairs i < j of |d_src(S_i,S_j) - d_tgt(T_i,T_j)|."""
    cdef double[:, ::1] Sv = np.ascontiguousarray(S, dtype=np.float64)
    cdef double[:, ::1] Tv = np.ascontiguousarray(T, dtype=np.float64)
    cdef Py_ssize_t n = Sv.shape[0]
    cdef int ds = Sv.shape[1], dt = Tv.shape[1]
    cdef Py_ssize_t i, j
    cdef double v
    best = np.full(n, -1.0)
    bestj = np.zeros(n, dtype=np.int64)
    cdef double[::1] bv = best
    cdef long long[::1] bj = bestj
    with nogil:
        for i in prange(n, schedule="dynamic", chunksize=64):
            for j in range(i + 1, n):
                v = fabs(_dist(&Sv[i, 0], &Sv[j, 0], ds, src_code)
                         - _dist(&Tv[i, 0], &Tv[j, 0], dt, tgt_code))
                if v > bv[i]:
                    bv[i] = v
                    bj[i] = j
    i = int(np.argmax(best))
    return float(best[i]), int(i), int(bestj[i])


def dot_range(X, Y):
    """(min, max, argmin pair, argmax pair) of <x, y> over rows."""
    cdef double[:, ::1] Xv = np.ascontiguousarray(X, dtype=np.float64)
    cdef double[:, ::1] Yv = np.ascontiguousarray(Y, dtype=np.float64)
    cdef Py_ssize_t n = Xv.shape[0], m = Yv.shape[0]
    cdef int d = Xv.shape[1]
    cdef Py_ssize_t i, j
    cdef int k
    cdef double g
    lo = np.full(n, np.inf)
    hi = np.full(n, -np.inf)
    loj = np.zeros(n, dtype=np.int64)
    hij = np.zeros(n, dtype=np.int64)
    cdef double[::1] lov = lo
    cdef double[::1] hiv = hi
    cdef long long[::1] lojv = loj
    cdef long long[::1] hijv = hij
    with nogil:
        for i in prange(n, schedule="static"):
            for j in range(m):
                g = 0.0
                for k in range(d):
                    g = g + Xv[i, k] * Yv[j, k]
                if g < lov[i]:
                    lov[i] = g
                    lojv[i] = j
                if g > hiv[i]:
                    hiv[i] = g
                    hijv[i] = j
    i = int(np.argmin(lo))
    j = int(np.argmax(hi))
    return (float(lo[i]), float(hi[j]),
            (int(i), int(loj[i])), (int(j), int(hij[j])))


def max_rotation_distortion(G, H, A, betas):
    """See the NumPy twin for the contract."""
    cdef double[:, ::1] Gv = np.ascontiguousarray(G, dtype=np.float64)
    cdef double[:, ::1] Hv = np.ascontiguousarray(H, dtype=np.float64)
    cdef double[:, ::1] Av = np.ascontiguousarray(A, dtype=np.float64)
    cdef double[::1] bv = np.ascontiguousarray(betas, dtype=np.float64)
    cdef Py_ssize_t n = Gv.shape[0], nb = bv.shape[0]
    cdef Py_ssize_t i, j, k
    cdef double cb, sb, src, tgt, v
    best = np.full(n, -1.0)
    barg = np.zeros((n, 2), dtype=np.int64)
    cdef double[::1] bestv = best
    cdef long long[:, ::1] bargv = barg
    with nogil:
        for i in prange(n, schedule="dynamic", chunksize=16):
            for j in range(i + 1, n):
                for k in range(nb):
                    cb = cos(bv[k])
                    sb = sin(bv[k])
                    src = acos(_clamp(cb * Gv[i, j] + sb * Hv[i, j]))
                    tgt = fabs(Av[i, j] + bv[k])
                    tgt = fmod(tgt, TWO_PI)
                    if tgt > PI:
                        tgt = TWO_PI - tgt
                    v = fabs(src - tgt)
                    if v > bestv[i]:
                        bestv[i] = v
                        bargv[i, 0] = j
                        bargv[i, 1] = k
    i = int(np.argmax(best))
    return float(best[i]), int(i), int(barg[i, 0]), int(barg[i, 1])
