"""Pure-NumPy implementations of the hot pairwise kernels.

Tiled so that no O(N^2) matrix is ever materialized in full.  The compiled
Cython module in ``_core`` exposes the same three functions; whichever is
importable is selected in ``kernels.__init__``.
"""

import numpy as np

BACKEND = "numpy"

_TILE = 2048

# metric codes shared with the compiled kernel
GEODESIC = 0
EUCLIDEAN = 1
CIRCLE = 2  # coordinates are plain angles; distance is wrapped difference


def _tile_dist(A, B, code):
    if code == CIRCLE:
        d = np.abs(A[:, 0:1] - B[:, 0:1].T) % (2.0 * np.pi)
        return np.minimum(d, 2.0 * np.pi - d)
    g = np.clip(A @ B.T, -1.0, 1.0)
    if code == GEODESIC:
        return np.arccos(g)
    return 2.0 * np.sin(0.5 * np.arccos(g))


def max_pair_distortion(S, T, src_code, tgt_code):
    """max over row pairs i < j of |d_src(S_i, S_j) - d_tgt(T_i, T_j)|.

    Returns (value, i, j).
    """
    S = np.ascontiguousarray(S, dtype=np.float64)
    T = np.ascontiguousarray(T, dtype=np.float64)
    n = S.shape[0]
    best = -1.0
    bi = bj = 0
    for a in range(0, n, _TILE):
        sa = slice(a, min(a + _TILE, n))
        for b in range(a, n, _TILE):
            sb = slice(b, min(b + _TILE, n))
            V = np.abs(_tile_dist(S[sa], S[sb], src_code)
                       - _tile_dist(T[sa], T[sb], tgt_code))
            if a == b:
                np.fill_diagonal(V, -1.0)
                V = np.triu(V)
            k = int(np.argmax(V))
            v = float(V.flat[k])
            if v > best:
                best = v
                bi = a + k // V.shape[1]
                bj = b + k % V.shape[1]
    return best, bi, bj


def dot_range(X, Y):
    """(min, max, argmin pair, argmax pair) of <x, y> over rows of X and Y."""
    X = np.ascontiguousarray(X, dtype=np.float64)
    Y = np.ascontiguousarray(Y, dtype=np.float64)
    lo, hi = np.inf, -np.inf
    alo = ahi = (0, 0)
    for a in range(0, X.shape[0], _TILE):
        sa = slice(a, min(a + _TILE, X.shape[0]))
        for b in range(0, Y.shape[0], _TILE):
            sb = slice(b, min(b + _TILE, Y.shape[0]))
            G = X[sa] @ Y[sb].T
            k = int(np.argmin(G))
            if G.flat[k] < lo:
                lo = float(G.flat[k])
                alo = (a + k // G.shape[1], b + k % G.shape[1])
            k = int(np.argmax(G))
            if G.flat[k] > hi:
                hi = float(G.flat[k])
                ahi = (a + k // G.shape[1], b + k % G.shape[1])
    return lo, hi, alo, ahi


def max_rotation_distortion(G, H, A, betas):
    """Kernel for rotation-fibered maps S^3 -> S^1.

    For base-point pairs (i, j) and a fiber-angle difference beta, the
    distortion term is

        | arccos(cos(b) G_ij + sin(b) H_ij) - wrap(A_ij + b) |

    where G/H hold <p_i, p_j> and <J p_i, p_j> and A holds the target angle
    differences.  Returns (value, i, j, beta_index).
    """
    G = np.asarray(G, dtype=np.float64)
    H = np.asarray(H, dtype=np.float64)
    A = np.asarray(A, dtype=np.float64)
    best = -1.0
    arg = (0, 0, 0)
    iu = np.triu_indices(G.shape[0], k=1)
    g, h, a = G[iu], H[iu], A[iu]
    for k, b in enumerate(np.asarray(betas, dtype=float)):
        src = np.arccos(np.clip(np.cos(b) * g + np.sin(b) * h, -1.0, 1.0))
        t = np.abs(a + b) % (2.0 * np.pi)
        tgt = np.minimum(t, 2.0 * np.pi - t)
        V = np.abs(src - tgt)
        m = int(np.argmax(V))
        if V[m] > best:
            best = float(V[m])
            arg = (int(iu[0][m]), int(iu[1][m]), k)
    return best, arg[0], arg[1], arg[2]
