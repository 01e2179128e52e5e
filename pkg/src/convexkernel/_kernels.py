"""Floating-point sampling kernels used by the oracles and verify suites.

These never decide anything about exact reals; they generate candidate
configurations and give independent float estimates that the exact checks
are compared against.  Each kernel has a numba loop version and a
vectorised numpy version.  The numba path is used when numba imports and
``CONVEXKERNEL_NUMBA`` is not set to ``0``.
"""

import os

import numpy as np

try:
    if os.environ.get("CONVEXKERNEL_NUMBA", "1") == "0":
        raise ImportError("numba disabled by CONVEXKERNEL_NUMBA=0")
    from numba import njit
    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False

BACKEND = "numba" if HAS_NUMBA else "numpy"


# ---------------------------------------------------------------- numpy path

def np_max_midpoint_norm(theta_u, theta_v, eps):
    u = np.stack([np.cos(theta_u), np.sin(theta_u)], axis=1)
    v = np.stack([np.cos(theta_v), np.sin(theta_v)], axis=1)
    keep = np.linalg.norm(u - v, axis=1) >= eps
    if not keep.any():
        return -1.0, 0
    m = np.linalg.norm(0.5 * (u[keep] + v[keep]), axis=1)
    return float(m.max()), int(keep.sum())


def np_ball_pair_mask(a, b, eps, margin):
    na = np.linalg.norm(a, axis=1)
    nb = np.linalg.norm(b, axis=1)
    gap = np.linalg.norm(a - b, axis=1)
    return (na <= 1.0 - margin) & (nb <= 1.0 - margin) & (gap >= eps + margin)


def np_lens_mask(points, c, r, d, s, slack):
    dc = np.linalg.norm(points - c, axis=1)
    dd = np.linalg.norm(points - d, axis=1)
    return (dc <= r - slack) & (dd <= s - slack)


def np_max_pairwise_distance(points):
    n = points.shape[0]
    if n < 2:
        return 0.0, 0, 0
    diff = points[:, None, :] - points[None, :, :]
    dist = np.sqrt((diff * diff).sum(axis=2))
    flat = int(np.argmax(dist))
    i, j = divmod(flat, n)
    return float(dist[i, j]), min(i, j), max(i, j)


# ---------------------------------------------------------------- numba path

if HAS_NUMBA:

    @njit(cache=True)
    def nb_max_midpoint_norm(theta_u, theta_v, eps):
        best = -1.0
        hits = 0
        for i in range(theta_u.shape[0]):
            ux, uy = np.cos(theta_u[i]), np.sin(theta_u[i])
            vx, vy = np.cos(theta_v[i]), np.sin(theta_v[i])
            dx, dy = ux - vx, uy - vy
            if np.sqrt(dx * dx + dy * dy) < eps:
                continue
            hits += 1
            mx, my = 0.5 * (ux + vx), 0.5 * (uy + vy)
            m = np.sqrt(mx * mx + my * my)
            if m > best:
                best = m
        return best, hits

    @njit(cache=True)
    def nb_ball_pair_mask(a, b, eps, margin):
        n, dim = a.shape
        out = np.zeros(n, dtype=np.bool_)
        for i in range(n):
            na = 0.0
            nb = 0.0
            gap = 0.0
            for j in range(dim):
                na += a[i, j] * a[i, j]
                nb += b[i, j] * b[i, j]
                t = a[i, j] - b[i, j]
                gap += t * t
            out[i] = (np.sqrt(na) <= 1.0 - margin and np.sqrt(nb) <= 1.0 - margin
                      and np.sqrt(gap) >= eps + margin)
        return out

    @njit(cache=True)
    def nb_lens_mask(points, c, r, d, s, slack):
        n, dim = points.shape
        out = np.zeros(n, dtype=np.bool_)
        for i in range(n):
            dc = 0.0
            dd = 0.0
            for j in range(dim):
                t = points[i, j] - c[j]
                dc += t * t
                t = points[i, j] - d[j]
                dd += t * t
            out[i] = np.sqrt(dc) <= r - slack and np.sqrt(dd) <= s - slack
        return out

    @njit(cache=True)
    def nb_max_pairwise_distance(points):
        n, dim = points.shape
        best = 0.0
        bi = 0
        bj = 0
        for i in range(n):
            for j in range(i + 1, n):
                acc = 0.0
                for k in range(dim):
                    t = points[i, k] - points[j, k]
                    acc += t * t
                if acc > best:
                    best = acc
                    bi = i
                    bj = j
        return np.sqrt(best), bi, bj

    max_midpoint_norm = nb_max_midpoint_norm
    ball_pair_mask = nb_ball_pair_mask
    lens_mask = nb_lens_mask
    max_pairwise_distance = nb_max_pairwise_distance
else:
    max_midpoint_norm = np_max_midpoint_norm
    ball_pair_mask = np_ball_pair_mask
    lens_mask = np_lens_mask
    max_pairwise_distance = np_max_pairwise_distance
