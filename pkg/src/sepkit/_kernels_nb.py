"""Numba-jitted event kernels with early exit.

Loop-style twins of `_kernels_np`. The explicit loops bail out on the
first violated condition, which the vectorized path cannot do, and avoid
materializing M x M Gram matrices. The fastmath flags permit FMA and
reduction reassociation (for SIMD) without any NaN/inf assumptions;
like the BLAS-backed numpy path, sums may differ from sequential
evaluation in the last bits.
"""

import numpy as np
from numba import njit


@njit(cache=True, fastmath={"contract", "reassoc", "nsz"})
def ball_single_event(points, r):
    m, n = points.shape
    s = 0.0
    for k in range(n):
        s += points[m - 1, k] * points[m - 1, k]
    norm = np.sqrt(s)
    if norm <= r:
        return False
    limit = r * norm
    for i in range(m - 1):
        d = 0.0
        for k in range(n):
            d += points[i, k] * points[m - 1, k]
        if d >= limit:
            return False
    return True


@njit(cache=True, fastmath={"contract", "reassoc", "nsz"})
def ball_all_event(points, r):
    m, n = points.shape
    norms = np.empty(m)
    for i in range(m):
        s = 0.0
        for k in range(n):
            s += points[i, k] * points[i, k]
        norms[i] = np.sqrt(s)
        if norms[i] <= r:
            return False
    for i in range(m):
        for j in range(i + 1, m):
            d = 0.0
            for k in range(n):
                d += points[i, k] * points[j, k]
            # (x_i, x_j) < r*||x_j|| and (x_j, x_i) < r*||x_i||
            if d >= r * norms[j] or d >= r * norms[i]:
                return False
    return True


@njit(cache=True, fastmath={"contract", "reassoc", "nsz"})
def ball_angle_event(points, r):
    m, n = points.shape
    norms = np.empty(m)
    for i in range(m):
        s = 0.0
        for k in range(n):
            s += points[i, k] * points[i, k]
        norms[i] = np.sqrt(s)
        if norms[i] <= r:
            return False
    for i in range(m):
        for j in range(i + 1, m):
            d = 0.0
            for k in range(n):
                d += points[i, k] * points[j, k]
            if d >= r * norms[i] * norms[j]:
                return False
    return True


@njit(cache=True, fastmath={"contract", "reassoc", "nsz"})
def pairwise_eps_orthogonal(points, eps):
    m, n = points.shape
    for i in range(m):
        for j in range(i + 1, m):
            d = 0.0
            for k in range(n):
                d += points[i, k] * points[j, k]
            if abs(d) >= eps:
                return False
    return True


@njit(cache=True, fastmath={"contract", "reassoc", "nsz"})
def count_eps_violations(points, eps):
    m, n = points.shape
    count = 0
    for i in range(m):
        for j in range(i + 1, m):
            d = 0.0
            for k in range(n):
                d += points[i, k] * points[j, k]
            if abs(d) >= eps:
                count += 1
    return count


@njit(cache=True, fastmath={"contract", "reassoc", "nsz"})
def cube_single_event(centered, r0, delta):
    m, n = centered.shape
    r0sq = r0 * r0
    sq = np.empty(m)
    for i in range(m):
        s = 0.0
        for k in range(n):
            s += centered[i, k] * centered[i, k]
        sq[i] = s
        if s < (1.0 - delta) * r0sq or s > (1.0 + delta) * r0sq:
            return False
    if m == 1:
        return True
    thr = np.sqrt(1.0 - delta) * r0 * np.sqrt(sq[m - 1])
    for i in range(m - 1):
        d = 0.0
        for k in range(n):
            d += centered[i, k] * centered[m - 1, k]
        if d >= thr:
            return False
    return True


@njit(cache=True, fastmath={"contract", "reassoc", "nsz"})
def cube_all_event(centered, r0, delta):
    m, n = centered.shape
    r0sq = r0 * r0
    root = np.sqrt(1.0 - delta) * r0
    norms = np.empty(m)
    for i in range(m):
        s = 0.0
        for k in range(n):
            s += centered[i, k] * centered[i, k]
        if s < (1.0 - delta) * r0sq or s > (1.0 + delta) * r0sq:
            return False
        norms[i] = np.sqrt(s)
    for i in range(m):
        for j in range(i + 1, m):
            d = 0.0
            for k in range(n):
                d += centered[i, k] * centered[j, k]
            if d >= root * norms[j] or d >= root * norms[i]:
                return False
    return True
