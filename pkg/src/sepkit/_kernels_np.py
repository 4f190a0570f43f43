"""Pure-numpy event kernels (vectorized fallback path).

Each function evaluates one Monte Carlo trial predicate on an (M, n)
float64 array and returns a plain bool (or int for the violation
counter). Mirrors `_kernels_nb` exactly in semantics.
"""

import numpy as np


def ball_single_event(points: np.ndarray, r: float) -> bool:
    """Last point has norm > r and every other point's inner product with
    it stays below r times that norm."""
    last = points[-1]
    norm = float(np.sqrt(last @ last))
    if norm <= r:
        return False
    if points.shape[0] == 1:
        return True
    dots = points[:-1] @ last
    return bool(np.all(dots < r * norm))


def ball_all_event(points: np.ndarray, r: float) -> bool:
    """Every point has norm > r and for every ordered pair (i, j), i != j,
    the inner product (x_i, x_j) stays below r * ||x_j||."""
    norms = np.sqrt(np.einsum("ij,ij->i", points, points))
    if not np.all(norms > r):
        return False
    m = points.shape[0]
    if m == 1:
        return True
    gram = points @ points.T
    limit = r * norms[np.newaxis, :]
    ok = gram < limit
    np.fill_diagonal(ok, True)
    return bool(ok.all())


def ball_angle_event(points: np.ndarray, r: float) -> bool:
    """Every point has norm > r and all pairwise cosines stay below r."""
    norms = np.sqrt(np.einsum("ij,ij->i", points, points))
    if not np.all(norms > r):
        return False
    m = points.shape[0]
    if m == 1:
        return True
    gram = points @ points.T
    limit = r * np.outer(norms, norms)
    ok = gram < limit
    np.fill_diagonal(ok, True)
    return bool(ok.all())


def pairwise_eps_orthogonal(points: np.ndarray, eps: float) -> bool:
    """All distinct pairs have |inner product| < eps."""
    gram = points @ points.T
    iu = np.triu_indices(points.shape[0], k=1)
    return bool(np.all(np.abs(gram[iu]) < eps))


def count_eps_violations(points: np.ndarray, eps: float) -> int:
    """Number of unordered pairs with |inner product| >= eps."""
    gram = points @ points.T
    iu = np.triu_indices(points.shape[0], k=1)
    return int(np.count_nonzero(np.abs(gram[iu]) >= eps))


def cube_single_event(centered: np.ndarray, r0: float, delta: float) -> bool:
    """All centered squared norms lie in [(1-delta), (1+delta)] * r0^2 and
    every earlier point's inner product with the last stays below
    sqrt(1-delta) * r0 * ||last||."""
    sq = np.einsum("ij,ij->i", centered, centered)
    r0sq = r0 * r0
    if not (np.all(sq >= (1.0 - delta) * r0sq) and np.all(sq <= (1.0 + delta) * r0sq)):
        return False
    if centered.shape[0] == 1:
        return True
    last = centered[-1]
    thr = np.sqrt(1.0 - delta) * r0 * np.sqrt(sq[-1])
    dots = centered[:-1] @ last
    return bool(np.all(dots < thr))


def cube_all_event(centered: np.ndarray, r0: float, delta: float) -> bool:
    """Norm band as in cube_single_event; the inner-product cap holds for
    every ordered pair (i, j), i != j."""
    sq = np.einsum("ij,ij->i", centered, centered)
    r0sq = r0 * r0
    if not (np.all(sq >= (1.0 - delta) * r0sq) and np.all(sq <= (1.0 + delta) * r0sq)):
        return False
    m = centered.shape[0]
    if m == 1:
        return True
    gram = centered @ centered.T
    limit = np.sqrt(1.0 - delta) * r0 * np.sqrt(sq)[np.newaxis, :]
    ok = gram < limit
    np.fill_diagonal(ok, True)
    return bool(ok.all())
