"""Dense symmetric linear algebra: covariance, eigendecomposition,
inverse square root, and the pooled-covariance discriminant solve."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateDirectionError,
    InsufficientDataError,
    NumericalError,
    ParameterError,
    SingularityError,
)

RIDGE_SCALE = 1e-10


def symmetrize(a: np.ndarray) -> np.ndarray:
    """Exactly symmetric copy: averaging is bitwise commutative."""
    a = np.asarray(a, dtype=float)
    return (a + a.T) / 2.0


def _check_symmetric(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ParameterError(f"expected a square matrix, got shape {a.shape}")
    if not np.array_equal(a, a.T):
        raise ParameterError("matrix is not exactly symmetric; use symmetrize()")
    return a


def default_ridge(a: np.ndarray) -> float:
    """Regularization used when inverting sample covariances: a fixed tiny
    fraction of the mean eigenvalue."""
    a = np.asarray(a, dtype=float)
    return RIDGE_SCALE * float(np.trace(a)) / a.shape[0]


def covariance(points) -> np.ndarray:
    """Unbiased sample covariance (divisor M-1) about the sample mean.

    Accepts an (M, n) array or anything with a ``.points`` attribute.
    The result is exactly symmetric.
    """
    pts = getattr(points, "points", points)
    pts = np.asarray(pts, dtype=float)
    if pts.ndim != 2:
        raise ParameterError(f"expected an (M, n) array, got shape {pts.shape}")
    m = pts.shape[0]
    if m < 2:
        raise InsufficientDataError(f"covariance needs at least 2 points, got {m}")
    centered = pts - pts.mean(axis=0)
    return symmetrize(centered.T @ centered / (m - 1))


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues in ascending order; eigenvectors as orthonormal columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def sym_eig(a: np.ndarray) -> EigenDecomposition:
    """Full symmetric eigendecomposition, eigenvalues ascending."""
    a = _check_symmetric(a)
    try:
        w, v = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(
            f"symmetric eigendecomposition did not converge ({exc})"
        ) from exc
    return EigenDecomposition(w, v)


def inv_sqrt(a: np.ndarray, ridge: float = 0.0) -> np.ndarray:
    """The symmetric PSD branch of (A + ridge*I)^(-1/2).

    Raises SingularityError when the smallest shifted eigenvalue is not
    positive; callers should pass a larger ridge.
    """
    if ridge < 0:
        raise ParameterError(f"ridge must be nonnegative, got {ridge}")
    dec = sym_eig(a)
    shifted = dec.eigenvalues + ridge
    if shifted.min() <= 0:
        raise SingularityError(
            f"matrix not positive definite at ridge={ridge:g} "
            f"(min shifted eigenvalue {shifted.min():.3e}); increase the ridge"
        )
    v = dec.eigenvectors
    return symmetrize((v / np.sqrt(shifted)) @ v.T)


def fisher_direction(
    cov_rest: np.ndarray,
    cov_err: np.ndarray,
    mean_err: np.ndarray,
    mean_rest: np.ndarray,
    ridge: float | None = None,
) -> np.ndarray:
    """Unit vector w solving (cov_rest + cov_err + ridge*I) w = mean_err - mean_rest.

    ridge=None applies the default sample-covariance regularization; pass
    ridge=0.0 for the exact unregularized solve.
    """
    pooled = symmetrize(np.asarray(cov_rest, dtype=float) + np.asarray(cov_err, dtype=float))
    rhs = np.asarray(mean_err, dtype=float) - np.asarray(mean_rest, dtype=float)
    if pooled.shape != (rhs.size, rhs.size):
        raise ParameterError(
            f"covariance shape {pooled.shape} does not match mean dimension {rhs.size}"
        )
    if not np.any(rhs):
        raise DegenerateDirectionError(
            "class means coincide; the discriminant direction is undefined"
        )
    if ridge is None:
        ridge = default_ridge(pooled)
    system = pooled + ridge * np.eye(pooled.shape[0])
    try:
        w = np.linalg.solve(system, rhs)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(
            f"pooled covariance singular at ridge={ridge:g}"
        ) from exc
    norm = np.linalg.norm(w)
    if not np.isfinite(norm) or norm == 0.0:
        raise NumericalError("discriminant solve produced a non-finite direction")
    return w / norm
