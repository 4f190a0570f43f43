"""Seeded generators for the random point ensembles the toolkit studies.

Supported families: uniform (Lebesgue) distribution in the unit ball,
uniform distribution on the unit sphere, per-coordinate product
distributions supported inside [0, 1] (uniform family), and diagonal
gaussians. Sampling is a pure function of (spec, count, seed).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError
from .rng import generator

BALL = "unit-ball"
SPHERE = "unit-sphere"
CUBE = "unit-cube-product"
GAUSSIAN = "gaussian"
EXTERNAL = "external"

_KINDS = (BALL, SPHERE, CUBE, GAUSSIAN)

_SQRT3 = np.sqrt(3.0)


@dataclass(frozen=True)
class DistributionSpec:
    """Parameters of one sampling family.

    For ``unit-cube-product`` each coordinate is uniform on the interval
    of the requested mean and variance; the interval must stay inside
    [0, 1]. For ``gaussian`` the covariance is diagonal.
    """

    kind: str
    n: int
    means: np.ndarray | None = field(default=None)
    variances: np.ndarray | None = field(default=None)

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ParameterError(f"unknown distribution kind {self.kind!r}")
        if int(self.n) < 1:
            raise ParameterError(f"dimension must be >= 1, got {self.n}")
        object.__setattr__(self, "n", int(self.n))
        if self.kind == CUBE:
            means = _as_vector(self.means, self.n, 0.5, "means")
            variances = _as_vector(self.variances, self.n, 1.0 / 12.0, "variances")
            if np.any(variances <= 0):
                raise ParameterError("cube-product variances must be positive")
            half = _SQRT3 * np.sqrt(variances)
            lo, hi = means - half, means + half
            if np.any(lo < -1e-12) or np.any(hi > 1 + 1e-12):
                raise ParameterError(
                    "cube-product coordinate support must stay inside [0, 1]"
                )
            object.__setattr__(self, "means", means)
            object.__setattr__(self, "variances", variances)
        elif self.kind == GAUSSIAN:
            means = _as_vector(self.means, self.n, 0.0, "means")
            variances = _as_vector(self.variances, self.n, 1.0, "variances")
            if np.any(variances <= 0):
                raise ParameterError("gaussian variances must be positive")
            object.__setattr__(self, "means", means)
            object.__setattr__(self, "variances", variances)
        elif self.means is not None or self.variances is not None:
            raise ParameterError(f"{self.kind} takes no means/variances")


def _as_vector(value, n: int, default: float, name: str) -> np.ndarray:
    if value is None:
        return np.full(n, default)
    arr = np.atleast_1d(np.asarray(value, dtype=float))
    if arr.size == 1:
        return np.full(n, float(arr[0]))
    if arr.shape != (n,):
        raise ParameterError(f"{name} must be scalar or length {n}")
    return arr.copy()


def ball(n: int) -> DistributionSpec:
    return DistributionSpec(BALL, n)


def sphere(n: int) -> DistributionSpec:
    return DistributionSpec(SPHERE, n)


def cube(n: int, means=None, variances=None) -> DistributionSpec:
    return DistributionSpec(CUBE, n, means, variances)


def gaussian(n: int, means=None, variances=None) -> DistributionSpec:
    return DistributionSpec(GAUSSIAN, n, means, variances)


@dataclass(frozen=True)
class PointSet:
    """An ordered (M, n) sample plus provenance."""

    points: np.ndarray
    kind: str = EXTERNAL
    seed: int | None = None

    def __post_init__(self):
        pts = np.ascontiguousarray(np.asarray(self.points, dtype=float))
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise ParameterError("points must be a non-empty (M, n) array")
        object.__setattr__(self, "points", pts)

    @property
    def count(self) -> int:
        return self.points.shape[0]

    @property
    def n(self) -> int:
        return self.points.shape[1]


def _draw(spec: DistributionSpec, count: int, rng: np.random.Generator) -> np.ndarray:
    """Draw `count` i.i.d. points using an existing generator."""
    if spec.kind in (BALL, SPHERE):
        direction = rng.standard_normal((count, spec.n))
        direction /= np.linalg.norm(direction, axis=1, keepdims=True)
        if spec.kind == SPHERE:
            return direction
        # Radius density ~ r^(n-1): invert the CDF r^n with a uniform draw.
        radius = rng.random(count) ** (1.0 / spec.n)
        return direction * radius[:, np.newaxis]
    if spec.kind == CUBE:
        half = _SQRT3 * np.sqrt(spec.variances)
        lo = spec.means - half
        return lo + 2.0 * half * rng.random((count, spec.n))
    if spec.kind == GAUSSIAN:
        return spec.means + np.sqrt(spec.variances) * rng.standard_normal(
            (count, spec.n)
        )
    raise ParameterError(f"cannot draw from kind {spec.kind!r}")


def sample(spec: DistributionSpec, count: int, seed: int) -> PointSet:
    """Deterministic i.i.d. sample of `count` points from `spec`."""
    if count < 1:
        raise ParameterError(f"count must be >= 1, got {count}")
    points = _draw(spec, count, generator(seed))
    return PointSet(points, kind=spec.kind, seed=seed)


def radial_statistics(ps) -> dict:
    """Min, max, and mean squared Euclidean row norm."""
    points = ps.points if isinstance(ps, PointSet) else np.asarray(ps, dtype=float)
    sq = np.einsum("ij,ij->i", points, points)
    norms = np.sqrt(sq)
    return {
        "min_norm": float(norms.min()),
        "max_norm": float(norms.max()),
        "mean_square_norm": float(sq.mean()),
    }


_HEADER_RE = re.compile(
    r"#\s*sepkit pointset v1,\s*n=(\d+),\s*kind=([^,]+),\s*seed=(\S+)"
)


def save_csv(ps: PointSet, path) -> None:
    """Write the v1 point-set CSV: a metadata header line, then one row of
    17-significant-digit coordinates per point."""
    seed_repr = "none" if ps.seed is None else str(ps.seed)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# sepkit pointset v1, n={ps.n}, kind={ps.kind}, seed={seed_repr}\n")
        np.savetxt(fh, ps.points, fmt="%.17g", delimiter=",")


def load_csv(path) -> PointSet:
    """Read a point-set CSV; files without the v1 header load as external."""
    with open(path, "r", encoding="utf-8") as fh:
        first = fh.readline()
        match = _HEADER_RE.match(first)
        if match:
            n = int(match.group(1))
            kind = match.group(2).strip()
            seed_text = match.group(3).strip()
            seed = None if seed_text == "none" else int(seed_text)
            rows = np.loadtxt(fh, delimiter=",", ndmin=2)
        else:
            fh.seek(0)
            n, kind, seed = None, EXTERNAL, None
            rows = np.loadtxt(fh, delimiter=",", ndmin=2)
    if n is not None and rows.shape[1] != n:
        raise ParameterError(
            f"header says n={n} but rows have {rows.shape[1]} columns"
        )
    return PointSet(rows, kind=kind, seed=seed)

