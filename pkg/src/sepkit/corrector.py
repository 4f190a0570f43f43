"""One-shot error corrector: center / project / whiten preprocessing, a
greedy positively-correlated clustering of the labeled error points, one
pooled-covariance discriminant per cluster, and an ordered-cascade apply
path with JSON persistence.

Fitting is a pure function of (data, options): repeated fits serialize
to byte-identical JSON.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from ._serialize import render_json
from .errors import (
    DegenerateDataError,
    DimensionMismatchError,
    InsufficientDataError,
    ParameterError,
)
from .numerics import covariance, default_ridge, fisher_direction, inv_sqrt, symmetrize
from .sampling import PointSet

MODEL_VERSION = "sepkit-model-1"

_RANK_TOL = 1e-14


@dataclass(frozen=True)
class LabeledData:
    """All samples plus the indices labeled as errors."""

    points: np.ndarray
    error_indices: np.ndarray
    seed: int | None = None

    def __post_init__(self):
        pts = getattr(self.points, "points", self.points)
        if isinstance(self.points, PointSet) and self.seed is None:
            object.__setattr__(self, "seed", self.points.seed)
        pts = np.ascontiguousarray(np.asarray(pts, dtype=float))
        if pts.ndim != 2 or pts.shape[0] < 1:
            raise ParameterError("points must be a non-empty (M, n) array")
        idx = np.asarray(self.error_indices, dtype=int).ravel()
        if idx.size != np.unique(idx).size:
            raise ParameterError("error indices must be unique")
        if idx.size and (idx.min() < 0 or idx.max() >= pts.shape[0]):
            raise ParameterError(
                f"error indices must lie in [0, {pts.shape[0] - 1}]"
            )
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "error_indices", idx)


@dataclass(frozen=True)
class PreprocessingPipeline:
    """x -> W @ H^T @ (x - mean): centering, projection onto the retained
    top-variance eigenvectors (columns of H, descending variance), and
    whitening by the inverse square root of the projected covariance."""

    mean: np.ndarray
    H: np.ndarray
    W: np.ndarray
    ridge: float
    retained_fraction: float
    cond_ratio: float

    @property
    def n(self) -> int:
        return self.H.shape[0]

    @property
    def m(self) -> int:
        return self.H.shape[1]


@dataclass(frozen=True)
class KnowledgeUnit:
    """One separating functional: unit direction w and threshold c, set at
    the minimum score of the cluster it was fit on (minus an optional
    margin). beta statistics are the min/max per-member average cosine
    within the cluster (None for singletons)."""

    w: np.ndarray
    c: float
    cluster_size: int
    beta1: float | None
    beta2: float | None


@dataclass(frozen=True)
class CorrectorModel:
    pipeline: PreprocessingPipeline
    units: list
    meta: dict

    @property
    def n(self) -> int:
        return self.pipeline.n

    @property
    def m(self) -> int:
        return self.pipeline.m


@dataclass(frozen=True)
class FitOptions:
    variance_fraction: float = 0.999
    cond_cap: float = 1e6
    clusters: int | str = "auto"
    beta_threshold: float = 0.5
    margin: float = 0.0
    ridge: float | None = None
    global_rest_cov: bool = False
    created: str | None = None


# ---------------------------------------------------------------------------
# Preprocessing
# ---------------------------------------------------------------------------


def _canonical_signs(vectors: np.ndarray) -> np.ndarray:
    """Fix each eigenvector's sign so its largest-magnitude entry is
    positive; keeps the basis stable under row-permutation-sized input
    perturbations."""
    out = vectors.copy()
    for j in range(out.shape[1]):
        k = int(np.argmax(np.abs(out[:, j])))
        if out[k, j] < 0:
            out[:, j] = -out[:, j]
    return out


def fit_pipeline(
    data: LabeledData,
    variance_fraction: float = 0.999,
    cond_cap: float = 1e6,
    ridge: float | None = None,
) -> PreprocessingPipeline:
    """Center on the full-sample mean, keep the smallest top-variance
    eigenbasis reaching variance_fraction of the spectrum (numerically
    zero directions are never kept), and whiten the projection.

    When the retained eigenvalue ratio exceeds cond_cap the retention
    choice stands and the whitener's ridge absorbs the conditioning;
    the ratio is recorded in the result.
    """
    if not 0.0 < variance_fraction <= 1.0:
        raise ParameterError(
            f"variance_fraction must lie in (0, 1], got {variance_fraction}"
        )
    if cond_cap < 1.0:
        raise ParameterError(f"cond_cap must be >= 1, got {cond_cap}")
    pts = data.points
    if pts.shape[0] < 2:
        raise InsufficientDataError("need at least 2 samples to fit")
    if pts.shape[0] - data.error_indices.size < 2:
        raise InsufficientDataError("need at least 2 non-error samples to fit")
    mean = pts.mean(axis=0)
    cov = covariance(pts)
    trace = float(np.trace(cov))
    w, v = np.linalg.eigh(cov)
    w_desc = np.clip(w[::-1], 0.0, None)
    v_desc = v[:, ::-1]
    if trace <= 0 or w_desc[0] <= _RANK_TOL * trace:
        raise DegenerateDataError(
            "all covariance eigenvalues are numerically zero"
        )
    rank = int(np.count_nonzero(w_desc > _RANK_TOL * trace))
    cums = np.cumsum(w_desc)
    target = variance_fraction * cums[-1]
    m = int(np.searchsorted(cums, target * (1.0 - 1e-9))) + 1
    m = min(m, rank)
    basis = _canonical_signs(v_desc[:, :m])
    cond_ratio = float(w_desc[0] / w_desc[m - 1])
    cov_proj = symmetrize(basis.T @ cov @ basis)
    ridge_val = default_ridge(cov_proj) if ridge is None else float(ridge)
    whitener = inv_sqrt(cov_proj, ridge_val)
    return PreprocessingPipeline(
        mean=mean,
        H=basis,
        W=whitener,
        ridge=ridge_val,
        retained_fraction=float(cums[m - 1] / cums[-1]),
        cond_ratio=cond_ratio,
    )


def transform(pipeline: PreprocessingPipeline, x) -> np.ndarray:
    """Apply the pipeline to one n-vector or a batch of rows.

    Batches are processed row by row with the same vector operations as
    a single call, so a row's image never depends on the batch it
    arrived in; fitted thresholds stay exactly reproducible.
    """
    arr = np.asarray(x, dtype=float)
    if arr.ndim not in (1, 2) or arr.shape[-1] != pipeline.n:
        raise DimensionMismatchError(
            f"expected vectors of dimension {pipeline.n}, got shape {arr.shape}"
        )
    if arr.ndim == 1:
        return ((arr - pipeline.mean) @ pipeline.H) @ pipeline.W
    out = np.empty((arr.shape[0], pipeline.m))
    for i in range(arr.shape[0]):
        out[i] = ((arr[i] - pipeline.mean) @ pipeline.H) @ pipeline.W
    return out


# ---------------------------------------------------------------------------
# Error clustering
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ErrorCluster:
    indices: tuple
    beta1: float | None
    beta2: float | None

    @property
    def size(self) -> int:
        return len(self.indices)


def _canonical_order(points: np.ndarray) -> list:
    """Row order independent of input permutation: lexicographic by
    coordinates, first coordinate primary."""
    return list(np.lexsort(points.T[::-1]))


def _member_averages(cos: np.ndarray, members: list) -> np.ndarray:
    sub = cos[np.ix_(members, members)]
    k = len(members)
    return (sub.sum(axis=1) - np.diag(sub)) / (k - 1)


def _admissible(cos: np.ndarray, members: list, threshold: float) -> bool:
    if len(members) < 2:
        return True
    return bool(np.all(_member_averages(cos, members) >= threshold))


def cluster_errors(points, clusters="auto", beta_threshold: float = 0.5):
    """Partition error points into clusters whose members stay, on
    average, pairwise positively correlated (cosine scale).

    Greedy agglomeration over a canonical point order; a candidate joins
    only while every member's average cosine to the rest of the cluster
    stays at or above beta_threshold, so singletons are always a valid
    fallback. An integer `clusters` asks for that many clusters: extra
    clusters are merged only while admissibility survives, and large
    clusters are split (lowest-cohesion member first) to go the other
    way.
    """
    pts = getattr(points, "points", points)
    pts = np.asarray(pts, dtype=float)
    if pts.ndim != 2 or pts.shape[0] < 1:
        raise ParameterError("error points must form a non-empty (k, n) array")
    if not 0.0 < beta_threshold < 1.0:
        raise ParameterError(
            f"beta_threshold must lie in (0, 1), got {beta_threshold}"
        )
    k = pts.shape[0]
    norms = np.linalg.norm(pts, axis=1, keepdims=True)
    unit = np.divide(pts, norms, out=np.zeros_like(pts), where=norms > 0)
    cos = unit @ unit.T
    order = _canonical_order(pts)
    pos = np.empty(k, dtype=int)
    pos[order] = np.arange(k)

    assigned = np.zeros(k, dtype=bool)
    groups: list[list] = []
    for seed_idx in order:
        if assigned[seed_idx]:
            continue
        members = [seed_idx]
        assigned[seed_idx] = True
        grew = True
        while grew:
            grew = False
            for cand in order:
                if assigned[cand]:
                    continue
                if _admissible(cos, members + [cand], beta_threshold):
                    members.append(cand)
                    assigned[cand] = True
                    grew = True
                    break
        groups.append(members)

    if clusters not in ("auto", None):
        p = int(clusters)
        if not 1 <= p <= k:
            raise ParameterError(f"clusters must lie in [1, {k}], got {clusters}")
        groups = _adjust_cluster_count(groups, p, cos, beta_threshold)

    groups = sorted(groups, key=lambda g: min(pos[i] for i in g))
    out = []
    for members in groups:
        ordered = tuple(int(i) for i in sorted(members, key=lambda i: pos[i]))
        if len(ordered) >= 2:
            avgs = _member_averages(cos, list(ordered))
            out.append(ErrorCluster(ordered, float(avgs.max()), float(avgs.min())))
        else:
            out.append(ErrorCluster(ordered, None, None))
    return out


def _adjust_cluster_count(groups, p, cos, threshold):
    while len(groups) > p:
        best = None
        for a in range(len(groups)):
            for b in range(a + 1, len(groups)):
                merged = groups[a] + groups[b]
                if not _admissible(cos, merged, threshold):
                    continue
                score = float(np.mean(cos[np.ix_(groups[a], groups[b])]))
                if best is None or score > best[0]:
                    best = (score, a, b)
        if best is None:
            break  # no merge keeps the correlation bracket; stay above p
        _, a, b = best
        groups[a] = groups[a] + groups[b]
        del groups[b]
    while len(groups) < p:
        splittable = [g for g in groups if len(g) >= 2]
        victim = min(
            splittable, key=lambda g: float(_member_averages(cos, g).min())
        )
        avgs = _member_averages(cos, victim)
        worst = victim[int(np.argmin(avgs))]
        victim.remove(worst)
        groups.append([worst])
    return groups


# ---------------------------------------------------------------------------
# Fit / apply
# ---------------------------------------------------------------------------


def fit(data: LabeledData, options: FitOptions = FitOptions()) -> CorrectorModel:
    """Build the corrector: pipeline, clustered errors, one discriminant
    unit per cluster with its threshold at the cluster's minimum score."""
    if data.error_indices.size == 0:
        raise ParameterError("error index set is empty; nothing to correct")
    pipeline = fit_pipeline(
        data, options.variance_fraction, options.cond_cap, options.ridge
    )
    whitened = transform(pipeline, data.points)
    err_rows = data.error_indices
    err_points = whitened[err_rows]
    clusters = cluster_errors(err_points, options.clusters, options.beta_threshold)

    dim = pipeline.m
    total = whitened.shape[0]
    global_cov = covariance(whitened) if options.global_rest_cov else None
    units = []
    for cluster in clusters:
        rows = err_rows[list(cluster.indices)]
        mask = np.ones(total, dtype=bool)
        mask[rows] = False
        rest = whitened[mask]
        members = whitened[rows]
        cov_rest = global_cov if global_cov is not None else covariance(rest)
        if cluster.size >= 2:
            cov_cluster = covariance(members)
        else:
            cov_cluster = np.zeros((dim, dim))
        w = fisher_direction(
            cov_rest, cov_cluster, members.mean(axis=0), rest.mean(axis=0),
            ridge=options.ridge,
        )
        # Same per-row dot as unit_scores, so the threshold is exactly
        # reproducible at apply time.
        threshold = min(float(np.dot(members[i], w)) for i in range(len(rows)))
        if options.margin > 0:
            threshold -= options.margin * float(np.std(rest @ w))
        units.append(
            KnowledgeUnit(w, threshold, cluster.size, cluster.beta1, cluster.beta2)
        )
    meta = {
        "samples": int(total),
        "errors": int(err_rows.size),
        "clusters": len(units),
        "requested_clusters": options.clusters
        if options.clusters in ("auto", None)
        else int(options.clusters),
        "variance_fraction": options.variance_fraction,
        "cond_cap": options.cond_cap,
        "beta_threshold": options.beta_threshold,
        "margin": options.margin,
        "global_rest_cov": options.global_rest_cov,
        "seed": data.seed,
        "created": options.created,
    }
    return CorrectorModel(pipeline=pipeline, units=units, meta=meta)


@dataclass(frozen=True)
class ApplyResult:
    flagged: bool
    fired_units: list
    scores: np.ndarray


def unit_scores(model: CorrectorModel, x) -> np.ndarray:
    """Per-unit score l_i(x) - c_i for one vector or a batch.

    Uses the same per-row dot products the fit used when placing the
    thresholds, so fitting-time cluster members score exactly >= 0.
    """
    arr = np.asarray(x, dtype=float)
    single = arr.ndim == 1
    rows = arr[np.newaxis, :] if single else arr
    transformed = transform(model.pipeline, rows)
    out = np.empty((rows.shape[0], len(model.units)))
    for i in range(rows.shape[0]):
        for j, unit in enumerate(model.units):
            out[i, j] = float(np.dot(transformed[i], unit.w)) - unit.c
    return out[0] if single else out


def apply(model: CorrectorModel, x) -> ApplyResult:
    """Flag x when any unit's score reaches its threshold."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1:
        raise DimensionMismatchError("apply takes a single n-vector")
    scores = unit_scores(model, arr)
    fired = [int(i) for i in np.nonzero(scores >= 0.0)[0]]
    return ApplyResult(flagged=bool(fired), fired_units=fired, scores=scores)


@dataclass(frozen=True)
class CascadeResult:
    stages: list
    flagged: bool
    first_flag_stage: int | None


def cascade_apply(models, x) -> CascadeResult:
    """Apply an ordered list of models; every stage is evaluated and
    reported even after an earlier stage flags (audit mode)."""
    if not models:
        raise ParameterError("cascade needs at least one model")
    stages = [apply(model, x) for model in models]
    first = next((i for i, s in enumerate(stages) if s.flagged), None)
    return CascadeResult(stages=stages, flagged=first is not None, first_flag_stage=first)


# ---------------------------------------------------------------------------
# Persistence
# ---------------------------------------------------------------------------


def model_to_dict(model: CorrectorModel) -> dict:
    return {
        "version": MODEL_VERSION,
        "n": model.n,
        "m": model.m,
        "mean": model.pipeline.mean,
        "H": model.pipeline.H,
        "W": model.pipeline.W,
        "ridge": model.pipeline.ridge,
        "units": [
            {
                "w": u.w,
                "c": u.c,
                "cluster_size": u.cluster_size,
                "beta1": u.beta1,
                "beta2": u.beta2,
            }
            for u in model.units
        ],
        "meta": dict(model.meta)
        | {
            "retained_fraction": model.pipeline.retained_fraction,
            "cond_ratio": model.pipeline.cond_ratio,
        },
    }


def model_to_json(model: CorrectorModel) -> str:
    return render_json(model_to_dict(model))


def model_from_dict(doc: dict) -> CorrectorModel:
    if doc.get("version") != MODEL_VERSION:
        raise ParameterError(
            f"unsupported model version {doc.get('version')!r}; expected {MODEL_VERSION}"
        )
    meta = dict(doc.get("meta", {}))
    pipeline = PreprocessingPipeline(
        mean=np.asarray(doc["mean"], dtype=float),
        H=np.asarray(doc["H"], dtype=float),
        W=np.asarray(doc["W"], dtype=float),
        ridge=float(doc["ridge"]),
        retained_fraction=float(meta.pop("retained_fraction", 1.0)),
        cond_ratio=float(meta.pop("cond_ratio", 1.0)),
    )
    units = [
        KnowledgeUnit(
            w=np.asarray(u["w"], dtype=float),
            c=float(u["c"]),
            cluster_size=int(u["cluster_size"]),
            beta1=None if u["beta1"] is None else float(u["beta1"]),
            beta2=None if u["beta2"] is None else float(u["beta2"]),
        )
        for u in doc["units"]
    ]
    for u in units:
        if u.w.shape != (pipeline.m,):
            raise ParameterError("unit dimension does not match pipeline output")
    return CorrectorModel(pipeline=pipeline, units=units, meta=meta)


def save_model(model: CorrectorModel, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(model_to_json(model))


def load_model(path) -> CorrectorModel:
    with open(path, "r", encoding="utf-8") as fh:
        return model_from_dict(json.load(fh))
