"""Monte Carlo harnesses measuring the empirical frequency of each
separation event and comparing it against the matching closed-form bound.

Each trial owns a derived RNG stream (master seed hashed with the trial
index), so reports are identical for any degree of trial parallelism.
Verdicts use a 99% Wilson score interval: PASS means the empirical
frequency is not statistically significantly below the bound.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from statistics import NormalDist

import numpy as np

from . import bounds, kernels, sampling
from .errors import (
    DegenerateDirectionError,
    NumericalError,
    ParameterError,
    ResampleExhaustedError,
)
from .numerics import covariance, fisher_direction
from .rng import generator

Z99 = NormalDist().inv_cdf(0.995)


def wilson99(successes: int, trials: int) -> tuple[float, float]:
    """Two-sided 99% Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise ParameterError(f"trials must be >= 1, got {trials}")
    if not 0 <= successes <= trials:
        raise ParameterError(f"successes {successes} outside [0, {trials}]")
    z2 = Z99 * Z99
    phat = successes / trials
    denom = 1.0 + z2 / trials
    centre = phat + z2 / (2.0 * trials)
    margin = Z99 * math.sqrt((phat * (1.0 - phat) + z2 / (4.0 * trials)) / trials)
    lo = max(0.0, (centre - margin) / denom)
    hi = min(1.0, (centre + margin) / denom)
    return lo, hi


@dataclass(frozen=True)
class SeparationReport:
    """Trial counts, empirical frequency, the theoretical bound, and the
    PASS/FAIL comparison at the 99% Wilson level."""

    event: str
    params: dict
    trials: int
    successes: int
    bound: float
    maximizer_detail: dict | None = field(default=None)

    @property
    def frequency(self) -> float:
        return self.successes / self.trials

    @property
    def wilson(self) -> tuple[float, float]:
        return wilson99(self.successes, self.trials)

    @property
    def verdict(self) -> str:
        lo, hi = self.wilson
        halfwidth = (hi - lo) / 2.0
        return "PASS" if self.frequency >= self.bound - halfwidth else "FAIL"

    def to_dict(self) -> dict:
        lo, hi = self.wilson
        out = {
            "event": self.event,
            "params": self.params,
            "trials": self.trials,
            "successes": self.successes,
            "frequency": self.frequency,
            "wilson99": [lo, hi],
            "bound": self.bound,
            "verdict": self.verdict,
        }
        if self.maximizer_detail is not None:
            out["maximizer_detail"] = self.maximizer_detail
        return out


def _run_trials(trial_fn, trials: int, master_seed: int, jobs: int = 1) -> list:
    """Evaluate trial_fn(rng) on independent streams; results in trial order."""
    if trials < 1:
        raise ParameterError(f"trials must be >= 1, got {trials}")

    def one(index: int):
        return trial_fn(generator(master_seed, index))

    if jobs and jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(one, range(trials)))
    return [one(i) for i in range(trials)]


# ---------------------------------------------------------------------------
# Pairwise eps-orthogonality on the sphere
# ---------------------------------------------------------------------------


def _orth_trial(spec, n_vectors: int, eps: float, rng) -> int:
    points = sampling._draw(spec, n_vectors, rng)
    return kernels.count_eps_violations(points, eps)


def orthogonality_experiment(
    n: int,
    n_vectors: int,
    eps: float,
    trials: int = 200,
    seed: int = 0,
    jobs: int = 1,
) -> SeparationReport:
    """Frequency with which n_vectors uniform unit vectors are pairwise
    eps-orthogonal, against the bound implied by the quasiorthogonality
    cap solved for theta at this set size."""
    if n_vectors < 2:
        raise ParameterError(f"need at least 2 vectors, got {n_vectors}")
    if eps <= 0:
        raise ParameterError(f"eps must be positive, got {eps}")
    spec = sampling.sphere(n)
    violations = _run_trials(
        lambda rng: _orth_trial(spec, n_vectors, eps, rng), trials, seed, jobs
    )
    successes = sum(1 for v in violations if v == 0)
    # Invert the cap N = exp(eps^2 n/4) sqrt(ln(1/(1-theta))) at N=n_vectors.
    log_term = n_vectors * n_vectors * math.exp(-0.5 * n * eps * eps)
    implied_theta = -math.expm1(-log_term)
    bound = math.exp(-log_term)
    pairs = trials * n_vectors * (n_vectors - 1) // 2
    total_violations = int(sum(violations))
    return SeparationReport(
        event="pairwise-eps-orthogonality",
        params={"n": n, "n_vectors": n_vectors, "eps": eps, "seed": seed},
        trials=trials,
        successes=successes,
        bound=bound,
        maximizer_detail={
            "implied_theta": implied_theta,
            "pairs_checked": pairs,
            "pair_violations": total_violations,
            "pair_violation_rate": total_violations / pairs,
        },
    )


# ---------------------------------------------------------------------------
# Uniform ball separation
# ---------------------------------------------------------------------------

_BALL_KERNELS = {
    "single": kernels.ball_single_event,
    "all": kernels.ball_all_event,
    "angle": kernels.ball_angle_event,
}

_BALL_BOUNDS = {
    "single": bounds.ball_single_bound,
    "all": bounds.ball_all_bound,
    "angle": bounds.ball_angle_bound,
}


def _ball_trial(spec, M: int, r: float, variant: str, rng) -> bool:
    points = sampling._draw(spec, M, rng)
    return _BALL_KERNELS[variant](points, r)


def ball_experiment(
    q: bounds.BallBoundQuery,
    variant: str = "single",
    trials: int = 200,
    seed: int = 0,
    jobs: int = 1,
) -> SeparationReport:
    """Empirical frequency of the chosen ball separation event versus its
    closed-form lower bound."""
    if variant not in _BALL_KERNELS:
        raise ParameterError(f"variant must be one of {sorted(_BALL_KERNELS)}")
    spec = sampling.ball(q.n)
    results = _run_trials(
        lambda rng: _ball_trial(spec, q.M, q.r, variant, rng), trials, seed, jobs
    )
    return SeparationReport(
        event=f"ball-{variant}-separation",
        params={"n": q.n, "M": q.M, "r": q.r, "variant": variant, "seed": seed},
        trials=trials,
        successes=int(sum(results)),
        bound=_BALL_BOUNDS[variant](q).value,
    )


# ---------------------------------------------------------------------------
# Product distribution in the cube
# ---------------------------------------------------------------------------

_CUBE_KERNELS = {
    "single": kernels.cube_single_event,
    "all": kernels.cube_all_event,
}

_CUBE_BOUNDS = {
    "single": bounds.cube_single_bound,
    "all": bounds.cube_all_bound,
}


def _cube_trial(spec, M: int, expect, r0: float, delta: float, variant: str, rng) -> bool:
    points = sampling._draw(spec, M, rng)
    return _CUBE_KERNELS[variant](points - expect, r0, delta)


def cube_experiment(
    q: bounds.CubeBoundQuery,
    variant: str = "single",
    trials: int = 200,
    seed: int = 0,
    jobs: int = 1,
    means=None,
) -> SeparationReport:
    """Empirical frequency of the cube norm-band / inner-product event.

    Points are centered on the known coordinate expectations, not on a
    sample estimate.
    """
    if variant not in _CUBE_KERNELS:
        raise ParameterError(f"variant must be one of {sorted(_CUBE_KERNELS)}")
    spec = sampling.cube(q.n, means=means, variances=q.variances)
    expect = spec.means.copy()
    r0 = math.sqrt(q.r0_sq)
    results = _run_trials(
        lambda rng: _cube_trial(spec, q.M, expect, r0, q.delta, variant, rng),
        trials,
        seed,
        jobs,
    )
    return SeparationReport(
        event=f"cube-{variant}-separation",
        params={
            "n": q.n,
            "M": q.M,
            "delta": q.delta,
            "variant": variant,
            "seed": seed,
        },
        trials=trials,
        successes=int(sum(results)),
        bound=_CUBE_BOUNDS[variant](q).value,
    )


# ---------------------------------------------------------------------------
# Tuple separation with the explicit hyperplane
# ---------------------------------------------------------------------------


def _tuple_condition(tuple_points: np.ndarray, beta1: float, beta2: float) -> bool:
    m = tuple_points.shape[0]
    if m == 1:
        return True
    gram = tuple_points @ tuple_points.T
    sums = gram.sum(axis=1) - np.diag(gram)
    return bool(
        np.all(sums >= beta2 * (m - 1)) and np.all(sums <= beta1 * (m - 1))
    )


def _tuple_trial(spec, q, r_star: float, max_attempts: int, rng):
    background = sampling._draw(spec, q.M, rng)
    for attempt in range(1, max_attempts + 1):
        candidate = sampling._draw(spec, q.m, rng)
        if _tuple_condition(candidate, q.beta1, q.beta2):
            break
    else:
        raise ResampleExhaustedError(
            f"no m-tuple satisfied the correlation bracket in {max_attempts} attempts",
            attempts=max_attempts,
        )
    centre = candidate.mean(axis=0)
    norm = np.linalg.norm(centre)
    if norm == 0.0:
        return False, attempt
    direction = centre / norm
    separated = (
        float((candidate @ direction).min()) >= r_star
        and float((background @ direction).max()) < r_star
    )
    return separated, attempt


def tuple_experiment(
    q: bounds.TupleBoundQuery,
    trials: int = 200,
    seed: int = 0,
    jobs: int = 1,
    max_attempts: int = 10_000,
) -> SeparationReport:
    """Frequency with which the explicit hyperplane (normalized tuple mean,
    threshold at the maximizing eps) separates the correlated tuple from
    the background sample.

    The theoretical event is existence of any separating functional; this
    harness tests the constructive one, which lower-bounds it.
    """
    res = bounds.tuple_bound(q)
    r_star = res.detail["threshold"]
    spec = sampling.ball(q.n)
    outcomes = _run_trials(
        lambda rng: _tuple_trial(spec, q, r_star, max_attempts, rng),
        trials,
        seed,
        jobs,
    )
    successes = sum(1 for ok, _ in outcomes if ok)
    return SeparationReport(
        event="tuple-separation",
        params={
            "n": q.n,
            "M": q.M,
            "m": q.m,
            "beta1": q.beta1,
            "beta2": q.beta2,
            "seed": seed,
        },
        trials=trials,
        successes=successes,
        bound=res.value,
        maximizer_detail={
            "epsilon": res.detail["epsilon"],
            "delta": res.detail["delta"],
            "threshold": r_star,
            "max_resample_attempts": max(a for _, a in outcomes),
            "note": "constructive variant",
        },
    )


# ---------------------------------------------------------------------------
# Fisher-discriminant separation of one point
# ---------------------------------------------------------------------------


def _fisher_trial(spec, M: int, rng):
    points = sampling._draw(spec, M, rng)
    rest, err = points[:-1], points[-1]
    try:
        w = fisher_direction(
            covariance(rest), np.zeros((spec.n, spec.n)), err, rest.mean(axis=0)
        )
    except (DegenerateDirectionError, NumericalError):
        return False, True
    threshold = float(w @ err)
    return bool(np.all(rest @ w < threshold)), False


def fisher_separability_experiment(
    n: int,
    M: int,
    trials: int = 200,
    seed: int = 0,
    jobs: int = 1,
    reference_r: float = 0.9,
) -> SeparationReport:
    """Frequency with which the discriminant fitted against a singleton
    "error" point separates it from the other M-1 ball points.

    Compared against the conservative single-point ball bound at
    reference_r (the fitted threshold concentrates well above it in
    genuinely high dimension).
    """
    if M < 3:
        raise ParameterError(f"need at least 3 points, got {M}")
    spec = sampling.ball(n)
    outcomes = _run_trials(lambda rng: _fisher_trial(spec, M, rng), trials, seed, jobs)
    successes = sum(1 for ok, _ in outcomes if ok)
    degenerate = sum(1 for _, bad in outcomes if bad)
    bound = bounds.ball_single_bound(
        bounds.BallBoundQuery(n=n, M=M, r=reference_r)
    ).value
    return SeparationReport(
        event="fisher-single-separation",
        params={"n": n, "M": M, "seed": seed},
        trials=trials,
        successes=successes,
        bound=bound,
        maximizer_detail={
            "reference_r": reference_r,
            "degenerate_trials": degenerate,
        },
    )
