"""Closed-form probability lower bounds and cardinality caps for random
point sets: pairwise near-orthogonality on the sphere, single-point and
all-points separation in the unit ball, product distributions in the
cube, and separation of positively correlated tuples.

Every power term is evaluated directly while its log magnitude stays
below 700 and in log space beyond that, so caps like 2(t - r^n)/rho^n
survive regimes where rho^n underflows float64.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError

LOG_SWITCH = 700.0
_LN10 = math.log(10.0)


@dataclass(frozen=True)
class BoundResult:
    """Evaluated bound plus the named intermediate terms that produce it."""

    value: float
    detail: dict


def _exp_or_inf(log_val: float) -> float:
    try:
        return math.exp(log_val)
    except OverflowError:
        return math.inf


def _power(base: float, exponent: float) -> tuple[float, float]:
    """(value, log value) of base**exponent for base >= 0.

    Direct exponentiation while |log| <= LOG_SWITCH; exp(log) past that,
    where the result saturates to 0.0 or inf.
    """
    if base < 0:
        raise ParameterError(f"power base must be nonnegative, got {base}")
    if base == 0.0:
        return (1.0, 0.0) if exponent == 0 else (0.0, -math.inf)
    log_val = exponent * math.log(base)
    if abs(log_val) <= LOG_SWITCH:
        return base**exponent, log_val
    return _exp_or_inf(log_val), log_val


def _clamp01(x: float) -> float:
    return min(1.0, max(0.0, x))


# ---------------------------------------------------------------------------
# Pairwise near-orthogonality on the unit sphere
# ---------------------------------------------------------------------------


def pairwise_orthogonality_bound(n: int, eps: float) -> float:
    """Lower bound on P(|<x, y>| < eps) for two independent uniform unit
    vectors: 1 - 2 exp(-n eps^2 / 2), clamped to [0, 1]."""
    if n < 1:
        raise ParameterError(f"dimension must be >= 1, got {n}")
    if eps <= 0:
        raise ParameterError(f"eps must be positive, got {eps}")
    return _clamp01(1.0 - 2.0 * math.exp(-0.5 * n * eps * eps))


def quasiorthogonal_set_size(n: int, eps: float, theta: float) -> BoundResult:
    """Cap on how many uniform unit vectors stay pairwise eps-orthogonal
    with probability above 1 - theta: exp(eps^2 n / 4) * sqrt(ln(1/(1-theta))).

    Computed in log space; `value` is inf when the cap exceeds float64
    range, with the exact magnitude in detail["log10_value"].
    """
    if n < 1:
        raise ParameterError(f"dimension must be >= 1, got {n}")
    if not 0.0 < eps < 1.0:
        raise ParameterError(f"eps must lie in (0, 1), got {eps}")
    if not 0.0 < theta < 1.0:
        raise ParameterError(f"theta must lie in (0, 1), got {theta}")
    log_term = -math.log1p(-theta)  # ln(1/(1-theta))
    log_val = 0.25 * eps * eps * n + 0.5 * math.log(log_term)
    return BoundResult(
        _exp_or_inf(log_val),
        {
            "exponent": 0.25 * eps * eps * n,
            "log_term": log_term,
            "log_value": log_val,
            "log10_value": log_val / _LN10,
        },
    )


# ---------------------------------------------------------------------------
# Uniform distribution in the unit ball
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BallBoundQuery:
    """Sample size M in dimension n with separation threshold r in (0, 1)."""

    n: int
    M: int
    r: float

    def __post_init__(self):
        if self.n < 1:
            raise ParameterError(f"dimension must be >= 1, got {self.n}")
        if self.M < 1:
            raise ParameterError(f"sample size must be >= 1, got {self.M}")
        if not 0.0 < self.r < 1.0:
            raise ParameterError(f"r must lie in (0, 1), got {self.r}")

    @property
    def rho(self) -> float:
        return math.sqrt(1.0 - self.r * self.r)


def _ball_terms(q: BallBoundQuery):
    r_pow, log_r_pow = _power(q.r, q.n)
    rho_pow, log_rho_pow = _power(q.rho, q.n)
    return r_pow, log_r_pow, rho_pow, log_rho_pow


def ball_single_bound(q: BallBoundQuery) -> BoundResult:
    """P(last point has norm > r and every other point's inner product
    with its direction stays below r) >= 1 - r^n - (M-1)/2 * rho^n."""
    r_pow, log_r_pow, rho_pow, log_rho_pow = _ball_terms(q)
    raw = 1.0 - r_pow - 0.5 * (q.M - 1) * rho_pow
    return BoundResult(
        _clamp01(raw),
        {
            "r_pow_n": r_pow,
            "rho_pow_n": rho_pow,
            "log_r_pow_n": log_r_pow,
            "log_rho_pow_n": log_rho_pow,
            "raw": raw,
        },
    )


def ball_all_bound(q: BallBoundQuery) -> BoundResult:
    """Simultaneous version: every point separated from all the others.
    Lower bound 1 - M r^n - M(M-1)/2 * rho^n."""
    r_pow, log_r_pow, rho_pow, log_rho_pow = _ball_terms(q)
    raw = 1.0 - q.M * r_pow - 0.5 * q.M * (q.M - 1) * rho_pow
    return BoundResult(
        _clamp01(raw),
        {
            "r_pow_n": r_pow,
            "rho_pow_n": rho_pow,
            "log_r_pow_n": log_r_pow,
            "log_rho_pow_n": log_rho_pow,
            "raw": raw,
        },
    )


def ball_angle_bound(q: BallBoundQuery) -> BoundResult:
    """Both sides normalized (pairwise cosines below r):
    1 - M r^n - M(M-1) rho^n."""
    r_pow, log_r_pow, rho_pow, log_rho_pow = _ball_terms(q)
    raw = 1.0 - q.M * r_pow - q.M * (q.M - 1) * rho_pow
    return BoundResult(
        _clamp01(raw),
        {
            "r_pow_n": r_pow,
            "rho_pow_n": rho_pow,
            "log_r_pow_n": log_r_pow,
            "log_rho_pow_n": log_rho_pow,
            "raw": raw,
        },
    )


def max_cardinality_single(n: int, r: float, theta: float) -> BoundResult:
    """Largest sample size keeping one fixed point separated with
    probability above 1 - theta: 2 (theta - r^n) / rho^n, or 0 when
    theta <= r^n. Evaluated in log space."""
    q = BallBoundQuery(n=n, M=1, r=r)
    if not 0.0 < theta < 1.0:
        raise ParameterError(f"theta must lie in (0, 1), got {theta}")
    r_pow, log_r_pow, rho_pow, log_rho_pow = _ball_terms(q)
    if theta <= r_pow:
        return BoundResult(
            0.0,
            {
                "r_pow_n": r_pow,
                "rho_pow_n": rho_pow,
                "threshold_met": False,
                "log10_value": -math.inf,
            },
        )
    log_val = math.log(2.0 * (theta - r_pow)) - log_rho_pow
    return BoundResult(
        _exp_or_inf(log_val),
        {
            "r_pow_n": r_pow,
            "rho_pow_n": rho_pow,
            "log_rho_pow_n": log_rho_pow,
            "threshold_met": True,
            "log_value": log_val,
            "log10_value": log_val / _LN10,
        },
    )


def max_cardinality_all(n: int, r: float, theta: float) -> BoundResult:
    """Largest sample size keeping the whole sample pairwise separated with
    probability above 1 - theta: (r/rho)^n * (-1 + sqrt(1 + 2 theta rho^n / r^{2n})).

    The sqrt term is computed as x / (1 + sqrt(1 + x)), which is stable
    both when x underflows (the cap then equals the asymptote theta / r^n,
    flagged in detail["asymptotic"]) and when x overflows.
    """
    q = BallBoundQuery(n=n, M=1, r=r)
    if not 0.0 < theta < 1.0:
        raise ParameterError(f"theta must lie in (0, 1), got {theta}")
    _, log_r_pow, _, log_rho_pow = _ball_terms(q)
    log_x = math.log(2.0 * theta) + log_rho_pow - 2.0 * log_r_pow
    asymptotic = False
    if log_x < -LOG_SWITCH:
        # x below representable range: -1 + sqrt(1+x) -> x/2 exactly.
        log_u = log_x - math.log(2.0)
        asymptotic = True
        x = 0.0
    elif log_x <= LOG_SWITCH:
        x = math.exp(log_x)
        u = x / (1.0 + math.sqrt(1.0 + x))
        log_u = math.log(u)
        asymptotic = 1.0 + x == 1.0
    else:
        # x above representable range: -1 + sqrt(1+x) -> sqrt(x).
        x = math.inf
        log_u = 0.5 * log_x
    log_val = q.n * (math.log(r) - math.log(q.rho)) + log_u
    return BoundResult(
        _exp_or_inf(log_val),
        {
            "sqrt_argument": x,
            "log_sqrt_argument": log_x,
            "asymptotic": asymptotic,
            "log_value": log_val,
            "log10_value": log_val / _LN10,
        },
    )


# ---------------------------------------------------------------------------
# Product distributions in the unit cube
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CubeBoundQuery:
    """Product distribution in [0,1]^n with per-coordinate variances
    (uniform coordinates, variance 1/12, by default) and band width
    delta in (0, 2/3)."""

    n: int
    M: int
    delta: float
    variances: np.ndarray | None = field(default=None)

    def __post_init__(self):
        if self.n < 1:
            raise ParameterError(f"dimension must be >= 1, got {self.n}")
        if self.M < 1:
            raise ParameterError(f"sample size must be >= 1, got {self.M}")
        if not 0.0 < self.delta < 2.0 / 3.0:
            raise ParameterError(f"delta must lie in (0, 2/3), got {self.delta}")
        if self.variances is None:
            var = np.full(self.n, 1.0 / 12.0)
        else:
            var = np.atleast_1d(np.asarray(self.variances, dtype=float))
            if var.size == 1:
                var = np.full(self.n, float(var[0]))
            if var.shape != (self.n,):
                raise ParameterError(f"variances must be scalar or length {self.n}")
            if np.any(var <= 0):
                raise ParameterError("variances must be positive")
        object.__setattr__(self, "variances", var)

    @property
    def r0_sq(self) -> float:
        return float(self.variances.sum())


def _cube_terms(q: CubeBoundQuery):
    r0_4 = q.r0_sq * q.r0_sq
    exp_norm = 2.0 * q.delta * q.delta * r0_4 / q.n
    exp_dot = 2.0 * r0_4 * (2.0 - 3.0 * q.delta) ** 2 / q.n
    return math.exp(-exp_norm), math.exp(-exp_dot), exp_norm, exp_dot


def cube_single_bound(q: CubeBoundQuery) -> BoundResult:
    """1 - 2M exp(-2 d^2 R0^4/n) - (M-1) exp(-2 R0^4 (2-3d)^2/n), clamped."""
    e_norm, e_dot, exp_norm, exp_dot = _cube_terms(q)
    raw = 1.0 - 2.0 * q.M * e_norm - (q.M - 1) * e_dot
    return BoundResult(
        _clamp01(raw),
        {
            "norm_exponent": exp_norm,
            "dot_exponent": exp_dot,
            "norm_term": 2.0 * q.M * e_norm,
            "dot_term": (q.M - 1) * e_dot,
            "raw": raw,
        },
    )


def cube_all_bound(q: CubeBoundQuery) -> BoundResult:
    """Simultaneous version with the M(M-1) pair count."""
    e_norm, e_dot, exp_norm, exp_dot = _cube_terms(q)
    raw = 1.0 - 2.0 * q.M * e_norm - q.M * (q.M - 1) * e_dot
    return BoundResult(
        _clamp01(raw),
        {
            "norm_exponent": exp_norm,
            "dot_exponent": exp_dot,
            "norm_term": 2.0 * q.M * e_norm,
            "dot_term": q.M * (q.M - 1) * e_dot,
            "raw": raw,
        },
    )


# ---------------------------------------------------------------------------
# Separation of positively correlated m-tuples in the ball
# ---------------------------------------------------------------------------


def _tuple_num_den(eps: float, m: int, beta1: float, beta2: float):
    num = (1.0 - eps) ** 2 + beta2 * (m - 1)
    den_sq = 1.0 + (m - 1) * beta1
    return num, den_sq


def tuple_delta(eps: float, m: int, beta1: float, beta2: float) -> float:
    """Squared cap radius 1 - ((1-eps)^2 + b2(m-1))^2 / (m (1 + (m-1) b1))."""
    if m < 1:
        raise ParameterError(f"tuple size must be >= 1, got {m}")
    num, den_sq = _tuple_num_den(eps, m, beta1, beta2)
    if den_sq <= 0:
        raise ParameterError(
            f"side condition violated: 1 + (m-1)*beta1 = {den_sq:g} must be positive"
        )
    if num <= 0:
        raise ParameterError(
            f"side condition violated: (1-eps)^2 + beta2*(m-1) = {num:g} must be positive"
        )
    return 1.0 - (num * num / den_sq) / m


def tuple_threshold(eps: float, m: int, beta1: float, beta2: float) -> float:
    """Offset of the separating hyperplane along the normalized tuple mean:
    ((1-eps)^2 + b2(m-1)) / (sqrt(m) sqrt(1 + (m-1) b1))."""
    num, den_sq = _tuple_num_den(eps, m, beta1, beta2)
    if den_sq <= 0 or num <= 0:
        raise ParameterError("side conditions fail at this eps")
    return num / math.sqrt(m * den_sq)


@dataclass(frozen=True)
class TupleBoundQuery:
    """Background sample of M ball points versus an m-tuple whose pairwise
    inner-product sums are bracketed by beta2(m-1) and beta1(m-1)."""

    n: int
    M: int
    m: int
    beta1: float
    beta2: float
    grid_points: int = 1024
    refine_tol: float = 1e-10

    def __post_init__(self):
        if self.n < 1:
            raise ParameterError(f"dimension must be >= 1, got {self.n}")
        if self.M < 1:
            raise ParameterError(f"sample size must be >= 1, got {self.M}")
        if self.m < 1:
            raise ParameterError(f"tuple size must be >= 1, got {self.m}")
        if self.beta1 < self.beta2:
            raise ParameterError(
                f"beta1 ({self.beta1}) must be >= beta2 ({self.beta2})"
            )
        if self.grid_points < 3:
            raise ParameterError("grid_points must be >= 3")


def _tuple_log_objective(eps: float, q: TupleBoundQuery) -> float:
    """Log of (1-(1-eps)^n)^m (1 - Delta^{n/2}/2)^M; -inf when eps is
    outside the admissible set (side conditions or Delta < 0)."""
    if not 0.0 < eps < 1.0:
        return -math.inf
    num, den_sq = _tuple_num_den(eps, q.m, q.beta1, q.beta2)
    if num <= 0 or den_sq <= 0:
        return -math.inf
    delta = 1.0 - (num * num / den_sq) / q.m
    if delta < 0.0:
        return -math.inf
    # (1-eps)^n through logs so tiny eps at large n stays accurate.
    log_shell = q.n * math.log1p(-eps)
    shell_pow = math.exp(log_shell)
    if shell_pow >= 1.0:
        return -math.inf
    lf_norms = q.m * math.log1p(-shell_pow)
    if delta == 0.0:
        lf_caps = 0.0
    else:
        cap_pow = math.exp(0.5 * q.n * math.log(delta))
        lf_caps = q.M * math.log1p(-0.5 * cap_pow)
    return lf_norms + lf_caps


_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_max(fn, lo: float, hi: float, tol: float) -> tuple[float, float]:
    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = fn(c), fn(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = fn(d)
    x = c if fc >= fd else d
    return x, max(fc, fd)


def tuple_bound(q: TupleBoundQuery) -> BoundResult:
    """Maximize the tuple-separation probability bound over eps in (0, 1).

    A uniform grid locates the best bracket; golden-section refinement
    narrows it to q.refine_tol. detail reports the maximizer and the
    hyperplane threshold there.
    """
    if 1.0 + (q.m - 1) * q.beta1 <= 0:
        raise ParameterError(
            "side condition violated: 1 + (m-1)*beta1 must be positive"
        )
    grid = np.arange(1, q.grid_points + 1) / (q.grid_points + 1)
    values = np.array([_tuple_log_objective(e, q) for e in grid])
    if not np.any(np.isfinite(values)):
        raise ParameterError("no admissible eps in (0, 1) for these parameters")
    best = int(np.argmax(values))
    lo = grid[best - 1] if best > 0 else grid[best] / 2.0
    hi = grid[best + 1] if best < len(grid) - 1 else (grid[best] + 1.0) / 2.0
    eps_star, log_val = _golden_max(
        lambda e: _tuple_log_objective(e, q), lo, hi, q.refine_tol
    )
    if log_val < values[best]:
        eps_star, log_val = float(grid[best]), float(values[best])
    delta_star = tuple_delta(eps_star, q.m, q.beta1, q.beta2)
    return BoundResult(
        _clamp01(math.exp(log_val)),
        {
            "epsilon": eps_star,
            "delta": delta_star,
            "threshold": tuple_threshold(eps_star, q.m, q.beta1, q.beta2),
            "log_value": log_val,
        },
    )
