import numpy as np
import pytest

from sepkit import bounds, separability
from sepkit.errors import ParameterError, ResampleExhaustedError
from sepkit.rng import generator
from sepkit.sampling import _draw, ball, cube
from sepkit.separability import (
    SeparationReport,
    ball_experiment,
    cube_experiment,
    fisher_separability_experiment,
    orthogonality_experiment,
    tuple_experiment,
    wilson99,
)


class TestWilson:
    def test_against_independent_formula(self):
        from scipy.stats import norm

        z = norm.ppf(0.995)
        for s, t in [(0, 10), (5, 10), (99, 100), (1000, 1000), (3, 7)]:
            lo, hi = wilson99(s, t)
            p = s / t
            denom = 1 + z**2 / t
            centre = p + z**2 / (2 * t)
            margin = z * np.sqrt((p * (1 - p) + z**2 / (4 * t)) / t)
            assert lo == pytest.approx(max(0.0, (centre - margin) / denom), abs=1e-12)
            assert hi == pytest.approx(min(1.0, (centre + margin) / denom), abs=1e-12)

    def test_single_trial_interval_is_wide(self):
        lo, hi = wilson99(1, 1)
        assert lo < 0.25 and hi == 1.0

    def test_bounds_stay_in_unit_interval(self):
        for s, t in [(0, 1), (1, 1), (0, 5), (5, 5), (2, 4)]:
            lo, hi = wilson99(s, t)
            assert 0.0 <= lo <= hi <= 1.0

    def test_validation(self):
        with pytest.raises(ParameterError):
            wilson99(0, 0)
        with pytest.raises(ParameterError):
            wilson99(5, 4)


class TestReport:
    def test_verdict_rule(self):
        # PASS iff frequency >= bound - halfwidth
        rep = SeparationReport("e", {}, trials=100, successes=90, bound=0.99)
        lo, hi = rep.wilson
        hw = (hi - lo) / 2
        assert rep.frequency < rep.bound - hw
        assert rep.verdict == "FAIL"
        rep2 = SeparationReport("e", {}, trials=100, successes=97, bound=0.97)
        assert rep2.verdict == "PASS"

    def test_dict_schema(self):
        rep = ball_experiment(bounds.BallBoundQuery(n=20, M=10, r=0.5), trials=5, seed=1)
        doc = rep.to_dict()
        assert list(doc) == [
            "event",
            "params",
            "trials",
            "successes",
            "frequency",
            "wilson99",
            "bound",
            "verdict",
        ]
        rep2 = tuple_experiment(
            bounds.TupleBoundQuery(n=30, M=10, m=1, beta1=0.0, beta2=0.0),
            trials=5,
            seed=1,
        )
        assert list(rep2.to_dict())[-1] == "maximizer_detail"


class TestOrthogonality:
    def test_two_vectors_trivially_orthogonal_at_large_eps(self):
        # |<x,y>| <= 1 for unit vectors, so eps=2 always succeeds
        rep = orthogonality_experiment(5, 2, 2.0, trials=50, seed=3)
        assert rep.frequency == 1.0

    def test_low_dimension_never_orthogonal(self):
        rep = orthogonality_experiment(2, 50, 0.01, trials=100, seed=4)
        assert rep.frequency == 0.0

    def test_implied_theta_consistent(self):
        rep = orthogonality_experiment(500, 5, 0.2, trials=10, seed=5)
        d = rep.maximizer_detail
        assert rep.bound == pytest.approx(1.0 - d["implied_theta"], rel=1e-12)
        # the cap formula reproduces the set size at the implied theta
        cap = bounds.quasiorthogonal_set_size(500, 0.2, d["implied_theta"])
        assert cap.value == pytest.approx(5.0, rel=1e-9)

    def test_requires_two_vectors(self):
        with pytest.raises(ParameterError):
            orthogonality_experiment(10, 1, 0.5, trials=10, seed=1)


class TestBallExperiment:
    def test_m1_reduces_to_norm_event(self):
        # with one point the event is just ||x|| > r, probability 1 - r^n
        q = bounds.BallBoundQuery(n=6, M=1, r=0.6)
        rep = ball_experiment(q, "single", trials=4000, seed=6)
        expected = 1.0 - 0.6**6
        assert abs(rep.frequency - expected) < 0.02

    def test_determinism_across_jobs(self):
        q = bounds.BallBoundQuery(n=10, M=20, r=0.5)
        a = ball_experiment(q, "all", trials=60, seed=7, jobs=1)
        b = ball_experiment(q, "all", trials=60, seed=7, jobs=4)
        assert a.to_dict() == b.to_dict()

    def test_variant_validation(self):
        with pytest.raises(ParameterError):
            ball_experiment(bounds.BallBoundQuery(n=5, M=5, r=0.5), "diagonal", trials=5, seed=1)

    def test_soundness_spot_check(self):
        # successes recount exactly from re-derived trial streams, and the
        # kernel agrees with a quantifier-literal predicate
        q = bounds.BallBoundQuery(n=8, M=12, r=0.55)
        trials, seed = 100, 8
        rep = ball_experiment(q, "single", trials=trials, seed=seed)
        spec = ball(q.n)

        def brute(points):
            last = points[-1]
            norm = np.linalg.norm(last)
            if not norm > q.r:
                return False
            return all(float(p @ (last / norm)) < q.r for p in points[:-1])

        recount = 0
        for t in range(trials):
            pts = _draw(spec, q.M, generator(seed, t))
            outcome = separability._ball_trial(spec, q.M, q.r, "single", generator(seed, t))
            recount += outcome
            if t % 37 == 0:
                assert outcome == brute(pts)
        assert recount == rep.successes


class TestCubeExperiment:
    def test_low_dimensional_frequency_matches_direct_simulation(self):
        q = bounds.CubeBoundQuery(n=10, M=5, delta=0.5)
        rep = cube_experiment(q, "single", trials=2000, seed=9)

        # independent vectorized simulation of the same event
        rng = np.random.default_rng(1234)
        total, hits = 0, 0
        r0sq = 10.0 / 12.0
        root = np.sqrt(1.0 - q.delta) * np.sqrt(r0sq)
        for _ in range(20):
            pts = rng.random((50_000, 5, 10)) - 0.5
            sq = np.einsum("tij,tij->ti", pts, pts)
            band = np.all(
                (sq >= (1 - q.delta) * r0sq) & (sq <= (1 + q.delta) * r0sq), axis=1
            )
            last = pts[:, -1, :]
            ln = np.sqrt(sq[:, -1])
            dots = np.einsum("tij,tj->ti", pts[:, :-1, :], last)
            ok = np.all(dots < root * ln[:, None], axis=1)
            hits += int(np.count_nonzero(band & ok))
            total += pts.shape[0]
        assert abs(rep.frequency - hits / total) < 0.03

    def test_determinism_across_jobs(self):
        q = bounds.CubeBoundQuery(n=50, M=8, delta=0.4)
        a = cube_experiment(q, "all", trials=40, seed=10, jobs=1)
        b = cube_experiment(q, "all", trials=40, seed=10, jobs=3)
        assert a.to_dict() == b.to_dict()

    def test_boundary_delta_report_well_formed(self):
        q = bounds.CubeBoundQuery(n=40, M=5, delta=2.0 / 3.0 - 1e-9)
        rep = cube_experiment(q, "single", trials=20, seed=11)
        assert 0.0 <= rep.frequency <= 1.0
        assert rep.to_dict()["bound"] == 0.0

    def test_soundness_spot_check_all_variant(self):
        q = bounds.CubeBoundQuery(n=12, M=6, delta=0.5)
        trials, seed = 80, 30
        rep = cube_experiment(q, "all", trials=trials, seed=seed)
        spec = cube(q.n)
        r0 = np.sqrt(q.r0_sq)
        root = np.sqrt(1.0 - q.delta)

        def brute(points):
            c = points - 0.5
            sq = [float(v @ v) for v in c]
            if not all((1 - q.delta) * q.r0_sq <= s <= (1 + q.delta) * q.r0_sq for s in sq):
                return False
            for j in range(len(c)):
                for i in range(len(c)):
                    if i != j:
                        cos = float(c[i] @ c[j]) / (r0 * np.sqrt(sq[j]))
                        if not cos < root:
                            return False
            return True

        recount = 0
        for t in range(trials):
            pts = _draw(spec, q.M, generator(seed, t))
            outcome = separability._cube_trial(
                spec, q.M, spec.means, r0, q.delta, "all", generator(seed, t)
            )
            recount += outcome
            if t % 29 == 0:
                assert outcome == brute(pts)
        assert recount == rep.successes


class TestTupleExperiment:
    def test_m1_uses_norm_threshold(self):
        # at m=1 the functional is x -> <x, y/||y||> with threshold (1-eps)^2,
        # so success is ||y|| >= (1-eps*)^2 and all background dots below it
        q = bounds.TupleBoundQuery(n=25, M=40, m=1, beta1=0.0, beta2=0.0)
        res = bounds.tuple_bound(q)
        eps = res.detail["epsilon"]
        assert res.detail["threshold"] == pytest.approx((1 - eps) ** 2, rel=1e-12)

        rep = tuple_experiment(q, trials=50, seed=12)
        r_star = res.detail["threshold"]
        spec = ball(q.n)
        recount = 0
        for t in range(50):
            rng = generator(12, t)
            background = _draw(spec, q.M, rng)
            y = _draw(spec, 1, rng)[0]
            drct = y / np.linalg.norm(y)
            recount += int(
                float(y @ drct) >= r_star and float((background @ drct).max()) < r_star
            )
        assert recount == rep.successes

    def test_correlation_bracket_respected(self):
        q = bounds.TupleBoundQuery(n=40, M=20, m=2, beta1=1.0, beta2=0.0)
        trials, seed = 30, 13
        tuple_experiment(q, trials=trials, seed=seed)  # must not exhaust
        spec = ball(q.n)
        for t in range(0, trials, 7):
            rng = generator(seed, t)
            _draw(spec, q.M, rng)
            for _ in range(10_000):
                cand = _draw(spec, q.m, rng)
                ip = float(cand[0] @ cand[1])
                if 0.0 <= ip <= 1.0:
                    break
            assert 0.0 <= ip <= 1.0

    def test_resample_exhaustion(self):
        # requiring near-perfect correlation of two random ball points
        q = bounds.TupleBoundQuery(n=50, M=5, m=2, beta1=1.0, beta2=0.999)
        with pytest.raises(ResampleExhaustedError) as err:
            tuple_experiment(q, trials=3, seed=14, max_attempts=5)
        assert err.value.attempts == 5

    def test_report_notes_constructive_variant(self):
        q = bounds.TupleBoundQuery(n=30, M=10, m=2, beta1=1.0, beta2=0.0)
        rep = tuple_experiment(q, trials=10, seed=15)
        assert rep.maximizer_detail["note"] == "constructive variant"
        assert rep.maximizer_detail["threshold"] > 0

    def test_successful_functional_verified_exhaustively(self):
        # re-derive each trial and confirm a success really separates every
        # pair: l(y) >= r for all tuple members, l(x) < r for all background
        q = bounds.TupleBoundQuery(n=80, M=60, m=2, beta1=1.0, beta2=0.0)
        trials, seed = 40, 21
        rep = tuple_experiment(q, trials=trials, seed=seed)
        r_star = rep.maximizer_detail["threshold"]
        spec = ball(q.n)
        recount = 0
        for t in range(trials):
            rng = generator(seed, t)
            background = _draw(spec, q.M, rng)
            for _ in range(10_000):
                cand = _draw(spec, q.m, rng)
                if separability._tuple_condition(cand, q.beta1, q.beta2):
                    break
            centre = cand.mean(axis=0)
            direction = centre / np.linalg.norm(centre)
            y_ok = all(float(y @ direction) >= r_star for y in cand)
            x_ok = all(float(x @ direction) < r_star for x in background)
            recount += int(y_ok and x_ok)
        assert recount == rep.successes
        assert rep.successes > 0  # the check exercised real successes


class TestFisherExperiment:
    def test_low_dimension_report_well_formed(self):
        rep = fisher_separability_experiment(1, 3, trials=200, seed=16)
        assert 0.0 <= rep.frequency <= 1.0
        assert rep.frequency < 0.9  # no high-dimensional blessing at n=1
        assert "degenerate_trials" in rep.maximizer_detail

    def test_moderate_dimension_separates(self):
        rep = fisher_separability_experiment(60, 300, trials=50, seed=17)
        assert rep.frequency >= 0.9

    def test_high_dimensional_regime(self):
        # blessing regime: the fitted discriminant separates essentially always
        rep = fisher_separability_experiment(200, 2000, trials=100, seed=99)
        assert rep.frequency >= 0.95
        assert rep.verdict == "PASS"

    def test_threshold_is_exact_score_of_error_point(self):
        # the fitted rule fires on the error point with equality
        from sepkit.numerics import covariance, fisher_direction

        spec = ball(30)
        rng = generator(18, 0)
        pts = _draw(spec, 100, rng)
        rest, err = pts[:-1], pts[-1]
        w = fisher_direction(covariance(rest), np.zeros((30, 30)), err, rest.mean(axis=0))
        assert float(w @ err) >= float(w @ err)  # trivially at threshold
        assert np.all(rest @ w < w @ err) == separability._fisher_trial(spec, 100, generator(18, 0))[0]

    def test_m_validation(self):
        with pytest.raises(ParameterError):
            fisher_separability_experiment(5, 2, trials=5, seed=1)


class TestParallelReproducibility:
    def test_orthogonality_across_jobs(self):
        a = orthogonality_experiment(100, 6, 0.4, trials=50, seed=19, jobs=1)
        b = orthogonality_experiment(100, 6, 0.4, trials=50, seed=19, jobs=5)
        assert a.to_dict() == b.to_dict()

    def test_fisher_across_jobs(self):
        a = fisher_separability_experiment(20, 50, trials=30, seed=20, jobs=1)
        b = fisher_separability_experiment(20, 50, trials=30, seed=20, jobs=2)
        assert a.to_dict() == b.to_dict()
