"""Command-line interface: point-set generation, bound evaluation, Monte
Carlo simulation, corrector fitting, and batch application.

Every command is deterministic given its flags; seeds default to the
fixed constant DEFAULT_SEED, never the clock. stdout carries data and
summaries, stderr carries diagnostics.

Exit codes: 0 success (and PASS verdicts), 1 FAIL verdict or degenerate
data, 2 operational errors, 64 usage errors, 65 model/data dimension
mismatch.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__, bounds, corrector, sampling, separability
from ._serialize import fmt_float, render_json
from .errors import (
    DegenerateDataError,
    DimensionMismatchError,
    InsufficientDataError,
    NumericalError,
    ParameterError,
    SepkitError,
)

DEFAULT_SEED = 12345

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_OPERATIONAL = 2
EXIT_USAGE = 64
EXIT_DATA_MISMATCH = 65

_DIST_KINDS = {
    "ball": sampling.BALL,
    "sphere": sampling.SPHERE,
    "cube": sampling.CUBE,
    "gauss": sampling.GAUSSIAN,
}

_VERSION_STRING = f"sepkit {__version__}"


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


def _require(args, names: list, context: str) -> None:
    for name in names:
        if getattr(args, name.replace("-", "_"), None) is None:
            raise ParameterError(f"--{name} is required for {context}")


# ---------------------------------------------------------------------------
# gen
# ---------------------------------------------------------------------------


def _cmd_gen(args) -> int:
    kind = _DIST_KINDS[args.dist]
    extra = {}
    if kind in (sampling.CUBE, sampling.GAUSSIAN):
        if args.mean is not None:
            extra["means"] = args.mean
        if args.sigma2 is not None:
            extra["variances"] = args.sigma2
    elif args.mean is not None or args.sigma2 is not None:
        raise ParameterError("--mean/--sigma2 only apply to cube and gauss")
    spec = sampling.DistributionSpec(kind, args.n, **extra)
    ps = sampling.sample(spec, args.count, args.seed)
    sampling.save_csv(ps, args.out)
    stats = sampling.radial_statistics(ps)
    print(
        f"gen: count={ps.count} n={ps.n} kind={ps.kind} seed={args.seed} "
        f"min_norm={fmt_float(stats['min_norm'])} "
        f"max_norm={fmt_float(stats['max_norm'])} "
        f"mean_square_norm={fmt_float(stats['mean_square_norm'])}"
    )
    return EXIT_OK


# ---------------------------------------------------------------------------
# bound
# ---------------------------------------------------------------------------


def _eval_bound(args):
    t = args.theorem
    if t == "prop1":
        _require(args, ["n", "eps", "theta"], t)
        return bounds.quasiorthogonal_set_size(args.n, args.eps, args.theta)
    if t in ("ball-single", "ball-all", "ball-angle"):
        _require(args, ["n", "m", "r"], t)
        q = bounds.BallBoundQuery(n=args.n, M=args.m, r=args.r)
        fn = {
            "ball-single": bounds.ball_single_bound,
            "ball-all": bounds.ball_all_bound,
            "ball-angle": bounds.ball_angle_bound,
        }[t]
        return fn(q)
    if t in ("max-m-single", "max-m-all"):
        _require(args, ["n", "r", "theta"], t)
        fn = (
            bounds.max_cardinality_single
            if t == "max-m-single"
            else bounds.max_cardinality_all
        )
        return fn(args.n, args.r, args.theta)
    if t in ("cube-single", "cube-all"):
        _require(args, ["n", "m", "delta"], t)
        q = bounds.CubeBoundQuery(
            n=args.n, M=args.m, delta=args.delta, variances=args.sigma2
        )
        fn = bounds.cube_single_bound if t == "cube-single" else bounds.cube_all_bound
        return fn(q)
    if t == "tuple":
        _require(args, ["n", "m", "tuple-size", "beta1", "beta2"], t)
        q = bounds.TupleBoundQuery(
            n=args.n,
            M=args.m,
            m=args.tuple_size,
            beta1=args.beta1,
            beta2=args.beta2,
        )
        return bounds.tuple_bound(q)
    raise ParameterError(f"unknown theorem {t!r}")


def _cmd_bound(args) -> int:
    result = _eval_bound(args)
    doc = {
        "version": _VERSION_STRING,
        "theorem": args.theorem,
        "value": result.value,
        "detail": result.detail,
    }
    sys.stdout.write(render_json(doc))
    return EXIT_OK


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------


def _run_experiment(args) -> separability.SeparationReport:
    e = args.experiment
    common = dict(trials=args.trials, seed=args.seed, jobs=args.jobs)
    if e == "orth":
        _require(args, ["n", "count", "eps"], e)
        return separability.orthogonality_experiment(
            args.n, args.count, args.eps, **common
        )
    if e == "ball":
        _require(args, ["n", "m", "r"], e)
        q = bounds.BallBoundQuery(n=args.n, M=args.m, r=args.r)
        return separability.ball_experiment(q, variant=args.variant, **common)
    if e == "cube":
        _require(args, ["n", "m", "delta"], e)
        if args.variant == "angle":
            raise ParameterError("cube supports variants single and all")
        q = bounds.CubeBoundQuery(
            n=args.n, M=args.m, delta=args.delta, variances=args.sigma2
        )
        return separability.cube_experiment(q, variant=args.variant, **common)
    if e == "tuple":
        _require(args, ["n", "m", "tuple-size", "beta1", "beta2"], e)
        q = bounds.TupleBoundQuery(
            n=args.n,
            M=args.m,
            m=args.tuple_size,
            beta1=args.beta1,
            beta2=args.beta2,
        )
        return separability.tuple_experiment(
            q, max_attempts=args.max_attempts, **common
        )
    if e == "fisher":
        _require(args, ["n", "m"], e)
        return separability.fisher_separability_experiment(args.n, args.m, **common)
    raise ParameterError(f"unknown experiment {e!r}")


def _cmd_simulate(args) -> int:
    report = _run_experiment(args)
    doc = {"version": _VERSION_STRING} | report.to_dict()
    text = render_json(doc)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    sys.stdout.write(text)
    return EXIT_OK if report.verdict == "PASS" else EXIT_FAIL


# ---------------------------------------------------------------------------
# fit
# ---------------------------------------------------------------------------


def _read_error_indices(path) -> np.ndarray:
    with open(path, "r", encoding="utf-8") as fh:
        lines = [line.strip() for line in fh]
    values = [line for line in lines if line]
    if not values:
        raise ParameterError(f"error index file {path} is empty")
    try:
        return np.array([int(v) for v in values], dtype=int)
    except ValueError as exc:
        raise ParameterError(f"error index file {path}: {exc}") from exc


def _cmd_fit(args) -> int:
    data = sampling.load_csv(args.data)
    err = _read_error_indices(args.errors)
    labeled = corrector.LabeledData(data, err)
    clusters = "auto" if args.clusters == "auto" else int(args.clusters)
    options = corrector.FitOptions(
        variance_fraction=args.variance_fraction,
        cond_cap=args.cond_cap,
        clusters=clusters,
        beta_threshold=args.beta_threshold,
    )
    model = corrector.fit(labeled, options)
    corrector.save_model(model, args.out)
    scores = corrector.unit_scores(model, labeled.points[labeled.error_indices])
    recall = float(np.mean(np.any(scores >= 0.0, axis=1)))
    sizes = ",".join(str(u.cluster_size) for u in model.units)
    print(
        f"fit: samples={model.meta['samples']} errors={model.meta['errors']} "
        f"m={model.m} units={len(model.units)} cluster_sizes=[{sizes}] "
        f"training_recall={fmt_float(recall)}"
    )
    return EXIT_OK


# ---------------------------------------------------------------------------
# apply
# ---------------------------------------------------------------------------


def _fired_ids(scores_row, stage: int | None) -> str:
    hits = np.nonzero(scores_row >= 0.0)[0]
    if stage is None:
        return ";".join(str(int(i)) for i in hits)
    return ";".join(f"{stage}.{int(i)}" for i in hits)


def _cmd_apply(args) -> int:
    models = [corrector.load_model(path) for path in args.model]
    data = sampling.load_csv(args.data)
    for path, model in zip(args.model, models):
        if model.n != data.n:
            raise DimensionMismatchError(
                f"model {path} expects n={model.n}, data has n={data.n}"
            )
    per_stage = [corrector.unit_scores(model, data.points) for model in models]
    cascade = len(models) > 1
    header = (
        "index,flagged,stage,fired_units,max_score"
        if cascade
        else "index,flagged,fired_units,max_score"
    )
    lines = [header]
    for row in range(data.count):
        stage_scores = [s[row] for s in per_stage]
        flagged_stages = [
            i for i, s in enumerate(stage_scores) if s.size and np.any(s >= 0.0)
        ]
        flagged = 1 if flagged_stages else 0
        all_scores = np.concatenate([s for s in stage_scores]) if stage_scores else np.array([])
        max_score = fmt_float(all_scores.max()) if all_scores.size else ""
        if cascade:
            stage_field = str(flagged_stages[0]) if flagged_stages else ""
            fired = ";".join(
                _fired_ids(stage_scores[i], i) for i in flagged_stages
            )
            lines.append(f"{row},{flagged},{stage_field},{fired},{max_score}")
        else:
            fired = _fired_ids(stage_scores[0], None) if flagged else ""
            lines.append(f"{row},{flagged},{fired},{max_score}")
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    print(f"apply: rows={data.count} flagged={sum(1 for l in lines[1:] if l.split(',')[1] == '1')}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="sepkit",
        description="High-dimensional separation bounds, Monte Carlo "
        "verification, and one-shot error correctors.",
    )
    parser.add_argument("--version", action="version", version=_VERSION_STRING)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a seeded point-set CSV")
    gen.add_argument("--dist", choices=sorted(_DIST_KINDS), required=True,
                     help="distribution family")
    gen.add_argument("--n", type=int, required=True, help="dimension")
    gen.add_argument("--count", type=int, required=True, help="number of points")
    gen.add_argument("--seed", type=int, default=DEFAULT_SEED,
                     help=f"generator seed (default {DEFAULT_SEED})")
    gen.add_argument("--out", required=True, help="output CSV path")
    gen.add_argument("--mean", type=float, default=None,
                     help="per-coordinate mean (cube/gauss)")
    gen.add_argument("--sigma2", type=float, default=None,
                     help="per-coordinate variance (cube/gauss)")
    gen.set_defaults(func=_cmd_gen)

    bound = sub.add_parser("bound", help="evaluate a closed-form bound as JSON")
    bound.add_argument(
        "--theorem",
        required=True,
        help="which bound to evaluate",
        choices=[
            "prop1",
            "ball-single",
            "ball-all",
            "ball-angle",
            "max-m-single",
            "max-m-all",
            "cube-single",
            "cube-all",
            "tuple",
        ],
    )
    bound.add_argument("--n", type=int, help="dimension")
    bound.add_argument("--m", type=int, help="sample size M")
    bound.add_argument("--r", type=float, help="separation threshold in (0,1)")
    bound.add_argument("--eps", type=float, help="orthogonality threshold")
    bound.add_argument("--theta", type=float, help="failure probability bound")
    bound.add_argument("--delta", type=float, help="cube band width in (0,2/3)")
    bound.add_argument("--sigma2", type=float, default=None,
                       help="per-coordinate variance (cube; default 1/12)")
    bound.add_argument("--tuple-size", type=int, help="tuple size m")
    bound.add_argument("--beta1", type=float, help="upper correlation bound")
    bound.add_argument("--beta2", type=float, help="lower correlation bound")
    bound.set_defaults(func=_cmd_bound)

    sim = sub.add_parser("simulate", help="run a Monte Carlo verification")
    sim.add_argument(
        "--experiment",
        required=True,
        choices=["orth", "ball", "cube", "tuple", "fisher"],
        help="which event to measure",
    )
    sim.add_argument("--variant", choices=["single", "all", "angle"],
                     default="single", help="event variant (ball/cube)")
    sim.add_argument("--n", type=int, help="dimension")
    sim.add_argument("--m", type=int, help="sample size M")
    sim.add_argument("--count", type=int, help="vectors per trial (orth)")
    sim.add_argument("--r", type=float, help="separation threshold (ball)")
    sim.add_argument("--eps", type=float, help="orthogonality threshold (orth)")
    sim.add_argument("--delta", type=float, help="cube band width in (0,2/3)")
    sim.add_argument("--sigma2", type=float, default=None,
                     help="per-coordinate variance (cube; default 1/12)")
    sim.add_argument("--tuple-size", type=int, help="tuple size m (tuple)")
    sim.add_argument("--beta1", type=float, help="upper correlation bound (tuple)")
    sim.add_argument("--beta2", type=float, help="lower correlation bound (tuple)")
    sim.add_argument("--max-attempts", type=int, default=10_000,
                     help="rejection-sampling cap per trial (tuple)")
    sim.add_argument("--trials", type=int, default=200, help="Monte Carlo trials")
    sim.add_argument("--seed", type=int, default=DEFAULT_SEED,
                     help=f"master seed (default {DEFAULT_SEED})")
    sim.add_argument("--jobs", type=int, default=1, help="trial parallelism")
    sim.add_argument("--out", default=None, help="also write the report here")
    sim.set_defaults(func=_cmd_simulate)

    fit = sub.add_parser("fit", help="fit a corrector model from CSV + labels")
    fit.add_argument("--data", required=True, help="point-set CSV")
    fit.add_argument("--errors", required=True,
                     help="text file, one 0-based error index per line")
    fit.add_argument("--out", required=True, help="output model JSON")
    fit.add_argument("--clusters", default="auto",
                     help="'auto' or a target cluster count")
    fit.add_argument("--beta-threshold", type=float, default=0.5,
                     help="minimum average cosine within a cluster")
    fit.add_argument("--variance-fraction", type=float, default=0.999,
                     help="spectrum fraction the retained eigenbasis must reach")
    fit.add_argument("--cond-cap", type=float, default=1e6,
                     help="retained eigenvalue ratio above which the ridge "
                          "absorbs conditioning")
    fit.set_defaults(func=_cmd_fit)

    app = sub.add_parser("apply", help="apply model(s) to a point-set CSV")
    app.add_argument("--model", action="append", required=True,
                     help="model JSON; repeat for an ordered cascade")
    app.add_argument("--data", required=True, help="point-set CSV")
    app.add_argument("--out", required=True, help="output flags CSV")
    app.set_defaults(func=_cmd_apply)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DimensionMismatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA_MISMATCH
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DegenerateDataError, InsufficientDataError, NumericalError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except SepkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_OPERATIONAL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_OPERATIONAL


if __name__ == "__main__":
    sys.exit(main())
