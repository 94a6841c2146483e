from __future__ import annotations

from argparse import ArgumentParser, Namespace
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Literal, Sequence

from pandas import DataFrame

from llgpq import LOG
from llgpq.analysis.classical import (
    DEFAULT_BOOT_REPS,
    bootstrap_reliability,
    percentile_interval,
    wald_interval_params,
    wald_interval_reliability,
)
from llgpq.analysis.estimation import (
    FitResult,
    Sample,
    empirical_reliability,
    lse_fit,
    mle_fit,
    observed_information,
    plotting_design,
)
from llgpq.analysis.gof import GofReport, ks_test
from llgpq.analysis.gpq import (
    DEFAULT_GPQ_DRAWS,
    GpqDraws,
    GpqTarget,
    IntervalEstimate,
    gpq_draws,
    gpq_interval,
    gpq_transform,
)
from llgpq.cli.dataset import Summary, parse_dataset, summarize
from llgpq.cli.report import (
    Provenance,
    Report,
    add_output_args,
    emit,
    resolve_seed,
)
from llgpq.util import Seed

CiMethod = Literal["gpq", "boot", "wald"]
CI_METHODS: tuple[CiMethod, ...] = ("gpq", "boot", "wald")

# child seed keys: pivots, then bootstrap resamples
GPQ_KEY, BOOT_KEY = 0, 1


def fit_table(fits: Sequence[FitResult]) -> DataFrame:
    return DataFrame.from_records(
        [
            dict(
                method=f.method,
                alpha=f.ll_params.alpha,
                beta=f.ll_params.beta,
                mu=f.loc_scale.mu,
                s=f.loc_scale.s,
                loglik=f.loglik,
                optimizer=f.optimizer,
            )
            for f in fits
        ]
    )


def gof_table(reports: Sequence[GofReport]) -> DataFrame:
    return DataFrame.from_records(
        [
            dict(
                fit=r.fit_method,
                n=r.n,
                D=r.statistic,
                p_value=r.p_value,
                p_asymptotic=r.p_asymptotic,
                alpha=r.params.alpha,
                beta=r.params.beta,
            )
            for r in reports
        ]
    )


def _row(
    est: IntervalEstimate, empirical: float | None = None
) -> dict[str, Any]:
    return dict(
        t=est.t,
        target=est.target,
        empirical=empirical,
        method=est.method,
        lower=est.lower,
        upper=est.upper,
        length=est.length,
        level=est.level,
        clamped=est.clamped,
    )


def reliability_intervals(
    sample: Sample,
    ts: Sequence[float],
    level: float,
    methods: Sequence[CiMethod] = CI_METHODS,
    gpq_draws_m: int = DEFAULT_GPQ_DRAWS,
    boot_reps: int = DEFAULT_BOOT_REPS,
    seed: Seed | None = None,
) -> list[IntervalEstimate]:
    """
    Intervals for R(t) at each t by each method, t-major.

    One set of pivot draws from seed.spawn(0) serves every t. Bootstrap
    resamples come from seed.spawn(1) at every t.
    """
    seed = seed if seed is not None else Seed.fresh()
    draws: GpqDraws | None = None
    mle: FitResult | None = None

    if "gpq" in methods:
        draws = gpq_draws(
            lse_fit(plotting_design(sample)), gpq_draws_m, seed.spawn(GPQ_KEY)
        )
    if "boot" in methods or "wald" in methods:
        mle = mle_fit(sample)
    info = (
        observed_information(mle.ll_params, sample)
        if mle is not None and "wald" in methods
        else None
    )

    out = []
    for t in ts:
        if draws is not None:
            out.append(
                gpq_interval(
                    gpq_transform(draws, "reliability", t=t),
                    level,
                    "reliability",
                    t=t,
                )
            )
        if mle is not None and "boot" in methods:
            run = bootstrap_reliability(
                t, sample, boot_reps, seed.spawn(BOOT_KEY), fit=mle
            )
            out.append(percentile_interval(run, level))
        if mle is not None and info is not None:
            out.append(wald_interval_reliability(t, mle, info, level))
    return out


def parameter_intervals(
    sample: Sample,
    level: float,
    gpq_draws_m: int = DEFAULT_GPQ_DRAWS,
    seed: Seed | None = None,
) -> list[IntervalEstimate]:
    """
    Pivot and Wald intervals for alpha and beta.
    """
    seed = seed if seed is not None else Seed.fresh()
    draws = gpq_draws(
        lse_fit(plotting_design(sample)), gpq_draws_m, seed.spawn(GPQ_KEY)
    )
    targets: tuple[GpqTarget, ...] = ("alpha", "beta")
    out = [
        gpq_interval(gpq_transform(draws, target), level, target)
        for target in targets
    ]
    mle = mle_fit(sample)
    return out + wald_interval_params(
        mle, observed_information(mle.ll_params, sample), level
    )


def interval_table(
    sample: Sample, intervals: Sequence[IntervalEstimate]
) -> DataFrame:
    rows = []
    for est in intervals:
        emp = (
            empirical_reliability(sample, est.t)
            if est.target == "reliability" and est.t is not None
            else None
        )
        rows.append(_row(est, emp))
    return DataFrame.from_records(rows)


@dataclass(frozen=True)
class AnalysisReport:
    """
    Summary, fits, goodness of fit and interval table of one data set.
    """

    name: str
    summary: Summary
    fits: list[FitResult]
    gof: list[GofReport]
    intervals: list[IntervalEstimate]
    seed: Seed

    def summary_table(self) -> DataFrame:
        return self.summary.to_frame()


def analyze_dataset(
    sample: Sample,
    name: str = "data",
    ts: Sequence[float] | None = None,
    level: float = 0.95,
    gpq_draws_m: int = DEFAULT_GPQ_DRAWS,
    boot_reps: int = DEFAULT_BOOT_REPS,
    seed: Seed | None = None,
) -> AnalysisReport:
    """
    Runs the full data-set workflow. Intervals default to the data quartiles;
    the goodness-of-fit tests need complete data and are skipped otherwise.
    """
    seed = seed if seed is not None else Seed.fresh()
    summary = summarize(sample)
    ts = list(summary.quartiles) if ts is None else list(ts)

    fits = [lse_fit(plotting_design(sample)), mle_fit(sample)]
    if sample.is_complete:
        gof = [ks_test(sample, "LSE"), ks_test(sample, "MLE")]
    else:
        LOG.info(f"Skipping goodness of fit for censored data set {name}")
        gof = []

    intervals = reliability_intervals(
        sample,
        ts,
        level,
        gpq_draws_m=gpq_draws_m,
        boot_reps=boot_reps,
        seed=seed,
    )
    return AnalysisReport(name, summary, fits, gof, intervals, seed)


def quantile_intervals(
    sample: Sample,
    ps: Sequence[float],
    level: float,
    gpq_draws_m: int = DEFAULT_GPQ_DRAWS,
    seed: Seed | None = None,
) -> list[IntervalEstimate]:
    """
    Pivot intervals for the percentile lives t_p, from the same draws
    reliability_intervals uses under a common seed.
    """
    seed = seed if seed is not None else Seed.fresh()
    draws = gpq_draws(
        lse_fit(plotting_design(sample)), gpq_draws_m, seed.spawn(GPQ_KEY)
    )
    return [
        gpq_interval(gpq_transform(draws, "quantile", p=p), level, f"t_{p:g}")
        for p in ps
    ]


def mean_interval(
    sample: Sample,
    level: float,
    gpq_draws_m: int = DEFAULT_GPQ_DRAWS,
    seed: Seed | None = None,
) -> IntervalEstimate:
    """
    Pivot interval for the mean life. Draws with shape at or below 1 have an
    infinite mean, so the upper limit may be +inf.
    """
    seed = seed if seed is not None else Seed.fresh()
    draws = gpq_draws(
        lse_fit(plotting_design(sample)), gpq_draws_m, seed.spawn(GPQ_KEY)
    )
    return gpq_interval(gpq_transform(draws, "mean"), level, "mean")


def cmd_analyze(args: Namespace) -> Report:
    sample = parse_dataset(args.data)
    seed = resolve_seed(args.seed)
    name = Path(args.data).stem
    res = analyze_dataset(
        sample,
        name,
        ts=args.t,
        level=args.level,
        gpq_draws_m=args.gpq_draws,
        boot_reps=args.boot_reps,
        seed=seed,
    )

    report = Report(
        Provenance(
            "analyze",
            seed=seed.value,
            gpq_draws=args.gpq_draws,
            boot_reps=args.boot_reps,
            methods=("LSE-GPQ", "PB", "AI"),
            extra=dict(data=str(args.data), level=args.level),
        )
    )
    report.add("summary", res.summary_table())
    report.add("fits", fit_table(res.fits))
    if res.gof:
        report.add("kolmogorov-smirnov", gof_table(res.gof))
    report.add("reliability", interval_table(sample, res.intervals))

    emit(report, args, f"analyze-{name}")
    return report


def init_parser(parser: ArgumentParser) -> None:
    parser.add_argument(
        "--data",
        required=True,
        help="dataset file, or a bundled name (grinder, reactor)",
    )
    parser.add_argument(
        "--t",
        type=float,
        action="append",
        help="evaluation time, repeatable; defaults to the data quartiles",
    )
    parser.add_argument("--level", type=float, default=0.95)
    parser.add_argument("--gpq-draws", type=int, default=DEFAULT_GPQ_DRAWS)
    parser.add_argument("--boot-reps", type=int, default=DEFAULT_BOOT_REPS)
    parser.add_argument("--seed", type=int, default=None)
    add_output_args(parser)
    parser.set_defaults(exe=cmd_analyze)
