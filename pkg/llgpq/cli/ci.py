from __future__ import annotations

from argparse import ArgumentParser, Namespace
from pathlib import Path

from llgpq.analysis.classical import DEFAULT_BOOT_REPS
from llgpq.analysis.gpq import DEFAULT_GPQ_DRAWS
from llgpq.cli.analyze import (
    CI_METHODS,
    CiMethod,
    interval_table,
    mean_interval,
    parameter_intervals,
    quantile_intervals,
    reliability_intervals,
)
from llgpq.cli.dataset import parse_dataset, summarize
from llgpq.cli.report import (
    Provenance,
    Report,
    add_output_args,
    emit,
    resolve_seed,
)

_METHOD_TAGS = {"gpq": "LSE-GPQ", "boot": "PB", "wald": "AI"}


def cmd_ci(args: Namespace) -> Report:
    sample = parse_dataset(args.data)
    seed = resolve_seed(args.seed)
    ts = args.t if args.t else list(summarize(sample).quartiles)
    methods: tuple[CiMethod, ...] = (
        CI_METHODS if args.method == "all" else (args.method,)
    )

    intervals = reliability_intervals(
        sample,
        ts,
        args.level,
        methods,
        gpq_draws_m=args.gpq_draws,
        boot_reps=args.boot_reps,
        seed=seed,
    )
    report = Report(
        Provenance(
            "ci",
            seed=seed.value,
            gpq_draws=args.gpq_draws if "gpq" in methods else None,
            boot_reps=args.boot_reps if "boot" in methods else None,
            methods=[_METHOD_TAGS[m] for m in methods],
            extra=dict(data=str(args.data), level=args.level),
        )
    )
    report.add("reliability", interval_table(sample, intervals))
    if args.params:
        report.add(
            "parameters",
            interval_table(
                sample,
                parameter_intervals(sample, args.level, args.gpq_draws, seed),
            ),
        )

    if args.quantile:
        report.add(
            "percentile lives",
            interval_table(
                sample,
                quantile_intervals(
                    sample, args.quantile, args.level, args.gpq_draws, seed
                ),
            ),
        )

    if args.mean:
        report.add(
            "mean life",
            interval_table(
                sample,
                [mean_interval(sample, args.level, args.gpq_draws, seed)],
            ),
        )

    emit(report, args, f"ci-{Path(args.data).stem}-{args.method}")
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
    parser.add_argument(
        "--method", choices=(*CI_METHODS, "all"), default="all"
    )
    parser.add_argument("--gpq-draws", type=int, default=DEFAULT_GPQ_DRAWS)
    parser.add_argument("--boot-reps", type=int, default=DEFAULT_BOOT_REPS)
    parser.add_argument(
        "--seed", type=int, default=None, help="generated and printed if unset"
    )
    parser.add_argument(
        "--params",
        action="store_true",
        help="also report intervals for the shape and scale",
    )
    parser.add_argument(
        "--quantile",
        type=float,
        action="append",
        help="failure probability p of a percentile life t_p, repeatable",
    )
    parser.add_argument(
        "--mean", action="store_true", help="also report the mean life"
    )
    add_output_args(parser)
    parser.set_defaults(exe=cmd_ci)
