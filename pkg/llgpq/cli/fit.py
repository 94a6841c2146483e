from __future__ import annotations

from argparse import ArgumentParser, Namespace

from llgpq.analysis.estimation import (
    FitResult,
    km_cdf_estimate,
    lse_fit,
    mle_fit,
    plotting_design,
)
from llgpq.cli.analyze import fit_table
from llgpq.cli.dataset import parse_dataset, summarize
from llgpq.cli.report import Provenance, Report, add_output_args, emit


def cmd_fit(args: Namespace) -> Report:
    sample = parse_dataset(args.data)
    fits: list[FitResult] = []
    if args.method in ("lse", "both"):
        fits.append(lse_fit(plotting_design(sample)))
    if args.method in ("mle", "both"):
        fits.append(mle_fit(sample))

    report = Report(
        Provenance(
            "fit",
            methods=[f.method for f in fits],
            extra=dict(data=str(args.data), censored=not sample.is_complete),
        )
    )
    report.add("summary", summarize(sample).to_frame())
    report.add("fits", fit_table(fits))
    if not sample.is_complete:
        report.add("kaplan-meier", km_cdf_estimate(sample))

    emit(report, args, f"fit-{args.method}")
    return report


def init_parser(parser: ArgumentParser) -> None:
    parser.add_argument(
        "--data",
        required=True,
        help="dataset file, or a bundled name (grinder, reactor)",
    )
    parser.add_argument(
        "--method",
        choices=("lse", "mle", "both"),
        default="both",
        help="estimator; censoring is detected from the status column",
    )
    add_output_args(parser)
    parser.set_defaults(exe=cmd_fit)
