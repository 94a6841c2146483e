from __future__ import annotations

from argparse import ArgumentParser, Namespace
from pathlib import Path

from llgpq.analysis.estimation import FitMethod
from llgpq.analysis.gof import ks_test
from llgpq.cli.analyze import gof_table
from llgpq.cli.dataset import parse_dataset
from llgpq.cli.report import Provenance, Report, add_output_args, emit

_FITS: dict[str, FitMethod] = {"lse": "LSE", "mle": "MLE"}


def cmd_gof(args: Namespace) -> Report:
    sample = parse_dataset(args.data)
    fits: tuple[FitMethod, ...] = (
        ("LSE", "MLE") if args.fit == "both" else (_FITS[args.fit],)
    )

    report = Report(
        Provenance("gof", methods=fits, extra=dict(data=str(args.data)))
    )
    report.add(
        "kolmogorov-smirnov", gof_table([ks_test(sample, f) for f in fits])
    )

    emit(report, args, f"gof-{Path(args.data).stem}-{args.fit}")
    return report


def init_parser(parser: ArgumentParser) -> None:
    parser.add_argument(
        "--data",
        required=True,
        help="uncensored dataset file, or a bundled name (grinder, reactor)",
    )
    parser.add_argument(
        "--fit", choices=("lse", "mle", "both"), default="both"
    )
    add_output_args(parser)
    parser.set_defaults(exe=cmd_gof)
