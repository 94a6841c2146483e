from __future__ import annotations

from argparse import ArgumentParser
from typing import Sequence

from llgpq import LOG, __version__
from llgpq.util import DataError, NumericalError

EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERICAL = 4


def build_parser() -> ArgumentParser:
    from llgpq.cli import analyze, ci, fit, gof, relgrid, simulate

    parser = ArgumentParser(
        prog="llgpq",
        description="Reliability inference for log-logistic lifetimes",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    subs = parser.add_subparsers(dest="command", required=True)

    for name, mod, desc in (
        ("fit", fit, "least-squares and maximum likelihood fits"),
        ("ci", ci, "confidence intervals for R(t)"),
        ("gof", gof, "Kolmogorov-Smirnov goodness of fit"),
        ("simulate", simulate, "coverage simulation study"),
        ("relgrid", relgrid, "R(t) over a grid of parameters"),
        ("analyze", analyze, "full analysis of one data set"),
    ):
        mod.init_parser(subs.add_parser(name, help=desc))

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        args.exe(args)
    except DataError as e:
        LOG.error(f"Data error: {e}")
        return EXIT_DATA
    except NumericalError as e:
        LOG.error(f"Numerical failure: {e}")
        return EXIT_NUMERICAL
    except ValueError as e:
        LOG.error(f"Invalid argument: {e}")
        return EXIT_USAGE
    return 0
