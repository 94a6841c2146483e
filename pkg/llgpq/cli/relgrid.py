from __future__ import annotations

from argparse import ArgumentParser, Namespace
from typing import Sequence

import numpy as np
import pandas as pd
from pandas import DataFrame

from llgpq.analysis.dist import reliability_surface
from llgpq.cli.report import Provenance, Report, add_output_args, emit

DEFAULT_TIMES = (1.0, 5.0, 10.0)
DEFAULT_ALPHA_RANGE = (0.5, 10.0)
DEFAULT_BETA_RANGE = (0.5, 10.0)
DEFAULT_STEPS = 50


def reliability_grid(
    ts: Sequence[float],
    alpha_range: tuple[float, float],
    beta_range: tuple[float, float],
    steps: int,
) -> DataFrame:
    """
    R(t; alpha, beta) over a steps x steps parameter grid at each t, in long
    form with columns t, alpha, beta, reliability.
    """
    for name, (lo, hi) in (("alpha", alpha_range), ("beta", beta_range)):
        if not 0 < lo <= hi:
            raise ValueError(f"Bad {name} range: ({lo}, {hi})")
    if steps < 2:
        raise ValueError(f"Need at least 2 steps: {steps}")
    if not all(t > 0 for t in ts):
        raise ValueError(f"Evaluation times must be positive: {ts}")

    alpha, beta = np.meshgrid(
        np.linspace(*alpha_range, steps),
        np.linspace(*beta_range, steps),
        indexing="ij",
    )
    frames = [
        DataFrame(
            dict(
                t=t,
                alpha=alpha.ravel(),
                beta=beta.ravel(),
                reliability=reliability_surface(
                    t, alpha.ravel(), beta.ravel()
                ),
            )
        )
        for t in ts
    ]
    return pd.concat(frames, ignore_index=True)


def cmd_relgrid(args: Namespace) -> Report:
    ts = args.t or list(DEFAULT_TIMES)
    report = Report(
        Provenance(
            "relgrid",
            extra=dict(
                t=ts,
                alpha_range=list(args.alpha_range),
                beta_range=list(args.beta_range),
                steps=args.steps,
            ),
        )
    )
    report.add(
        "reliability",
        reliability_grid(
            ts, tuple(args.alpha_range), tuple(args.beta_range), args.steps
        ),
    )
    emit(report, args, "relgrid")
    return report


def init_parser(parser: ArgumentParser) -> None:
    parser.add_argument(
        "--t",
        type=float,
        action="append",
        help="evaluation time, repeatable; defaults to 1, 5 and 10",
    )
    parser.add_argument(
        "--alpha-range",
        type=float,
        nargs=2,
        default=DEFAULT_ALPHA_RANGE,
        metavar=("LO", "HI"),
    )
    parser.add_argument(
        "--beta-range",
        type=float,
        nargs=2,
        default=DEFAULT_BETA_RANGE,
        metavar=("LO", "HI"),
    )
    parser.add_argument("--steps", type=int, default=DEFAULT_STEPS)
    add_output_args(parser)
    parser.set_defaults(exe=cmd_relgrid)
