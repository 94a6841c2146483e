from __future__ import annotations

import json
from argparse import ArgumentParser, Namespace
from pathlib import Path
from typing import Any

from pandas import DataFrame

from llgpq.cli.report import (
    Provenance,
    Report,
    add_output_args,
    emit,
    resolve_seed,
)
from llgpq.study import METHODS, ScenarioConfig
from llgpq.study.harness import run_table
from llgpq.study.presets import PRESETS, REFERENCE_COVERAGE, preset
from llgpq.util import DataError, Seed


def load_scenarios(path: Path, seed: Seed) -> list[ScenarioConfig]:
    """
    Reads a JSON list of scenario objects, or an object holding one under
    "scenarios". Scenario i without its own seed gets seed.spawn(i).
    """
    try:
        with open(path, encoding="utf-8") as f:
            doc = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise DataError(f"Cannot read scenarios from {path}: {e}") from e

    entries = doc.get("scenarios") if isinstance(doc, dict) else doc
    if not isinstance(entries, list) or not entries:
        raise DataError(f"{path} holds no list of scenarios")

    out = []
    for i, entry in enumerate(entries):
        if not isinstance(entry, dict):
            raise DataError(f"Scenario {i} in {path} is not an object")
        entry = {"seed": seed.spawn(i).value, **entry}
        out.append(ScenarioConfig.from_dict(entry))
    return out


def _uniform(configs: list[ScenarioConfig], name: str) -> Any:
    values = {getattr(c, name) for c in configs}
    return values.pop() if len(values) == 1 else None


def with_reference(table: DataFrame, name: str) -> DataFrame:
    """
    Adds the reference coverage of each cell next to the simulated one.
    """
    ref = REFERENCE_COVERAGE[name.removesuffix("-desk")]
    keys = list(
        zip(
            table["n"],
            table["t"],
            table["shape"],
            table["scale"],
            table["censoring"],
        )
    )
    out = table.copy()
    for j, m in enumerate(METHODS):
        out[f"reference {m}"] = [ref[k][j] for k in keys]
    return out


def cmd_simulate(args: Namespace) -> Report:
    seed = resolve_seed(args.seed)
    if args.preset:
        configs = preset(args.preset, seed.value)
    else:
        configs = load_scenarios(args.scenarios, seed)

    table, _ = run_table(configs, workers=args.workers)
    if args.preset:
        table = with_reference(table, args.preset)

    report = Report(
        Provenance(
            "simulate",
            seed=seed.value,
            gpq_draws=_uniform(configs, "gpq_draws"),
            boot_reps=_uniform(configs, "boot_reps"),
            replicates=_uniform(configs, "replicates"),
            methods=METHODS,
            extra=dict(
                source=args.preset or str(args.scenarios),
                scenarios=[c.to_dict() for c in configs],
            ),
        )
    )
    report.add("coverage", table)

    stem = args.preset or Path(args.scenarios).stem
    emit(report, args, f"simulate-{stem}-{seed.value}")
    return report


def init_parser(parser: ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--scenarios", type=Path, help="JSON scenario file")
    source.add_argument("--preset", choices=sorted(PRESETS))
    parser.add_argument(
        "--seed", type=int, default=None, help="generated and printed if unset"
    )
    parser.add_argument(
        "--workers",
        type=int,
        default=None,
        help="process count, defaults to LLGPQ_WORKERS",
    )
    add_output_args(parser)
    parser.set_defaults(exe=cmd_simulate)
