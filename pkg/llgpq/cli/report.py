from __future__ import annotations

import json
from argparse import ArgumentParser, Namespace
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

from pandas import DataFrame
from xdg import xdg_cache_home

from llgpq import LOG, __version__
from llgpq.util import Seed


def default_out_dir() -> Path:
    return xdg_cache_home().joinpath("llgpq")


@dataclass(frozen=True)
class Provenance:
    """
    Everything needed to rerun a report exactly. No timestamps, so reruns
    are byte-identical.
    """

    command: str
    seed: int | None = None
    gpq_draws: int | None = None
    boot_reps: int | None = None
    replicates: int | None = None
    methods: Sequence[str] = ()
    extra: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return dict(
            command=self.command,
            seed=self.seed,
            gpq_draws=self.gpq_draws,
            boot_reps=self.boot_reps,
            replicates=self.replicates,
            methods=list(self.methods),
            version=__version__,
            **self.extra,
        )


@dataclass
class Report:
    provenance: Provenance
    tables: dict[str, DataFrame] = field(default_factory=dict)

    def add(self, name: str, table: DataFrame) -> Report:
        self.tables[name] = table.reset_index(drop=True)
        return self

    def to_dict(self) -> dict[str, Any]:
        return dict(
            provenance=self.provenance.to_dict(),
            tables={
                name: df.to_dict(orient="records")
                for name, df in self.tables.items()
            },
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=4, default=_jsonable) + "\n"

    def to_text(self) -> str:
        chunks = []
        for name, df in self.tables.items():
            body = df.to_string(index=False, float_format=lambda x: f"{x:.4f}")
            chunks.append(f"{name}\n{body}\n")
        prov = " ".join(
            f"{k}={v}"
            for k, v in self.provenance.to_dict().items()
            if v is not None
        )
        return "\n".join(chunks) + f"\n# {prov}\n"

    def write(self, out_dir: Path, stem: str) -> tuple[Path, Path]:
        out_dir.mkdir(parents=True, exist_ok=True)
        json_path = out_dir.joinpath(f"{stem}.json")
        text_path = out_dir.joinpath(f"{stem}.txt")
        json_path.write_text(self.to_json(), encoding="utf-8")
        text_path.write_text(self.to_text(), encoding="utf-8")
        LOG.info(f"Wrote {json_path} and {text_path}")
        return json_path, text_path


def _jsonable(obj: Any) -> Any:
    # numpy scalars that to_dict leaves behind
    if hasattr(obj, "item"):
        return obj.item()
    raise TypeError(f"Cannot serialize {type(obj).__name__}")


def add_output_args(parser: ArgumentParser) -> None:
    parser.add_argument(
        "--out",
        type=Path,
        default=None,
        help="report directory, defaults to the user cache",
    )


def resolve_seed(value: int | None) -> Seed:
    if value is not None:
        return Seed(value)
    seed = Seed.fresh()
    LOG.info(f"Generated seed {seed.value}; pass --seed to rerun")
    print(f"seed: {seed.value}")
    return seed


def emit(report: Report, args: Namespace, stem: str) -> None:
    print(report.to_text(), end="")
    report.write(args.out or default_out_dir(), stem)
