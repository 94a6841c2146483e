from __future__ import annotations

import io
import re
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable, TextIO, Union

import numpy as np
from pandas import DataFrame, Series

from llgpq.analysis.estimation import Sample
from llgpq.util import DataError, csvfile

BUNDLED = ("grinder", "reactor")

_SPLIT = re.compile(r"\s*[,;\t]\s*|\s+")

Source = Union[str, Path, TextIO]


def resolve(name: str | Path) -> Path:
    """
    A dataset path, or the bundled file for a bare bundled name.
    """
    path = Path(name)
    if not path.exists() and str(name) in BUNDLED:
        return Path(csvfile(str(name)))
    if not path.exists():
        raise DataError(f"No such dataset: {name}")
    return path


def _parse_time(field: str, lineno: int) -> float:
    try:
        t = float(field)
    except ValueError:
        raise DataError(f"line {lineno}: bad time {field!r}") from None
    if not (np.isfinite(t) and t > 0):
        raise DataError(f"line {lineno}: time must be positive, got {t}")
    return t


def _parse_status(field: str, lineno: int) -> bool:
    if field in ("1", "1.0"):
        return True
    if field in ("0", "0.0"):
        return False
    raise DataError(
        f"line {lineno}: status must be 0 (censored) or 1 (failure), "
        f"got {field!r}"
    )


def parse_lines(lines: Iterable[str]) -> Sample:
    """
    Parses rows of `time[,status]`, separated by commas, semicolons, tabs or
    spaces. A first row that does not start with a number is a header. Blank
    lines and lines starting with # are skipped.

    Raises:
        DataError: naming the offending line
    """
    times: list[float] = []
    failed: list[bool] = []
    seen_row = False

    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip().lstrip("\ufeff")
        if not line or line.startswith("#"):
            continue
        fields = _SPLIT.split(line)

        if not seen_row:
            seen_row = True
            try:
                float(fields[0])
            except ValueError:
                continue

        if len(fields) > 2:
            raise DataError(
                f"line {lineno}: expected time[,status], got {len(fields)} "
                f"fields"
            )
        times.append(_parse_time(fields[0], lineno))
        failed.append(
            _parse_status(fields[1], lineno) if len(fields) == 2 else True
        )

    if not times:
        raise DataError("Dataset has no observations")
    return Sample(np.array(times), np.array(failed))


def parse_dataset(source: Source) -> Sample:
    if isinstance(source, (str, Path)):
        with open(resolve(source), encoding="utf-8", newline="") as f:
            return parse_lines(f.read().splitlines())
    return parse_lines(source.read().splitlines())


def parse_text(text: str) -> Sample:
    return parse_dataset(io.StringIO(text))


def write_dataset(sample: Sample, dest: Source) -> None:
    """
    Writes the `time,status` form parse_dataset reads. Times are written at
    full precision so re-parsing gives the same sample.
    """
    rows = ["time,status"] + [
        f"{t!r},{int(f)}"
        for t, f in zip(sample.times.tolist(), sample.failed.tolist())
    ]
    text = "\n".join(rows) + "\n"
    if isinstance(dest, (str, Path)):
        Path(dest).write_text(text, encoding="utf-8")
    else:
        dest.write(text)


@dataclass(frozen=True)
class Summary:
    min: float
    q1: float
    median: float
    mean: float
    q3: float
    max: float

    @classmethod
    def of(cls, sample: Sample) -> Summary:
        # describe() interpolates linearly, the project-wide convention
        d = Series(sample.times).describe()
        return cls(
            float(d["min"]),
            float(d["25%"]),
            float(d["50%"]),
            float(d["mean"]),
            float(d["75%"]),
            float(d["max"]),
        )

    def to_frame(self) -> DataFrame:
        return DataFrame.from_records([asdict(self)])

    @property
    def quartiles(self) -> tuple[float, float, float]:
        return self.q1, self.median, self.q3


def summarize(sample: Sample) -> Summary:
    return Summary.of(sample)
