from __future__ import annotations

from dataclasses import dataclass
from math import ceil, floor, inf, isfinite
from pathlib import Path
from typing import Any, Sequence

import numpy as np
from numpy.random import PCG64, Generator, SeedSequence

DATA_DIR = (
    Path(__file__).parent.parent.parent.joinpath("data").absolute().__str__()
)

SEED_MAX = 2**64


def csvfile(s: str) -> str:
    return f"{DATA_DIR}/{s}.csv"


class DataError(ValueError):
    """
    The data handed to an operation cannot be used: bad rows, non-positive
    times, censored points where complete data is required, too few failures.
    """


class NumericalError(ArithmeticError):
    pass


class DegenerateDesignError(NumericalError):
    pass


class SingularInformationError(NumericalError):
    pass


class PivotRejectionError(NumericalError):
    pass


class ConvergenceError(NumericalError):
    def __init__(self, msg: str, last_iterate: Sequence[float] | None = None):
        super().__init__(msg)
        self.last_iterate = (
            None if last_iterate is None else tuple(map(float, last_iterate))
        )


@dataclass(frozen=True)
class Seed:
    """
    The only source of randomness in the package.

    Streams come from numpy's PCG64 bit generator, whose output is fixed by
    the seed on every platform. Derived seeds are the first 64-bit word of
    a SeedSequence keyed by (value, *keys), so a child stream depends only
    on its parent and its key path, never on the order children are made.
    """

    value: int

    def __post_init__(self) -> None:
        if not 0 <= self.value < SEED_MAX:
            raise ValueError(f"Seed out of uint64 range: {self.value}")

    def spawn(self, *keys: int) -> Seed:
        ss = SeedSequence(self.value, spawn_key=tuple(keys))
        return Seed(int(ss.generate_state(1, dtype=np.uint64)[0]))

    def rng(self) -> Generator:
        return Generator(PCG64(self.value))

    @classmethod
    def fresh(cls) -> Seed:
        return cls(int(SeedSequence().generate_state(1, dtype=np.uint64)[0]))


def empirical_quantile(values: Any, q: Any) -> Any:
    """
    The project-wide quantile convention: linear interpolation between order
    statistics at position p(M - 1) + 1 (numpy's "linear" method). Used for
    GPQ limits, bootstrap limits and data summaries alike.
    """
    return np.quantile(np.asarray(values, dtype=float), q, method="linear")


def equal_tailed(values: Any, level: float) -> tuple[float, float]:
    if not 0 < level < 1:
        raise ValueError(f"Confidence level must lie in (0, 1): {level}")
    values = np.asarray(values, dtype=float)
    if np.isnan(values).any():
        raise ValueError("Cannot take limits of NaN values")
    lo, hi = (
        _quantile_with_infinities(values, q)
        for q in ((1 - level) / 2, (1 + level) / 2)
    )
    return lo, hi


def _quantile_with_infinities(values: np.ndarray, q: float) -> float:
    """
    empirical_quantile, except that interpolating toward an infinite order
    statistic gives that infinity instead of NaN.
    """
    ordered = np.sort(values)
    rank = q * (len(ordered) - 1)
    a, b = ordered[floor(rank)], ordered[ceil(rank)]
    if isfinite(a) and isfinite(b):
        return float(empirical_quantile(ordered, q))
    if a == b or rank == floor(rank):
        return float(a)
    return float(b if b == inf else a)
