from __future__ import annotations

from dataclasses import asdict, dataclass, field, fields
from math import fsum, nan
from typing import Any, ClassVar, Mapping

from llgpq.analysis.classical import DEFAULT_BOOT_REPS, MIN_BOOT_REPS
from llgpq.analysis.dist import LogLogisticParams, ll_reliability
from llgpq.analysis.gpq import (
    DEFAULT_GPQ_DRAWS,
    MIN_GPQ_DRAWS,
    IntervalEstimate,
    IntervalMethod,
)
from llgpq.util import DataError, Seed

METHODS: tuple[IntervalMethod, ...] = ("LSE-GPQ", "PB", "AI")

DEFAULT_REPLICATES = 1000
DESK_REPLICATES = 500
DESK_GPQ_DRAWS = 1000
DESK_BOOT_REPS = 500

# a method failing on more than this share of replicates flags the scenario
MAX_METHOD_FAILURE_RATE = 0.10


@dataclass(frozen=True)
class ScenarioConfig:
    """
    One cell of a coverage table.

    Args:
        n: sample size
        t: time at which R(t) is covered
        alpha: true shape
        beta: true scale
        level: nominal confidence level
        censoring_prop: expected type-I censored fraction, 0 for complete data
        replicates: number of simulated data sets
        gpq_draws: pivot draws per replicate
        boot_reps: bootstrap resamples per replicate
        seed: scenario seed; replicate seeds are derived from it
    """

    n: int
    t: float
    alpha: float
    beta: float
    level: float
    censoring_prop: float = 0.0
    replicates: int = DEFAULT_REPLICATES
    gpq_draws: int = DEFAULT_GPQ_DRAWS
    boot_reps: int = DEFAULT_BOOT_REPS
    seed: Seed = field(default_factory=lambda: Seed(0))

    def __post_init__(self) -> None:
        if isinstance(self.seed, int):
            object.__setattr__(self, "seed", Seed(self.seed))
        if self.n < 1:
            raise DataError(f"Sample size must be positive: {self.n}")
        if not self.t > 0:
            raise DataError(f"Evaluation time must be positive: {self.t}")
        if not 0 < self.level < 1:
            raise DataError(f"Level must lie in (0, 1): {self.level}")
        if not 0 <= self.censoring_prop < 1:
            raise DataError(
                f"Censoring proportion must lie in [0, 1): "
                f"{self.censoring_prop}"
            )
        for name, least in (
            ("replicates", 1),
            ("gpq_draws", MIN_GPQ_DRAWS),
            ("boot_reps", MIN_BOOT_REPS),
        ):
            if getattr(self, name) < least:
                raise DataError(f"{name} must be at least {least}")
        # validates alpha and beta
        self.params

    @property
    def params(self) -> LogLogisticParams:
        return LogLogisticParams(self.alpha, self.beta)

    @property
    def true_reliability(self) -> float:
        return float(ll_reliability(self.t, self.params))

    @property
    def is_censored(self) -> bool:
        return self.censoring_prop > 0

    def to_dict(self) -> dict[str, Any]:
        out = asdict(self)
        out["seed"] = self.seed.value
        return out

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> ScenarioConfig:
        known = {f.name for f in fields(cls)}
        if unknown := set(d) - known:
            raise DataError(f"Unknown scenario keys: {sorted(unknown)}")
        try:
            return cls(**d)
        except TypeError as e:
            raise DataError(f"Bad scenario {dict(d)}: {e}") from e


@dataclass(frozen=True)
class ReplicateOutcome:
    """
    Intervals of one simulated data set; None marks a method that failed.
    """

    index: int
    intervals: dict[str, IntervalEstimate | None]
    truth: float
    n_failures: int
    failure_reasons: dict[str, str] = field(default_factory=dict)

    def covered(self, method: str) -> bool | None:
        est = self.intervals[method]
        return None if est is None else est.contains(self.truth)


@dataclass(frozen=True)
class CoverageResult:
    config: ScenarioConfig
    covered: dict[str, int]
    failures: dict[str, int]
    mean_length: dict[str, float]
    threshold: float | None = None
    censored_fraction: float = 0.0

    COLUMNS: ClassVar[tuple[str, ...]] = (
        "n",
        "t",
        "shape",
        "scale",
        "censoring",
        *METHODS,
    )

    def denominator(self, method: str) -> int:
        return self.config.replicates - self.failures[method]

    def coverage(self, method: str) -> float:
        denom = self.denominator(method)
        return self.covered[method] / denom if denom else nan

    @property
    def flagged(self) -> bool:
        cap = MAX_METHOD_FAILURE_RATE * self.config.replicates
        return any(f > cap for f in self.failures.values())

    @classmethod
    def aggregate(
        cls,
        config: ScenarioConfig,
        outcomes: list[ReplicateOutcome],
        threshold: float | None = None,
    ) -> CoverageResult:
        """
        Tallies replicate outcomes. Integer counts and exactly rounded sums
        make the result independent of the order outcomes arrive in.
        """
        covered = {m: 0 for m in METHODS}
        failures = {m: 0 for m in METHODS}
        lengths: dict[str, list[float]] = {m: [] for m in METHODS}

        for out in outcomes:
            for m in METHODS:
                est = out.intervals[m]
                if est is None:
                    failures[m] += 1
                    continue
                covered[m] += est.contains(out.truth)
                lengths[m].append(est.length)

        mean_length = {
            m: fsum(lengths[m]) / len(lengths[m]) if lengths[m] else nan
            for m in METHODS
        }
        censored = fsum(config.n - o.n_failures for o in outcomes)

        return cls(
            config,
            covered,
            failures,
            mean_length,
            threshold=threshold,
            censored_fraction=(
                censored / (config.n * len(outcomes)) if outcomes else nan
            ),
        )

    def to_row(self) -> dict[str, Any]:
        c = self.config
        row: dict[str, Any] = dict(
            n=c.n,
            t=c.t,
            shape=c.alpha,
            scale=c.beta,
            censoring=c.censoring_prop,
            level=c.level,
        )
        for m in METHODS:
            row[m] = self.coverage(m)
        for m in METHODS:
            row[f"{m} length"] = self.mean_length[m]
            row[f"{m} failures"] = self.failures[m]
        row["threshold"] = self.threshold
        row["censored fraction"] = self.censored_fraction
        row["flagged"] = self.flagged
        row["seed"] = c.seed.value
        return row
