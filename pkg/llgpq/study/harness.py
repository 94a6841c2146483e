from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from typing import Iterable, Sequence

import numpy as np
from pandas import DataFrame
from py9lib.util import timed

from llgpq import LOG
from llgpq.analysis.classical import (
    bootstrap_reliability,
    percentile_interval,
    wald_interval_reliability,
)
from llgpq.analysis.dist import ll_quantile, sample_loglogistic
from llgpq.analysis.estimation import (
    FitResult,
    Sample,
    lse_fit,
    mle_fit,
    observed_information,
    plotting_design,
)
from llgpq.analysis.gpq import IntervalEstimate, gpq_reliability_interval
from llgpq.study import (
    METHODS,
    CoverageResult,
    ReplicateOutcome,
    ScenarioConfig,
)
from llgpq.util import DataError, NumericalError, Seed

WORKERS = int(os.getenv("LLGPQ_WORKERS", "1"))

LOG.info(f"Set {WORKERS=}")

# per-replicate stream keys under seed.spawn(index)
DATA_KEY, GPQ_KEY, BOOT_KEY = 0, 1, 2


def censoring_threshold(config: ScenarioConfig) -> float:
    """
    The type-I censoring time whose expected censored fraction under the
    true model is config.censoring_prop.
    """
    if not config.is_censored:
        raise ValueError("Complete-data scenario has no censoring threshold")
    return float(ll_quantile(1 - config.censoring_prop, config.params))


def simulate_sample(config: ScenarioConfig, seed: Seed) -> Sample:
    lifetimes = sample_loglogistic(config.n, config.params, seed)
    if not config.is_censored:
        return Sample.complete(lifetimes)
    return Sample.type_one(lifetimes, censoring_threshold(config))


def _gpq(
    config: ScenarioConfig, sample: Sample, seed: Seed
) -> IntervalEstimate:
    fit = lse_fit(plotting_design(sample))
    return gpq_reliability_interval(
        fit, config.t, config.level, config.gpq_draws, seed
    )


def _pb(
    config: ScenarioConfig, sample: Sample, mle: FitResult, seed: Seed
) -> IntervalEstimate:
    run = bootstrap_reliability(
        config.t, sample, config.boot_reps, seed, fit=mle
    )
    return percentile_interval(run, config.level)


def _ai(
    config: ScenarioConfig, sample: Sample, mle: FitResult
) -> IntervalEstimate:
    info = observed_information(mle.ll_params, sample)
    return wald_interval_reliability(config.t, mle, info, config.level)


def run_replicate(config: ScenarioConfig, index: int) -> ReplicateOutcome:
    """
    Simulates data set [index] of a scenario and computes all three
    intervals on it.

    With rep = seed.spawn(i), the data come from rep.spawn(0), the pivots
    from rep.spawn(1) and the bootstrap resamples from rep.spawn(2), so the
    outcome depends on (config, index) alone. A method that cannot
    produce an interval is recorded as None with the reason.
    """
    rep = config.seed.spawn(index)
    sample = simulate_sample(config, rep.spawn(DATA_KEY))

    intervals: dict[str, IntervalEstimate | None] = {m: None for m in METHODS}
    reasons: dict[str, str] = {}

    try:
        intervals["LSE-GPQ"] = _gpq(config, sample, rep.spawn(GPQ_KEY))
    except (DataError, NumericalError) as e:
        reasons["LSE-GPQ"] = f"{type(e).__name__}: {e}"

    try:
        mle = mle_fit(sample)
    except (DataError, NumericalError) as e:
        reasons["PB"] = reasons["AI"] = f"{type(e).__name__}: {e}"
    else:
        try:
            intervals["PB"] = _pb(config, sample, mle, rep.spawn(BOOT_KEY))
        except (DataError, NumericalError) as e:
            reasons["PB"] = f"{type(e).__name__}: {e}"
        try:
            intervals["AI"] = _ai(config, sample, mle)
        except (DataError, NumericalError) as e:
            reasons["AI"] = f"{type(e).__name__}: {e}"

    for m, why in reasons.items():
        LOG.debug(f"Replicate {index}: {m} failed with {why}")

    return ReplicateOutcome(
        index,
        intervals,
        config.true_reliability,
        sample.n_failures,
        reasons,
    )


def run_replicates(
    config: ScenarioConfig, indices: Iterable[int]
) -> list[ReplicateOutcome]:
    return [run_replicate(config, i) for i in indices]


def partition(r: int, parts: int) -> list[range]:
    """
    Splits replicate indices 0..r-1 into at most [parts] contiguous ranges.
    """
    bounds = np.linspace(0, r, min(max(parts, 1), r) + 1).round().astype(int)
    return [range(lo, hi) for lo, hi in zip(bounds[:-1], bounds[1:])]


@timed(LOG.info)  # type: ignore
def run_scenario(
    config: ScenarioConfig, workers: int | None = None
) -> CoverageResult:
    """
    Runs all replicates of a scenario and tallies coverage per method.

    The replicates may be spread over a process pool; the result does not
    depend on the number of workers.
    """
    workers = WORKERS if workers is None else workers
    chunks = partition(config.replicates, workers)

    if len(chunks) <= 1:
        outcomes = run_replicates(config, range(config.replicates))
    else:
        with ProcessPoolExecutor(max_workers=len(chunks)) as pool:
            futures = [
                pool.submit(run_replicates, config, chunk) for chunk in chunks
            ]
            outcomes = [o for f in futures for o in f.result()]

    threshold = censoring_threshold(config) if config.is_censored else None
    result = CoverageResult.aggregate(config, outcomes, threshold=threshold)

    if result.flagged:
        LOG.warning(
            f"Scenario n={config.n} t={config.t} alpha={config.alpha} "
            f"beta={config.beta} flagged: method failures {result.failures} "
            f"of {config.replicates} replicates"
        )
    return result


def coverage_table(results: Sequence[CoverageResult]) -> DataFrame:
    return DataFrame.from_records([r.to_row() for r in results])


@timed(LOG.info)  # type: ignore
def run_table(
    configs: Sequence[ScenarioConfig], workers: int | None = None
) -> tuple[DataFrame, list[CoverageResult]]:
    """
    Runs scenarios in order.

    Returns:
        one row per scenario in the order given, with the results behind it
    """
    if len(configs) == 0:
        raise ValueError("No scenarios to run")

    results = []
    for i, config in enumerate(configs):
        LOG.info(f"Scenario {i + 1}/{len(configs)}: {config.to_dict()}")
        results.append(run_scenario(config, workers))
    return coverage_table(results), results
