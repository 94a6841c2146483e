from __future__ import annotations

from dataclasses import dataclass
from math import ceil, log

import numpy as np
from py9lib.util import timed
from scipy.special import expit
from scipy.stats import norm

from llgpq import LOG
from llgpq.analysis.dist import (
    LogLogisticParams,
    draw_loglogistic,
    ll_reliability,
)
from llgpq.analysis.estimation import (
    FitResult,
    ObservedInformation,
    Sample,
    mle_fit,
)
from llgpq.analysis.gpq import IntervalEstimate
from llgpq.util import DataError, NumericalError, Seed, equal_tailed

DEFAULT_BOOT_REPS = 2000
MIN_BOOT_REPS = 100
MAX_REFIT_FAILURE_RATE = 0.05


@dataclass(frozen=True, eq=False)
class BootstrapRun:
    """
    Args:
        estimates: R(t) evaluated at each resample's MLE, in resample order
        n_reps: number of resamples asked for
        failures: resamples whose MLE refit failed and were redrawn
        t: evaluation time
        fit: the MLE the resamples were drawn from
    """

    estimates: np.ndarray
    n_reps: int
    failures: int
    t: float
    fit: FitResult

    @property
    def failure_budget(self) -> int:
        return ceil(MAX_REFIT_FAILURE_RATE * self.n_reps)

    @property
    def flagged(self) -> bool:
        return self.failures > self.failure_budget


def _critical(level: float) -> float:
    if not 0 < level < 1:
        raise ValueError(f"Confidence level must lie in (0, 1): {level}")
    return float(norm.ppf((1 + level) / 2))


def reliability_gradient(t: float, params: LogLogisticParams) -> np.ndarray:
    """
    Returns:
        (dR/dalpha, dR/dbeta) of R(t) = 1 / (1 + (t/beta)^alpha)
    """
    z = params.alpha * (log(t) - log(params.beta))
    # w / (1 + w)^2 with w = (t/beta)^alpha, without forming w
    dens = float(expit(z) * expit(-z))
    return np.array(
        [-dens * z / params.alpha, params.alpha * dens / params.beta]
    )


def wald_interval_reliability(
    t: float, mle: FitResult, info: ObservedInformation, level: float
) -> IntervalEstimate:
    """
    Delta-method interval R_hat +- z * sqrt(grad' I^-1 grad) on the plain R
    scale, clamped to [0, 1]; clamping is recorded on the estimate.

    Raises:
        SingularInformationError: [info] cannot be inverted
    """
    params = mle.ll_params
    grad = reliability_gradient(t, params)
    se = float(np.sqrt(max(grad @ info.covariance @ grad, 0.0)))
    r_hat = float(ll_reliability(t, params))

    half = _critical(level) * se
    lower, upper = r_hat - half, r_hat + half
    clamped = lower < 0 or upper > 1
    if clamped:
        LOG.debug(f"Clamped Wald interval ({lower:.4f}, {upper:.4f}) at {t=}")

    return IntervalEstimate(
        max(lower, 0.0),
        min(upper, 1.0),
        level,
        "AI",
        "reliability",
        t=t,
        clamped=clamped,
    )


def wald_interval_params(
    mle: FitResult, info: ObservedInformation, level: float
) -> list[IntervalEstimate]:
    """
    Wald intervals for alpha and beta from the inverse observed information,
    with lower limits floored at zero.
    """
    params = mle.ll_params
    ses = np.sqrt(np.clip(np.diag(info.covariance), 0, None))
    crit = _critical(level)

    out = []
    for target, est, se in zip(
        ("alpha", "beta"), (params.alpha, params.beta), ses
    ):
        lower = est - crit * se
        out.append(
            IntervalEstimate(
                max(lower, 0.0),
                est + crit * se,
                level,
                "AI",
                target,
                clamped=lower < 0,
            )
        )
    return out


def _resample(
    sample: Sample, params: LogLogisticParams, seed: Seed
) -> Sample:
    lifetimes = draw_loglogistic(seed.rng(), sample.n, params)
    if sample.is_complete:
        return Sample.complete(lifetimes)

    threshold = sample.threshold
    if threshold is None:
        # no recorded threshold: censor where the data stopped being observed
        threshold = float(sample.times[~sample.failed].max())
    return Sample.type_one(lifetimes, threshold)


@timed(LOG.debug)  # type: ignore
def bootstrap_reliability(
    t: float,
    sample: Sample,
    n_reps: int = DEFAULT_BOOT_REPS,
    seed: Seed | None = None,
    fit: FitResult | None = None,
) -> BootstrapRun:
    """
    Parametric bootstrap of R(t) around the MLE.

    Resample b, attempt k is drawn from seed.spawn(b, k); a resample whose
    refit fails is redrawn with the next attempt. Runs with a common seed
    therefore share their leading estimates whatever n_reps is. Once the
    failures exceed MAX_REFIT_FAILURE_RATE of n_reps the run stops and is
    returned flagged.

    Args:
        t: evaluation time
        sample: observed data
        n_reps: number of resamples
        seed: base seed
        fit: the MLE of [sample], if already computed
    """
    if n_reps < MIN_BOOT_REPS:
        raise ValueError(f"Need at least {MIN_BOOT_REPS} resamples: {n_reps}")

    seed = seed if seed is not None else Seed.fresh()
    fit = fit if fit is not None else mle_fit(sample)
    params = fit.ll_params

    estimates = np.empty(n_reps)
    failures = 0
    budget = ceil(MAX_REFIT_FAILURE_RATE * n_reps)

    for b in range(n_reps):
        attempt = 0
        while True:
            resample = _resample(sample, params, seed.spawn(b, attempt))
            try:
                refit = mle_fit(resample).ll_params
                break
            except (DataError, NumericalError):
                failures += 1
                attempt += 1
                if failures > budget:
                    LOG.warning(
                        f"Bootstrap refits failed {failures} times "
                        f"in {b + 1} resamples; flagging run"
                    )
                    return BootstrapRun(estimates[:b], n_reps, failures, t, fit)
        estimates[b] = ll_reliability(t, refit)

    return BootstrapRun(estimates, n_reps, failures, t, fit)


def percentile_interval(run: BootstrapRun, level: float) -> IntervalEstimate:
    if run.flagged:
        raise NumericalError(
            f"Bootstrap run flagged: {run.failures} refit failures "
            f"exceed the budget of {run.failure_budget}"
        )
    lower, upper = equal_tailed(run.estimates, level)
    return IntervalEstimate(lower, upper, level, "PB", "reliability", t=run.t)
