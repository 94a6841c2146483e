from __future__ import annotations

from dataclasses import dataclass
from math import sqrt

import numpy as np
from scipy.special import kolmogorov
from scipy.stats import kstwo

from llgpq.analysis.dist import LogLogisticParams, ll_cdf
from llgpq.analysis.estimation import (
    FitMethod,
    Sample,
    lse_fit,
    mle_fit,
    plotting_design_complete,
)
from llgpq.util import DataError


@dataclass(frozen=True)
class GofReport:
    statistic: float
    p_value: float
    fit_method: FitMethod
    n: int
    params: LogLogisticParams
    p_asymptotic: float | None = None

    def __post_init__(self) -> None:
        if not 0 <= self.statistic <= 1:
            raise ValueError(f"KS statistic outside [0, 1]: {self.statistic}")


def ks_statistic(sample: Sample, params: LogLogisticParams) -> float:
    """
    D = sup |F_n(t) - F(t)|, attained at an ordered observation on one side
    of the empirical step.
    """
    if not sample.is_complete:
        raise DataError("Kolmogorov-Smirnov test needs uncensored data")

    n = sample.n
    cdf = ll_cdf(np.sort(sample.times), params)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - cdf), np.max(cdf - (i - 1) / n)))


def ks_pvalue(d: float, n: int) -> float:
    """
    Asymptotic Kolmogorov tail probability at (sqrt(n) + 0.12 + 0.11/sqrt(n))
    * d. With estimated parameters plugged in the test is conservative.
    """
    if not 0 <= d <= 1:
        raise ValueError(f"KS statistic outside [0, 1]: {d}")
    if n < 1:
        raise ValueError(f"Sample size must be positive: {n}")
    en = sqrt(n)
    return float(np.clip(kolmogorov((en + 0.12 + 0.11 / en) * d), 0, 1))


def ks_pvalue_exact(d: float, n: int) -> float:
    """
    Upper tail of the finite-n Kolmogorov distribution of D. This is the
    p-value reported by ks_test; ks_pvalue is its large-n approximation.
    """
    if not 0 <= d <= 1:
        raise ValueError(f"KS statistic outside [0, 1]: {d}")
    if n < 1:
        raise ValueError(f"Sample size must be positive: {n}")
    return float(np.clip(kstwo.sf(d, n), 0, 1))


def ks_test(sample: Sample, fit_method: FitMethod) -> GofReport:
    """
    KS test of the log-logistic hypothesis against the LSE or MLE fit.
    """
    if fit_method == "LSE":
        params = lse_fit(plotting_design_complete(sample)).ll_params
    else:
        params = mle_fit(sample).ll_params

    d = ks_statistic(sample, params)
    return GofReport(
        d,
        ks_pvalue_exact(d, sample.n),
        fit_method,
        sample.n,
        params,
        p_asymptotic=ks_pvalue(d, sample.n),
    )
