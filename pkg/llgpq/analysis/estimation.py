from __future__ import annotations

from dataclasses import dataclass, field
from math import exp, log
from typing import Literal

import numpy as np
import pandas as pd
from numba import jit
from scipy.optimize import minimize

from llgpq.analysis.dist import (
    LocScaleParams,
    LogLogisticParams,
    logit,
)
from llgpq.util import (
    ConvergenceError,
    DataError,
    DegenerateDesignError,
    SingularInformationError,
)

FitMethod = Literal["LSE", "MLE"]

MIN_LSE_FAILURES = 3
MIN_MLE_FAILURES = 2

MLE_MAX_ITER = 500
MLE_XTOL = 1e-8
MLE_FTOL = 1e-10
# gradient norm per observation accepted as a stationary point
MLE_GTOL = 1e-6
# bounds on log(alpha) and log(beta / median) past which the fit is a boundary
MLE_LOG_BOUND = 25.0

FD_REL_STEP = 1e-5
MAX_CONDITION = 1e12


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Sample:
    """
    Observed lifetimes with right-censoring indicators.

    Args:
        times: positive observed times
        failed: True where the time is a failure, False where it is censored
        threshold: the type-I censoring time, if the data were censored at a
            known fixed time. Used to re-censor parametric resamples.
    """

    times: np.ndarray
    failed: np.ndarray
    threshold: float | None = None

    def __post_init__(self) -> None:
        times = np.asarray(self.times, dtype=float).ravel()
        failed = np.asarray(self.failed, dtype=bool).ravel()

        if len(times) == 0:
            raise DataError("Sample has no observations")
        if len(times) != len(failed):
            raise DataError(
                f"{len(times)} times but {len(failed)} status indicators"
            )
        if not np.all(np.isfinite(times) & (times > 0)):
            bad = times[~(np.isfinite(times) & (times > 0))][0]
            raise DataError(f"Observed times must be positive: got {bad}")
        if self.threshold is not None and not self.threshold > 0:
            raise DataError(
                f"Censoring threshold must be positive: {self.threshold}"
            )

        object.__setattr__(self, "times", _frozen(times))
        object.__setattr__(self, "failed", _frozen(failed))

    @classmethod
    def complete(cls, times: np.ndarray) -> Sample:
        times = np.asarray(times, dtype=float)
        return cls(times, np.ones(times.shape, dtype=bool))

    @classmethod
    def type_one(cls, lifetimes: np.ndarray, threshold: float) -> Sample:
        """
        Censors lifetimes at the fixed time [threshold].
        """
        lifetimes = np.asarray(lifetimes, dtype=float)
        return cls(
            np.minimum(lifetimes, threshold),
            lifetimes <= threshold,
            threshold=threshold,
        )

    @property
    def n(self) -> int:
        return len(self.times)

    @property
    def n_failures(self) -> int:
        return int(self.failed.sum())

    @property
    def is_complete(self) -> bool:
        return bool(self.failed.all())

    def ordered(self) -> tuple[np.ndarray, np.ndarray]:
        """
        Times and indicators sorted by time; a censored time tied with a
        failure time is placed after the failure.
        """
        order = np.lexsort((~self.failed, self.times))
        return self.times[order], self.failed[order]

    def rescaled(self, k: float) -> Sample:
        return Sample(
            self.times * k,
            self.failed,
            None if self.threshold is None else self.threshold * k,
        )


@dataclass(frozen=True, eq=False)
class PlottingDesign:
    """
    Probability-plot regression design.

    Args:
        y: ordered failure log-times
        x: fixed regressors logit(positions)
        positions: the plotting positions behind x
        ranks: 0-based ranks of the retained failures among all n ordered
            observations
        n: size of the full sample the design was built from
    """

    y: np.ndarray
    x: np.ndarray
    positions: np.ndarray
    ranks: np.ndarray
    n: int

    def __post_init__(self) -> None:
        for name in ("y", "x", "positions", "ranks"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))

        m = len(self.x)
        if not len(self.y) == len(self.positions) == len(self.ranks) == m:
            raise DataError("Design columns differ in length")
        if m < MIN_LSE_FAILURES:
            raise DataError(
                f"Need at least {MIN_LSE_FAILURES} failures, have {m}"
            )
        if not np.all(np.diff(self.x) > 0):
            raise DegenerateDesignError("Regressors must strictly increase")
        if not np.all((self.positions > 0) & (self.positions < 1)):
            raise DegenerateDesignError("Plotting positions must be in (0, 1)")

    @property
    def m(self) -> int:
        return len(self.x)

    @property
    def x_centered(self) -> np.ndarray:
        return self.x - self.x.mean()


@dataclass(frozen=True)
class FitResult:
    loc_scale: LocScaleParams
    method: FitMethod
    design: PlottingDesign | None = field(default=None, compare=False)
    loglik: float | None = None
    optimizer: str | None = None
    iterations: int | None = None

    @property
    def ll_params(self) -> LogLogisticParams:
        return self.loc_scale.ll_params


@dataclass(frozen=True, eq=False)
class ObservedInformation:
    """
    Negative Hessian of the log-likelihood in (alpha, beta) order.
    """

    matrix: np.ndarray
    condition: float

    @property
    def singular(self) -> bool:
        cond = self.condition
        return not (np.isfinite(cond) and cond <= MAX_CONDITION)

    @property
    def positive_definite(self) -> bool:
        return bool(np.all(np.linalg.eigvalsh(self.matrix) > 0))

    @property
    def covariance(self) -> np.ndarray:
        if self.singular:
            raise SingularInformationError(
                f"Information matrix is singular: cond = {self.condition:.3g}"
            )
        return np.linalg.inv(self.matrix)


def benard_positions(n: int) -> np.ndarray:
    if n < 1:
        raise ValueError(f"Need at least one position: {n}")
    return (np.arange(1, n + 1) - 0.3) / (n + 0.4)


def km_cdf_estimate(sample: Sample) -> pd.DataFrame:
    """
    Kaplan-Meier estimate of the CDF at each distinct failure time.

    Returns:
        frame with columns time, at_risk, failures, cdf; one row per distinct
        failure time, in increasing time order.
    """
    if sample.n_failures == 0:
        raise DataError("Kaplan-Meier estimate needs at least one failure")

    times, failed = sample.ordered()
    fail_times, d = np.unique(times[failed], return_counts=True)
    at_risk = sample.n - np.searchsorted(times, fail_times, side="left")
    surv = np.cumprod(1 - d / at_risk)

    return pd.DataFrame(
        dict(time=fail_times, at_risk=at_risk, failures=d, cdf=1 - surv)
    )


def empirical_reliability(sample: Sample, t: float) -> float:
    """
    Kaplan-Meier survival at t; the fraction of observations beyond t when
    nothing is censored.
    """
    km = km_cdf_estimate(sample)
    seen = km[km["time"] <= t]
    return 1.0 if len(seen) == 0 else float(1 - seen["cdf"].iloc[-1])


def plotting_design_complete(sample: Sample) -> PlottingDesign:
    if not sample.is_complete:
        raise DataError("Benard design requires uncensored data")
    if sample.n < MIN_LSE_FAILURES:
        raise DataError(
            f"Need at least {MIN_LSE_FAILURES} observations, have {sample.n}"
        )
    positions = benard_positions(sample.n)
    return PlottingDesign(
        y=np.log(np.sort(sample.times)),
        x=logit(positions),
        positions=positions,
        ranks=np.arange(sample.n),
        n=sample.n,
    )


def plotting_design_censored(sample: Sample) -> PlottingDesign:
    """
    Design over the failures only, with Kaplan-Meier midpoint positions
    (F(t-) + F(t)) / 2. Each failure is its own step, so tied failures get
    distinct positions; after a tie group the step function agrees with the
    grouped estimate.
    """
    if sample.n_failures < MIN_LSE_FAILURES:
        raise DataError(
            f"Need at least {MIN_LSE_FAILURES} failures, "
            f"have {sample.n_failures}"
        )

    times, failed = sample.ordered()
    at_risk = sample.n - np.arange(sample.n)
    surv_after = np.cumprod(1 - failed / at_risk)
    surv_before = np.concatenate([[1.0], surv_after[:-1]])
    positions = (1 - (surv_before + surv_after) / 2)[failed]

    if np.any((positions <= 0) | (positions >= 1)):
        raise DegenerateDesignError("Kaplan-Meier position hit 0 or 1")

    return PlottingDesign(
        y=np.log(times[failed]),
        x=logit(positions),
        positions=positions,
        ranks=np.flatnonzero(failed),
        n=sample.n,
    )


def plotting_design(sample: Sample) -> PlottingDesign:
    """
    Benard design for complete data, Kaplan-Meier design otherwise.
    """
    if sample.is_complete:
        return plotting_design_complete(sample)
    return plotting_design_censored(sample)


def regression_slope(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    """
    Returns:
        slope and intercept of the least-squares line of y on x
    """
    xc = x - x.mean()
    sxx = float(xc @ xc)
    if sxx <= 0:
        raise DegenerateDesignError("Regressors have zero spread")
    slope = float(xc @ (y - y.mean())) / sxx
    return slope, float(y.mean() - slope * x.mean())


def lse_fit(design: PlottingDesign) -> FitResult:
    s_hat, mu_hat = regression_slope(design.x, design.y)
    if s_hat <= 0:
        raise DegenerateDesignError(
            f"Non-positive probability-plot slope {s_hat:.4g}: the data are "
            f"inconsistent with a log-logistic model"
        )
    return FitResult(LocScaleParams(mu_hat, s_hat), "LSE", design=design)


@jit(nopython=True, cache=True)  # type: ignore
def _loglik_derivs(
    a: float, b: float, y: np.ndarray, failed: np.ndarray
) -> tuple[float, float, float, float, float, float]:
    """
    Log-likelihood in (a, b) = (log alpha, log beta) with its gradient and
    Hessian, for log-times y. z = alpha * (y - b) is the standardized
    logistic residual.

    Returns:
        loglik, d/da, d/db, d2/da2, d2/dadb, d2/db2
    """
    alpha = np.exp(a)
    ll = 0.0
    ga = 0.0
    gb = 0.0
    haa = 0.0
    hab = 0.0
    hbb = 0.0

    for i in range(len(y)):
        z = alpha * (y[i] - b)
        if z > 0:
            ez = np.exp(-z)
            softplus = z + np.log1p(ez)
            sig = 1.0 / (1.0 + ez)
        else:
            ez = np.exp(z)
            softplus = np.log1p(ez)
            sig = ez / (1.0 + ez)
        w = sig * (1.0 - sig)

        if failed[i]:
            ll += a + z - 2.0 * softplus - y[i]
            ga += 1.0
            h1 = 1.0 - 2.0 * sig
            h2 = -2.0 * w
        else:
            ll -= softplus
            h1 = -sig
            h2 = -w

        ga += h1 * z
        gb -= alpha * h1
        haa += h2 * z * z + h1 * z
        hab -= alpha * (h2 * z + h1)
        hbb += alpha * alpha * h2

    return ll, ga, gb, haa, hab, hbb


@jit(nopython=True, cache=True)  # type: ignore
def _newton_mle(
    a: float,
    b: float,
    y: np.ndarray,
    failed: np.ndarray,
    max_iter: int,
    xtol: float,
    ftol: float,
    gtol: float,
) -> tuple[float, float, float, int, bool]:
    """
    Damped Newton ascent on the log-likelihood in (log alpha, log beta).
    Falls back to a scaled gradient step where the Hessian is not negative
    definite.

    Returns:
        a, b, loglik, iterations used, converged flag
    """
    n = len(y)
    ll, ga, gb, haa, hab, hbb = _loglik_derivs(a, b, y, failed)

    for it in range(max_iter):
        det = haa * hbb - hab * hab
        if haa < 0.0 and det > 0.0:
            da = -(hbb * ga - hab * gb) / det
            db = -(haa * gb - hab * ga) / det
        else:
            da = ga / (abs(haa) + 1.0)
            db = gb / (abs(hbb) + 1.0)

        biggest = max(abs(da), abs(db))
        if biggest > 1.0:
            da /= biggest
            db /= biggest

        step = 1.0
        moved = False
        na, nb = a, b
        nll, nga, ngb, nhaa, nhab, nhbb = ll, ga, gb, haa, hab, hbb
        for _ in range(50):
            na = a + step * da
            nb = b + step * db
            nll, nga, ngb, nhaa, nhab, nhbb = _loglik_derivs(na, nb, y, failed)
            if np.isfinite(nll) and nll >= ll:
                moved = True
                break
            step *= 0.5

        if not moved:
            # no ascent direction left: accept only at a stationary point
            grad = np.sqrt(ga * ga + gb * gb) / n
            return a, b, ll, it, grad < gtol

        dx = max(
            abs(na - a) / max(1.0, abs(a)), abs(nb - b) / max(1.0, abs(b))
        )
        df = abs(nll - ll) / max(1.0, abs(ll))

        a, b = na, nb
        ll, ga, gb, haa, hab, hbb = nll, nga, ngb, nhaa, nhab, nhbb

        if dx < xtol and df < ftol:
            grad = np.sqrt(ga * ga + gb * gb) / n
            return a, b, ll, it + 1, grad < gtol

    return a, b, ll, max_iter, False


def _log_time_arrays(sample: Sample) -> tuple[np.ndarray, np.ndarray]:
    return (
        np.ascontiguousarray(np.log(sample.times), dtype=np.float64),
        np.ascontiguousarray(sample.failed, dtype=np.bool_),
    )


def loglik(params: LogLogisticParams, sample: Sample) -> float:
    """
    Sum of log f over failures and log R over censored times.
    """
    y, failed = _log_time_arrays(sample)
    return float(
        _loglik_derivs(log(params.alpha), log(params.beta), y, failed)[0]
    )


def _mle_start(sample: Sample) -> tuple[float, float]:
    try:
        p = lse_fit(plotting_design(sample)).ll_params
        return log(p.alpha), log(p.beta)
    except (DataError, ArithmeticError):
        return 0.0, float(np.log(np.median(sample.times)))


def _stationary(
    a: float, b: float, y: np.ndarray, failed: np.ndarray
) -> bool:
    _, ga, gb, *_ = _loglik_derivs(a, b, y, failed)
    return bool(np.hypot(ga, gb) / len(y) < MLE_GTOL)


def mle_fit(sample: Sample) -> FitResult:
    """
    Maximum likelihood fit, searched in (log alpha, log beta).

    A jitted Newton iteration started from the least-squares fit is tried
    first; Nelder-Mead with the same budget and tolerances takes over if it
    does not converge.

    Raises:
        ConvergenceError: neither search found an interior stationary point
    """
    if sample.n_failures < MIN_MLE_FAILURES:
        raise DataError(
            f"Need at least {MIN_MLE_FAILURES} failures for the MLE, "
            f"have {sample.n_failures}"
        )

    y, failed = _log_time_arrays(sample)
    if np.ptp(y[failed]) == 0 and sample.is_complete:
        raise ConvergenceError(
            "Failure times have zero spread: likelihood is unbounded as the "
            "shape grows",
            last_iterate=(np.inf, float(np.exp(y[0]))),
        )

    a0, b0 = _mle_start(sample)
    log_median = float(np.log(np.median(sample.times)))

    def _in_bounds(a: float, b: float) -> bool:
        return abs(a) < MLE_LOG_BOUND and abs(b - log_median) < MLE_LOG_BOUND

    a, b, ll, its, ok = _newton_mle(
        a0, b0, y, failed, MLE_MAX_ITER, MLE_XTOL, MLE_FTOL, MLE_GTOL
    )
    optimizer = "newton"

    if not (ok and _in_bounds(a, b)):
        res = minimize(
            lambda th: -_loglik_derivs(th[0], th[1], y, failed)[0],
            np.array([a0, b0]),
            method="Nelder-Mead",
            options=dict(
                maxiter=MLE_MAX_ITER, xatol=MLE_XTOL, fatol=MLE_FTOL
            ),
        )
        a, b = map(float, res.x)
        ll, its, optimizer = -float(res.fun), int(res.nit), "nelder-mead"
        if not (
            res.success and _in_bounds(a, b) and _stationary(a, b, y, failed)
        ):
            raise ConvergenceError(
                f"MLE did not converge in {MLE_MAX_ITER} iterations",
                last_iterate=(exp(a), exp(b)),
            )

    return FitResult(
        LogLogisticParams(exp(a), exp(b)).loc_scale,
        "MLE",
        loglik=ll,
        optimizer=optimizer,
        iterations=its,
    )


def observed_information(
    params: LogLogisticParams, sample: Sample
) -> ObservedInformation:
    """
    Negative Hessian of the log-likelihood at [params] by central finite
    differences with relative step FD_REL_STEP, symmetrized.
    """
    theta = np.array([params.alpha, params.beta])
    h = FD_REL_STEP * theta

    def f(da: float, db: float) -> float:
        return loglik(
            LogLogisticParams(theta[0] + da, theta[1] + db), sample
        )

    f0 = f(0, 0)
    hess = np.empty((2, 2))
    hess[0, 0] = (f(h[0], 0) - 2 * f0 + f(-h[0], 0)) / h[0] ** 2
    hess[1, 1] = (f(0, h[1]) - 2 * f0 + f(0, -h[1])) / h[1] ** 2
    hess[0, 1] = hess[1, 0] = (
        f(h[0], h[1]) - f(h[0], -h[1]) - f(-h[0], h[1]) + f(-h[0], -h[1])
    ) / (4 * h[0] * h[1])

    info = -(hess + hess.T) / 2
    return ObservedInformation(info, float(np.linalg.cond(info)))

