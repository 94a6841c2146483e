"""
Log-logistic and standard logistic distribution functions.

Everything is computed through the logistic location-scale representation
log T = mu + s Z, with z = alpha * (log t - log beta). Working in z keeps the
pdf and cdf finite for extreme shapes and times where (t/beta)^alpha would
overflow.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import exp, isfinite, log
from typing import Any

import numpy as np
from numpy.random import Generator
from scipy.special import expit
from scipy.special import logit as _logit

from llgpq.util import Seed

# smallest positive double, keeps inverse-transform uniforms off 0
_U_LOW = float(np.nextafter(0.0, 1.0))


@dataclass(frozen=True)
class LogLogisticParams:
    alpha: float
    beta: float

    def __post_init__(self) -> None:
        for name in ("alpha", "beta"):
            val = getattr(self, name)
            if not (isfinite(val) and val > 0):
                raise ValueError(f"{name} must be positive and finite: {val}")

    @property
    def loc_scale(self) -> LocScaleParams:
        return LocScaleParams(mu=log(self.beta), s=1 / self.alpha)


@dataclass(frozen=True)
class LocScaleParams:
    mu: float
    s: float

    def __post_init__(self) -> None:
        if not isfinite(self.mu):
            raise ValueError(f"mu must be finite: {self.mu}")
        if not (isfinite(self.s) and self.s > 0):
            raise ValueError(f"s must be positive and finite: {self.s}")

    @property
    def ll_params(self) -> LogLogisticParams:
        return LogLogisticParams(alpha=1 / self.s, beta=exp(self.mu))


def _unwrap(arr: np.ndarray) -> Any:
    return float(arr) if arr.ndim == 0 else arr


def _std_z(t: np.ndarray, alpha: Any, beta: Any) -> np.ndarray:
    return alpha * (np.log(t) - np.log(beta))


def ll_pdf(t: Any, p: LogLogisticParams) -> Any:
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise ValueError("log-logistic density is defined for t > 0 only")
    z = _std_z(t, p.alpha, p.beta)
    log_f = log(p.alpha) - np.log(t) + z - 2 * np.logaddexp(0, z)
    return _unwrap(np.exp(log_f))


def ll_cdf(t: Any, p: LogLogisticParams) -> Any:
    """
    CDF of the log-logistic distribution. Non-positive t maps to 0.
    """
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    pos = t > 0
    out[pos] = expit(_std_z(t[pos], p.alpha, p.beta))
    return _unwrap(out)


def ll_reliability(t: Any, p: LogLogisticParams) -> Any:
    """
    R(t) = 1 / (1 + (t/beta)^alpha). Evaluated as expit(-z) so the upper tail
    keeps its relative precision; ll_cdf + ll_reliability is 1 to rounding.
    """
    t = np.asarray(t, dtype=float)
    out = np.ones_like(t)
    pos = t > 0
    out[pos] = reliability_surface(t[pos], p.alpha, p.beta)
    return _unwrap(out)


def reliability_surface(t: Any, alpha: Any, beta: Any) -> np.ndarray:
    """
    R(t; alpha, beta) with t, alpha and beta broadcast against each other,
    for evaluating many parameter pairs at once.
    """
    t, alpha, beta = (np.asarray(v, dtype=float) for v in (t, alpha, beta))
    if np.any(t <= 0) or np.any(alpha <= 0) or np.any(beta <= 0):
        raise ValueError("Times and parameters must be positive")
    return expit(-_std_z(t, alpha, beta))


def mean_life(alpha: Any, beta: Any) -> Any:
    """
    E[T] = beta * (pi/alpha) / sin(pi/alpha), broadcast over alpha and beta.
    The mean is infinite for alpha <= 1.
    """
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    x = np.pi / alpha
    with np.errstate(divide="ignore", invalid="ignore"):
        finite = beta * x / np.sin(x)
    return _unwrap(np.where(alpha > 1, finite, np.inf))


def ll_mean(p: LogLogisticParams) -> float:
    return float(mean_life(p.alpha, p.beta))


def ll_quantile(q: Any, p: LogLogisticParams) -> Any:
    return _unwrap(p.beta * np.exp(np.asarray(logit(q)) / p.alpha))


def logistic_cdf(z: Any) -> Any:
    return _unwrap(expit(np.asarray(z, dtype=float)))


def logit(q: Any) -> Any:
    q = np.asarray(q, dtype=float)
    if np.any((q <= 0) | (q >= 1)):
        raise ValueError("logit is defined on the open interval (0, 1) only")
    return _unwrap(_logit(q))


def draw_std_logistic(rng: Generator, size: Any) -> np.ndarray:
    # one uniform per variate, by inverse transform
    return _logit(rng.uniform(_U_LOW, 1.0, size))


def draw_loglogistic(
    rng: Generator, size: Any, p: LogLogisticParams
) -> np.ndarray:
    return p.beta * np.exp(draw_std_logistic(rng, size) / p.alpha)


def sample_std_logistic(n: int, seed: Seed) -> np.ndarray:
    if n < 1:
        raise ValueError(f"Sample size must be positive: {n}")
    return draw_std_logistic(seed.rng(), n)


def sample_loglogistic(n: int, p: LogLogisticParams, seed: Seed) -> np.ndarray:
    """
    n i.i.d. log-logistic lifetimes, in draw order.
    """
    if n < 1:
        raise ValueError(f"Sample size must be positive: {n}")
    return draw_loglogistic(seed.rng(), n, p)
