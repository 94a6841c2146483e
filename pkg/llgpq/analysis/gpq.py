"""
Generalized pivotal quantities built on the probability-plot least-squares
fit.

With Y = mu + s Z and fixed regressors x, the least-squares slope of the
observed log-times is s times the slope s(Z) of a standard logistic sample
regressed on the same x. Replacing Z by simulated standard logistic order
statistics gives

    G_s  = s_hat / s(Z)
    G_mu = mu_hat - G_s * (mean(Z) - mean(x) * s(Z))

whose distributions depend on the design alone. Functions of (G_mu, G_s)
then give pivots for alpha, beta, R(t), percentiles and the mean life.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import ceil, log
from typing import Literal

import numpy as np
from py9lib.util import timed
from scipy.special import expit
from scipy.special import logit as _logit

from llgpq import LOG
from llgpq.analysis.dist import draw_std_logistic, mean_life
from llgpq.analysis.estimation import FitResult, PlottingDesign
from llgpq.util import PivotRejectionError, Seed, equal_tailed

IntervalMethod = Literal["LSE-GPQ", "PB", "AI"]
GpqTarget = Literal[
    "mu", "s", "alpha", "beta", "reliability", "quantile", "mean"
]

DEFAULT_GPQ_DRAWS = 2000
MIN_GPQ_DRAWS = 100
# draws per independently seeded block; blocks are the unit of partitioning
GPQ_BLOCK = 500
MAX_REJECTION_RATE = 0.5


@dataclass(frozen=True)
class IntervalEstimate:
    lower: float
    upper: float
    level: float
    method: IntervalMethod
    target: str
    t: float | None = None
    clamped: bool = False

    def __post_init__(self) -> None:
        if not self.lower <= self.upper:
            raise ValueError(
                f"Interval limits out of order: {self.lower} > {self.upper}"
            )
        if self.target == "reliability" and not (
            0 <= self.lower and self.upper <= 1
        ):
            raise ValueError(
                f"Reliability limits outside [0, 1]: {self.lower, self.upper}"
            )

    @property
    def length(self) -> float:
        return self.upper - self.lower

    def contains(self, value: float) -> bool:
        return self.lower <= value <= self.upper


@dataclass(frozen=True, eq=False)
class GpqDraws:
    """
    Args:
        g_s: draws of the scale pivot, all positive
        g_mu: parallel draws of the location pivot
        design: the design the standard logistic slopes were regressed on
        rejected: number of draws discarded for a non-positive s(Z)
    """

    g_s: np.ndarray
    g_mu: np.ndarray
    design: PlottingDesign
    rejected: int = 0

    def __post_init__(self) -> None:
        if len(self.g_s) != len(self.g_mu):
            raise ValueError("Pivot draw collections differ in length")
        if not np.all(self.g_s > 0):
            raise ValueError("Scale pivot draws must be positive")

    @property
    def m(self) -> int:
        return len(self.g_s)


def standard_slopes(
    design: PlottingDesign, z: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """
    Regresses standard logistic order statistics on the design.

    Args:
        design: the fixed regressors and retained ranks
        z: (k, m) sorted standard logistic order statistics at the design's
            ranks, one replicate per row

    Returns:
        slopes s(Z) and means mean(Z), each of shape (k,)
    """
    xc = design.x_centered
    z_bar = z.mean(axis=1)
    return ((z - z_bar[:, None]) @ xc) / float(xc @ xc), z_bar


def pivotal_quantities(
    fit: FitResult, z: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """
    Evaluates (G_s, G_mu) at given standard logistic order statistics.

    At the realization z that generated the data this returns (s, mu)
    exactly; at simulated z it returns pivot draws.
    """
    assert fit.design is not None
    s_z, z_bar = standard_slopes(fit.design, np.atleast_2d(z))
    g_s = fit.loc_scale.s / s_z
    g_mu = fit.loc_scale.mu - g_s * (z_bar - fit.design.x.mean() * s_z)
    return g_s, g_mu


def draw_block(
    fit: FitResult, seed: Seed, size: int
) -> tuple[np.ndarray, np.ndarray, int]:
    """
    One independently seeded block of pivot draws. A full standard logistic
    sample of the original size n is drawn and sorted, and the order
    statistics at the observed failure ranks are kept.

    Returns:
        g_s, g_mu and the number of rejected draws
    """
    assert fit.design is not None
    design = fit.design
    rng = seed.rng()

    s_parts: list[np.ndarray] = []
    mu_parts: list[np.ndarray] = []
    kept = rejected = 0

    while kept < size:
        need = size - kept
        z = np.sort(draw_std_logistic(rng, (need, design.n)), axis=1)
        g_s, g_mu = pivotal_quantities(fit, z[:, design.ranks])
        ok = g_s > 0

        s_parts.append(g_s[ok])
        mu_parts.append(g_mu[ok])
        kept += int(ok.sum())
        rejected += need - int(ok.sum())

        # kept <= size, so this bounds the rejection rate above one half
        if rejected > size:
            raise PivotRejectionError(
                f"Over {MAX_REJECTION_RATE:.0%} of standard logistic "
                f"slopes were non-positive for a {design.m}-point design"
            )

    return np.concatenate(s_parts), np.concatenate(mu_parts), rejected


@timed(LOG.debug)  # type: ignore
def gpq_draws(
    fit: FitResult, m: int = DEFAULT_GPQ_DRAWS, seed: Seed | None = None
) -> GpqDraws:
    """
    Generates [m] draws of (G_s, G_mu) for a least-squares fit.

    Draws are made in blocks of GPQ_BLOCK, block k seeded by seed.spawn(k),
    so any split of the block range across workers reproduces the same
    collection.

    Raises:
        PivotRejectionError: more than half of the simulated slopes were
            non-positive
    """
    if fit.method != "LSE" or fit.design is None:
        raise ValueError("Pivots need a least-squares fit with its design")
    if m < MIN_GPQ_DRAWS:
        raise ValueError(f"Need at least {MIN_GPQ_DRAWS} draws, asked {m}")

    seed = seed if seed is not None else Seed.fresh()
    n_blocks = ceil(m / GPQ_BLOCK)

    blocks = [
        draw_block(fit, seed.spawn(k), min(GPQ_BLOCK, m - k * GPQ_BLOCK))
        for k in range(n_blocks)
    ]
    rejected = sum(b[2] for b in blocks)

    if rejected > MAX_REJECTION_RATE * (m + rejected):
        raise PivotRejectionError(
            f"{rejected} of {m + rejected} standard logistic slopes were "
            f"non-positive"
        )
    if rejected:
        LOG.info(f"Rejected {rejected} non-positive pivot slopes for {m=}")

    return GpqDraws(
        g_s=np.concatenate([b[0] for b in blocks]),
        g_mu=np.concatenate([b[1] for b in blocks]),
        design=fit.design,
        rejected=rejected,
    )


def gpq_transform(
    draws: GpqDraws,
    target: GpqTarget,
    t: float | None = None,
    p: float | None = None,
) -> np.ndarray:
    """
    Maps pivot draws onto a target quantity.

    Args:
        draws: pivot draws
        target: one of mu, s, alpha, beta, reliability (needs t),
            quantile (needs p, the failure probability) or mean, which is
            +inf where G_s >= 1
    """
    if target == "mu":
        return draws.g_mu.copy()
    elif target == "s":
        return draws.g_s.copy()
    elif target == "alpha":
        return 1 / draws.g_s
    elif target == "beta":
        return np.exp(draws.g_mu)
    elif target == "reliability":
        if t is None or not t > 0:
            raise ValueError(f"Reliability pivot needs a positive t: {t}")
        return expit(-(log(t) - draws.g_mu) / draws.g_s)
    elif target == "quantile":
        if p is None or not 0 < p < 1:
            raise ValueError(f"Quantile pivot needs p in (0, 1): {p}")
        return np.exp(draws.g_mu + draws.g_s * float(_logit(p)))
    elif target == "mean":
        return np.asarray(mean_life(1 / draws.g_s, np.exp(draws.g_mu)))
    raise ValueError(f"Unknown pivot target {target}")


def gpq_interval(
    transformed: np.ndarray,
    level: float,
    target: str = "reliability",
    t: float | None = None,
) -> IntervalEstimate:
    if len(transformed) < MIN_GPQ_DRAWS:
        raise ValueError(
            f"Need at least {MIN_GPQ_DRAWS} draws, have {len(transformed)}"
        )
    lower, upper = equal_tailed(transformed, level)
    return IntervalEstimate(lower, upper, level, "LSE-GPQ", target, t=t)


def gpq_reliability_interval(
    fit: FitResult,
    t: float,
    level: float,
    m: int = DEFAULT_GPQ_DRAWS,
    seed: Seed | None = None,
) -> IntervalEstimate:
    draws = gpq_draws(fit, m, seed)
    return gpq_interval(
        gpq_transform(draws, "reliability", t=t), level, "reliability", t=t
    )
