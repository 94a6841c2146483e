from math import log, pi, sin

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis.strategies import floats

from llgpq.analysis.dist import (
    LogLogisticParams,
    ll_mean,
    ll_quantile,
    sample_loglogistic,
    sample_std_logistic,
)
from llgpq.analysis.estimation import (
    FitResult,
    Sample,
    lse_fit,
    mle_fit,
    plotting_design,
    plotting_design_complete,
)
from llgpq.analysis.gpq import (
    GpqDraws,
    IntervalEstimate,
    draw_block,
    gpq_draws,
    gpq_interval,
    gpq_reliability_interval,
    gpq_transform,
    pivotal_quantities,
    standard_slopes,
)
from llgpq.util import Seed


def _fit(sample: Sample) -> FitResult:
    return lse_fit(plotting_design(sample))


@pytest.fixture
def small() -> Sample:
    return Sample.complete(
        sample_loglogistic(10, LogLogisticParams(2, 1), Seed(1))
    )


@given(floats(-5, 5), floats(0.05, 5))
def test_pivotal_reduction(mu: float, s: float) -> None:
    z = np.sort(sample_std_logistic(12, Seed(77)))
    fit = _fit(Sample.complete(np.exp(mu + s * z)))

    g_s, g_mu = pivotal_quantities(fit, z)
    assert g_s[0] == pytest.approx(s, rel=1e-10)
    assert g_mu[0] == pytest.approx(mu, abs=1e-10)


def test_pivotal_reduction_censored() -> None:
    z_full = np.sort(sample_std_logistic(15, Seed(12)))
    mu, s = 0.3, 0.4
    lifetimes = np.exp(mu + s * z_full)
    sample = Sample.type_one(lifetimes, threshold=float(lifetimes[10]))
    fit = _fit(sample)

    g_s, g_mu = pivotal_quantities(fit, z_full[fit.design.ranks])
    assert g_s[0] == pytest.approx(s, rel=1e-10)
    assert g_mu[0] == pytest.approx(mu, abs=1e-10)


def test_slopes_do_not_depend_on_data(small: Sample) -> None:
    other = Sample.complete(small.times**3 * 5)
    d1 = plotting_design(small)
    d2 = plotting_design(other)
    z = np.sort(sample_std_logistic(10, Seed(3)))[None, :]
    s1, m1 = standard_slopes(d1, z)
    s2, m2 = standard_slopes(d2, z)
    assert np.array_equal(s1, s2) and np.array_equal(m1, m2)


def test_draws_deterministic(small: Sample) -> None:
    fit = _fit(small)
    a = gpq_draws(fit, 2000, Seed(5))
    b = gpq_draws(fit, 2000, Seed(5))
    c = gpq_draws(fit, 2000, Seed(6))
    assert a.m == 2000
    assert np.array_equal(a.g_s, b.g_s) and np.array_equal(a.g_mu, b.g_mu)
    assert not np.array_equal(a.g_s, c.g_s)
    assert np.all(a.g_s > 0)


def test_draws_are_blockwise(small: Sample) -> None:
    fit = _fit(small)
    seed = Seed(5)
    full = gpq_draws(fit, 1200, seed)
    head = gpq_draws(fit, 500, seed)
    assert np.array_equal(full.g_s[:500], head.g_s)

    # any worker can rebuild block k from seed.spawn(k) alone
    g_s, g_mu, _ = draw_block(fit, seed.spawn(2), 200)
    assert np.array_equal(full.g_s[1000:], g_s)
    assert np.array_equal(full.g_mu[1000:], g_mu)


def test_draws_need_lse_fit_and_enough_draws(small: Sample) -> None:
    fit = _fit(small)
    with pytest.raises(ValueError):
        gpq_draws(fit, 50, Seed(1))
    with pytest.raises(ValueError):
        gpq_draws(mle_fit(small), 500, Seed(1))


@settings(max_examples=10, deadline=None)
@given(floats(0.01, 100))
def test_draws_scale_equivariance(k: float) -> None:
    base = Sample.complete(
        sample_loglogistic(10, LogLogisticParams(3, 2), Seed(9))
    )
    a = gpq_draws(_fit(base), 200, Seed(4))
    b = gpq_draws(_fit(base.rescaled(k)), 200, Seed(4))
    assert gpq_transform(b, "alpha") == pytest.approx(
        gpq_transform(a, "alpha"), rel=1e-9
    )
    assert gpq_transform(b, "beta") == pytest.approx(
        k * gpq_transform(a, "beta"), rel=1e-9
    )


def test_transform_values() -> None:
    design = plotting_design_complete(Sample.complete(np.arange(1.0, 6.0)))
    draws = GpqDraws(np.array([0.5]), np.array([0.0]), design)
    assert gpq_transform(draws, "alpha")[0] == pytest.approx(2)
    assert gpq_transform(draws, "beta")[0] == pytest.approx(1)
    assert gpq_transform(draws, "reliability", t=1)[0] == pytest.approx(0.5)
    assert gpq_transform(draws, "mu")[0] == 0
    assert gpq_transform(draws, "s")[0] == 0.5
    assert gpq_transform(draws, "quantile", p=0.8)[0] == pytest.approx(
        ll_quantile(0.8, LogLogisticParams(2, 1))
    )

    with pytest.raises(ValueError):
        gpq_transform(draws, "reliability")
    with pytest.raises(ValueError):
        gpq_transform(draws, "quantile", p=1.0)


def test_reliability_draws_inside_unit_interval(small: Sample) -> None:
    draws = gpq_draws(_fit(small), 2000, Seed(8))
    for t in (0.1, 1.0, 10.0):
        r = gpq_transform(draws, "reliability", t=t)
        assert np.all((r > 0) & (r < 1))


def test_interval_conventions() -> None:
    const = gpq_interval(np.full(200, 0.3), 0.9)
    assert const.lower == const.upper == pytest.approx(0.3)

    grid = gpq_interval(np.arange(1.0, 1001.0), 0.9, target="t")
    assert grid.lower == pytest.approx(50.5, abs=1)
    assert grid.upper == pytest.approx(950.5, abs=1)
    assert grid.method == "LSE-GPQ"

    with pytest.raises(ValueError):
        gpq_interval(np.arange(50.0), 0.9)
    with pytest.raises(ValueError):
        gpq_interval(np.full(200, 0.3), 1.0)


def test_interval_nesting(small: Sample) -> None:
    draws = gpq_draws(_fit(small), 2000, Seed(2))
    r = gpq_transform(draws, "reliability", t=1)
    wide = gpq_interval(r, 0.95)
    narrow = gpq_interval(r, 0.90)
    assert wide.lower <= narrow.lower <= narrow.upper <= wide.upper


def test_interval_estimate_validation() -> None:
    with pytest.raises(ValueError):
        IntervalEstimate(0.6, 0.5, 0.9, "AI", "alpha")
    with pytest.raises(ValueError):
        IntervalEstimate(0.5, 1.2, 0.9, "AI", "reliability")
    est = IntervalEstimate(0.2, 0.5, 0.9, "PB", "reliability", t=1.0)
    assert est.length == pytest.approx(0.3)
    assert est.contains(0.2) and not est.contains(0.51)


def test_alpha_pivot_centres_on_estimates() -> None:
    truth = LogLogisticParams(2, 1)
    alphas = [
        _fit(
            Sample.complete(sample_loglogistic(10, truth, Seed(1000 + i)))
        ).ll_params.alpha
        for i in range(400)
    ]
    lo, hi = np.quantile(alphas, [0.005, 0.995])

    sample = Sample.complete(sample_loglogistic(10, truth, Seed(1)))
    draws = gpq_draws(_fit(sample), 2000, Seed(3))
    median = np.median(gpq_transform(draws, "alpha"))
    assert lo < median < hi


def test_reliability_interval(grinder: Sample) -> None:
    est = gpq_reliability_interval(_fit(grinder), 96.05, 0.95, 2000, Seed(42))
    assert est.target == "reliability" and est.t == 96.05
    assert 0 < est.lower < 0.5 < est.upper < 1


@pytest.mark.slow
def test_grinder_median_interval(grinder: Sample) -> None:
    fit = _fit(grinder)
    ests = [
        gpq_reliability_interval(fit, 96.05, 0.95, 2000, Seed(s))
        for s in range(5)
    ]
    assert np.mean([e.lower for e in ests]) == pytest.approx(0.136, abs=0.03)
    assert np.mean([e.upper for e in ests]) == pytest.approx(0.579, abs=0.03)


def test_mean_target_matches_closed_form() -> None:
    design = plotting_design_complete(Sample.complete(np.arange(1.0, 6.0)))
    draws = GpqDraws(
        np.array([0.25, 0.5, 1.0, 1.5]),
        np.array([log(2), 0.0, 0.0, 0.0]),
        design,
    )
    mean = gpq_transform(draws, "mean")
    assert mean[0] == pytest.approx(ll_mean(LogLogisticParams(4, 2)))
    assert mean[0] == pytest.approx(2 * (pi / 4) / sin(pi / 4))
    assert mean[1] == pytest.approx(pi / 2)
    assert np.isposinf(mean[2]) and np.isposinf(mean[3])


def test_mean_interval_may_be_unbounded() -> None:
    values = np.r_[np.arange(1.0, 181.0), np.full(20, np.inf)]
    est = gpq_interval(values, 0.9, target="mean")
    assert est.lower == pytest.approx(10.95)
    assert np.isposinf(est.upper) and np.isposinf(est.length)
    assert est.contains(1e300)

    finite = gpq_interval(np.r_[np.arange(1.0, 200.0), np.inf], 0.9, "mean")
    assert np.isfinite(finite.upper)


def test_mean_interval_on_data(grinder: Sample) -> None:
    draws = gpq_draws(_fit(grinder), 2000, Seed(6))
    est = gpq_interval(gpq_transform(draws, "mean"), 0.95, "mean")
    med = gpq_interval(gpq_transform(draws, "quantile", p=0.5), 0.95, "t_0.5")
    assert 0 < est.lower < est.upper
    # a right-skewed life has its mean above its median
    assert est.lower > med.lower
