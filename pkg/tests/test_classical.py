import numpy as np
import pytest
from hypothesis import given
from hypothesis.strategies import floats

from llgpq.analysis.classical import (
    BootstrapRun,
    bootstrap_reliability,
    percentile_interval,
    reliability_gradient,
    wald_interval_params,
    wald_interval_reliability,
)
from llgpq.analysis.dist import (
    LogLogisticParams,
    ll_reliability,
    sample_loglogistic,
)
from llgpq.analysis.estimation import (
    ObservedInformation,
    Sample,
    mle_fit,
    observed_information,
)
from llgpq.cli.dataset import summarize
from llgpq.util import NumericalError, Seed

# reference intervals at the grinder and reactor quartiles
GRINDER_AI = [(0.409, 0.888), (0.164, 0.618), (0.073, 0.475)]
GRINDER_PB = [(0.395, 0.872), (0.144, 0.648), (0.071, 0.502)]
REACTOR_AI = [(0.578, 0.889), (0.363, 0.723), (0.071, 0.356)]
REACTOR_PB = [(0.569, 0.885), (0.352, 0.725), (0.083, 0.363)]


@given(floats(0.1, 10), floats(0.5, 8), floats(0.5, 5))
def test_gradient_matches_finite_differences(
    t: float, alpha: float, beta: float
) -> None:
    p = LogLogisticParams(alpha, beta)
    ha, hb = 1e-6 * alpha, 1e-6 * beta
    numeric = np.array(
        [
            (
                ll_reliability(t, LogLogisticParams(alpha + ha, beta))
                - ll_reliability(t, LogLogisticParams(alpha - ha, beta))
            )
            / (2 * ha),
            (
                ll_reliability(t, LogLogisticParams(alpha, beta + hb))
                - ll_reliability(t, LogLogisticParams(alpha, beta - hb))
            )
            / (2 * hb),
        ]
    )
    assert reliability_gradient(t, p) == pytest.approx(
        numeric, rel=1e-6, abs=1e-8
    )


def test_gradient_signs() -> None:
    g = reliability_gradient(2.0, LogLogisticParams(2, 1))
    # past the median a steeper shape lowers R, a larger scale raises it
    assert g[0] < 0 < g[1]
    assert reliability_gradient(1.0, LogLogisticParams(2, 1))[0] == 0


@pytest.mark.parametrize(
    "name,expected", [("grinder", GRINDER_AI), ("reactor", REACTOR_AI)]
)
def test_wald_reproduces_reference_intervals(
    name: str, expected: list, request: pytest.FixtureRequest
) -> None:
    sample = request.getfixturevalue(name)
    fit = mle_fit(sample)
    info = observed_information(fit.ll_params, sample)

    for t, (lo, hi) in zip(summarize(sample).quartiles, expected):
        est = wald_interval_reliability(t, fit, info, 0.95)
        assert est.method == "AI"
        assert est.lower == pytest.approx(lo, abs=0.01)
        assert est.upper == pytest.approx(hi, abs=0.01)
        assert est.length == pytest.approx(est.upper - est.lower, abs=1e-12)


def test_wald_clamps_to_unit_interval(grinder: Sample) -> None:
    fit = mle_fit(grinder)
    info = observed_information(fit.ll_params, grinder)

    early = wald_interval_reliability(1.0, fit, info, 0.95)
    assert early.clamped and early.upper == 1.0

    late = wald_interval_reliability(1e4, fit, info, 0.95)
    assert late.clamped and late.lower == 0.0

    mid = wald_interval_reliability(96.05, fit, info, 0.95)
    assert not mid.clamped


def test_wald_level_monotone(reactor: Sample) -> None:
    fit = mle_fit(reactor)
    info = observed_information(fit.ll_params, reactor)
    wide = wald_interval_reliability(0.614, fit, info, 0.95)
    narrow = wald_interval_reliability(0.614, fit, info, 0.90)
    assert wide.lower < narrow.lower < narrow.upper < wide.upper
    with pytest.raises(ValueError):
        wald_interval_reliability(0.614, fit, info, 1.5)


def test_wald_params(grinder: Sample) -> None:
    fit = mle_fit(grinder)
    info = observed_information(fit.ll_params, grinder)
    alpha, beta = wald_interval_params(fit, info, 0.95)
    assert alpha.target == "alpha" and beta.target == "beta"
    assert alpha.contains(fit.ll_params.alpha)
    assert beta.contains(fit.ll_params.beta)
    assert alpha.lower >= 0 and beta.lower >= 0


def test_bootstrap_deterministic_and_prefix_stable(grinder: Sample) -> None:
    fit = mle_fit(grinder)
    a = bootstrap_reliability(96.05, grinder, 200, Seed(1), fit=fit)
    b = bootstrap_reliability(96.05, grinder, 200, Seed(1), fit=fit)
    c = bootstrap_reliability(96.05, grinder, 100, Seed(1), fit=fit)
    assert np.array_equal(a.estimates, b.estimates)
    assert np.array_equal(a.estimates[:100], c.estimates)
    assert not a.flagged
    assert np.all((a.estimates > 0) & (a.estimates < 1))


def test_bootstrap_needs_enough_resamples(grinder: Sample) -> None:
    with pytest.raises(ValueError):
        bootstrap_reliability(96.05, grinder, 50, Seed(1))


def test_bootstrap_censored() -> None:
    lifetimes = sample_loglogistic(30, LogLogisticParams(3, 2), Seed(4))
    sample = Sample.type_one(lifetimes, threshold=2.5)
    run = bootstrap_reliability(1.0, sample, 200, Seed(2))
    est = percentile_interval(run, 0.9)
    assert 0 <= est.lower <= est.upper <= 1
    assert est.method == "PB" and est.t == 1.0


def test_percentile_interval_on_known_grid(grinder: Sample) -> None:
    fit = mle_fit(grinder)
    run = BootstrapRun(np.linspace(0.001, 1.0, 1000), 1000, 0, 1.0, fit)
    est = percentile_interval(run, 0.90)
    assert est.lower == pytest.approx(0.050, abs=0.001)
    assert est.upper == pytest.approx(0.950, abs=0.001)


def test_flagged_run_has_no_interval(grinder: Sample) -> None:
    fit = mle_fit(grinder)
    run = BootstrapRun(np.full(95, 0.5), 100, 6, 1.0, fit)
    assert run.failure_budget == 5 and run.flagged
    with pytest.raises(NumericalError):
        percentile_interval(run, 0.9)

    within = BootstrapRun(np.full(100, 0.5), 100, 5, 1.0, fit)
    assert not within.flagged


@pytest.mark.slow
@pytest.mark.parametrize(
    "name,expected", [("grinder", GRINDER_PB), ("reactor", REACTOR_PB)]
)
def test_bootstrap_reproduces_reference_intervals(
    name: str, expected: list, request: pytest.FixtureRequest
) -> None:
    sample = request.getfixturevalue(name)
    fit = mle_fit(sample)

    for t, (lo, hi) in zip(summarize(sample).quartiles, expected):
        ests = [
            percentile_interval(
                bootstrap_reliability(t, sample, 2000, Seed(s), fit=fit), 0.95
            )
            for s in range(5)
        ]
        assert np.mean([e.lower for e in ests]) == pytest.approx(lo, abs=0.03)
        assert np.mean([e.upper for e in ests]) == pytest.approx(hi, abs=0.03)


def test_wald_width_shrinks_with_root_n(grinder: Sample) -> None:
    tiled = Sample.complete(np.tile(grinder.times, 4))
    widths = []
    for sample in (grinder, tiled):
        fit = mle_fit(sample)
        info = observed_information(fit.ll_params, sample)
        widths.append(wald_interval_reliability(96.05, fit, info, 0.95).length)
    assert widths[0] / widths[1] == pytest.approx(2, rel=1e-3)


def test_wald_collapses_without_variance(grinder: Sample) -> None:
    fit = mle_fit(grinder)
    info = observed_information(fit.ll_params, grinder)
    sharp = ObservedInformation(info.matrix * 1e12, info.condition)
    est = wald_interval_reliability(96.05, fit, sharp, 0.95)
    assert est.length < 1e-5
    assert est.contains(ll_reliability(96.05, fit.ll_params))


@pytest.mark.parametrize("k", [0.01, 7.5])
def test_bootstrap_invariant_under_rescaling(grinder: Sample, k: float) -> None:
    base = bootstrap_reliability(96.05, grinder, 200, Seed(6))
    scaled = bootstrap_reliability(96.05 * k, grinder.rescaled(k), 200, Seed(6))
    assert scaled.failures == base.failures
    assert scaled.estimates == pytest.approx(base.estimates, abs=1e-5)


def test_bootstrap_centres_on_the_estimate() -> None:
    sample = Sample.complete(
        sample_loglogistic(200, LogLogisticParams(2, 1), Seed(17))
    )
    run = bootstrap_reliability(1.0, sample, 200, Seed(18))
    r_hat = ll_reliability(1.0, run.fit.ll_params)
    assert np.mean(run.estimates) == pytest.approx(r_hat, abs=0.02)
