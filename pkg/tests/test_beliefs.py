"""Censored beliefs: cdf shape, means, and the distortion budget."""

import math

import numpy as np
import pytest

from optimist.beliefs import (
    CensoredBelief,
    belief_mean,
    censor,
    censored_cdf,
    distortion_cost,
)
from optimist.distributions import (
    AffineTransform,
    Degenerate,
    DomainError,
    Empirical,
    Logistic,
    Normal,
    Pareto,
    Triangular,
)
from optimist.superquantile import Action, superquantile

TRI = Triangular(0.0, 0.0, 2.0)
A1 = Action("a=1", AffineTransform(TRI, 1.0, -1.0))


# ---------------------------------------------------------------------------
# construction


def test_censor_example_threshold_and_mean():
    belief = censor(A1, 0.8)
    assert belief.threshold == pytest.approx(0.106, abs=5e-4)
    assert belief.mean() == pytest.approx(0.404, abs=5e-4)
    assert belief.alpha == 0.8
    assert belief.density_ratio() == pytest.approx(5.0)


def test_censor_normal_median():
    belief = censor(Action("n", Normal()), 0.5)
    assert belief.threshold == pytest.approx(0.0, abs=1e-12)
    assert belief.mean() == pytest.approx(0.7978845608028654, abs=1e-8)


def test_censor_rejects_alpha_zero():
    with pytest.raises(DomainError, match=r"alpha must lie in \(0,1\)"):
        censor(A1, 0.0)


def test_censor_rejects_atoms():
    with pytest.raises(DomainError, match="continuous"):
        censor(Action("c", Degenerate(1.0)), 0.5)
    with pytest.raises(DomainError, match="continuous"):
        censor(Action("e", Empirical((1.0, 2.0, 3.0))), 0.5)


def test_censor_folds_the_payoff_offset():
    plain = censor(Action("s", Normal()), 0.7)
    shifted = censor(Action.additive("s+u", 3.0, Normal()), 0.7)
    assert shifted.threshold == pytest.approx(plain.threshold + 3.0, abs=1e-12)
    assert shifted.mean() == pytest.approx(plain.mean() + 3.0, abs=1e-8)


# ---------------------------------------------------------------------------
# the censored cdf


def test_censored_cdf_pieces():
    a = Action("n", Normal())
    belief = censor(a, 0.8)
    t = belief.threshold
    # zero mass kept below the threshold, renormalized tail above
    assert censored_cdf(a, 0.8, t - 1e-9) == 0.0
    assert censored_cdf(a, 0.8, Normal().quantile(0.9)) == pytest.approx(0.5, abs=1e-12)
    assert censored_cdf(a, 0.8, 50.0) == 1.0
    assert belief.cdf(t - 1.0) == 0.0


def test_censored_cdf_vectorized_and_monotone():
    a = Action("l", Logistic(1.0, 2.0))
    z = np.linspace(-20.0, 60.0, 501)
    g = censored_cdf(a, 0.6, z)
    assert g.shape == z.shape
    assert np.all(np.diff(g) >= -1e-15)
    assert g[0] == 0.0
    assert g[-1] == pytest.approx(1.0, abs=1e-9)
    assert np.all((g >= 0.0) & (g <= 1.0))


def test_censored_cdf_scalar_returns_scalar():
    out = censored_cdf(A1, 0.8, 0.5)
    assert isinstance(out, float)


def test_censored_cdf_exactly_zero_below_threshold():
    a = Action("n", Normal())
    t = Normal().quantile(0.8)
    z = np.linspace(t - 3.0, t - 1e-12, 100)
    assert np.all(censored_cdf(a, 0.8, z) == 0.0)


# ---------------------------------------------------------------------------
# means agree with tail averages


@pytest.mark.parametrize(
    "law",
    [Normal(), Normal(2.0, 3.0), Logistic(0.0, 0.5), Pareto(1.0, 2.0), TRI],
    ids=lambda d: type(d).__name__ + repr(d),
)
@pytest.mark.parametrize("alpha", [0.1, 0.5, 0.8, 0.95])
def test_belief_mean_matches_superquantile(law, alpha):
    a = Action("x", law)
    assert belief_mean(censor(a, alpha)) == pytest.approx(
        superquantile(a, alpha).value, abs=1e-6
    )


def test_belief_mean_pareto_example():
    assert belief_mean(censor(Action("p", Pareto(1.0, 2.0)), 0.75)) == pytest.approx(
        4.0, abs=1e-6
    )


def test_belief_mean_rejects_bad_tol():
    belief = censor(A1, 0.5)
    with pytest.raises(DomainError):
        belief_mean(belief, tol=0.0)


# ---------------------------------------------------------------------------
# distortion budget


def test_distortion_cost_examples():
    assert distortion_cost(1.0, 0.0) == 0.0
    assert distortion_cost(5.0, 0.8) == 0.0  # exactly at the cap
    assert distortion_cost(2.0, 0.2) == 0.0  # 1/0.8 = 1.25 <= 2
    assert distortion_cost(2.0, 0.8) == math.inf  # needs ratio 5
    assert distortion_cost(1.0, 0.5) == math.inf


def test_distortion_cost_validation():
    with pytest.raises(DomainError, match="nonnegative"):
        distortion_cost(-1.0, 0.5)
    with pytest.raises(DomainError, match="nonnegative"):
        distortion_cost(math.nan, 0.5)
    with pytest.raises(DomainError, match=r"alpha must lie in \[0,1\)"):
        distortion_cost(2.0, 1.0)


def test_selected_belief_is_the_cheapest_at_the_cap():
    # the likelihood ratio the censored belief uses is exactly the cap
    for alpha in (0.2, 0.5, 0.9):
        belief = censor(Action("n", Normal()), alpha)
        ratio = belief.density_ratio()
        assert distortion_cost(ratio, alpha) == 0.0
        assert distortion_cost(ratio * (1.0 - 1e-6), alpha) == math.inf


def test_censored_belief_is_frozen():
    belief = censor(A1, 0.5)
    assert isinstance(belief, CensoredBelief)
    with pytest.raises(AttributeError):
        belief.alpha = 0.4
