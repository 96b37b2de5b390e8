"""
Discriminants, n0 selection, Hoeffding tails and the union bound
"""
import math
import random

import pytest

from brouwerlab.bounds import (
    binomial_ratio_threshold,
    bonferroni_lower_bound,
    bounds_report,
    eq3_holds,
    hoeffding_range_bound,
    hoeffding_tail_bound,
    lemma3_discriminant,
    lemma3_f,
    lemma3_n0,
    lemma3_params,
    lemma3_vertex,
    lemma5_discriminant,
    lemma5_f,
    lemma5_n0,
    lemma5_params,
    lemma5_vertex,
    log_hoeffding_tail_bound,
    theorem2_lower_bound,
    theorem_lower_bound,
)
from brouwerlab.ensembles import make_family
from brouwerlab.exceptions import BoundNotValidError, HypothesisViolationError, ParameterError


def test_lemma3_params_for_half():
    """gamma = 0.5: delta = 0.125, eps = sqrt(1.5) - 1, n0 = 2 at mu = 0.5"""
    params = lemma3_params(0.5)
    assert params.delta == pytest.approx(0.125)
    assert params.epsilon == pytest.approx(math.sqrt(1.5) - 1.0)
    assert params.n0 == 2
    assert params.which_lemma == "lemma3"
    assert lemma3_params(0.5, mu_upper=0.5) == params


def test_lemma3_discriminant_examples():
    params = lemma3_params(0.5)
    at_two = lemma3_discriminant(2, 0.5, params.epsilon, params.delta)
    assert at_two.value == pytest.approx(-0.3497, abs=1e-3)
    assert at_two.negative
    at_one = lemma3_discriminant(1, 0.5, params.epsilon, params.delta)
    assert at_one.value > 0
    assert not at_one.negative


def test_lemma3_n0_methods():
    """direct uses Delta itself; proof_bound the simplified bound"""
    assert lemma3_n0(0.5, 0.5) == 2
    assert lemma3_n0(0.5, 0.5, method="proof_bound") == 3
    assert lemma3_n0(0.99, 0.01) == 7
    assert lemma3_n0(0.99, 0.01, method="proof_bound") == 8
    with pytest.raises(ParameterError):
        lemma3_n0(0.5, 0.5, method="bisect")


def test_lemma3_hypothesis_checks():
    with pytest.raises(ParameterError):
        lemma3_params(1.5)
    with pytest.raises(ParameterError):
        lemma3_params(0.0)
    with pytest.raises(HypothesisViolationError):
        lemma3_n0(0.5, 0.6)
    with pytest.raises(HypothesisViolationError):
        lemma3_n0(0.5, 0.0)


def _lemma3_property_suite(draws, seed):
    rng = random.Random(seed)
    for _ in range(draws):
        gamma = rng.uniform(0.05, 0.95)
        mu = rng.uniform(0.01, 1.0 - gamma)
        params = lemma3_params(gamma, mu_upper=mu)
        eps, delta = params.epsilon, params.delta

        # sign of Delta against the minimum of f at its vertex
        n = rng.randint(1, 300)
        disc = lemma3_discriminant(n, mu, eps, delta).value
        at_vertex = lemma3_f(lemma3_vertex(n, mu, eps), n, mu, eps, delta)
        assert at_vertex == pytest.approx(-disc / 2.0, rel=1e-9, abs=1e-9)
        assert (disc < 0) == (at_vertex > 0)

        # n0 is minimal and Delta stays negative after it
        n0 = lemma3_n0(gamma, mu)
        if n0 > 1:
            assert not lemma3_discriminant(n0 - 1, mu, eps, delta).negative
        for m in range(n0, n0 + 4):
            assert lemma3_discriminant(m, mu, eps, delta).negative
            assert all(eq3_holds(k, m, mu, eps, delta) for k in range(1, m + 1))

        assert lemma3_n0(gamma, mu) <= lemma3_n0(gamma, mu, method="proof_bound")


def test_lemma3_property_suite():
    _lemma3_property_suite(100, seed=2024)


@pytest.mark.slow
def test_lemma3_property_suite_full():
    _lemma3_property_suite(1000, seed=7)


def test_lemma5_discriminant_regimes():
    """Dense bernoulli is negative at n = 1000; mu = n^-0.9 is still positive at 10^4"""
    dense = lemma5_discriminant(1000, 0.5, 0.5, 0.1, 0.1)
    assert dense.negative

    n = 10_000
    mu = n ** -0.9
    sparse = lemma5_discriminant(n, mu, math.sqrt(1 - mu * mu), 0.1, 0.1, c=0.4)
    assert sparse.value == pytest.approx(3.88e5, rel=1e-2)
    assert not sparse.negative


def test_lemma5_vertex_value():
    """f5 at its vertex equals -Delta5/2"""
    n, mu, sigma, eps, delta, c = 500, 0.3, 0.4, 0.2, 0.3, 0.45
    k = lemma5_vertex(n, sigma, eps)
    disc = lemma5_discriminant(n, mu, sigma, eps, delta, c).value
    assert lemma5_f(k, n, mu, sigma, eps, delta, c) == pytest.approx(-disc / 2.0)


def test_binomial_ratio_threshold():
    """C(n,2) >= 0.45 n^2 from n = 10"""
    assert binomial_ratio_threshold(0.45) == 10
    assert binomial_ratio_threshold(0.4) == 5
    assert binomial_ratio_threshold(1 / 3) == 3
    assert binomial_ratio_threshold(0.25) == 2
    with pytest.raises(ParameterError):
        binomial_ratio_threshold(0.5)


def test_lemma5_n0():
    bern = make_family("bernoulli", p=0.5)
    assert lemma5_n0(bern, 0.1, 0.1) == 10

    family = make_family("shifted_rademacher", mu_exponent=0.5)
    n0 = lemma5_n0(family, 0.1, 0.1, n_max=20_000)
    assert n0 is not None and n0 > 10
    before, at = family.resolve(n0 - 1), family.resolve(n0)
    assert not lemma5_discriminant(n0 - 1, before.mu, before.sigma, 0.1, 0.1).negative
    assert lemma5_discriminant(n0, at.mu, at.sigma, 0.1, 0.1).negative

    sparse = make_family("shifted_rademacher", mu_exponent=0.9)
    assert lemma5_n0(sparse, 0.1, 0.1, n_max=50_000) is None
    with pytest.raises(HypothesisViolationError):
        lemma5_params(sparse, n_max=50_000)


def test_lemma5_params():
    params = lemma5_params(make_family("bernoulli", p=0.5), epsilon=0.2, delta=0.3)
    assert params.which_lemma == "lemma5"
    assert params.c == 0.45
    assert params.n0 == 10
    with pytest.raises(ParameterError):
        lemma5_params(make_family("bernoulli", p=0.5), epsilon=0.0)


def test_hoeffding_forms():
    """exp(-delta^2 mu^2 C(n,2)/b^2) and the range form"""
    assert log_hoeffding_tail_bound(40, 0.5, 0.2, 1.0) == pytest.approx(-7.8)
    assert hoeffding_tail_bound(40, 0.5, 0.2, 1.0) == pytest.approx(math.exp(-7.8))
    assert hoeffding_range_bound(40, 0.5, 0.2, 0.0, 1.0) == pytest.approx(math.exp(-15.6))
    assert hoeffding_tail_bound(40, 0.5, 0.3, 1.0) < hoeffding_tail_bound(40, 0.5, 0.2, 1.0)


def test_hoeffding_errors():
    with pytest.raises(ParameterError):
        hoeffding_tail_bound(40, 0.0, 0.2, 1.0)
    with pytest.raises(ParameterError):
        hoeffding_tail_bound(40, 0.5, 1.0, 1.0)
    with pytest.raises(ParameterError):
        hoeffding_tail_bound(1, 0.5, 0.2, 1.0)
    with pytest.raises(ParameterError):
        hoeffding_range_bound(40, 0.5, 0.2, 1.0, 1.0)


def test_log_space_avoids_underflow():
    """Deep tails stay strictly positive; the log form keeps the magnitude"""
    log_bound = log_hoeffding_tail_bound(10_000, 0.5, 0.5, 1.0)
    assert log_bound < -700
    bound = hoeffding_tail_bound(10_000, 0.5, 0.5, 1.0)
    assert 0.0 < bound <= 1.0
    assert bound == math.ulp(0.0)
    assert 0.0 < hoeffding_range_bound(10_000, 0.5, 0.5, -1.0, 1.0) <= 1.0


def test_bonferroni():
    assert bonferroni_lower_bound(0.9, 0.8) == pytest.approx(0.7)
    assert bonferroni_lower_bound(0.3, 0.4) == 0.0
    with pytest.raises(ParameterError):
        bonferroni_lower_bound(1.2, 0.5)


def test_theorem_lower_bound():
    assert 0.99 < theorem_lower_bound(200, 0.5, 0.5, 1.0) <= 1.0
    assert theorem_lower_bound(2, 0.5, 0.5, 1.0) == pytest.approx(-math.expm1(-0.125**2 * 0.25))
    with pytest.raises(BoundNotValidError):
        theorem_lower_bound(1, 0.5, 0.5, 1.0)


def test_theorem2_lower_bound():
    assert 0.0 < theorem2_lower_bound(1000, 0.5, 0.5, 0.1, 0.1, 1.0) <= 1.0
    mu = 10_000 ** -0.9
    with pytest.raises(BoundNotValidError):
        theorem2_lower_bound(10_000, mu, 1.0, 0.1, 0.1, 1.0, c=0.4)


def test_bounds_report():
    report = bounds_report(0.5, 0.5, 2, b=1.0)
    assert report.lemma3.delta == pytest.approx(0.125)
    assert report.lemma3.n0 == 2
    assert report.n0_proof_bound == 3
    assert report.discriminant.value == pytest.approx(-0.3497, abs=1e-3)
    assert report.vertex_value == pytest.approx(-report.discriminant.value / 2.0)
    assert report.theorem_status == "valid"
    assert report.regime_indicators is None


def test_bounds_report_below_n0():
    report = bounds_report(0.5, 0.5, 1)
    assert report.discriminant.value > 0
    assert report.theorem_status == "not yet valid"
    assert report.theorem_lower_bound is None
    assert report.hoeffding_bound is None


def test_bounds_report_with_sigma():
    report = bounds_report(0.5, 0.5, 100, sigma=0.5)
    assert set(report.regime_indicators) == {"r1", "r2"}
    assert report.lemma5_discriminant.negative
