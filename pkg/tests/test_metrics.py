from fractions import Fraction

import pytest
from hypothesis import assume, given

from ldpfair.distribution import JointDistribution
from ldpfair.errors import AssumptionViolated, UndefinedEOD, ZeroGroupMass
from ldpfair.mechanism import rr_params, rr_params_exact
from ldpfair.metrics import (
    GAMMA1_GT,
    GAMMA1_LT,
    GAMMA_EQ,
    accuracy,
    acceptance_rate,
    conditional_sd,
    eod_closed_form,
    equal_opportunity_diff,
    fairness_report,
    sd_closed_form,
    statistical_disparity,
)
from ldpfair.model import baseline_predictor, ldp_predictor_closed_form
from ldpfair.scenarios import builtin_scenario
from ldpfair.theory import HOLDS, VIOLATED, check_reliable_y, check_uniform_discrimination

import oracles
from strategies import distributions, reliable_y_distributions, retention


def _both_groups(d):
    return d.group_mass(0) > 0 and d.group_mass(1) > 0


def _has_positives(d):
    return d.positive_mass(0) > 0 and d.positive_mass(1) > 0


@given(distributions(), retention)
def test_metrics_match_oracle(d, p):
    assume(_both_groups(d))
    t = oracles.table_of(d)
    for pred in (baseline_predictor(d), ldp_predictor_closed_form(d, rr_params_exact(p))):
        assert statistical_disparity(pred, d) == oracles.sd(t, pred.y_hat)
        assert conditional_sd(pred, d) == oracles.csd(t, pred.y_hat)
        assert accuracy(pred, d) == oracles.acc(t, pred.y_hat)
        if _has_positives(d):
            assert equal_opportunity_diff(pred, d) == oracles.eod(t, pred.y_hat)


def test_s1_values():
    d = builtin_scenario("S1").dist
    base = fairness_report(baseline_predictor(d), d)
    assert base.sd == Fraction(1, 2)
    assert base.csd == {"0": 1, "1": 0}
    assert base.eod == 0 and base.accuracy == 1
    ldp = fairness_report(ldp_predictor_closed_form(d, rr_params(0.5)), d)
    assert ldp.sd == 0 and ldp.accuracy == Fraction(17, 20)


def test_s4_eod_from_definition():
    # P[Yhat=1 | Y=1, A=1] = 1; P[Yhat=1 | Y=1, A=0] = 0.34 / 0.37
    d = builtin_scenario("S4").dist
    rep = fairness_report(baseline_predictor(d), d)
    assert rep.eod == Fraction(3, 37)
    assert rep.sd == Fraction(13, 50)


@pytest.mark.parametrize(
    "name,eps,sd,sd_prime",
    [("S3", 1.0, Fraction(2, 5), Fraction(-17, 50)), ("S5", 0.3, Fraction(2, 5), Fraction(-12, 25))],
)
def test_sign_flips(name, eps, sd, sd_prime):
    d = builtin_scenario(name).dist
    assert statistical_disparity(baseline_predictor(d), d) == sd
    assert statistical_disparity(ldp_predictor_closed_form(d, rr_params(eps)), d) == sd_prime


def test_zero_group_mass():
    d = JointDistribution.from_mapping(
        ("0",), {(1, "0", 1): "0.5", (0, "0", 1): "0.5", (1, "0", 0): 0, (0, "0", 0): 0}
    )
    with pytest.raises(ZeroGroupMass):
        acceptance_rate(baseline_predictor(d), d, 0)
    with pytest.raises(ZeroGroupMass):
        fairness_report(baseline_predictor(d), d)


def test_undefined_eod():
    d = JointDistribution.from_mapping(
        ("0",), {(1, "0", 1): "0.5", (0, "0", 1): "0.25", (1, "0", 0): 0, (0, "0", 0): "0.25"}
    )
    with pytest.raises(UndefinedEOD):
        equal_opportunity_diff(baseline_predictor(d), d)
    assert fairness_report(baseline_predictor(d), d).eod is None


@given(distributions(), retention)
def test_sd_closed_form_equals_direct(d, p):
    assume(_both_groups(d))
    assume(check_uniform_discrimination(d).status != VIOLATED)
    for params in (None, rr_params_exact(p)):
        pred = baseline_predictor(d) if params is None else ldp_predictor_closed_form(d, params)
        assert sd_closed_form(d, params).value == statistical_disparity(pred, d)


@given(reliable_y_distributions(), retention)
def test_eod_closed_form_equals_direct(d, p):
    assert check_reliable_y(d).status == HOLDS
    assume(_has_positives(d))
    for params in (None, rr_params_exact(p)):
        pred = baseline_predictor(d) if params is None else ldp_predictor_closed_form(d, params)
        assert eod_closed_form(d, params).value == equal_opportunity_diff(pred, d)


def test_sd_closed_form_branches():
    assert sd_closed_form(builtin_scenario("S1").dist).branch == GAMMA1_GT
    assert sd_closed_form(builtin_scenario("S1").dist).form == "independent"
    assert sd_closed_form(builtin_scenario("S2").dist).form == "dependent"
    sym = JointDistribution.from_mapping(
        ("0",), {(1, "0", 1): "0.3", (0, "0", 1): "0.2", (1, "0", 0): "0.3", (0, "0", 0): "0.2"}
    )
    assert sd_closed_form(sym).branch == GAMMA_EQ
    flipped = JointDistribution.from_mapping(
        ("0",), {(1, "0", 1): "0.1", (0, "0", 1): "0.4", (1, "0", 0): "0.4", (0, "0", 0): "0.1"}
    )
    cf = sd_closed_form(flipped)
    assert cf.branch == GAMMA1_LT and cf.value == -1


def test_sd_closed_form_requires_uniform_discrimination():
    with pytest.raises(AssumptionViolated):
        sd_closed_form(builtin_scenario("german").dist)


def test_eod_closed_form_requires_reliable_y():
    with pytest.raises(AssumptionViolated):
        eod_closed_form(builtin_scenario("S1").dist)


def test_eod_weights_under_dependence():
    """Reliable Y with X dependent on A: the per-group weights are required."""
    d = JointDistribution.from_mapping(
        ("0", "1"),
        {(1, "0", 1): "0.3", (0, "0", 1): "0.1", (1, "1", 1): "0.04", (0, "1", 1): "0.06",
         (1, "0", 0): "0.075", (0, "0", 0): "0.025", (1, "1", 0): "0.16", (0, "1", 0): "0.24"},
    )
    assert check_reliable_y(d).status == HOLDS
    pred = baseline_predictor(d)
    direct = equal_opportunity_diff(pred, d)
    cf = eod_closed_form(d)
    assert cf.form == "dependent" and cf.value == direct
    # pooling P[x | Y=1] across groups would give zero here
    assert direct != 0


@given(distributions())
def test_predictor_constant_in_a(d):
    assume(_both_groups(d))
    pred = ldp_predictor_closed_form(d, rr_params_exact(Fraction(1, 2)))
    assert all(v == 0 for v in conditional_sd(pred, d).values())
    from ldpfair.distribution import independence_check

    if independence_check(d).independent:
        assert statistical_disparity(pred, d) == 0


def test_constant_predictor_can_still_show_disparity():
    # X depends on A, so a prediction that ignores A still separates the groups
    d = builtin_scenario("S4").dist
    pred = baseline_predictor(d)
    assert pred.is_constant_in_a()
    assert statistical_disparity(pred, d) == Fraction(13, 50)
