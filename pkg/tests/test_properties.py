"""Theorem-level statements as hypothesis properties, checked against the brute-force oracles."""

from fractions import Fraction

import numpy as np
from hypothesis import assume, given, settings, strategies as st

from ldpfair import generators
from ldpfair.distribution import BITS, delta_table, gamma_table, independence_check
from ldpfair.mechanism import obfuscate_distribution, rr_params_exact
from ldpfair.metrics import equal_opportunity_diff, statistical_disparity
from ldpfair.model import baseline_predictor, ldp_predictor_closed_form
from ldpfair.theory import HOLDS, VIOLATED, check_reliable_y, check_uniform_discrimination, sandwiched
from ldpfair.verify import SuiteResult, draw_families, run_all

import oracles
from strategies import distributions, reliable_y_distributions, retention


def _pair(d, p):
    t = oracles.table_of(d)
    return oracles.majority(t), oracles.majority(oracles.obfuscate(t, p)), t


@given(distributions(), retention)
def test_csd_sandwich(d, p):
    base, ldp, t = _pair(d, p)
    b, l = oracles.csd(t, base), oracles.csd(t, ldp)
    assert all(sandwiched(b[x], l[x]) for x in b)


@given(st.integers(0, 2**32 - 1), st.integers(2, 5), st.booleans(), retention)
@settings(max_examples=60)
def test_sd_sandwich_under_independence(seed, n_x, coarse, p):
    d = generators.random_uniform_discrimination(np.random.default_rng(seed), n_x, coarse, independent=True)
    assume(d.group_mass(0) and d.group_mass(1))
    base, ldp, t = _pair(d, p)
    assert sandwiched(oracles.sd(t, base), oracles.sd(t, ldp))


@given(distributions(), retention)
def test_sd_ordering(d, p):
    ud = check_uniform_discrimination(d)
    assume(ud.status != VIOLATED and d.group_mass(0) and d.group_mass(1))
    base, ldp, t = _pair(d, p)
    sd, sd_p = oracles.sd(t, base), oracles.sd(t, ldp)
    if ud.direction == 1:
        assert sd_p <= sd
    elif ud.direction == -1:
        assert sd <= sd_p
    else:
        assert sd_p == sd


@given(reliable_y_distributions(), retention)
def test_eod_sandwich(d, p):
    assume(d.positive_mass(0) and d.positive_mass(1))
    base, ldp, t = _pair(d, p)
    assert sandwiched(oracles.eod(t, base), oracles.eod(t, ldp))


@given(distributions(), retention)
def test_obfuscated_difference_identity(d, p):
    delta = delta_table(d)
    obf = delta_table(obfuscate_distribution(d, rr_params_exact(p)))
    for x in d.x_domain:
        for a in BITS:
            assert obf[(x, a)] == p * delta[(x, a)] + (1 - p) * delta[(x, 1 - a)]


@given(distributions(), retention)
def test_conditional_difference_order_preserved(d, p):
    g = gamma_table(d)
    h = gamma_table(obfuscate_distribution(d, rr_params_exact(p)))
    for x in d.x_domain:
        if None in (g[(x, 0)], g[(x, 1)]):
            continue
        diff, diff_p = g[(x, 1)] - g[(x, 0)], h[(x, 1)] - h[(x, 0)]
        if p == Fraction(1, 2):
            assert diff_p == 0
        else:
            assert (diff > 0) == (diff_p > 0) and (diff < 0) == (diff_p < 0)


@given(distributions(), retention)
def test_marginals_preserved(d, p):
    obf = obfuscate_distribution(d, rr_params_exact(p))
    assert sum(obf.cells) == 1
    for y in BITS:
        for x in d.x_domain:
            assert obf.p(y, x, 0) + obf.p(y, x, 1) == d.p(y, x, 0) + d.p(y, x, 1)


@given(distributions())
def test_uniform_channel_removes_all_disparity(d):
    assume(d.group_mass(0) and d.group_mass(1))
    ldp = ldp_predictor_closed_form(d, rr_params_exact(Fraction(1, 2)))
    assert ldp.is_constant_in_a()
    if independence_check(d).independent:
        assert statistical_disparity(ldp, d) == 0


def test_generators_respect_their_premises():
    fam = draw_families(60, seed=3, include_builtins=False)
    assert all(check_uniform_discrimination(d).status != VIOLATED for d in fam.uniform)
    assert all(independence_check(d).independent for d in fam.independent_uniform)
    assert all(check_reliable_y(d).status == HOLDS for d in fam.reliable_y)
    sizes = {len(d.x_domain) for d in fam.general}
    assert sizes == {2, 3, 4, 5}


def test_families_are_seed_determined():
    a = draw_families(10, seed=9, include_builtins=False)
    b = draw_families(10, seed=9, include_builtins=False)
    assert a == b


def test_small_verify_run_is_clean():
    results = run_all(40, seed=1)
    assert [r.name for r in results] == [
        "csd_sandwich", "sd_sandwich_independent", "sd_ordering", "eod_sandwich",
        "delta_identity", "gamma_prime_signs", "closed_form_equivalence",
        "channel_preservation", "path_equivalence",
    ]
    for r in results:
        assert r.checked > 0 and r.passed, r.violations


def test_suite_result_reports_counterexamples():
    r = SuiteResult("demo", checked=1)
    for _ in range(30):
        r.fail(draw_families(1, include_builtins=False).general[0], Fraction(1, 2), "bad")
    assert not r.passed and len(r.violations) == 20
    assert not SuiteResult("empty").passed


def test_equal_opportunity_closed_equivalence_on_builtins():
    from ldpfair.scenarios import list_scenarios, builtin_scenario

    for name in list_scenarios():
        d = builtin_scenario(name).dist
        t = oracles.table_of(d)
        for p in (Fraction(5, 8), Fraction(9, 10)):
            pred = ldp_predictor_closed_form(d, rr_params_exact(p))
            assert equal_opportunity_diff(pred, d) == oracles.eod(t, pred.y_hat)
        assert baseline_predictor(d).y_hat == oracles.majority(t)


@given(distributions(), retention)
def test_yule_case_is_invariant(d, p):
    assume(d.group_mass(0) and d.group_mass(1))
    base = baseline_predictor(d)
    assume(base.is_constant_in_a())
    ldp = ldp_predictor_closed_form(d, rr_params_exact(p))
    assert ldp.same_predictions(base)
    assert statistical_disparity(ldp, d) == statistical_disparity(base, d)
