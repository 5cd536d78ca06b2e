import json
import math
from fractions import Fraction

import numpy as np
import pytest

import ldpfair.simulation as sim
from ldpfair.distribution import JointDistribution, render_distribution
from ldpfair.errors import InvalidConfig, UnknownScenario
from ldpfair.model import flip_thresholds
from ldpfair.scenarios import builtin_scenario, default_eps_grid, list_scenarios
from ldpfair.simulation import (
    ExperimentConfig,
    aggregate,
    derive_seed,
    fit_majority,
    load_config,
    resolve_scenario,
    run_experiment,
    sample,
)

S1 = builtin_scenario("S1").dist


def test_sample_is_deterministic():
    a, b = sample(S1, 1000, 42), sample(S1, 1000, 42)
    assert a.records == b.records
    assert sample(S1, 1000, 43).records != a.records


def test_sample_marginal_concentration():
    s = sample(S1, 10**5, 1)
    # 3 sigma of a binomial proportion around 0.7
    assert abs(s.a.mean() - 0.7) <= 0.0043


def test_sample_cell_frequencies():
    s = sample(builtin_scenario("S6").dist, 10**5, 2)
    counts = sim.cell_counts(s.x_domain, s.a, s.x_idx, s.y)
    d = builtin_scenario("S6").dist
    for c, p in zip(counts, d.cells):
        p = float(p)
        assert abs(c / s.n - p) <= 4 * math.sqrt(p * (1 - p) / s.n) + 1e-12
        if p == 0:
            assert c == 0


def test_point_mass_sample():
    d = JointDistribution.from_mapping(
        ("0", "1"), {k: (1 if k == (1, "1", 0) else 0) for k in [(y, x, a) for y in (0, 1) for x in "01" for a in (0, 1)]}
    )
    s = sample(d, 50, 0)
    assert set(s.records) == {(0, "1", 1)}


def test_sample_rejects_empty():
    with pytest.raises(InvalidConfig):
        sample(S1, 0, 1)


@pytest.mark.parametrize(
    "kw",
    [
        dict(eps_grid=()),
        dict(eps_grid=(0.5, -1)),
        dict(eps_grid=(0,)),
        dict(eps_grid=(math.inf,)),
        dict(runs=0),
        dict(n=0),
        dict(seed=-1),
        dict(train_fraction=0),
        dict(train_fraction=1.5),
    ],
)
def test_config_validation(kw):
    base = dict(scenario="S1", eps_grid=(1.0,), n=10, runs=1)
    with pytest.raises(InvalidConfig):
        ExperimentConfig(**{**base, **kw})


def test_config_document_roundtrip(tmp_path):
    c = ExperimentConfig("S2", (0.5, 2), 100, 3, 7, 0.5)
    path = tmp_path / "c.json"
    path.write_text(json.dumps(c.to_dict()))
    assert load_config(path) == c
    path.write_text(json.dumps({**c.to_dict(), "bogus": 1}))
    with pytest.raises(InvalidConfig):
        load_config(path)


def test_resolve_scenario(tmp_path):
    assert resolve_scenario("S1") == S1
    path = tmp_path / "d.json"
    path.write_text(json.dumps(render_distribution(S1)))
    assert resolve_scenario(str(path)) == S1
    with pytest.raises(UnknownScenario):
        resolve_scenario("nope")


def test_unseen_cells_predict_zero():
    # flattened (y, x, a) order over x in {0, 1}: three negatives and one positive at (x=0, A=1)
    counts = np.array([0, 3, 0, 0, 0, 1, 0, 0])
    pred, unseen = fit_majority(("0", "1"), counts)
    assert pred[("0", 1)] == 0
    assert set(unseen) == {("0", 0), ("1", 0), ("1", 1)}
    assert all(pred[c] == 0 for c in unseen)
    pred, _ = fit_majority(("0", "1"), np.array([0, 2, 0, 0, 0, 2, 0, 0]))
    assert pred[("0", 1)] == 1  # ties go to the positive class


def test_seed_derivation_is_distinct():
    seeds = {derive_seed(5, r, t, e) for r in range(50) for t in range(3) for e in range(10)}
    assert len(seeds) == 50 * 3 * 10


@pytest.mark.slow
def test_s1_means_near_analytic():
    res = run_experiment(ExperimentConfig("S1", (8.0, 0.5), 10**5, 20, seed=3))
    rows = {(r.epsilon, r.metric, r.model): r for r in aggregate(res) if r.group_or_x == ""}
    assert abs(rows[(8.0, "sd", "ldp")].mean - 0.5) <= 0.02
    assert abs(rows[(0.5, "sd", "ldp")].mean - 0.0) <= 0.02


def test_rerun_is_identical_and_worker_independent():
    c = ExperimentConfig("S3", (0.3, 2.0), 2000, 6, seed=11)
    one = run_experiment(c)
    assert run_experiment(c).records == one.records
    assert run_experiment(c, workers=3).records == one.records
    assert [r.run for r in one.records[:6]] == list(range(6))


def test_test_records_are_never_randomized(monkeypatch):
    calls = []
    real = sim.randomize_column

    def spy(a, params, seed, start=0):
        calls.append(len(a))
        return 1 - real(a, params, seed, start)  # sabotage the training side only

    evaluated = []
    real_emp = sim.empirical_distribution

    def spy_emp(xs, counts):
        d = real_emp(xs, counts)
        evaluated.append(d)
        return d

    monkeypatch.setattr(sim, "randomize_column", spy)
    monkeypatch.setattr(sim, "empirical_distribution", spy_emp)
    c = ExperimentConfig("S1", (1.0, 4.0), 5000, 3, seed=2, train_fraction=0.8)
    run_experiment(c)
    assert calls == [4000] * 6
    assert len(evaluated) == 3
    for d in evaluated:
        assert abs(float(d.group_mass(1)) - 0.7) < 0.05


def test_full_train_fraction_scores_on_all_records(monkeypatch):
    sizes = []
    real = sim.empirical_distribution
    monkeypatch.setattr(sim, "empirical_distribution", lambda xs, c: sizes.append(int(c.sum())) or real(xs, c))
    run_experiment(ExperimentConfig("S1", (1.0,), 300, 2, train_fraction=1.0))
    assert sizes == [300, 300]


def test_aggregate_single_run():
    res = run_experiment(ExperimentConfig("S2", (1.0,), 500, 1, seed=4))
    rows = aggregate(res)
    sd = next(r for r in rows if r.metric == "sd" and r.model == "ldp")
    assert sd.std == 0.0 and sd.count == 1
    assert sd.mean == float(res.records[0].ldp.sd)
    assert aggregate(rows) == rows


def test_aggregate_counts_and_analytic():
    res = run_experiment(ExperimentConfig("S1", (0.5, 8.0), 2000, 5, seed=4))
    rows = aggregate(res)
    assert all(r.count == 5 for r in rows if r.metric == "sd")
    sd = next(r for r in rows if r.metric == "sd" and r.model == "ldp" and r.epsilon == 8.0)
    assert sd.analytic == Fraction(1, 2)
    assert sd.gap == pytest.approx(abs(sd.mean - 0.5))


def test_symmetric_scenario_gap_within_clt_bound():
    d = JointDistribution.from_mapping(
        ("0", "1"),
        {(1, "0", 1): "0.2", (0, "0", 1): "0.1", (1, "1", 1): "0.05", (0, "1", 1): "0.15",
         (1, "0", 0): "0.2", (0, "0", 0): "0.1", (1, "1", 0): "0.05", (0, "1", 0): "0.15"},
    )
    runs = 30
    res = run_experiment(ExperimentConfig("sym", (1.0,), 4000, runs, seed=8), dist=d)
    sd = next(r for r in aggregate(res) if r.metric == "sd" and r.model == "ldp")
    assert sd.analytic == 0
    assert sd.gap <= 3 * sd.std / math.sqrt(runs) + 1e-12


def _far_grid(name):
    th = flip_thresholds(builtin_scenario(name).dist).epsilons()
    return tuple(e for e in default_eps_grid(name) if all(abs(e - t) > 0.05 for t in th))


# Two tables have an exact zero outcome difference in one cell, so the sign
# the empirical model sees there is a coin flip at any sample size. S5 and S6
# have cells whose obfuscated difference at eps = 0.4 is too small to resolve
# at n = 1e5 even though eps is more than 0.05 from every threshold.
_KNOWN = {
    "adult": "exact tie in cell (x=0, A=0)",
    "lsac": "exact tie in cell (x=1, A=0)",
    "S5": "mean SD' off by 0.027 at eps=0.4",
    "S6": "94 of 100 tables match at eps=0.4",
}


@pytest.mark.slow
@pytest.mark.parametrize(
    "name",
    [pytest.param(n, marks=pytest.mark.xfail(reason=_KNOWN[n], strict=True)) if n in _KNOWN else n
     for n in list_scenarios()],
)
def test_convergence_to_closed_form(name):
    grid = _far_grid(name)
    res = run_experiment(ExperimentConfig(name, grid, 10**5, 100, seed=1), workers=1)
    for eps in grid:
        assert res.match_count(eps) >= 95, (eps, res.match_count(eps))
    for row in aggregate(res):
        if row.metric in ("sd", "eod", "accuracy") and row.gap is not None:
            assert row.gap <= 0.02, row
