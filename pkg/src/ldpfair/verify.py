"""Property suites that check every theorem-level statement on many exact instances.

Each suite walks a family of distributions and the rational retention
probabilities in :data:`RATIONAL_PS`, and records every counterexample it
finds. :func:`run_all` is what the ``verify`` command runs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .distribution import BITS, JointDistribution, delta_table, gamma_table, independence_check
from .errors import UndefinedEOD
from .generators import (
    random_distribution,
    random_reliable_y_distribution,
    random_uniform_discrimination,
)
from .mechanism import obfuscate_distribution, rr_params_exact
from .metrics import (
    eod_closed_form,
    equal_opportunity_diff,
    sd_closed_form,
    statistical_disparity,
)
from .model import baseline_predictor, ldp_predictor_closed_form, predictor_from_distribution
from .scenarios import NAMES, builtin_scenario
from .theory import (
    HOLDS,
    VIOLATED,
    check_reliable_y,
    check_uniform_discrimination,
    gamma_prime,
    sandwiched,
)

RATIONAL_PS = (Fraction(1, 2), Fraction(5, 8), Fraction(3, 4), Fraction(9, 10), Fraction(1))


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    violations: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations and self.checked > 0

    def fail(self, dist: JointDistribution, p: Optional[Fraction], msg: str):
        # keep the report readable when something is badly wrong
        if len(self.violations) < 20:
            self.violations.append(f"{msg} at p={p} for {dist!r}")


def _both_groups(dists):
    # SD is undefined when a group is empty
    return [d for d in dists if d.group_mass(0) and d.group_mass(1)]


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def csd_sandwich(dists, ps=RATIONAL_PS) -> SuiteResult:
    res = SuiteResult("csd_sandwich")
    for d in dists:
        base = baseline_predictor(d)
        for p in ps:
            ldp = ldp_predictor_closed_form(d, rr_params_exact(p))
            for x in d.x_domain:
                res.checked += 1
                before = base[(x, 1)] - base[(x, 0)]
                after = ldp[(x, 1)] - ldp[(x, 0)]
                if not sandwiched(before, after):
                    res.fail(d, p, f"CSD_{x}: {before} -> {after}")
    return res


def sd_sandwich_independent(dists, ps=RATIONAL_PS) -> SuiteResult:
    res = SuiteResult("sd_sandwich_independent")
    for d in _both_groups(dists):
        sd = statistical_disparity(baseline_predictor(d), d)
        for p in ps:
            res.checked += 1
            sd_p = statistical_disparity(ldp_predictor_closed_form(d, rr_params_exact(p)), d)
            if not sandwiched(sd, sd_p):
                res.fail(d, p, f"SD {sd} -> {sd_p}")
    return res


def sd_ordering(dists, ps=RATIONAL_PS) -> SuiteResult:
    res = SuiteResult("sd_ordering")
    for d in _both_groups(dists):
        direction = check_uniform_discrimination(d).direction or 0
        sd = statistical_disparity(baseline_predictor(d), d)
        for p in ps:
            res.checked += 1
            sd_p = statistical_disparity(ldp_predictor_closed_form(d, rr_params_exact(p)), d)
            ok = sd_p <= sd if direction > 0 else sd <= sd_p if direction < 0 else sd_p == sd
            if not ok:
                res.fail(d, p, f"direction {direction}: SD {sd} -> {sd_p}")
    return res


def eod_sandwich(dists, ps=RATIONAL_PS) -> SuiteResult:
    res = SuiteResult("eod_sandwich")
    for d in dists:
        try:
            eod = equal_opportunity_diff(baseline_predictor(d), d)
        except UndefinedEOD:
            continue
        for p in ps:
            res.checked += 1
            eod_p = equal_opportunity_diff(ldp_predictor_closed_form(d, rr_params_exact(p)), d)
            if not sandwiched(eod, eod_p):
                res.fail(d, p, f"EOD {eod} -> {eod_p}")
    return res


def delta_identity(dists, ps=RATIONAL_PS) -> SuiteResult:
    res = SuiteResult("delta_identity")
    for d in dists:
        delta = delta_table(d)
        for p in ps:
            obf = delta_table(obfuscate_distribution(d, rr_params_exact(p)))
            for x in d.x_domain:
                for a in BITS:
                    res.checked += 1
                    expect = p * delta[(x, a)] + (1 - p) * delta[(x, 1 - a)]
                    if obf[(x, a)] != expect:
                        res.fail(d, p, f"delta'({x},{a}) = {obf[(x, a)]} != {expect}")
    return res


def gamma_prime_signs(dists, ps=RATIONAL_PS) -> SuiteResult:
    """Order of the two groups' conditional differences survives obfuscation.

    At p = 1/2 both obfuscated values coincide, so only equality is checked
    there. The closed-form value is also compared with the conditional
    difference of the obfuscated table.
    """
    res = SuiteResult("gamma_prime_signs")
    for d in dists:
        gamma = gamma_table(d)
        for p in ps:
            params = rr_params_exact(p)
            gp = gamma_prime(d, params)
            direct = gamma_table(obfuscate_distribution(d, params))
            if gp != direct:
                res.fail(d, p, "closed-form gamma' differs from obfuscated table")
            for x in d.x_domain:
                g1, g0, h1, h0 = gamma[(x, 1)], gamma[(x, 0)], gp[(x, 1)], gp[(x, 0)]
                if None in (g1, g0, h1, h0):
                    continue
                res.checked += 1
                want = 0 if p == Fraction(1, 2) else _sign(g1 - g0)
                if _sign(h1 - h0) != want:
                    res.fail(d, p, f"x={x}: sign {_sign(h1 - h0)} expected {want}")
            # dominance survives too, once every cell carries mass
            full = all(d.cell_mass(x, a) for x in d.x_domain for a in BITS)
            if full and check_uniform_discrimination(d).status != VIOLATED:
                res.checked += 1
                if check_uniform_discrimination(obfuscate_distribution(d, params)).status == VIOLATED:
                    res.fail(d, p, "uniform discrimination lost after obfuscation")
    return res


def closed_form_equivalence(ud_dists, ry_dists, ps=RATIONAL_PS) -> SuiteResult:
    res = SuiteResult("closed_form_equivalence")
    for d in _both_groups(ud_dists):
        for params in (None,) + tuple(rr_params_exact(p) for p in ps):
            pred = baseline_predictor(d) if params is None else ldp_predictor_closed_form(d, params)
            res.checked += 1
            got = sd_closed_form(d, params).value
            want = statistical_disparity(pred, d)
            if got != want:
                res.fail(d, params and params.p, f"SD closed form {got} != direct {want}")
    for d in ry_dists:
        try:
            equal_opportunity_diff(baseline_predictor(d), d)
        except UndefinedEOD:
            continue
        for params in (None,) + tuple(rr_params_exact(p) for p in ps):
            pred = baseline_predictor(d) if params is None else ldp_predictor_closed_form(d, params)
            res.checked += 1
            got = eod_closed_form(d, params).value
            want = equal_opportunity_diff(pred, d)
            if got != want:
                res.fail(d, params and params.p, f"EOD closed form {got} != direct {want}")
    return res


def channel_preservation(dists, ps=RATIONAL_PS) -> SuiteResult:
    res = SuiteResult("channel_preservation")
    for d in dists:
        for p in ps:
            res.checked += 1
            obf = obfuscate_distribution(d, rr_params_exact(p))
            if sum(obf.cells) != 1:
                res.fail(d, p, "mass not preserved")
            for y in BITS:
                for x in d.x_domain:
                    if obf.p(y, x, 0) + obf.p(y, x, 1) != d.p(y, x, 0) + d.p(y, x, 1):
                        res.fail(d, p, f"(Y,X)=({y},{x}) marginal changed")
            for q in ps:
                twice = obfuscate_distribution(obf, rr_params_exact(q))
                once = obfuscate_distribution(d, rr_params_exact(p * q + (1 - p) * (1 - q)))
                if twice != once:
                    res.fail(d, p, f"composition with q={q} differs")
    return res


def path_equivalence(dists, ps=RATIONAL_PS) -> SuiteResult:
    res = SuiteResult("path_equivalence")
    for d in dists:
        for p in ps:
            res.checked += 1
            params = rr_params_exact(p)
            closed = ldp_predictor_closed_form(d, params)
            via = predictor_from_distribution(obfuscate_distribution(d, params))
            if not closed.same_predictions(via):
                res.fail(d, p, "closed-form prediction differs from obfuscated-table prediction")
    return res


@dataclass
class Families:
    general: list[JointDistribution]
    uniform: list[JointDistribution]
    independent_uniform: list[JointDistribution]
    reliable_y: list[JointDistribution]


def draw_families(n_random: int = 1000, seed: int = 0, include_builtins: bool = True) -> Families:
    """Draw each family from its own child stream; every third draw is coarse."""
    streams = [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(5)]
    sizes = streams[4].integers(2, 6, size=(4, n_random))

    def family(rng, draw: Callable, row: int, **kw):
        return [draw(rng, int(sizes[row, i]), coarse=(i % 3 == 0), **kw) for i in range(n_random)]

    fam = Families(
        general=family(streams[0], random_distribution, 0),
        uniform=family(streams[1], random_uniform_discrimination, 1),
        independent_uniform=family(streams[2], random_uniform_discrimination, 2, independent=True),
        reliable_y=family(streams[3], random_reliable_y_distribution, 3),
    )
    if include_builtins:
        for name in NAMES:
            d = builtin_scenario(name).dist
            fam.general.append(d)
            if check_uniform_discrimination(d).status != VIOLATED:
                fam.uniform.append(d)
                if independence_check(d).independent:
                    fam.independent_uniform.append(d)
            if check_reliable_y(d).status == HOLDS:
                fam.reliable_y.append(d)
    return fam


def run_all(n_random: int = 1000, seed: int = 0, families: Optional[Families] = None) -> list[SuiteResult]:
    fam = families or draw_families(n_random, seed)
    return [
        csd_sandwich(fam.general),
        sd_sandwich_independent(fam.independent_uniform),
        sd_ordering(fam.uniform),
        eod_sandwich(fam.reliable_y),
        delta_identity(fam.general),
        gamma_prime_signs(fam.general),
        closed_form_equivalence(fam.uniform + fam.independent_uniform, fam.reliable_y),
        channel_preservation(fam.general),
        path_equivalence(fam.general),
    ]
