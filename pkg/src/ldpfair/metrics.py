"""Group fairness metrics of a deterministic predictor against a distribution.

Metrics always condition on the true sensitive attribute, including for the
LDP model: the model is trained on obfuscated data but evaluated on
original inputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .distribution import BITS, JointDistribution, delta_table, independence_check
from .errors import AssumptionViolated, UndefinedEOD, ZeroGroupMass
from .mechanism import RRParams, compare_exp_eps
from .model import PredictionTable


def acceptance_rate(pred: PredictionTable, dist: JointDistribution, a: int) -> Fraction:
    """P[Y_hat = 1 | A = a]."""
    mass = dist.group_mass(a)
    if mass == 0:
        raise ZeroGroupMass(f"group A={a} has zero probability mass")
    return sum((pred[(x, a)] * dist.cell_mass(x, a) for x in dist.x_domain), Fraction(0)) / mass


def true_positive_rate(pred: PredictionTable, dist: JointDistribution, a: int) -> Fraction:
    """P[Y_hat = 1 | Y = 1, A = a]."""
    mass = dist.positive_mass(a)
    if mass == 0:
        raise UndefinedEOD(f"group A={a} has no positive-outcome mass")
    return sum((pred[(x, a)] * dist.p(1, x, a) for x in dist.x_domain), Fraction(0)) / mass


def statistical_disparity(pred: PredictionTable, dist: JointDistribution) -> Fraction:
    return acceptance_rate(pred, dist, 1) - acceptance_rate(pred, dist, 0)


def conditional_sd(pred: PredictionTable, dist: JointDistribution) -> dict[str, int]:
    # a deterministic predictor makes the conditional rate the prediction itself
    return {x: pred[(x, 1)] - pred[(x, 0)] for x in dist.x_domain}


def equal_opportunity_diff(pred: PredictionTable, dist: JointDistribution) -> Fraction:
    return true_positive_rate(pred, dist, 1) - true_positive_rate(pred, dist, 0)


def accuracy(pred: PredictionTable, dist: JointDistribution) -> Fraction:
    total = Fraction(0)
    for x in dist.x_domain:
        for a in BITS:
            total += dist.p(1, x, a) if pred[(x, a)] else dist.p(0, x, a)
    return total


@dataclass(frozen=True)
class FairnessReport:
    sd: Fraction
    csd: dict[str, int]
    eod: Optional[Fraction]
    accuracy: Fraction
    predictor_provenance: str
    acceptance_rate: dict[int, Fraction] = field(default_factory=dict)
    tpr: dict[int, Optional[Fraction]] = field(default_factory=dict)


def fairness_report(pred: PredictionTable, dist: JointDistribution) -> FairnessReport:
    """All metrics at once. EOD is ``None`` when a group has no positive mass."""
    rates = {a: acceptance_rate(pred, dist, a) for a in BITS}
    tpr = {}
    for a in BITS:
        try:
            tpr[a] = true_positive_rate(pred, dist, a)
        except UndefinedEOD:
            tpr[a] = None
    eod = tpr[1] - tpr[0] if None not in tpr.values() else None
    return FairnessReport(
        sd=rates[1] - rates[0],
        csd=conditional_sd(pred, dist),
        eod=eod,
        accuracy=accuracy(pred, dist),
        predictor_provenance=pred.provenance,
        acceptance_rate=rates,
        tpr=tpr,
    )


# Closed-form quantifications. These work from the sign pattern of the
# mass differences and never build a prediction table.

GAMMA1_GT = "exists x: gamma1 > gamma0"
GAMMA_EQ = "for all x: gamma1 = gamma0"
GAMMA1_LT = "exists x: gamma1 < gamma0"

_BRANCH = {1: GAMMA1_GT, 0: GAMMA_EQ, -1: GAMMA1_LT}


@dataclass(frozen=True)
class ClosedForm:
    value: Fraction
    branch: str
    form: str  # "independent" sums P[X=x]; "dependent" sums P[X=x | A=a]


def _primed(params: Optional[RRParams]) -> bool:
    return params is not None and params.p_exact != 1


def _ge(params: RRParams, ratio: Fraction) -> bool:
    return compare_exp_eps(params, ratio) >= 0


def _le(params: RRParams, ratio: Fraction) -> bool:
    return compare_exp_eps(params, ratio) <= 0


def _gt(params: RRParams, ratio: Fraction) -> bool:
    return compare_exp_eps(params, ratio) > 0


def _sd_sets(delta, x_domain, direction: int, params: Optional[RRParams]):
    """Split x values into the sets that carry mass in the SD decomposition.

    Returns ``(both, lead)``: ``both`` holds x predicted positive for both
    groups, ``lead`` the x predicted positive only for the dominating group.
    """
    both, lead = [], []
    for x in x_domain:
        d1, d0 = delta[(x, 1)], delta[(x, 0)]
        if direction == -1:
            # mirror the groups so the dominating one is always "own"
            d1, d0 = d0, d1
        if d1 >= 0 and d0 >= 0:
            both.append(x)
            continue
        if direction == 0:
            continue
        if not _primed(params):
            if d1 >= 0 and d0 < 0:
                lead.append(x)
            continue
        if d1 > 0 and d0 < 0 and _ge(params, -d0 / d1):
            if _le(params, -d1 / d0):
                both.append(x)
            elif _gt(params, -d1 / d0):
                lead.append(x)
    return both, lead


def sd_closed_form(dist: JointDistribution, params: Optional[RRParams] = None) -> ClosedForm:
    """Statistical disparity from the sign pattern of the mass differences.

    Without ``params`` this is the baseline model's SD; with ``params`` it is
    the LDP model's SD, using the threshold conditions on ``e^eps``. When X
    and A are independent the masses are P[X=x]; otherwise the conditional
    masses P[X=x | A=a] are used and the "both positive" set contributes
    their difference.

    Raises:
        AssumptionViolated: uniform discrimination fails.
        ZeroGroupMass: a group has no mass.
    """
    from .theory import check_uniform_discrimination

    ud = check_uniform_discrimination(dist)
    if ud.status == "violated":
        raise AssumptionViolated(
            f"uniform discrimination fails: x={ud.x_favoring_1} favours group 1, "
            f"x={ud.x_favoring_0} favours group 0"
        )
    direction = ud.direction or 0
    for a in BITS:
        if dist.group_mass(a) == 0:
            raise ZeroGroupMass(f"group A={a} has zero probability mass")

    delta = delta_table(dist)
    both, lead = _sd_sets(delta, dist.x_domain, direction, params)
    sign = -1 if direction == -1 else 1
    if independence_check(dist).independent:
        value = sign * sum((dist.x_mass(x) for x in lead), Fraction(0))
        return ClosedForm(value, _BRANCH[direction], "independent")

    mass = {a: dist.group_mass(a) for a in BITS}
    cond = {(x, a): dist.cell_mass(x, a) / mass[a] for x in dist.x_domain for a in BITS}
    dominant = 0 if direction == -1 else 1
    value = sum((cond[(x, 1)] - cond[(x, 0)] for x in both), Fraction(0))
    value += sign * sum((cond[(x, dominant)] for x in lead), Fraction(0))
    return ClosedForm(value, _BRANCH[direction], "dependent")


def _index_set(delta, x_domain, a: int, params: Optional[RRParams]) -> list[str]:
    """x values whose prediction for group ``a`` is positive."""
    out = []
    for x in x_domain:
        own, other = delta[(x, a)], delta[(x, 1 - a)]
        if not _primed(params):
            if own >= 0:
                out.append(x)
        elif own >= 0 and other >= 0:
            out.append(x)
        elif own > 0 and other < 0 and _ge(params, -other / own):
            out.append(x)
        elif own < 0 and other > 0 and _le(params, -other / own):
            out.append(x)
    return out


def eod_closed_form(
    dist: JointDistribution, params: Optional[RRParams] = None, tol: Optional[float] = None
) -> ClosedForm:
    """Equal opportunity difference under the reliable-Y assumption.

    Sums P[X=x | Y=1] over the positive index set of each group when X and A
    are independent. In general the per-group weights P[X=x | Y=1, A=a] are
    required, since reliable Y alone does not make them equal.

    Raises:
        AssumptionViolated: reliable Y fails.
        UndefinedEOD: a group has no positive-outcome mass.
    """
    from .theory import check_reliable_y

    ry = check_reliable_y(dist, tol=tol)
    if ry.status != "holds":
        raise AssumptionViolated(
            f"reliable Y fails at x={ry.witness} (deviation {ry.deviation})"
        )
    pos = {a: dist.positive_mass(a) for a in BITS}
    if 0 in pos.values():
        raise UndefinedEOD("a group has no positive-outcome mass")

    delta = delta_table(dist)
    sets = {a: _index_set(delta, dist.x_domain, a, params) for a in BITS}
    if independence_check(dist).independent:
        total_pos = pos[0] + pos[1]
        weight = {
            (x, a): (dist.p(1, x, 0) + dist.p(1, x, 1)) / total_pos
            for x in dist.x_domain
            for a in BITS
        }
        form = "independent"
    else:
        weight = {(x, a): dist.p(1, x, a) / pos[a] for x in dist.x_domain for a in BITS}
        form = "dependent"
    value = sum((weight[(x, 1)] for x in sets[1]), Fraction(0)) - sum(
        (weight[(x, 0)] for x in sets[0]), Fraction(0)
    )
    return ClosedForm(value, "reliable-y", form)
