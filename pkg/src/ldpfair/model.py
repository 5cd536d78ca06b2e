"""Deterministic majority-vote predictors for the baseline and the LDP model.

A cell ``(x, a)`` is predicted positive iff its positive-minus-negative mass
is non-negative. The LDP model applies the same rule to the obfuscated
table; :func:`ldp_predictor_closed_form` reaches the same predictions from
the original table by comparing ``e^eps`` with ratios of opposite-signed
masses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .distribution import BITS, JointDistribution, delta_table
from .mechanism import RRParams, compare_exp_eps

BASELINE = "baseline"
LDP_CLOSED_FORM = "ldp-closed-form"
FROM_DISTRIBUTION = "from-distribution"


@dataclass(frozen=True)
class PredictionTable:
    y_hat: dict[tuple[str, int], int]
    provenance: str = FROM_DISTRIBUTION

    def __getitem__(self, key: tuple[str, int]) -> int:
        return self.y_hat[key]

    def same_predictions(self, other: "PredictionTable") -> bool:
        return self.y_hat == other.y_hat

    def is_constant_in_a(self) -> bool:
        xs = {x for x, _ in self.y_hat}
        return all(self.y_hat[(x, 0)] == self.y_hat[(x, 1)] for x in xs)

    def __hash__(self):
        return hash((tuple(sorted(self.y_hat.items())), self.provenance))


def _majority(delta: dict[tuple[str, int], Fraction], provenance: str) -> PredictionTable:
    return PredictionTable({k: int(d >= 0) for k, d in delta.items()}, provenance)


def baseline_predictor(dist: JointDistribution) -> PredictionTable:
    return _majority(delta_table(dist), BASELINE)


def predictor_from_distribution(dist_prime: JointDistribution) -> PredictionTable:
    """Majority rule applied to an obfuscated (or empirical) distribution."""
    return _majority(delta_table(dist_prime), FROM_DISTRIBUTION)


def cell_prediction(own: Fraction, other: Fraction, params: RRParams) -> int:
    """LDP prediction for a cell from its own and the other group's mass difference.

    Three-way case split on the signs of the two differences: a positive
    cell facing a negative one stays positive iff ``e^eps >= -other/own``; a
    negative cell facing a positive one turns positive iff ``e^eps <= -other/own``.
    """
    if params.p_exact == 1:
        # infinite epsilon: the channel is the identity
        return int(own >= 0)
    if own >= 0 and other >= 0:
        return 1
    if own <= 0 and other <= 0:
        return 0
    ratio = -other / own
    cmp = compare_exp_eps(params, ratio)
    if own > 0:
        return int(cmp >= 0)
    return int(cmp <= 0)


def ldp_predictor_closed_form(dist: JointDistribution, params: RRParams) -> PredictionTable:
    delta = delta_table(dist)
    y_hat = {
        (x, a): cell_prediction(delta[(x, a)], delta[(x, 1 - a)], params)
        for x in dist.x_domain
        for a in BITS
    }
    return PredictionTable(y_hat, LDP_CLOSED_FORM)


BOTH_NONNEG = "both-nonneg"
BOTH_NONPOS = "both-nonpos"
A1POS_A0NEG = "a1pos-a0neg"
A1NEG_A0POS = "a1neg-a0pos"
DEGENERATE = "degenerate"


@dataclass(frozen=True)
class ThresholdRow:
    """Flip structure of one x value.

    ``ratio_0_over_1`` is ``-delta0/delta1`` and ``ratio_1_over_0`` is
    ``-delta1/delta0`` (``None`` when the denominator is zero).
    ``flip_epsilon[a]`` is the privacy level at which group ``a``'s
    prediction changes, and ``below_threshold[a]`` is the prediction it
    takes below that level. A turn to positive already holds at the
    threshold itself; a turn to negative only strictly below it.
    """

    x: str
    case: str
    delta1: Fraction
    delta0: Fraction
    ratio_0_over_1: Optional[Fraction]
    ratio_1_over_0: Optional[Fraction]
    epsilon_star: Optional[float] = None
    flipping_group: Optional[int] = None
    flip_epsilon: dict[int, Optional[float]] = field(default_factory=dict)
    below_threshold: dict[int, Optional[int]] = field(default_factory=dict)
    governing_ratio: Optional[Fraction] = None


@dataclass(frozen=True)
class ThresholdTable:
    rows: dict[str, ThresholdRow]

    def __getitem__(self, x: str) -> ThresholdRow:
        return self.rows[x]

    def epsilons(self) -> list[float]:
        return sorted(r.epsilon_star for r in self.rows.values() if r.epsilon_star is not None)


def _case_tag(d1: Fraction, d0: Fraction) -> str:
    if d1 == 0 and d0 == 0:
        return DEGENERATE
    if d1 >= 0 and d0 >= 0:
        return BOTH_NONNEG
    if d1 <= 0 and d0 <= 0:
        return BOTH_NONPOS
    return A1POS_A0NEG if d1 > 0 else A1NEG_A0POS


def flip_thresholds(dist: JointDistribution) -> ThresholdTable:
    """Per x, the case tag and the epsilon at which a group's LDP prediction flips.

    Only opposite-signed pairs flip. The governing ratio is the one that is
    at least 1: the cell with the larger absolute mass difference wins for
    every epsilon above ``ln`` of it, and below it the other cell's sign
    takes over both groups.
    """
    delta = delta_table(dist)
    rows = {}
    for x in dist.x_domain:
        d1, d0 = delta[(x, 1)], delta[(x, 0)]
        r01 = -d0 / d1 if d1 != 0 else None
        r10 = -d1 / d0 if d0 != 0 else None
        case = _case_tag(d1, d0)
        if case not in (A1POS_A0NEG, A1NEG_A0POS):
            rows[x] = ThresholdRow(x, case, d1, d0, r01, r10, flip_epsilon={0: None, 1: None},
                                   below_threshold={0: None, 1: None})
            continue
        # the negative-side group flips when its opponent dominates in magnitude
        pos_group = 1 if d1 > 0 else 0
        neg_group = 1 - pos_group
        d_pos, d_neg = (d1, d0) if pos_group == 1 else (d0, d1)
        if abs(d_pos) >= abs(d_neg):
            group, ratio, new_value = neg_group, d_pos / -d_neg, 1
        else:
            group, ratio, new_value = pos_group, -d_neg / d_pos, 0
        eps_star = math.log(ratio)
        flips = {0: None, 1: None}
        below = {0: None, 1: None}
        flips[group] = eps_star
        below[group] = new_value
        rows[x] = ThresholdRow(
            x, case, d1, d0, r01, r10, eps_star, group, flips, below, governing_ratio=ratio
        )
    return ThresholdTable(rows)
