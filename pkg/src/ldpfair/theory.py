"""Assumption checks and theorem-level verdicts for a (distribution, privacy level) pair."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .distribution import BITS, JointDistribution, delta_table, gamma_table, independence_check
from .mechanism import RRParams
from .metrics import FairnessReport, fairness_report
from .model import baseline_predictor, ldp_predictor_closed_form

HOLDS = "holds"
VIOLATED = "violated"
VACUOUS = "vacuous"


@dataclass(frozen=True)
class UniformDiscrimination:
    status: str
    direction: Optional[int] = None
    x_favoring_1: Optional[str] = None
    x_favoring_0: Optional[str] = None


@dataclass(frozen=True)
class ReliableY:
    status: str
    witness: Optional[str] = None
    deviation: Optional[Fraction] = None


@dataclass(frozen=True)
class AssumptionReport:
    uniform_discrimination: UniformDiscrimination
    reliable_y: ReliableY
    x_independent_a: bool
    independence_deviation: Fraction = Fraction(0)


def check_uniform_discrimination(dist: JointDistribution) -> UniformDiscrimination:
    """One group weakly dominates the other in conditional outcome difference at every x.

    Cells with zero mass have no conditional difference and are skipped; if
    no x has both groups defined the check is vacuous.
    """
    gamma = gamma_table(dist)
    favour1 = favour0 = None
    compared = False
    for x in dist.x_domain:
        g1, g0 = gamma[(x, 1)], gamma[(x, 0)]
        if g1 is None or g0 is None:
            continue
        compared = True
        if g1 > g0 and favour1 is None:
            favour1 = x
        elif g1 < g0 and favour0 is None:
            favour0 = x
    if not compared:
        return UniformDiscrimination(VACUOUS)
    if favour1 is not None and favour0 is not None:
        return UniformDiscrimination(VIOLATED, None, favour1, favour0)
    direction = 1 if favour1 is not None else -1 if favour0 is not None else 0
    return UniformDiscrimination(HOLDS, direction, favour1, favour0)


def check_reliable_y(dist: JointDistribution, tol: Optional[float] = None) -> ReliableY:
    """P[Y=1 | x, A=1] == P[Y=1 | x, A=0] wherever both cells carry mass.

    Exact equality by default; pass ``tol`` for empirical tables.
    """
    for x in dist.x_domain:
        m1, m0 = dist.cell_mass(x, 1), dist.cell_mass(x, 0)
        if not m1 or not m0:
            continue
        dev = abs(dist.p(1, x, 1) / m1 - dist.p(1, x, 0) / m0)
        if (dev != 0) if tol is None else (dev > tol):
            return ReliableY(VIOLATED, x, dev)
    return ReliableY(HOLDS)


def check_assumptions(dist: JointDistribution, tol: Optional[float] = None) -> AssumptionReport:
    ind = independence_check(dist)
    return AssumptionReport(
        check_uniform_discrimination(dist),
        check_reliable_y(dist, tol),
        ind.independent,
        ind.max_deviation,
    )


def gamma_prime(dist: JointDistribution, params: RRParams) -> dict[tuple[str, int], Optional[Fraction]]:
    """Conditional outcome difference on the obfuscated attribute, from the original table."""
    p = params.p_exact
    q = 1 - p
    delta = delta_table(dist)
    out = {}
    for x in dist.x_domain:
        for a in BITS:
            den = p * dist.cell_mass(x, a) + q * dist.cell_mass(x, 1 - a)
            out[(x, a)] = (p * delta[(x, a)] + q * delta[(x, 1 - a)]) / den if den else None
    return out


UNCHANGED = "unchanged"
PARTIALLY_REDUCED = "partially-reduced"
ELIMINATED = "eliminated"
FLIPPED = "flipped"
AMPLIFIED = "amplified"


def classify_regime(sd: Fraction, sd_prime: Fraction) -> str:
    if sd_prime == sd:
        return UNCHANGED
    if sd != 0 and sd_prime == 0:
        return ELIMINATED
    if sd * sd_prime < 0:
        return FLIPPED
    if abs(sd_prime) < abs(sd):
        return PARTIALLY_REDUCED
    # same sign (or from parity) but larger in magnitude
    return AMPLIFIED


def sandwiched(before, after) -> bool:
    """``after`` lies between 0 and ``before`` (and equals 0 when ``before`` does)."""
    if before > 0:
        return 0 <= after <= before
    if before < 0:
        return before <= after <= 0
    return after == 0


PASS = "pass"
FAIL = "fail"
NOT_APPLICABLE = "not-applicable"


@dataclass(frozen=True)
class TheoremCheck:
    """Outcome of one theorem statement on one instance.

    ``status`` is ``fail`` only when the premises hold and the statement
    does not; a statement that fails outside its premises is
    ``not-applicable``. A statement that holds is ``pass`` either way, with
    ``premises_hold`` telling the two apart.
    """

    name: str
    status: str
    premises_hold: bool
    failed_premise: Optional[str] = None


def _check(name: str, premise_failure: Optional[str], holds: bool) -> TheoremCheck:
    premises = premise_failure is None
    if holds:
        status = PASS
    else:
        status = FAIL if premises else NOT_APPLICABLE
    return TheoremCheck(name, status, premises, premise_failure)


def association_reversal(report: FairnessReport) -> bool:
    """Every CSD_x points one way (at least one strictly) while SD points the other."""
    vals = list(report.csd.values())
    if all(v >= 0 for v in vals) and any(v > 0 for v in vals) and report.sd < 0:
        return True
    return all(v <= 0 for v in vals) and any(v < 0 for v in vals) and report.sd > 0


def yule_paradox(report: FairnessReport) -> bool:
    return all(v == 0 for v in report.csd.values()) and report.sd != 0


@dataclass(frozen=True)
class Verdict:
    epsilon: float
    regime: str
    sd_pair: tuple[Fraction, Fraction]
    csd_pairs: dict[str, tuple[int, int]]
    eod_pair: Optional[tuple[Fraction, Fraction]]
    accuracy_pair: tuple[Fraction, Fraction]
    theorems: list[TheoremCheck] = field(default_factory=list)
    association_reversal: tuple[bool, bool] = (False, False)
    yule_paradox: tuple[bool, bool] = (False, False)

    def theorem(self, name: str) -> TheoremCheck:
        return next(t for t in self.theorems if t.name == name)


def theorem_verdict(
    dist: JointDistribution,
    params: RRParams,
    assumptions: Optional[AssumptionReport] = None,
) -> Verdict:
    """Compare baseline and LDP metrics and evaluate each theorem on the pair."""
    if assumptions is None:
        assumptions = check_assumptions(dist)
    base = fairness_report(baseline_predictor(dist), dist)
    ldp = fairness_report(ldp_predictor_closed_form(dist, params), dist)

    ud = assumptions.uniform_discrimination
    ud_failure = "uniform discrimination" if ud.status == VIOLATED else None
    direction = ud.direction or 0

    checks = [
        _check(
            "csd_sandwich",
            None,
            all(sandwiched(base.csd[x], ldp.csd[x]) for x in dist.x_domain),
        )
    ]
    if not assumptions.x_independent_a:
        sd_ind_failure = "X independent of A"
    else:
        sd_ind_failure = ud_failure
    checks.append(_check("sd_sandwich_independent", sd_ind_failure, sandwiched(base.sd, ldp.sd)))
    if direction > 0:
        ordered = ldp.sd <= base.sd
    elif direction < 0:
        ordered = base.sd <= ldp.sd
    else:
        ordered = ldp.sd == base.sd
    checks.append(_check("sd_ordering", ud_failure, ordered))

    eod_pair = None if base.eod is None or ldp.eod is None else (base.eod, ldp.eod)
    if eod_pair is None:
        eod_failure = "EOD defined"
    elif assumptions.reliable_y.status != HOLDS:
        eod_failure = "reliable Y"
    else:
        eod_failure = None
    checks.append(
        _check("eod_sandwich", eod_failure, eod_pair is not None and sandwiched(*eod_pair))
    )

    return Verdict(
        epsilon=params.epsilon,
        regime=classify_regime(base.sd, ldp.sd),
        sd_pair=(base.sd, ldp.sd),
        csd_pairs={x: (base.csd[x], ldp.csd[x]) for x in dist.x_domain},
        eod_pair=eod_pair,
        accuracy_pair=(base.accuracy, ldp.accuracy),
        theorems=checks,
        association_reversal=(association_reversal(base), association_reversal(ldp)),
        yule_paradox=(yule_paradox(base), yule_paradox(ldp)),
    )


@dataclass(frozen=True)
class AnalyzeReport:
    """Closed-form metrics of one distribution over a list of privacy levels."""

    scenario: str
    epsilons: tuple[float, ...]
    baseline: FairnessReport
    ldp: tuple[FairnessReport, ...]
    assumptions: AssumptionReport
    verdicts: tuple[Verdict, ...]


def analyze(dist: JointDistribution, epsilons, scenario: str = "") -> AnalyzeReport:
    from .mechanism import rr_params

    assumptions = check_assumptions(dist)
    base = fairness_report(baseline_predictor(dist), dist)
    params = [rr_params(e) for e in epsilons]
    return AnalyzeReport(
        scenario=scenario,
        epsilons=tuple(p.epsilon for p in params),
        baseline=base,
        ldp=tuple(fairness_report(ldp_predictor_closed_form(dist, p), dist) for p in params),
        assumptions=assumptions,
        verdicts=tuple(theorem_verdict(dist, p, assumptions) for p in params),
    )
