"""Exact and Monte Carlo analysis of how randomized response on a binary
sensitive attribute changes the fairness of a majority-vote classifier."""

from .distribution import (
    JointDistribution,
    delta_table,
    gamma_table,
    independence_check,
    load_distribution,
    marginals,
    parse_distribution,
    render_distribution,
)
from .errors import (
    AssumptionViolated,
    BoundaryWarning,
    DistributionError,
    InvalidConfig,
    LdpFairError,
    UndefinedEOD,
    UnknownScenario,
    ZeroGroupMass,
)
from .mechanism import RRParams, obfuscate_distribution, randomize_column, rr_params, rr_params_exact
from .metrics import (
    FairnessReport,
    accuracy,
    conditional_sd,
    eod_closed_form,
    equal_opportunity_diff,
    fairness_report,
    sd_closed_form,
    statistical_disparity,
)
from .model import (
    PredictionTable,
    baseline_predictor,
    flip_thresholds,
    ldp_predictor_closed_form,
    predictor_from_distribution,
)
from .report import emit_report
from .scenarios import builtin_scenario, list_scenarios
from .simulation import ExperimentConfig, SweepResult, aggregate, run_experiment, sample
from .theory import (
    AnalyzeReport,
    analyze,
    check_assumptions,
    check_reliable_y,
    check_uniform_discrimination,
    classify_regime,
    theorem_verdict,
)

__version__ = "0.1.0"
