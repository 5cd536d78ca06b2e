"""Serialization of reports to CSV and JSON.

Numbers are written with 12 significant digits. JSON documents also carry
every exact value as a ``"num/den"`` string so they can be read back into
the original in-memory structures.
"""

from __future__ import annotations

import csv
import io
import json
import math
from fractions import Fraction
from typing import Optional

from .metrics import FairnessReport
from .model import ThresholdTable
from .simulation import AggregateRow, SweepResult, aggregate, metric_items
from .theory import (
    AnalyzeReport,
    AssumptionReport,
    ReliableY,
    TheoremCheck,
    UniformDiscrimination,
    Verdict,
)
from .verify import SuiteResult

SWEEP_HEADER = [
    "scenario",
    "epsilon",
    "run",
    "metric",
    "group_or_x",
    "baseline",
    "ldp",
    "analytic_baseline",
    "analytic_ldp",
]


def num(v) -> Optional[float]:
    """Round to 12 significant digits; ``None`` passes through."""
    if v is None:
        return None
    f = float(v)
    if not math.isfinite(f):
        return f
    return float(f"{f:.12g}")


def num_text(v) -> str:
    return "" if v is None else f"{float(v):.12g}"


def exact(v) -> Optional[str]:
    if v is None:
        return None
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def unexact(s) -> Optional[Fraction]:
    return None if s is None else Fraction(s)


def _dumps(doc) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


# dict converters -----------------------------------------------------------


def fairness_to_dict(r: FairnessReport) -> dict:
    return {
        "sd": exact(r.sd),
        "csd": {x: v for x, v in r.csd.items()},
        "eod": exact(r.eod),
        "accuracy": exact(r.accuracy),
        "provenance": r.predictor_provenance,
        "acceptance_rate": {str(a): exact(v) for a, v in r.acceptance_rate.items()},
        "tpr": {str(a): exact(v) for a, v in r.tpr.items()},
    }


def fairness_from_dict(d: dict) -> FairnessReport:
    return FairnessReport(
        sd=unexact(d["sd"]),
        csd={x: int(v) for x, v in d["csd"].items()},
        eod=unexact(d["eod"]),
        accuracy=unexact(d["accuracy"]),
        predictor_provenance=d["provenance"],
        acceptance_rate={int(a): unexact(v) for a, v in d["acceptance_rate"].items()},
        tpr={int(a): unexact(v) for a, v in d["tpr"].items()},
    )


def assumptions_to_dict(r: AssumptionReport) -> dict:
    ud, ry = r.uniform_discrimination, r.reliable_y
    return {
        "uniform_discrimination": {
            "status": ud.status,
            "direction": ud.direction,
            "x_favoring_1": ud.x_favoring_1,
            "x_favoring_0": ud.x_favoring_0,
        },
        "reliable_y": {
            "status": ry.status,
            "witness": ry.witness,
            "deviation": exact(ry.deviation),
        },
        "x_independent_a": r.x_independent_a,
        "independence_deviation": exact(r.independence_deviation),
    }


def assumptions_from_dict(d: dict) -> AssumptionReport:
    ud, ry = d["uniform_discrimination"], d["reliable_y"]
    return AssumptionReport(
        UniformDiscrimination(ud["status"], ud["direction"], ud["x_favoring_1"], ud["x_favoring_0"]),
        ReliableY(ry["status"], ry["witness"], unexact(ry["deviation"])),
        d["x_independent_a"],
        unexact(d["independence_deviation"]),
    )


def _pair(p):
    return None if p is None else [exact(p[0]), exact(p[1])]


def _unpair(p):
    return None if p is None else (unexact(p[0]), unexact(p[1]))


def verdict_to_dict(v: Verdict) -> dict:
    return {
        "epsilon": v.epsilon,
        "regime": v.regime,
        "sd_pair": _pair(v.sd_pair),
        "csd_pairs": {x: list(p) for x, p in v.csd_pairs.items()},
        "eod_pair": _pair(v.eod_pair),
        "accuracy_pair": _pair(v.accuracy_pair),
        "theorems": [
            {
                "name": t.name,
                "status": t.status,
                "premises_hold": t.premises_hold,
                "failed_premise": t.failed_premise,
            }
            for t in v.theorems
        ],
        "association_reversal": list(v.association_reversal),
        "yule_paradox": list(v.yule_paradox),
    }


def verdict_from_dict(d: dict) -> Verdict:
    return Verdict(
        epsilon=d["epsilon"],
        regime=d["regime"],
        sd_pair=_unpair(d["sd_pair"]),
        csd_pairs={x: (int(p[0]), int(p[1])) for x, p in d["csd_pairs"].items()},
        eod_pair=_unpair(d["eod_pair"]),
        accuracy_pair=_unpair(d["accuracy_pair"]),
        theorems=[TheoremCheck(**t) for t in d["theorems"]],
        association_reversal=tuple(d["association_reversal"]),
        yule_paradox=tuple(d["yule_paradox"]),
    )


def analyze_to_dict(r: AnalyzeReport, per_group: bool = False) -> dict:
    """The analyze document: rounded ``metrics`` plus an exact sibling block."""
    xs = list(r.baseline.csd)
    metrics = {
        "sd": num(r.baseline.sd),
        "sd_prime": [num(l.sd) for l in r.ldp],
        "csd": {x: r.baseline.csd[x] for x in xs},
        "csd_prime": {x: [l.csd[x] for l in r.ldp] for x in xs},
        "eod": num(r.baseline.eod),
        "eod_prime": [num(l.eod) for l in r.ldp],
        "accuracy": num(r.baseline.accuracy),
        "accuracy_prime": [num(l.accuracy) for l in r.ldp],
    }
    if per_group:
        for name in ("acceptance_rate", "tpr"):
            metrics[name] = {str(a): num(v) for a, v in getattr(r.baseline, name).items()}
            metrics[name + "_prime"] = {
                str(a): [num(getattr(l, name)[a]) for l in r.ldp] for a in (0, 1)
            }
    return {
        "scenario": r.scenario,
        "epsilon": list(r.epsilons),
        "metrics": metrics,
        "metrics_exact": {
            "baseline": fairness_to_dict(r.baseline),
            "ldp": [fairness_to_dict(l) for l in r.ldp],
        },
        "assumptions": assumptions_to_dict(r.assumptions),
        "verdict": {
            "regime": [v.regime for v in r.verdicts],
            "detail": [verdict_to_dict(v) for v in r.verdicts],
        },
    }


def analyze_from_dict(d: dict) -> AnalyzeReport:
    ex = d["metrics_exact"]
    return AnalyzeReport(
        scenario=d["scenario"],
        epsilons=tuple(d["epsilon"]),
        baseline=fairness_from_dict(ex["baseline"]),
        ldp=tuple(fairness_from_dict(l) for l in ex["ldp"]),
        assumptions=assumptions_from_dict(d["assumptions"]),
        verdicts=tuple(verdict_from_dict(v) for v in d["verdict"]["detail"]),
    )


# CSV rows ------------------------------------------------------------------


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _metric_rows(scenario, eps, run, base, ldp, a_base, a_ldp, per_group: bool):
    keys = metric_items(a_base) or metric_items(base)
    rows = []
    for metric, key in keys:
        if not per_group and metric in ("acceptance_rate", "tpr"):
            continue
        vals = [metric_items(r).get((metric, key)) for r in (base, ldp, a_base, a_ldp)]
        rows.append([scenario, num_text(eps), run, metric, key] + [num_text(v) for v in vals])
    return rows


def analyze_csv(r: AnalyzeReport, per_group: bool = False) -> str:
    """Closed-form rows; the run column is empty and the model columns repeat the analytic ones."""
    rows = []
    for eps, ldp in zip(r.epsilons, r.ldp):
        rows += _metric_rows(r.scenario, eps, "", r.baseline, ldp, r.baseline, ldp, per_group)
    return _csv(SWEEP_HEADER, rows)


def sweep_csv(result: SweepResult, per_group: bool = False) -> str:
    rows = []
    for rec in result.records:
        a_base, a_ldp = result.analytic.get(rec.epsilon, (None, None))
        rows += _metric_rows(
            result.config.scenario, rec.epsilon, str(rec.run), rec.baseline, rec.ldp,
            a_base, a_ldp, per_group,
        )
    return _csv(SWEEP_HEADER, rows)


def aggregate_to_dict(row: AggregateRow) -> dict:
    return {
        "epsilon": row.epsilon,
        "metric": row.metric,
        "group_or_x": row.group_or_x,
        "model": row.model,
        "mean": num(row.mean),
        "std": num(row.std),
        "count": row.count,
        "analytic": num(row.analytic),
        "analytic_exact": exact(row.analytic),
        "gap": num(row.gap),
    }


def sweep_to_dict(result: SweepResult, per_group: bool = False) -> dict:
    rows = [
        r for r in aggregate(result)
        if per_group or r.metric not in ("acceptance_rate", "tpr")
    ]
    eps = list(result.config.eps_grid)
    return {
        "scenario": result.config.scenario,
        "epsilon": eps,
        "config": result.config.to_dict(),
        "closed_form_matches": [result.match_count(e) for e in eps],
        "summary": [aggregate_to_dict(r) for r in rows],
    }


def thresholds_rows(table: ThresholdTable) -> list[dict]:
    return [
        {
            "x": r.x,
            "case": r.case,
            "delta1": exact(r.delta1),
            "delta0": exact(r.delta0),
            "ratio_0_over_1": exact(r.ratio_0_over_1),
            "ratio_1_over_0": exact(r.ratio_1_over_0),
            "epsilon_star": r.epsilon_star,
            "flipping_group": r.flipping_group,
            "below_threshold": None if r.flipping_group is None else r.below_threshold[r.flipping_group],
            "governing_ratio": exact(r.governing_ratio),
        }
        for r in table.rows.values()
    ]


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return num_text(v)
    return str(v)


def emit_report(data, fmt: str = "json", *, scenario: str = "", per_group: bool = False, extra=None) -> str:
    """Serialize any report object. Identical input gives identical text."""
    if fmt not in ("csv", "json"):
        raise ValueError(f"unknown format {fmt!r}")
    if isinstance(data, AnalyzeReport):
        if fmt == "json":
            return _dumps(analyze_to_dict(data, per_group))
        return analyze_csv(data, per_group)
    if isinstance(data, SweepResult):
        if fmt == "json":
            return _dumps(sweep_to_dict(data, per_group))
        return sweep_csv(data, per_group)
    if isinstance(data, Verdict):
        if fmt == "json":
            return _dumps(verdict_to_dict(data))
        rows = [["regime", "", data.regime, ""]]
        rows.append(["sd", "", num_text(data.sd_pair[0]), num_text(data.sd_pair[1])])
        for x, (b, l) in data.csd_pairs.items():
            rows.append(["csd", x, b, l])
        if data.eod_pair is not None:
            rows.append(["eod", "", num_text(data.eod_pair[0]), num_text(data.eod_pair[1])])
        for t in data.theorems:
            rows.append(["theorem", t.name, t.status, t.failed_premise or ""])
        return _csv(["metric", "group_or_x", "baseline", "ldp"], rows)
    if isinstance(data, AssumptionReport):
        doc = {"scenario": scenario, **assumptions_to_dict(data), **(extra or {})}
        if fmt == "json":
            return _dumps(doc)
        ud, ry = data.uniform_discrimination, data.reliable_y
        rows = [
            ["uniform_discrimination", ud.status,
             f"direction={ud.direction} x_favoring_1={ud.x_favoring_1} x_favoring_0={ud.x_favoring_0}"],
            ["reliable_y", ry.status, f"witness={ry.witness} deviation={exact(ry.deviation)}"],
            ["x_independent_a", str(data.x_independent_a).lower(),
             f"max_deviation={exact(data.independence_deviation)}"],
        ]
        return _csv(["check", "status", "detail"], rows)
    if isinstance(data, ThresholdTable):
        rows = thresholds_rows(data)
        if fmt == "json":
            return _dumps({"scenario": scenario, "thresholds": rows})
        header = list(rows[0]) if rows else ["x"]
        return _csv(header, [[_cell(r[k]) for k in header] for r in rows])
    if isinstance(data, list) and all(isinstance(s, SuiteResult) for s in data):
        if fmt == "json":
            return _dumps(
                [{"name": s.name, "checked": s.checked, "violations": s.violations} for s in data]
            )
        return _csv(["suite", "checked", "violations"], [[s.name, s.checked, len(s.violations)] for s in data])
    raise TypeError(f"cannot serialize {type(data).__name__}")


def write_output(text: str, out: Optional[str] = None, stream=None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        import sys

        (stream or sys.stdout).write(text)
