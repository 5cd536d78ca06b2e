"""Monte Carlo replication: sample, obfuscate, fit, evaluate, aggregate.

Each run draws one sample and one train/test split, fits the baseline
majority model on the original training records, and for every epsilon
fits an LDP model on a randomized copy of the training sensitive column.
Both models are scored on the untouched test records.

Seeds are derived from ``(base seed, run, stream tag, epsilon index)``
through :class:`numpy.random.SeedSequence`, so a run's output never
depends on which worker executed it.
"""

from __future__ import annotations

import json
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from statistics import fmean, stdev
from typing import Optional, Sequence, Union

import numpy as np

from .distribution import BITS, JointDistribution, load_distribution
from .errors import InvalidConfig, UnknownScenario, ZeroGroupMass
from .mechanism import randomize_column, rr_params
from .metrics import FairnessReport, fairness_report
from .model import PredictionTable, baseline_predictor, ldp_predictor_closed_form
from .scenarios import NAMES, builtin_scenario

log = logging.getLogger(__name__)

EMPIRICAL = "empirical"

_SAMPLE, _SPLIT, _RR = 0, 1, 2


def derive_seed(*parts: int) -> int:
    return int(np.random.SeedSequence(list(parts)).generate_state(1, dtype=np.uint64)[0])


@dataclass(frozen=True)
class SampleSet:
    """Records drawn from a distribution, stored column-wise."""

    x_domain: tuple[str, ...]
    a: np.ndarray
    x_idx: np.ndarray
    y: np.ndarray
    seed: int

    @property
    def n(self) -> int:
        return int(self.a.shape[0])

    @property
    def records(self) -> list[tuple[int, str, int]]:
        """``(a, x, y)`` triples in draw order."""
        xs = self.x_domain
        return [(int(a), xs[i], int(y)) for a, i, y in zip(self.a, self.x_idx, self.y)]

    def take(self, idx: np.ndarray) -> "SampleSet":
        return SampleSet(self.x_domain, self.a[idx], self.x_idx[idx], self.y[idx], self.seed)


def sample(dist: JointDistribution, n: int, seed: int) -> SampleSet:
    """Draw ``n`` i.i.d. records by inverse CDF over the flattened table."""
    if n < 1:
        raise InvalidConfig(f"n must be >= 1, got {n}")
    cum, acc = [], Fraction(0)
    for v in dist.cells:
        acc += v
        cum.append(float(acc))
    cum[-1] = 1.0
    u = np.random.default_rng(seed).random(n)
    # side="right" skips zero-mass cells, whose cumulative value repeats
    k = np.searchsorted(np.asarray(cum), u, side="right")
    m = len(dist.x_domain)
    return SampleSet(
        dist.x_domain,
        (k % 2).astype(np.int8),
        ((k // 2) % m).astype(np.int64),
        (k // (2 * m)).astype(np.int8),
        seed,
    )


def cell_counts(x_domain, a, x_idx, y) -> np.ndarray:
    """Counts in the flattened ``(y, x, a)`` order of :class:`JointDistribution`."""
    m = len(x_domain)
    flat = (np.asarray(y, dtype=np.int64) * m + x_idx) * 2 + a
    return np.bincount(flat, minlength=4 * m)


def empirical_distribution(x_domain, counts: np.ndarray) -> JointDistribution:
    total = int(counts.sum())
    return JointDistribution(tuple(x_domain), tuple(Fraction(int(c), total) for c in counts))


def fit_majority(x_domain, counts: np.ndarray) -> tuple[PredictionTable, tuple]:
    """Majority model from counts; cells never seen in training predict 0.

    Returns the table and the unseen ``(x, a)`` cells.
    """
    m = len(x_domain)
    y_hat, unseen = {}, []
    for xi, x in enumerate(x_domain):
        for a in BITS:
            pos, neg = counts[(m + xi) * 2 + a], counts[xi * 2 + a]
            if pos + neg == 0:
                y_hat[(x, a)] = 0
                unseen.append((x, a))
            else:
                y_hat[(x, a)] = int(pos >= neg)
    return PredictionTable(y_hat, EMPIRICAL), tuple(unseen)


@dataclass(frozen=True)
class ExperimentConfig:
    scenario: str
    eps_grid: tuple[float, ...]
    n: int
    runs: int = 100
    seed: int = 0
    train_fraction: float = 0.8

    def __post_init__(self):
        grid = tuple(float(e) for e in self.eps_grid)
        if not grid:
            raise InvalidConfig("eps_grid must not be empty")
        if any(not math.isfinite(e) or e <= 0 for e in grid):
            raise InvalidConfig(f"eps_grid values must be finite and > 0, got {grid}")
        object.__setattr__(self, "eps_grid", grid)
        if isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 1:
            raise InvalidConfig(f"n must be an integer >= 1, got {self.n!r}")
        if isinstance(self.runs, bool) or not isinstance(self.runs, int) or self.runs < 1:
            raise InvalidConfig(f"runs must be an integer >= 1, got {self.runs!r}")
        if isinstance(self.seed, bool) or not isinstance(self.seed, int) or self.seed < 0:
            raise InvalidConfig(f"seed must be a non-negative integer, got {self.seed!r}")
        if not 0 < self.train_fraction <= 1:
            raise InvalidConfig(f"train_fraction must lie in (0, 1], got {self.train_fraction}")

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "eps_grid": list(self.eps_grid),
            "n": self.n,
            "runs": self.runs,
            "seed": self.seed,
            "train_fraction": self.train_fraction,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "ExperimentConfig":
        unknown = set(doc) - {"scenario", "eps_grid", "n", "runs", "seed", "train_fraction"}
        if unknown:
            raise InvalidConfig(f"unknown config fields {sorted(unknown)}")
        try:
            return cls(**doc)
        except TypeError as exc:
            raise InvalidConfig(str(exc)) from None


def load_config(path) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        try:
            return ExperimentConfig.from_dict(json.load(fh))
        except json.JSONDecodeError as exc:
            raise InvalidConfig(f"invalid config JSON: {exc}") from None


def resolve_scenario(label: str) -> JointDistribution:
    """A builtin scenario name, or a path to a distribution document."""
    if label in NAMES:
        return builtin_scenario(label).dist
    if os.path.isfile(label):
        return load_distribution(label)
    raise UnknownScenario(f"unknown scenario {label!r}; choose one of {', '.join(NAMES)} or a file path")


@dataclass(frozen=True)
class RunRecord:
    """One (run, epsilon) cell. Reports are ``None`` if the test split lacks a group."""

    run: int
    eps_index: int
    epsilon: float
    baseline: Optional[FairnessReport]
    ldp: Optional[FairnessReport]
    matches_closed_form: bool
    unseen_cells: tuple = ()


@dataclass
class SweepResult:
    config: ExperimentConfig
    x_domain: tuple[str, ...]
    records: list[RunRecord]
    analytic: dict[float, tuple[FairnessReport, FairnessReport]] = field(default_factory=dict)

    def at(self, epsilon: float) -> list[RunRecord]:
        return [r for r in self.records if r.epsilon == epsilon]

    def match_count(self, epsilon: float) -> int:
        return sum(r.matches_closed_form for r in self.at(epsilon))


def _safe_report(pred: PredictionTable, dist: JointDistribution) -> Optional[FairnessReport]:
    try:
        return fairness_report(pred, dist)
    except ZeroGroupMass:
        return None


def _run_once(dist: JointDistribution, config: ExperimentConfig, run: int) -> list[RunRecord]:
    base = config.seed
    data = sample(dist, config.n, derive_seed(base, run, _SAMPLE))
    order = np.random.default_rng(derive_seed(base, run, _SPLIT)).permutation(data.n)
    n_train = min(data.n, max(1, math.floor(config.train_fraction * data.n)))
    train = data.take(order[:n_train])
    # with no records left over, score on the whole sample
    test = data.take(order[n_train:]) if n_train < data.n else data

    xs = dist.x_domain
    test_dist = empirical_distribution(xs, cell_counts(xs, test.a, test.x_idx, test.y))
    base_pred, unseen = fit_majority(xs, cell_counts(xs, train.a, train.x_idx, train.y))
    base_report = _safe_report(base_pred, test_dist)
    if unseen:
        log.info("run %d: cells %s absent from training, predicting 0", run, unseen)

    out = []
    for ei, eps in enumerate(config.eps_grid):
        params = rr_params(eps)
        a_obf = randomize_column(train.a, params, derive_seed(base, run, _RR, ei))
        ldp_pred, ldp_unseen = fit_majority(xs, cell_counts(xs, a_obf, train.x_idx, train.y))
        closed = ldp_predictor_closed_form(dist, params)
        out.append(
            RunRecord(
                run=run,
                eps_index=ei,
                epsilon=eps,
                baseline=base_report,
                ldp=_safe_report(ldp_pred, test_dist),
                matches_closed_form=ldp_pred.same_predictions(closed),
                unseen_cells=ldp_unseen,
            )
        )
    return out


def _run_batch(args) -> list[RunRecord]:
    dist, config, runs = args
    return [rec for r in runs for rec in _run_once(dist, config, r)]


def analytic_reports(dist: JointDistribution, eps_grid) -> dict[float, tuple[FairnessReport, FairnessReport]]:
    base = fairness_report(baseline_predictor(dist), dist)
    return {
        eps: (base, fairness_report(ldp_predictor_closed_form(dist, rr_params(eps)), dist))
        for eps in eps_grid
    }


def run_experiment(
    config: ExperimentConfig,
    workers: int = 1,
    dist: Optional[JointDistribution] = None,
) -> SweepResult:
    """Run every (run, epsilon) pair; the result is independent of ``workers``."""
    if dist is None:
        dist = resolve_scenario(config.scenario)
    runs = list(range(config.runs))
    if workers <= 1:
        records = _run_batch((dist, config, runs))
    else:
        chunks = [runs[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = pool.map(_run_batch, [(dist, config, c) for c in chunks if c])
            records = [rec for part in parts for rec in part]
    records.sort(key=lambda r: (r.eps_index, r.run))
    try:
        analytic = analytic_reports(dist, config.eps_grid)
    except ZeroGroupMass:
        analytic = {}
    return SweepResult(config, dist.x_domain, records, analytic)


@dataclass(frozen=True)
class AggregateRow:
    epsilon: float
    metric: str
    group_or_x: str
    model: str
    mean: Optional[float]
    std: Optional[float]
    count: int
    analytic: Optional[Fraction]
    gap: Optional[float]


def metric_items(report: Optional[FairnessReport]) -> dict[tuple[str, str], Optional[Fraction]]:
    """Flatten a report into ``(metric, group_or_x) -> value``."""
    if report is None:
        return {}
    items = {("sd", ""): report.sd, ("eod", ""): report.eod, ("accuracy", ""): report.accuracy}
    for x, v in report.csd.items():
        items[("csd", x)] = Fraction(v)
    for a in BITS:
        items[("acceptance_rate", str(a))] = report.acceptance_rate.get(a)
        items[("tpr", str(a))] = report.tpr.get(a)
    return items


def aggregate(result: Union[SweepResult, Sequence[AggregateRow]]) -> list[AggregateRow]:
    """Mean and sample standard deviation per (epsilon, metric, group_or_x, model).

    Undefined values are left out of the mean, so ``count`` can fall below
    the number of runs. Already aggregated rows are returned unchanged.
    """
    if not isinstance(result, SweepResult):
        return list(result)
    values: dict[tuple, list[float]] = {}
    for rec in result.records:
        for model, rep in (("baseline", rec.baseline), ("ldp", rec.ldp)):
            for (metric, key), v in metric_items(rep).items():
                bucket = values.setdefault((rec.eps_index, metric, key, model), [])
                if v is not None:
                    bucket.append(float(v))
    rows = []
    for (ei, metric, key, model), vals in sorted(values.items()):
        eps = result.config.eps_grid[ei]
        pair = result.analytic.get(eps)
        ref = None
        if pair is not None:
            ref = metric_items(pair[0 if model == "baseline" else 1]).get((metric, key))
        mean = fmean(vals) if vals else None
        std = (stdev(vals) if len(vals) > 1 else 0.0) if vals else None
        gap = abs(mean - float(ref)) if mean is not None and ref is not None else None
        rows.append(AggregateRow(eps, metric, key, model, mean, std, len(vals), ref, gap))
    return rows
