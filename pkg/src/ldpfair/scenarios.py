"""Builtin distributions: seven synthetic tables and four coarsened real-world tables.

Rows are written as ``(y, a) -> values per x`` to mirror how the tables are
usually printed (positive outcome first, group 1 above group 0).
"""

from __future__ import annotations

from dataclasses import dataclass

from .distribution import JointDistribution
from .errors import UnknownScenario


@dataclass(frozen=True)
class Scenario:
    name: str
    dist: JointDistribution
    notes: str = ""


def _table(rows: dict[tuple[int, int], list[str]]) -> JointDistribution:
    width = len(next(iter(rows.values())))
    x_domain = tuple(str(i) for i in range(width))
    mapping = {}
    for (y, a), values in rows.items():
        for x, v in zip(x_domain, values):
            mapping[(y, x, a)] = v
    return JointDistribution.from_mapping(x_domain, mapping)


_RAW = {
    "S1": (
        {
            (1, 1): ["0.35", "0.35"],
            (1, 0): ["0", "0.15"],
            (0, 1): ["0", "0"],
            (0, 0): ["0.15", "0"],
        },
        "X independent of A; uniform discrimination holds (+1); reliable Y fails. "
        "Group 0 flips to 1 at x=0 below eps = ln(7/3).",
    ),
    "S2": (
        {
            (1, 1): ["0.28", "0.38"],
            (1, 0): ["0", "0.12"],
            (0, 1): ["0", "0"],
            (0, 0): ["0.22", "0"],
        },
        "X depends on A; group 0 flips at x=0 below eps = ln(14/11).",
    ),
    "S3": (
        {
            (1, 1): ["0.03", "0.17", "0.03"],
            (1, 0): ["0", "0.17", "0.03"],
            (0, 1): ["0.24", "0.03", "0"],
            (0, 0): ["0.1", "0.2", "0"],
        },
        "X depends on A; SD changes sign under strong privacy with |SD'| < |SD|; "
        "reliable Y fails.",
    ),
    "S4": (
        {
            (1, 1): ["0", "0.4"],
            (1, 0): ["0.03", "0.34"],
            (0, 1): ["0.03", "0.07"],
            (0, 0): ["0.13", "0"],
        },
        "Yule's association paradox: every CSD_x is 0 while SD = 0.26.",
    ),
    "S5": (
        {
            (1, 1): ["0.03", "0.17", "0.03"],
            (1, 0): ["0", "0.17", "0.03"],
            (0, 1): ["0.24", "0.03", "0"],
            (0, 0): ["0.03", "0.27", "0"],
        },
        "X depends on A; SD changes sign with |SD'| > |SD| below eps = ln(1.4); "
        "reliable Y fails.",
    ),
    "S6": (
        {
            (1, 1): ["0.05", "0.08", "0.09", "0.13", "0.14"],
            (1, 0): ["0.02", "0.03", "0.06", "0.03", "0.04"],
            (0, 1): ["0.04", "0.02", "0.01", "0.06", "0"],
            (0, 0): ["0.06", "0.04", "0.02", "0.08", "0"],
        },
        "X depends on A, five-valued X.",
    ),
    "S7": (
        {
            (1, 1): ["0.05", "0.07", "0.04", "0.06", "0.05"],
            (1, 0): ["0.05", "0.07", "0.04", "0.06", "0.05"],
            (0, 1): ["0", "0.06", "0.05", "0.02", "0"],
            (0, 0): ["0.09", "0.04", "0.06", "0.02", "0.12"],
        },
        "Intended as a reliable-Y example, but the table as given yields "
        "P[Y=1|x=0,A=1] = 1 against P[Y=1|x=0,A=0] = 5/14, so the reliable-Y "
        "check reports a violation.",
    ),
    "compas": (
        {
            (1, 1): ["0.12", "0.03"],
            (1, 0): ["0.06", "0.03"],
            (0, 1): ["0.15", "0.1"],
            (0, 0): ["0.25", "0.26"],
        },
        "A=1 non-black, X=1 high number of priors, Y=1 low recidivism risk.",
    ),
    "adult": (
        {
            (1, 1): ["0.06", "0.53"],
            (1, 0): ["0.02", "0.21"],
            (0, 1): ["0.03", "0.06"],
            (0, 0): ["0.02", "0.07"],
        },
        "A=1 men, X=1 high education, Y=1 high income. The (x=0, A=0) cell is "
        "an exact tie between outcomes.",
    ),
    "german": (
        {
            (1, 1): ["0.23", "0.27"],
            (1, 0): ["0.08", "0.13"],
            (0, 1): ["0.06", "0.13"],
            (0, 0): ["0.01", "0.09"],
        },
        "A=1 male, X=1 duly repaid credit history, Y=1 no default. "
        "Uniform discrimination is violated (x=0 favours group 0, x=1 group 1).",
    ),
    "lsac": (
        {
            (1, 1): ["0.43", "0.47"],
            (1, 0): ["0.03", "0.01"],
            (0, 1): ["0.02", "0.02"],
            (0, 0): ["0.01", "0.01"],
        },
        "A=1 non-black, X=1 high GPA, Y=1 passed the bar. The (x=1, A=0) cell "
        "is an exact tie between outcomes.",
    ),
}

SYNTHETIC = ("S1", "S2", "S3", "S4", "S5", "S6", "S7")
REAL_WORLD = ("compas", "adult", "german", "lsac")
NAMES = SYNTHETIC + REAL_WORLD

SYNTHETIC_EPS_GRID = (16.0, 8.0, 2.0, 1.0, 0.85, 0.5, 0.4, 0.3, 0.2, 0.1)
REAL_EPS_GRID = (16.0, 8.0, 5.0, 4.0, 3.0, 2.0, 1.0, 0.5)

_CACHE: dict[str, Scenario] = {}


def builtin_scenario(name: str) -> Scenario:
    if name not in _RAW:
        raise UnknownScenario(
            f"unknown scenario {name!r}; choose one of {', '.join(NAMES)}"
        )
    if name not in _CACHE:
        rows, notes = _RAW[name]
        _CACHE[name] = Scenario(name, _table(rows), notes)
    return _CACHE[name]


def list_scenarios() -> list[str]:
    return list(NAMES)


def default_eps_grid(name: str) -> tuple[float, ...]:
    return REAL_EPS_GRID if name in REAL_WORLD else SYNTHETIC_EPS_GRID
