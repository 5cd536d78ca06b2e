"""Exact joint distributions over (Y, X, A) and the statistics derived from them.

Every probability is a :class:`fractions.Fraction`, so sign tests on the
positive-minus-negative cell masses are exact. Cells are addressed by
``(y, x, a)`` where ``y`` and ``a`` are bits and ``x`` is a label from the
distribution's ``x_domain``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping, Optional

from .errors import (
    DistributionError,
    DuplicateLabel,
    MissingCell,
    NegativeEntry,
    SumNotOne,
)

Prob = Fraction
Cell = tuple[int, str, int]

BITS = (0, 1)


def to_prob(value) -> Fraction:
    """Convert a decimal string, ``"num/den"`` string, int or Fraction without rounding.

    Floats are accepted through their shortest repr, so ``0.35`` means the
    decimal 0.35 and not the nearest binary double.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise DistributionError(f"not a probability: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        text = value.strip().replace("−", "-")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise DistributionError(f"cannot parse probability {value!r}") from exc
    raise DistributionError(f"not a probability: {value!r}")


def format_prob(value: Fraction) -> str:
    """Render a Fraction as a terminating decimal string when possible, else ``num/den``."""
    value = Fraction(value)
    den = value.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{value.numerator}/{value.denominator}"
    digits = max(twos, fives)
    scaled = value * 10**digits
    assert scaled.denominator == 1
    sign = "-" if scaled < 0 else ""
    text = str(abs(scaled.numerator)).rjust(digits + 1, "0")
    if digits == 0:
        return sign + text
    return f"{sign}{text[:-digits]}.{text[-digits:]}"


@dataclass(frozen=True)
class JointDistribution:
    """Probability table P[Y=y, X=x, A=a] over binary Y and A and a finite X domain.

    ``cells`` is the flattened table in ``(y, x, a)`` order; build instances
    with :meth:`from_mapping` or :func:`parse_distribution` rather than by hand.
    """

    x_domain: tuple[str, ...]
    cells: tuple[Fraction, ...]

    def __post_init__(self):
        if not self.x_domain:
            raise DistributionError("x_domain must not be empty")
        if len(set(self.x_domain)) != len(self.x_domain):
            seen = set()
            dup = next(x for x in self.x_domain if x in seen or seen.add(x))
            raise DuplicateLabel(f"duplicate x label {dup!r}")
        if len(self.cells) != 4 * len(self.x_domain):
            raise MissingCell(
                f"expected {4 * len(self.x_domain)} cells, got {len(self.cells)}"
            )
        for value in self.cells:
            if not isinstance(value, Fraction):
                raise DistributionError("cells must be exact Fractions")
            if value < 0:
                raise NegativeEntry(f"negative probability {value}")
        total = sum(self.cells, Fraction(0))
        if total != 1:
            raise SumNotOne(f"entries sum to {format_prob(total)}, not 1")
        object.__setattr__(
            self, "_index", {x: i for i, x in enumerate(self.x_domain)}
        )

    @classmethod
    def from_mapping(cls, x_domain, table: Mapping[Cell, object]) -> "JointDistribution":
        """Build from a ``{(y, x, a): prob}`` mapping; every cell must be present."""
        x_domain = tuple(str(x) for x in x_domain)
        if len(set(x_domain)) != len(x_domain):
            raise DuplicateLabel("duplicate x label in x_domain")
        cells = []
        for y in BITS:
            for x in x_domain:
                for a in BITS:
                    try:
                        cells.append(to_prob(table[(y, x, a)]))
                    except KeyError:
                        raise MissingCell(f"missing cell y={y}, x={x}, a={a}") from None
        return cls(x_domain, tuple(cells))

    def _pos(self, y: int, x: str, a: int) -> int:
        try:
            xi = self._index[x]
        except KeyError:
            raise KeyError(f"x label {x!r} not in domain {self.x_domain}") from None
        return (y * len(self.x_domain) + xi) * 2 + a

    def p(self, y: int, x: str, a: int) -> Fraction:
        """P[Y=y, X=x, A=a]."""
        return self.cells[self._pos(y, x, a)]

    def cell_mass(self, x: str, a: int) -> Fraction:
        """P[X=x, A=a]."""
        return self.p(1, x, a) + self.p(0, x, a)

    def group_mass(self, a: int) -> Fraction:
        return sum((self.cell_mass(x, a) for x in self.x_domain), Fraction(0))

    def positive_mass(self, a: int) -> Fraction:
        """P[Y=1, A=a]."""
        return sum((self.p(1, x, a) for x in self.x_domain), Fraction(0))

    def x_mass(self, x: str) -> Fraction:
        return self.cell_mass(x, 0) + self.cell_mass(x, 1)

    @property
    def table(self) -> dict[Cell, Fraction]:
        return {key: self.p(*key) for key in self.keys()}

    def keys(self) -> Iterator[Cell]:
        for y in BITS:
            for x in self.x_domain:
                for a in BITS:
                    yield (y, x, a)

    def __repr__(self):
        body = ", ".join(
            f"{y}{x}{a}={format_prob(v)}" for (y, x, a), v in self.table.items()
        )
        return f"JointDistribution(x_domain={self.x_domain}, {body})"


def parse_distribution(doc) -> JointDistribution:
    """Parse a distribution document (a dict, or its JSON text).

    Expected shape::

        {"x_domain": ["0", "1"],
         "p": {"y1": {"a1": ["0.35", "0.35"], "a0": ["0", "0.15"]},
               "y0": {"a1": ["0", "0"], "a0": ["0.15", "0"]}}}

    Arrays are ordered by ``x_domain``.
    """
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise DistributionError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, Mapping):
        raise DistributionError("distribution document must be an object")
    if "x_domain" not in doc:
        raise MissingCell("document has no x_domain")
    if "p" not in doc or not isinstance(doc["p"], Mapping):
        raise MissingCell("document has no probability table 'p'")
    raw_domain = doc["x_domain"]
    if not isinstance(raw_domain, list):
        raise DistributionError("x_domain must be a list")
    x_domain = tuple(str(x) for x in raw_domain)
    if len(set(x_domain)) != len(x_domain):
        raise DuplicateLabel(f"duplicate label in x_domain {list(x_domain)}")
    table = {}
    for y in BITS:
        by_a = doc["p"].get(f"y{y}")
        if not isinstance(by_a, Mapping):
            raise MissingCell(f"missing block p.y{y}")
        for a in BITS:
            row = by_a.get(f"a{a}")
            if not isinstance(row, list):
                raise MissingCell(f"missing row p.y{y}.a{a}")
            if len(row) != len(x_domain):
                raise MissingCell(
                    f"row p.y{y}.a{a} has {len(row)} entries for {len(x_domain)} labels"
                )
            for x, value in zip(x_domain, row):
                table[(y, x, a)] = to_prob(value)
    return JointDistribution.from_mapping(x_domain, table)


def render_distribution(dist: JointDistribution) -> dict:
    """Inverse of :func:`parse_distribution`; values are rendered exactly."""
    return {
        "x_domain": list(dist.x_domain),
        "p": {
            f"y{y}": {
                f"a{a}": [format_prob(dist.p(y, x, a)) for x in dist.x_domain]
                for a in (1, 0)
            }
            for y in (1, 0)
        },
    }


def load_distribution(path) -> JointDistribution:
    with open(path, encoding="utf-8") as fh:
        return parse_distribution(fh.read())


def delta_table(dist: JointDistribution) -> dict[tuple[str, int], Fraction]:
    """Positive-minus-negative joint mass per cell: P[Y=1,x,a] - P[Y=0,x,a]."""
    return {
        (x, a): dist.p(1, x, a) - dist.p(0, x, a)
        for x in dist.x_domain
        for a in BITS
    }


def gamma_table(dist: JointDistribution) -> dict[tuple[str, int], Optional[Fraction]]:
    """Conditional version of :func:`delta_table`; ``None`` marks zero-mass cells."""
    out = {}
    for x in dist.x_domain:
        for a in BITS:
            mass = dist.cell_mass(x, a)
            out[(x, a)] = (dist.p(1, x, a) - dist.p(0, x, a)) / mass if mass else None
    return out


@dataclass(frozen=True)
class MarginalSet:
    """Marginal and conditional tables. ``None`` flags an undefined conditional row."""

    p_a: dict[int, Fraction]
    p_x: dict[str, Fraction]
    p_x_given_a: dict[int, Optional[dict[str, Fraction]]]
    p_x_given_y1_a: dict[int, Optional[dict[str, Fraction]]]
    p_x_given_y1: Optional[dict[str, Fraction]]


def marginals(dist: JointDistribution) -> MarginalSet:
    xs = dist.x_domain
    p_a = {a: dist.group_mass(a) for a in BITS}
    p_x = {x: dist.x_mass(x) for x in xs}

    def normalise(weights: dict[str, Fraction]) -> Optional[dict[str, Fraction]]:
        total = sum(weights.values(), Fraction(0))
        if total == 0:
            return None
        return {x: w / total for x, w in weights.items()}

    p_x_given_a = {a: normalise({x: dist.cell_mass(x, a) for x in xs}) for a in BITS}
    p_x_given_y1_a = {a: normalise({x: dist.p(1, x, a) for x in xs}) for a in BITS}
    p_x_given_y1 = normalise({x: dist.p(1, x, 0) + dist.p(1, x, 1) for x in xs})
    return MarginalSet(p_a, p_x, p_x_given_a, p_x_given_y1_a, p_x_given_y1)


@dataclass(frozen=True)
class IndependenceReport:
    independent: bool
    max_deviation: Fraction


def independence_check(dist: JointDistribution) -> IndependenceReport:
    """Exact test of X independent of A: P[x,a] == P[x] P[a] for every cell."""
    p_a = {a: dist.group_mass(a) for a in BITS}
    worst = Fraction(0)
    for x in dist.x_domain:
        px = dist.x_mass(x)
        for a in BITS:
            worst = max(worst, abs(dist.cell_mass(x, a) - px * p_a[a]))
    return IndependenceReport(worst == 0, worst)
