"""Seeded generators of exact random distributions for property checks.

Fine draws approximate the uniform distribution on the simplex (normalised
exponentials quantised to a 1e-6 grid). Coarse draws use small integer
weights so that ties, zero cells and equal conditionals show up often.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .distribution import BITS, JointDistribution

_SCALE = 10**6


def _weights(rng: np.random.Generator, k: int, coarse: bool) -> list[int]:
    while True:
        if coarse:
            w = rng.integers(0, 5, size=k)
        else:
            w = np.rint(rng.exponential(size=k) * _SCALE).astype(np.int64)
        if w.sum() > 0:
            return [int(v) for v in w]


def _simplex(rng: np.random.Generator, k: int, coarse: bool) -> list[Fraction]:
    w = _weights(rng, k, coarse)
    total = sum(w)
    return [Fraction(v, total) for v in w]


def _unit(rng: np.random.Generator, coarse: bool) -> Fraction:
    if coarse:
        return Fraction(int(rng.integers(0, 5)), 4)
    return Fraction(int(rng.integers(0, _SCALE + 1)), _SCALE)


def _domain(n_x: int) -> tuple[str, ...]:
    return tuple(str(i) for i in range(n_x))


def random_distribution(rng: np.random.Generator, n_x: int, coarse: bool = False) -> JointDistribution:
    """Cell masses drawn on the simplex over all 4 * n_x cells."""
    xs = _domain(n_x)
    probs = iter(_simplex(rng, 4 * n_x, coarse))
    table = {(y, x, a): next(probs) for y in BITS for x in xs for a in BITS}
    return JointDistribution.from_mapping(xs, table)


def _compose(xs, cell_mass, positive_rate) -> JointDistribution:
    table = {}
    for x in xs:
        for a in BITS:
            m, q = cell_mass[(x, a)], positive_rate[(x, a)]
            table[(1, x, a)] = m * q
            table[(0, x, a)] = m * (1 - q)
    return JointDistribution.from_mapping(xs, table)


def random_independent_distribution(
    rng: np.random.Generator, n_x: int, coarse: bool = False
) -> JointDistribution:
    """P[x, a] = P[x] P[a] with arbitrary per-cell positive rates."""
    xs = _domain(n_x)
    px = _simplex(rng, n_x, coarse)
    pa = _simplex(rng, 2, coarse)
    mass = {(x, a): px[i] * pa[a] for i, x in enumerate(xs) for a in BITS}
    rate = {(x, a): _unit(rng, coarse) for x in xs for a in BITS}
    return _compose(xs, mass, rate)


def random_reliable_y_distribution(
    rng: np.random.Generator, n_x: int, coarse: bool = False
) -> JointDistribution:
    """Arbitrary P[x, a] with one positive rate per x shared by both groups."""
    xs = _domain(n_x)
    cells = iter(_simplex(rng, 2 * n_x, coarse))
    mass = {(x, a): next(cells) for x in xs for a in BITS}
    shared = {x: _unit(rng, coarse) for x in xs}
    rate = {(x, a): shared[x] for x in xs for a in BITS}
    return _compose(xs, mass, rate)


def random_uniform_discrimination(
    rng: np.random.Generator,
    n_x: int,
    coarse: bool = False,
    independent: bool = False,
    max_tries: int = 100_000,
) -> JointDistribution:
    """Rejection-sample a distribution satisfying uniform discrimination."""
    from .theory import VIOLATED, check_uniform_discrimination

    draw = random_independent_distribution if independent else random_distribution
    for _ in range(max_tries):
        dist = draw(rng, n_x, coarse)
        if check_uniform_discrimination(dist).status != VIOLATED:
            return dist
    raise RuntimeError("rejection sampling for uniform discrimination did not converge")
