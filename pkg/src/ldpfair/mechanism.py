"""Binary randomized response on the sensitive attribute.

Two parameter modes are supported. :func:`rr_params` derives the retention
probability from a real epsilon in double precision; :func:`rr_params_exact`
takes the retention probability as an exact rational, which keeps every
downstream sign test exact.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

from .distribution import BITS, JointDistribution
from .errors import BoundaryWarning, InvalidRetention, NegativeEpsilon, NonFiniteEpsilon

BOUNDARY_TOL = 1e-12
BLOCK_SIZE = 4096


@dataclass(frozen=True)
class RRParams:
    """Privacy level and the probability ``p`` of reporting the true bit."""

    epsilon: float
    p: Union[Fraction, float]

    @property
    def exact(self) -> bool:
        return isinstance(self.p, Fraction)

    @property
    def p_exact(self) -> Fraction:
        """``p`` as a Fraction (the binary value of the double in real mode)."""
        return self.p if self.exact else Fraction(self.p)


def rr_params(epsilon: float) -> RRParams:
    """Real-mode parameters: p = e^eps / (e^eps + 1)."""
    try:
        epsilon = float(epsilon)
    except (TypeError, ValueError):
        raise NonFiniteEpsilon(f"epsilon must be a number, got {epsilon!r}") from None
    if math.isnan(epsilon) or math.isinf(epsilon):
        raise NonFiniteEpsilon(f"epsilon must be finite, got {epsilon}")
    if epsilon < 0:
        raise NegativeEpsilon(f"epsilon must be >= 0, got {epsilon}")
    return RRParams(epsilon, 1.0 / (1.0 + math.exp(-epsilon)))


def rr_params_exact(p) -> RRParams:
    """Exact-mode parameters from a rational retention probability in [1/2, 1].

    ``epsilon`` is ``ln(p / (1 - p))`` and is infinite for ``p == 1``.
    """
    p = Fraction(p)
    if not Fraction(1, 2) <= p <= 1:
        raise InvalidRetention(f"retention probability must lie in [1/2, 1], got {p}")
    eps = math.inf if p == 1 else math.log(p / (1 - p))
    return RRParams(eps, p)


def ldp_ratio_bound_holds(params: RRParams) -> bool:
    """max(p, 1-p) / min(p, 1-p) <= e^eps, checked exactly where possible."""
    p = params.p_exact
    lo, hi = min(p, 1 - p), max(p, 1 - p)
    if lo == 0:
        return math.isinf(params.epsilon)
    if params.exact:
        # e^eps is exactly p/(1-p) in this mode
        return hi / lo <= p / (1 - p)
    # p carries about two ulps of rounding, and log(p/(1-p)) moves by
    # ulp(p) / (p (1-p)) per ulp
    slack = 2 * math.ulp(params.p) / float(hi * lo)
    return math.log(hi / lo) <= params.epsilon + BOUNDARY_TOL + slack


def compare_exp_eps(params: RRParams, ratio: Fraction) -> int:
    """Sign of ``e^eps - ratio``.

    Exact mode compares ``p/(1-p)`` with ``ratio`` as rationals. Real mode
    compares ``eps`` with ``ln(ratio)`` and reports a tie, with a
    :class:`BoundaryWarning`, when they are within 1e-12.
    """
    if ratio <= 0:
        return 1
    if params.exact:
        if params.p == 1:
            return 1
        diff = params.p / (1 - params.p) - ratio
        return (diff > 0) - (diff < 0)
    if math.isinf(params.epsilon):
        return 1
    diff = params.epsilon - math.log(ratio)
    if abs(diff) <= BOUNDARY_TOL:
        warnings.warn(
            f"epsilon={params.epsilon!r} is within {BOUNDARY_TOL} of the threshold "
            f"ln({ratio}); use exact retention probabilities to decide it",
            BoundaryWarning,
            stacklevel=3,
        )
        return 0
    return 1 if diff > 0 else -1


def obfuscate_distribution(dist: JointDistribution, params: RRParams) -> JointDistribution:
    """Distribution of (Y, X, A') after passing A through randomized response.

    P'[y, x, a] = p P[y, x, a] + (1 - p) P[y, x, 1 - a]. In real mode the
    double ``p`` is used at its exact binary value, so the result stays exact.
    """
    p = params.p_exact
    q = 1 - p
    table = {}
    for y in BITS:
        for x in dist.x_domain:
            for a in BITS:
                table[(y, x, a)] = p * dist.p(y, x, a) + q * dist.p(y, x, 1 - a)
    return JointDistribution.from_mapping(dist.x_domain, table)


def randomize_record(a: int, params: RRParams, rng: np.random.Generator) -> int:
    """Report ``a`` with probability p and ``1 - a`` otherwise."""
    if a not in (0, 1):
        raise ValueError(f"sensitive attribute must be a bit, got {a!r}")
    return a if rng.random() < float(params.p) else 1 - a


def _block_uniforms(seed: int, block: int) -> np.ndarray:
    return np.random.default_rng([seed, block]).random(BLOCK_SIZE)


def randomize_column(
    a: np.ndarray, params: RRParams, seed: int, start: int = 0
) -> np.ndarray:
    """Randomize a column of bits whose first element has record index ``start``.

    Record ``i`` uses the ``i % BLOCK_SIZE``-th uniform of the stream seeded by
    ``(seed, i // BLOCK_SIZE)``, so each output bit is a pure function of
    ``(seed, i)`` and any partition of the index range gives the same result.
    """
    a = np.asarray(a, dtype=np.int8)
    n = a.shape[0]
    if n == 0:
        return a.copy()
    stop = start + n
    first, last = start // BLOCK_SIZE, (stop - 1) // BLOCK_SIZE
    u = np.concatenate([_block_uniforms(seed, b) for b in range(first, last + 1)])
    offset = start - first * BLOCK_SIZE
    keep = u[offset : offset + n] < float(params.p)
    return np.where(keep, a, 1 - a).astype(np.int8)
