"""Shot-based estimators for the two-copy circuits and Hoeffding sample sizes."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .circuit import OutcomeDistribution, ShotTally, parse_key
from .errors import ParameterError

_DIFF_WEIGHTS = {
    "000": 0, "100": 0, "011": 0, "111": 0,
    "001": 1, "010": 1,
    "101": -1, "110": -1,
}


def hoeffding_T(epsilon: float, delta: float) -> int:
    """Smallest T with T >= (2 / epsilon^2) ln(2 / delta)."""
    if not epsilon > 0:
        raise ParameterError(f"epsilon must be positive, got {epsilon}")
    if not 0 < delta < 1:
        raise ParameterError(f"delta must lie in (0, 1), got {delta}")
    bound = 2.0 / epsilon**2 * math.log(2.0 / delta)
    # absorb rounding when the bound is an integer in exact arithmetic
    return math.ceil(bound - 1e-9)


@dataclass(frozen=True)
class EstimatorPlan:
    epsilon: float
    delta: float
    T: int

    def __post_init__(self) -> None:
        if self.T < hoeffding_T(self.epsilon, self.delta):
            raise ParameterError(f"T={self.T} is below the Hoeffding requirement")

    @classmethod
    def for_accuracy(cls, epsilon: float, delta: float) -> EstimatorPlan:
        return cls(epsilon, delta, hoeffding_T(epsilon, delta))


def _mean_y(tally: ShotTally, weights: dict[str, int]) -> float:
    total = 0
    for key, count in tally.counts.items():
        if key not in weights:
            raise ParameterError(f"unexpected outcome key {key!r}")
        total += weights[key] * count
    return total / tally.shots


def diff_proj_estimator(tally: ShotTally) -> float:
    """Unbiased estimate of ||Re(P rho Q)||^2 from (C3, C2, C1) shots."""
    return _mean_y(tally, _DIFF_WEIGHTS) / 4


def diff_proj_value(dist: OutcomeDistribution) -> float:
    """Expectation of :func:`diff_proj_estimator` under an exact distribution."""
    return sum(w * dist[k] for k, w in _DIFF_WEIGHTS.items()) / 4


@dataclass(frozen=True)
class ResIdentityEstimate:
    """``diagonal`` marks a == b, where the statistic estimates Tr{P rho P rho} / 4 rather than a cross norm."""

    value: float
    diagonal: bool


def _res_weights(tally_keys: list[str], a: int, b: int) -> dict[str, int]:
    weights: dict[str, int] = {}
    for key in tally_keys:
        x, ka, kb = parse_key(key, 3)
        if x not in (0, 1):
            raise ParameterError(f"first digit of {key!r} must be 0 or 1")
        hit = (ka, kb) in ((a, b), (b, a))
        weights[key] = (1 if x == 0 else -1) if hit else 0
    return weights


def res_identity_estimator(tally: ShotTally, a: int, b: int) -> ResIdentityEstimate:
    """Mean of Y/4 with Y = +1 on 0ab or 0ba and -1 on 1ab or 1ba."""
    if a < 0 or b < 0:
        raise ParameterError("register values must be nonnegative")
    weights = _res_weights(list(tally.counts), a, b)
    return ResIdentityEstimate(_mean_y(tally, weights) / 4, a == b)


def res_identity_value(dist: OutcomeDistribution, a: int, b: int) -> float:
    weights = _res_weights(list(dist.entries), a, b)
    return sum(w * dist.entries[k] for k, w in weights.items()) / 4
