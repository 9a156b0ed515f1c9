"""Best two-point randomization of A's budget for a given mean."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import (
    BernoulliEndowment,
    NonpositiveValue,
    ProbabilityRange,
    ZeroCost,
    geq,
    validate_phi,
)
from .cost_eq import bl_payoff_cost
from .lotto_ci import ci_payoff_cost, ci_payoff_nocost


@dataclass(frozen=True)
class RandomizationResult:
    endowment: BernoulliEndowment
    payoff_a: float
    payoff_b: float


def _check(a_mean: float, b: float, c: float, phi: float) -> None:
    validate_phi(phi)
    if math.isnan(a_mean) or math.isinf(a_mean) or a_mean < 0:
        raise NonpositiveValue(f"expected budget must be finite and >= 0, got {a_mean}")
    if not b > 0:
        raise NonpositiveValue(f"opponent budget must be positive, got {b}")
    if math.isnan(c) or math.isinf(c) or c < 0:
        raise NonpositiveValue(f"unit cost must be finite and >= 0, got {c}")
    if c == 0:
        raise ZeroCost("randomization gains need a positive opponent cost")


def _result(e: BernoulliEndowment, payoff_a: float, b: float, c: float, phi: float) -> RandomizationResult:
    return RandomizationResult(e, payoff_a, bl_payoff_cost(e, b, c, phi).payoffs.player_b)


def _finite_budget_guard(
    unlimited: RandomizationResult, a_mean: float, b: float, c: float, phi: float
) -> RandomizationResult:
    """Against a capped opponent, keep the certain budget when it already does better."""
    if math.isinf(b):
        return unlimited
    capped = ci_payoff_nocost(a_mean, b, phi).player_a
    if capped > unlimited.payoff_a:
        return _result(BernoulliEndowment(a_mean, a_mean, 1.0), capped, b, c, phi)
    return _result(unlimited.endowment, unlimited.payoff_a, b, c, phi)


def optimal_randomization_fixed_p(
    a_mean: float, b: float, c: float, p: float, phi: float = 1.0
) -> RandomizationResult:
    _check(a_mean, b, c, phi)
    if not 0.0 < p < 1.0:
        raise ProbabilityRange(f"p must lie in (0, 1), got {p}")
    certain = BernoulliEndowment(a_mean, a_mean, p)
    if a_mean == 0 or geq(c, phi / (2.0 * a_mean)):
        res = RandomizationResult(certain, phi, 0.0)
    elif not geq(c, p * p * phi / (2.0 * a_mean)):
        res = RandomizationResult(certain, ci_payoff_cost(a_mean, math.inf, c, phi).payoffs.player_a, 0.0)
    else:
        high = phi * (2.0 * math.sqrt(2.0 * c * a_mean / phi) - p) / (2.0 * c)
        low = max((a_mean - p * high) / (1.0 - p), 0.0)
        payoff = p * phi / 2.0 + math.sqrt(c * phi * a_mean / 2.0)
        res = RandomizationResult(BernoulliEndowment(high, low, p), payoff, 0.0)
    res = _result(res.endowment, res.payoff_a, math.inf, c, phi)
    return _finite_budget_guard(res, a_mean, b, c, phi)


def optimal_randomization(a_mean: float, b: float, c: float, phi: float = 1.0) -> RandomizationResult:
    _check(a_mean, b, c, phi)
    if a_mean == 0 or geq(c, phi / (2.0 * a_mean)):
        res = RandomizationResult(BernoulliEndowment(a_mean, a_mean, 1.0), phi, 0.0)
    else:
        p = math.sqrt(2.0 * c * a_mean / phi)
        high = math.sqrt(a_mean * phi / (2.0 * c))
        res = RandomizationResult(BernoulliEndowment(high, 0.0, p), math.sqrt(2.0 * c * phi * a_mean), 0.0)
    res = _result(res.endowment, res.payoff_a, math.inf, c, phi)
    return _finite_budget_guard(res, a_mean, b, c, phi)


def optimal_payoff(a_mean: float, b: float, c: float, phi: float = 1.0) -> float:
    """Best payoff A can secure by randomizing a budget of mean ``a_mean``."""
    if c == 0:
        return ci_payoff_nocost(a_mean, b, phi).player_a
    return optimal_randomization(a_mean, b, c, phi).payoff_a
