"""Complete-information General Lotto: payoffs, opponent investment, equilibrium pair."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import (
    InfiniteBudgetNoCost,
    NonpositiveValue,
    PayoffPair,
    ZeroCost,
    geq,
    validate_phi,
)
from .strategies import Atom, MixedStrategy, Uniform


@dataclass(frozen=True)
class CIOutcome:
    payoffs: PayoffPair
    opponent_spend: float


def _check_mean(a_mean: float) -> None:
    if math.isnan(a_mean) or math.isinf(a_mean) or a_mean < 0:
        raise NonpositiveValue(f"expected budget must be finite and >= 0, got {a_mean}")


def weak_side_payoff(a_mean: float, b: float) -> float:
    """Normalized payoff of the player holding ``a_mean`` against ``b`` (phi = 1)."""
    if a_mean < b:
        return a_mean / (2.0 * b)
    return 1.0 - b / (2.0 * a_mean)


def ci_payoff_nocost(a_mean: float, b: float, phi: float = 1.0) -> PayoffPair:
    _check_mean(a_mean)
    validate_phi(phi)
    if math.isinf(b):
        raise InfiniteBudgetNoCost("complete-information payoff needs a finite opponent budget")
    if not b > 0:
        raise NonpositiveValue(f"opponent budget must be positive, got {b}")
    pa = phi * weak_side_payoff(a_mean, b)
    return PayoffPair(pa, phi - pa)


def ci_optimal_investment(a_mean: float, c: float, phi: float = 1.0) -> float:
    """Unconstrained opponent spend; ties at c = phi/(2 a_mean) resolve to zero."""
    _check_mean(a_mean)
    validate_phi(phi)
    if not c > 0:
        raise ZeroCost("optimal investment requires a positive unit cost")
    if a_mean == 0 or geq(c, phi / (2.0 * a_mean)):
        return 0.0
    return math.sqrt(a_mean * phi / (2.0 * c))


def ci_payoff_cost(a_mean: float, b: float, c: float, phi: float = 1.0) -> CIOutcome:
    _check_mean(a_mean)
    validate_phi(phi)
    if math.isnan(c) or c < 0:
        raise NonpositiveValue(f"unit cost must be >= 0, got {c}")
    if not b > 0:
        raise NonpositiveValue(f"opponent budget must be positive, got {b}")
    if c == 0:
        return CIOutcome(ci_payoff_nocost(a_mean, b, phi), b)
    if a_mean == 0:
        # any zero bid ties, and ties go to the opponent
        return CIOutcome(PayoffPair(0.0, phi), 0.0)
    if geq(c, phi / (2.0 * a_mean)):
        return CIOutcome(PayoffPair(phi, 0.0), 0.0)
    unconstrained = math.sqrt(a_mean * phi / (2.0 * c))
    spend = min(b, unconstrained)
    free_payoff = math.sqrt(c * phi * a_mean / 2.0)
    if math.isinf(b):
        pa = free_payoff
    else:
        pa = max(phi * weak_side_payoff(a_mean, b), free_payoff)
    # opponent value is its zero-cost payoff at the capped spend, net of cost
    pb = phi * (1.0 - weak_side_payoff(a_mean, spend)) - c * spend
    return CIOutcome(PayoffPair(pa, pb), spend)


def ci_equilibrium_strategy(a_mean: float, b: float) -> tuple[MixedStrategy, MixedStrategy]:
    _check_mean(a_mean)
    if math.isinf(b) or not b > 0:
        raise NonpositiveValue(f"opponent budget must be positive and finite, got {b}")
    ratio = a_mean / b
    if ratio <= 1.0:
        f_a = MixedStrategy([(1.0 - ratio, Atom(0.0)), (ratio, Uniform(0.0, 2.0 * b))])
        f_b = MixedStrategy.uniform(0.0, 2.0 * b)
    else:
        f_a = MixedStrategy.uniform(0.0, 2.0 * a_mean)
        f_b = MixedStrategy([(1.0 - 1.0 / ratio, Atom(0.0)), (1.0 / ratio, Uniform(0.0, 2.0 * a_mean))])
    return f_a, f_b


def linear_best_response(budget: float, top: float) -> MixedStrategy:
    """A mean-``budget`` mixture supported where a linear pure-bid payoff on (0, top] lives.

    Used for a type that never occurs (p in {0, 1}) so the profile stays a valid
    best response on both sides.
    """
    if budget <= 0:
        return MixedStrategy.atom(0.0)
    if budget <= top / 2:
        return MixedStrategy.uniform(0.0, 2.0 * budget)
    if budget < top:
        return MixedStrategy.uniform(2.0 * budget - top, top)
    return MixedStrategy.atom(budget)
