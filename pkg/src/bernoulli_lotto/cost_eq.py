"""Bernoulli General Lotto against an opponent who pays per unit of resource."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .bernoulli_eq import bl_equilibrium_strategy, bl_payoff_nocost, low_share
from .core import (
    BernoulliEndowment,
    InfiniteBudgetNoCost,
    NonpositiveValue,
    PayoffPair,
    ZeroCost,
    geq,
    validate_endowment,
    validate_phi,
)
from .lotto_ci import ci_optimal_investment, ci_payoff_cost, linear_best_response
from .strategies import MixedStrategy, StrategyProfile

REGIMES = ("CoincidesWithCI", "BothImprove", "BBenefitsAHurts", "Saturated")


@dataclass(frozen=True)
class CostOutcome:
    payoffs: PayoffPair
    opponent_spend: float
    lambda_threshold: float


def lambda_threshold(e: BernoulliEndowment, phi: float = 1.0) -> float:
    """Cost below which the opponent responds as if facing the mean budget."""
    if e.high == 0:
        return math.inf
    low = (1.0 - e.p_high) * e.low
    return phi * (math.sqrt(low) + math.sqrt(e.mean)) ** 2 / (2.0 * e.high ** 2)


def _saturation_cost(e: BernoulliEndowment, phi: float) -> float:
    """Cost at or above which the opponent stops investing."""
    if e.low == 0:
        return math.inf
    return (1.0 - e.p_high) * phi / (2.0 * e.low)


def behaves_like_ci(e: BernoulliEndowment) -> bool:
    return e.is_degenerate or e.low >= low_share(e.p_high) * e.high


def curve_breakpoints(e: BernoulliEndowment) -> tuple[float, float]:
    low = math.sqrt((1.0 - e.p_high) * e.low)
    root_mean = math.sqrt(e.mean)
    return e.high * low / (low + root_mean), e.high * root_mean / (low + root_mean)


def piB_curve(e: BernoulliEndowment, b_prime: float, phi: float = 1.0) -> float:
    """Opponent's zero-cost equilibrium payoff as a function of its budget."""
    validate_endowment(e)
    validate_phi(phi)
    if b_prime < 0:
        raise NonpositiveValue(f"budget must be >= 0, got {b_prime}")
    if b_prime == 0:
        # a zero bid still takes every tie, i.e. every type holding nothing
        share = (e.p_high if e.high == 0 else 0.0) + ((1.0 - e.p_high) if e.low == 0 else 0.0)
        return phi * share
    if behaves_like_ci(e):
        return bl_payoff_nocost(e, b_prime, phi).player_b
    a1, a2, p, mean = e.high, e.low, e.p_high, e.mean
    y1, y2 = curve_breakpoints(e)
    if b_prime <= a2:
        val = (1.0 - p) * b_prime / (2.0 * a2)
    elif b_prime <= y1:
        val = (1.0 - p) * (1.0 - a2 / (2.0 * b_prime))
    elif b_prime <= y2:
        val = (
            (1.0 - p) * (1.0 - a2 / a1)
            - math.sqrt(mean * (mean - p * a1)) / a1
            + lambda_threshold(e) * b_prime
        )
    else:
        val = p * (1.0 - a1 / (2.0 * b_prime)) + (1.0 - p) * (1.0 - a2 / (2.0 * b_prime))
    return phi * val


def _check_cost(c: float) -> None:
    if math.isnan(c) or math.isinf(c) or c < 0:
        raise NonpositiveValue(f"unit cost must be finite and >= 0, got {c}")


def _unconstrained_investment(e: BernoulliEndowment, c: float, phi: float) -> float:
    if behaves_like_ci(e):
        return ci_optimal_investment(e.mean, c, phi)
    if not geq(c, lambda_threshold(e, phi)):
        return math.sqrt(e.mean * phi / (2.0 * c))
    if not geq(c, _saturation_cost(e, phi)):
        return math.sqrt((1.0 - e.p_high) * e.low * phi / (2.0 * c))
    return 0.0


def bl_optimal_investment(e: BernoulliEndowment, b: float, c: float, phi: float = 1.0) -> float:
    validate_endowment(e)
    validate_phi(phi)
    _check_cost(c)
    if c == 0:
        raise ZeroCost("optimal investment requires a positive unit cost")
    return min(b, _unconstrained_investment(e, c, phi))


def _payoff_a_unlimited(e: BernoulliEndowment, c: float, phi: float) -> float:
    p, mean = e.p_high, e.mean
    if not geq(c, lambda_threshold(e, phi)):
        return math.sqrt(c * phi * mean / 2.0)
    if not geq(c, _saturation_cost(e, phi)):
        return p * phi + math.sqrt(c * phi * (1.0 - p) * e.low / 2.0)
    return phi


def bl_payoff_cost(e: BernoulliEndowment, b: float, c: float, phi: float = 1.0) -> CostOutcome:
    validate_endowment(e)
    validate_phi(phi)
    _check_cost(c)
    if not b > 0:
        raise NonpositiveValue(f"opponent budget must be positive, got {b}")
    lam = lambda_threshold(e, phi)
    if c == 0:
        if math.isinf(b):
            raise InfiniteBudgetNoCost("zero cost needs a finite opponent budget")
        return CostOutcome(bl_payoff_nocost(e, b, phi), b, lam)
    if behaves_like_ci(e):
        out = ci_payoff_cost(e.mean, b, c, phi)
        return CostOutcome(out.payoffs, out.opponent_spend, lam)
    spend = min(b, _unconstrained_investment(e, c, phi))
    pa = _payoff_a_unlimited(e, c, phi)
    if not math.isinf(b):
        pa = max(bl_payoff_nocost(e, b, phi).player_a, pa)
    # the opponent's value is its zero-cost curve at the capped spend, net of cost
    pb = piB_curve(e, spend, phi) - c * spend
    return CostOutcome(PayoffPair(pa, pb), spend, lam)


def classify_regime(e: BernoulliEndowment, c: float, phi: float = 1.0) -> str:
    validate_endowment(e)
    _check_cost(c)
    if behaves_like_ci(e):
        return "CoincidesWithCI"
    if not geq(c, lambda_threshold(e, phi)):
        return "CoincidesWithCI"
    if e.mean == 0 or not geq(c, phi / (2.0 * e.mean)):
        return "BothImprove"
    if not geq(c, _saturation_cost(e, phi)):
        return "BBenefitsAHurts"
    return "Saturated"


def cost_equilibrium_strategy(e: BernoulliEndowment, b: float, c: float, phi: float = 1.0) -> StrategyProfile:
    """Equilibrium of the cost game: the zero-cost profile at the opponent's optimal spend.

    When the opponent spends nothing, A's strategies are the limit of the
    zero-cost profiles as the opponent budget shrinks; those limits no longer
    depend on the budget, so they are read off a small enough budget.
    """
    spend = bl_payoff_cost(e, b, c, phi).opponent_spend
    if spend > 0:
        return bl_equilibrium_strategy(e, spend)
    zero = MixedStrategy.atom(0.0)
    if e.is_degenerate or e.mean == 0:
        return StrategyProfile(
            linear_best_response(e.high, math.inf),
            linear_best_response(e.low, math.inf),
            zero,
        )
    if behaves_like_ci(e):
        small = 0.5 * (1.0 - e.p_high) * e.mean
    elif e.low > 0:
        small = 0.5 * e.low
    else:
        small = 0.5 * e.high
    prof = bl_equilibrium_strategy(e, small)
    return StrategyProfile(prof.f_a_high, prof.f_a_low, zero)
