"""Zero-cost Bernoulli General Lotto: regions, payoffs, multipliers and strategies."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .core import (
    BernoulliEndowment,
    DegenerateP,
    InfiniteBudgetNoCost,
    NonpositiveValue,
    OutsideR5,
    PayoffPair,
    ProbabilityRange,
    Unclassifiable,
    close,
    geq,
    leq,
    validate_endowment,
    validate_phi,
)
from .lotto_ci import (
    ci_equilibrium_strategy,
    ci_payoff_nocost,
    linear_best_response,
)
from .strategies import Atom, MixedStrategy, StrategyProfile, Uniform, mix


@dataclass(frozen=True)
class Region:
    tag: str
    case: Optional[int] = None

    def __str__(self) -> str:
        return f"{self.tag}/Case{self.case}" if self.case else self.tag


@dataclass(frozen=True)
class Multipliers:
    sigma1: float
    sigma2: float
    lambda_b: float
    case: int

    @property
    def lambda1(self) -> float:
        return self.sigma1 * self.lambda_b

    @property
    def lambda2(self) -> float:
        return self.sigma2 * self.lambda_b


def low_share(p: float) -> float:
    """The ratio A2/A1 = (1-p)/(2-p) separating R2 from R3/R5."""
    return (1.0 - p) / (2.0 - p)


def far_threshold(p: float) -> float:
    """A1/B = 2 + p/(1-p), where H switches to its last branch."""
    return 2.0 + p / (1.0 - p)


def h_boundary(a: float, p: float) -> float:
    if not 0.0 < p < 1.0:
        raise DegenerateP(f"H needs 0 < p < 1, got {p}")
    if a < 1.0:
        return 0.0
    if a <= 2.0 - p:
        return p * (a - 1.0) ** 2 / ((1.0 - p) * (2.0 - a))
    if a <= far_threshold(p):
        return low_share(p) * a
    return p / ((1.0 - p) * (a - 2.0))


def _check_game(e: BernoulliEndowment, b: float) -> None:
    validate_endowment(e)
    if math.isinf(b):
        raise InfiniteBudgetNoCost("zero-cost game needs a finite opponent budget")
    if not b > 0:
        raise NonpositiveValue(f"opponent budget must be positive, got {b}")


def _check_nondegenerate(e: BernoulliEndowment, b: float) -> None:
    _check_game(e, b)
    if not 0.0 < e.p_high < 1.0:
        raise DegenerateP(f"region analysis needs 0 < p < 1, got {e.p_high}")
    if not e.high > e.low:
        raise DegenerateP("region analysis needs A1 > A2")


def classify_region(e: BernoulliEndowment, b: float) -> Region:
    _check_nondegenerate(e, b)
    a1, a2, p = e.high, e.low, e.p_high
    g1, g2, gbar = a1 / b, a2 / b, e.mean / b
    if leq(g2, h_boundary(g1, p)):
        if leq(g1, 1.0):
            case = 1
        elif close(a2, low_share(p) * a1) and 2.0 - p < g1 < far_threshold(p):
            case = 3
        else:
            case = 2
        return Region("R5", case)
    if geq(gbar, 1.0) and geq(a2, low_share(p) * a1):
        return Region("R2")
    if geq(g1, far_threshold(p)) and geq(g2, 1.0):
        return Region("R3")
    if geq(g1, far_threshold(p)) and leq(g2, 1.0):
        return Region("R4")
    if leq(gbar, 1.0):
        return Region("R1")
    raise Unclassifiable(f"no region contains A1={a1}, A2={a2}, p={p}, B={b}")


def region_payoff(region: Region, e: BernoulliEndowment, b: float) -> float:
    """Player A's equilibrium payoff for unit total value."""
    a1, a2, p, mean = e.high, e.low, e.p_high, e.mean
    if region.tag == "R1":
        return mean / (2.0 * b)
    if region.tag == "R2":
        return 1.0 - b / (2.0 * mean)
    if region.tag == "R3":
        return p + (1.0 - p) * (1.0 - b / (2.0 * a2))
    if region.tag == "R4":
        return p + (1.0 - p) * a2 / (2.0 * b)
    if region.case == 1:
        return p * a1 / (2.0 * b)
    low = (1.0 - p) * a2
    return (
        p
        + low / a1
        + math.sqrt(mean * low) / a1
        - b * (math.sqrt(low) + math.sqrt(mean)) ** 2 / (2.0 * a1 ** 2)
    )


def bl_payoff_nocost(e: BernoulliEndowment, b: float, phi: float = 1.0) -> PayoffPair:
    _check_game(e, b)
    validate_phi(phi)
    if e.is_degenerate:
        return ci_payoff_nocost(e.mean, b, phi)
    pa = phi * region_payoff(classify_region(e, b), e, b)
    return PayoffPair(pa, phi - pa)


def region_label(e: BernoulliEndowment, b: float) -> str:
    return "CI" if e.is_degenerate else str(classify_region(e, b))


def ci_better_check(e: BernoulliEndowment, b: float, phi: float = 1.0) -> bool:
    return bl_payoff_nocost(e, b, phi).player_a <= ci_payoff_nocost(e.mean, b, phi).player_a + 1e-9


# --- multiplier system ----------------------------------------------------


def _case2_multipliers(a1: float, a2: float, p: float, b: float) -> Multipliers:
    low = (1.0 - p) * a2
    mean = p * a1 + low
    lambda_b = (math.sqrt(low) + math.sqrt(mean)) ** 2 / (2.0 * a1 ** 2)
    if a2 == 0:
        return Multipliers(b / (p * a1), math.inf, lambda_b, 2)
    sigma2 = (1.0 - b / a1) * math.sqrt((a1 / low) / (p + low / a1))
    sigma1 = (b - (1.0 - p) * sigma2 * a2) / (p * a1)
    return Multipliers(sigma1, sigma2, lambda_b, 2)


def _case3_multipliers(a1: float, a2: float, p: float, b: float) -> Multipliers:
    lambda_b = (2.0 - p) / (2.0 * a1)
    q = p / (1.0 - p)
    lower = (b / a1) * (2.0 + q - a1 / b) / (p * (1.0 + q))
    upper = (b / a1) * (2.0 + q) / (p * (2.0 + q + 1.0 / q))
    sigma1 = 0.5 * (lower + upper)
    sigma2 = (b - p * sigma1 * a1) / ((1.0 - p) * a2)
    return Multipliers(sigma1, sigma2, lambda_b, 3)


def solve_soe(e: BernoulliEndowment, b: float) -> Multipliers:
    region = classify_region(e, b)
    if region.tag != "R5":
        raise OutsideR5(f"multiplier system has no solution in {region}")
    a1, a2, p = e.high, e.low, e.p_high
    if region.case == 1:
        return Multipliers(b / (p * a1), math.inf, p * a1 / (2.0 * b ** 2), 1)
    if region.case == 3:
        return _case3_multipliers(a1, a2, p, b)
    return _case2_multipliers(a1, a2, p, b)


def soe_residuals(e: BernoulliEndowment, b: float, m: Multipliers) -> tuple[float, float, float]:
    """Residuals of rows (i)-(iii) of the multiplier system for ``m.case``."""
    a1, a2, p = e.high, e.low, e.p_high
    s1, s2, lb = m.sigma1, m.sigma2, m.lambda_b
    if m.case == 1:
        return (1.0 / (2.0 * p * s1 ** 2) - lb * a1, a2, p * s1 * a1 - b)
    if m.case == 2:
        ratio = 0.0 if math.isinf(s2) else (1.0 - p * s1) / s2
        spend2 = 0.0 if a2 == 0 else (1.0 - p) * s2 * a2
        return (
            p / 2.0 + ratio - lb * a1,
            ratio ** 2 / (2.0 * (1.0 - p)) - lb * a2,
            p * s1 * a1 + spend2 - b,
        )
    return (
        p / 2.0 + 1.0 - p - lb * a1,
        (1.0 - p) / 2.0 - lb * a2,
        p * s1 * a1 + (1.0 - p) * s2 * a2 - b,
    )


# --- equilibrium strategies -----------------------------------------------


def _r5_profile(a1: float, a2: float, p: float, b: float, m: Multipliers) -> StrategyProfile:
    if m.case == 1:
        g1 = min(a1 / b, 1.0)
        return StrategyProfile(
            MixedStrategy([(1.0 - g1, Atom(0.0)), (g1, Uniform(0.0, 2.0 * b))]),
            MixedStrategy.atom(0.0),
            MixedStrategy.uniform(0.0, 2.0 * b),
        )
    s1, s2, lb = m.sigma1, m.sigma2, m.lambda_b
    long = p / lb
    if m.case == 3:
        short = 2.0 * a2
        return StrategyProfile(
            MixedStrategy.uniform(short, short + long),
            MixedStrategy.uniform(0.0, short),
            MixedStrategy([
                (1.0 - p * s1 - (1.0 - p) * s2, Atom(0.0)),
                ((1.0 - p) * s2, Uniform(0.0, short)),
                (p * s1, Uniform(short, short + long)),
            ]),
        )
    if math.isinf(s2):
        short, w_low = 0.0, 0.0
    else:
        short = (1.0 - p * s1) / (s2 * lb)
        w_low = (1.0 - p * s1) / ((1.0 - p) * s2)
    return StrategyProfile(
        MixedStrategy.uniform(short, short + long),
        MixedStrategy([(1.0 - w_low, Atom(0.0)), (w_low, Uniform(0.0, short))]),
        MixedStrategy([(1.0 - p * s1, Uniform(0.0, short)), (p * s1, Uniform(short, short + long))]),
    )


def _border_a_strategies(mean: float, p: float, b: float) -> tuple[MixedStrategy, MixedStrategy, float, float]:
    """A's type strategies at the point where the fixed-mean ray meets R5 or R3.

    Returns the two strategies and the border budgets (A1, A2).
    """
    gbar = mean / b
    if gbar <= p:
        a1 = mean / p
        prof = _r5_profile(a1, 0.0, p, b, Multipliers(b / (p * a1), math.inf, p * a1 / (2 * b * b), 1))
        return prof.f_a_high, prof.f_a_low, a1, 0.0
    if gbar <= 1.0:
        g1 = 2.0 - p / gbar
        a1 = g1 * b
        a2 = h_boundary(g1, p) * b
        prof = _r5_profile(a1, a2, p, b, _case2_multipliers(a1, a2, p, b))
        return prof.f_a_high, prof.f_a_low, a1, a2
    a1 = (2.0 - p) * mean
    a2 = (1.0 - p) * mean
    return MixedStrategy.uniform(2.0 * a2, 2.0 * mean), MixedStrategy.uniform(0.0, 2.0 * a2), a1, a2


def _convex_profile(a1: float, a2: float, p: float, b: float) -> StrategyProfile:
    mean = p * a1 + (1.0 - p) * a2
    f_ci, f_b = ci_equilibrium_strategy(mean, b)
    f_high, f_low, bd1, bd2 = _border_a_strategies(mean, p, b)
    alpha = (a1 - mean) / (bd1 - mean)
    alpha_low = (a2 - mean) / (bd2 - mean)
    if abs(alpha - alpha_low) > 1e-10:
        raise Unclassifiable(f"inconsistent mixing weights {alpha} vs {alpha_low}")
    alpha = min(max(alpha, 0.0), 1.0)
    return StrategyProfile(
        mix((alpha, f_high), (1.0 - alpha, f_ci)),
        mix((alpha, f_low), (1.0 - alpha, f_ci)),
        f_b,
    )


def _degenerate_profile(e: BernoulliEndowment, b: float) -> StrategyProfile:
    f_a, f_b = ci_equilibrium_strategy(e.mean, b)
    top = 2.0 * max(b, e.mean)
    if e.high == e.low:
        return StrategyProfile(f_a, f_a, f_b)
    if e.p_high == 1.0:
        return StrategyProfile(f_a, linear_best_response(e.low, top), f_b)
    return StrategyProfile(linear_best_response(e.high, top), f_a, f_b)


def bl_equilibrium_strategy(e: BernoulliEndowment, b: float) -> StrategyProfile:
    _check_game(e, b)
    if e.is_degenerate:
        return _degenerate_profile(e, b)
    region = classify_region(e, b)
    a1, a2, p = e.high, e.low, e.p_high
    if region.tag == "R5":
        return _r5_profile(a1, a2, p, b, solve_soe(e, b))
    if region.tag == "R3":
        g2 = a2 / b
        return StrategyProfile(
            MixedStrategy.uniform(2.0 * a2, 2.0 * (a1 - a2)),
            MixedStrategy.uniform(0.0, 2.0 * a2),
            MixedStrategy([(1.0 - 1.0 / g2, Atom(0.0)), (1.0 / g2, Uniform(0.0, 2.0 * a2))]),
        )
    if region.tag == "R4":
        g2 = a2 / b
        return StrategyProfile(
            MixedStrategy.uniform(2.0 * b, 2.0 * (a1 - b)),
            MixedStrategy([(1.0 - g2, Atom(0.0)), (g2, Uniform(0.0, 2.0 * b))]),
            MixedStrategy.uniform(0.0, 2.0 * b),
        )
    return _convex_profile(a1, a2, p, b)


# --- all-pay auction with one-sided incomplete information ---------------


def apa_threshold_case(v_a1: float, v_a2: float, v_b1: float, v_b2: float, p: float) -> int:
    first = p * v_b1 / v_a1
    if first >= 1.0:
        return 1
    if first + (1.0 - p) * v_b2 / v_a2 >= 1.0:
        return 2
    return 3


def siegel_apa_strategies(v_a1: float, v_a2: float, v_b1: float, v_b2: float, p: float) -> StrategyProfile:
    """Equilibrium of the two-type all-pay auction with valuations for each side."""
    for v in (v_a1, v_a2, v_b1, v_b2):
        if not v > 0 or math.isinf(v):
            raise NonpositiveValue(f"valuations must be positive and finite, got {v}")
    if not 0.0 < p < 1.0:
        raise ProbabilityRange(f"p must lie in (0, 1), got {p}")
    k = apa_threshold_case(v_a1, v_a2, v_b1, v_b2, p)
    if k == 1:
        long = v_a1
        w = long / (p * v_b1)
        return StrategyProfile(
            MixedStrategy([(1.0 - w, Atom(0.0)), (w, Uniform(0.0, long))]),
            MixedStrategy.atom(0.0),
            MixedStrategy.uniform(0.0, long),
        )
    long = p * v_b1
    if k == 2:
        short = v_a2 * (1.0 - p * v_b1 / v_a1)
        w = short / ((1.0 - p) * v_b2)
        return StrategyProfile(
            MixedStrategy.uniform(short, short + long),
            MixedStrategy([(1.0 - w, Atom(0.0)), (w, Uniform(0.0, short))]),
            MixedStrategy([(short / v_a2, Uniform(0.0, short)), (long / v_a1, Uniform(short, short + long))]),
        )
    short = (1.0 - p) * v_b2
    return StrategyProfile(
        MixedStrategy.uniform(short, short + long),
        MixedStrategy.uniform(0.0, short),
        MixedStrategy([
            (1.0 - long / v_a1 - short / v_a2, Atom(0.0)),
            (short / v_a2, Uniform(0.0, short)),
            (long / v_a1, Uniform(short, short + long)),
        ]),
    )
