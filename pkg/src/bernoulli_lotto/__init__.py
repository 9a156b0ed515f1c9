"""Equilibria of General Lotto games where one side's budget is a two-point lottery."""

from .bernoulli_eq import bl_equilibrium_strategy, bl_payoff_nocost, classify_region, solve_soe
from .commander import (
    CommanderInstance,
    det_assign_fixed_budget,
    det_assign_per_unit,
    fixed_budget_equality,
    fourfold_condition,
    general_setting_performance,
    improvement_factor,
    rand_assign_fixed_budget,
    rand_assign_per_unit,
)
from .core import BattlefieldSet, BernoulliEndowment, GameSpec, OpponentParams, PayoffPair
from .cost_eq import bl_optimal_investment, bl_payoff_cost, cost_equilibrium_strategy
from .lotto_ci import ci_payoff_cost, ci_payoff_nocost
from .oracle import monte_carlo_payoff, verify_equilibrium
from .randomizer import optimal_randomization, optimal_randomization_fixed_p
from .strategies import MixedStrategy, StrategyProfile

__version__ = "0.1.0"
