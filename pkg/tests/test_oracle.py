import math

import numpy as np
import pytest

from bernoulli_lotto.bernoulli_eq import bl_equilibrium_strategy, bl_payoff_nocost
from bernoulli_lotto.core import BattlefieldSet, BernoulliEndowment, GameSpec, OpponentParams
from bernoulli_lotto.lotto_ci import ci_equilibrium_strategy
from bernoulli_lotto.oracle import (
    best_response_value_a,
    best_response_value_b,
    exact_payoff,
    monte_carlo_payoff,
    sample_allocation,
    upper_hull,
    verify_equilibrium,
)
from bernoulli_lotto.strategies import Atom, MixedStrategy, StrategyProfile, Uniform
from instances import random_endowment_in

CASE2 = BernoulliEndowment(3.0, 0.2, 0.5)


def spec_for(e, b, c=0.0, values=(1.0,)):
    return GameSpec(e, OpponentParams(b, c), BattlefieldSet(values))


def random_mixture(rng, k=3, top=4.0):
    weights = rng.dirichlet(np.ones(k))
    comps = []
    for w in weights:
        if rng.random() < 0.3:
            comps.append((w, Atom(rng.uniform(0, top))))
        else:
            lo, hi = sorted(rng.uniform(0, top, 2))
            comps.append((w, Uniform(lo, hi)))
    return MixedStrategy(comps)


def test_exact_payoff_examples():
    u = MixedStrategy.uniform(0.0, 2.0)
    assert exact_payoff(u, u) == pytest.approx(0.5)
    zero = MixedStrategy.atom(0.0)
    assert exact_payoff(zero, zero) == 0.0
    f = MixedStrategy([(0.5, Atom(0.0)), (0.5, Uniform(0.0, 4.0))])
    assert exact_payoff(f, MixedStrategy.uniform(0.0, 4.0)) == pytest.approx(0.25)


def test_exact_payoff_is_complementary_up_to_ties():
    rng = np.random.default_rng(0)
    for _ in range(50):
        f, g = random_mixture(rng), random_mixture(rng)
        tie = sum(wf * wg for wf, sf in f.components for wg, sg in g.components
                  if isinstance(sf, Atom) and isinstance(sg, Atom) and sf.point == sg.point)
        assert exact_payoff(f, g) + exact_payoff(g, f) + tie == pytest.approx(1.0, abs=1e-12)


def test_upper_hull_simple():
    hx, hy = upper_hull(np.array([0.0, 1.0, 2.0, 3.0]), np.array([0.0, 0.1, 2.0, 2.0]))
    assert list(hx) == [0.0, 2.0, 3.0]


def test_best_response_a_examples():
    b, a = 2.0, 1.0
    assert best_response_value_a(MixedStrategy.uniform(0, 2 * b), a) == pytest.approx(a / (2 * b), abs=1e-9)
    assert best_response_value_a(MixedStrategy.atom(0.0), 0.3) == pytest.approx(1.0)
    assert best_response_value_a(MixedStrategy.atom(0.0), 0.0) == 0.0
    g = MixedStrategy([(0.4, Atom(0.0)), (0.6, Uniform(0.0, 3.0))])
    for budget in (1e-6, 0.01, 0.5):
        assert best_response_value_a(g, budget) >= 0.4


def test_best_response_b_examples():
    f_a, _ = ci_equilibrium_strategy(1.0, 2.0)
    assert best_response_value_b(f_a, f_a, 0.5, 2.0) == pytest.approx(0.75, abs=1e-9)
    zero = MixedStrategy.atom(0.0)
    assert best_response_value_b(zero, zero, 0.5, math.inf, unit_cost=0.3) == pytest.approx(1.0)
    prof = bl_equilibrium_strategy(CASE2, 1.0)
    assert best_response_value_b(prof.f_a_high, prof.f_a_low, 0.5, 1.0) == pytest.approx(1 - 0.527777778, abs=1e-4)


def test_envelope_dominates_feasible_mixtures():
    rng = np.random.default_rng(1)
    for _ in range(50):
        g = random_mixture(rng)
        f = random_mixture(rng, top=3.0)
        assert best_response_value_a(g, f.mean, grid=4001) >= exact_payoff(f, g) - 1e-12


def test_envelope_monotone_and_concave():
    rng = np.random.default_rng(2)
    g = random_mixture(rng)
    budgets = np.linspace(0.01, 5.0, 200)
    vals = np.array([best_response_value_a(g, x, grid=4001) for x in budgets])
    assert np.all(np.diff(vals) >= -1e-12)
    assert np.all(np.diff(vals, 2) <= 1e-9)


def test_verify_examples_and_negative_control():
    f, g = ci_equilibrium_strategy(1.0, 1.0)
    spec = spec_for(BernoulliEndowment(1.0, 1.0, 1.0), 1.0)
    assert verify_equilibrium(StrategyProfile(f, f, g), spec).epsilon <= 1e-6
    prof = bl_equilibrium_strategy(CASE2, 1.0)
    spec = spec_for(CASE2, 1.0)
    report = verify_equilibrium(prof, spec)
    assert report.epsilon <= 1e-4 and report.epsilon == max(
        report.exploitability_a_high, report.exploitability_a_low, report.exploitability_b)
    bent = StrategyProfile(prof.f_a_high.scaled(0.9), prof.f_a_low, prof.f_b)
    assert verify_equilibrium(bent, spec).epsilon > 1e-3


def test_grid_convergence():
    rng = np.random.default_rng(3)
    for region in ("R1", "R3", "R5"):
        e = random_endowment_in(region, rng)
        prof = bl_equilibrium_strategy(e, 1.0)
        prof = StrategyProfile(prof.f_a_high.scaled(0.999), prof.f_a_low, prof.f_b)
        coarse = verify_equilibrium(prof, spec_for(e, 1.0), grid=2001).epsilon
        fine = verify_equilibrium(prof, spec_for(e, 1.0), grid=4001).epsilon
        if coarse < 1e-3:
            # knots carry the kinks, so only roundoff-sized changes remain
            assert abs(fine - coarse) <= 0.5 * coarse + 1e-12


def test_sampling():
    assert np.all(sample_allocation(MixedStrategy.atom(0.0), BattlefieldSet([1, 2]), seed=1) == 0)
    x = sample_allocation(MixedStrategy.uniform(0, 2), BattlefieldSet([1.0]), seed=2)
    assert x.shape == (1,) and 0 <= x[0] <= 2
    s = MixedStrategy([(0.3, Atom(0.0)), (0.7, Uniform(1.0, 3.0))])
    draws = sample_allocation(s, BattlefieldSet([0.2, 0.8]), seed=3, n=1_000_000).sum(axis=1)
    var = 0.3 * 0.0 + 0.7 * (4.0 + 1.0 / 3.0) - s.mean ** 2
    assert abs(draws.mean() - s.mean) <= 4 * math.sqrt(var / 1e6)


def test_monte_carlo_examples():
    prof = bl_equilibrium_strategy(CASE2, 1.0)
    spec = spec_for(CASE2, 1.0, values=(0.25, 0.75))
    mean, se = monte_carlo_payoff(prof, spec, 1_000_000, seed=7)
    assert abs(mean - 0.527777778) <= 3 * se
    assert monte_carlo_payoff(prof, spec, 1000, seed=5) == monte_carlo_payoff(prof, spec, 1000, seed=5)
    f, g = ci_equilibrium_strategy(1.0, 1.0)
    sym = spec_for(BernoulliEndowment(1.0, 1.0, 1.0), 1.0)
    mean, se = monte_carlo_payoff(StrategyProfile(f, f, g), sym, 200_000, seed=1)
    assert abs(mean - 0.5) <= 3 * se
    mean, se = monte_carlo_payoff(prof, spec, 1, seed=1)
    assert se == 0.0 and mean in (0.0, 0.25, 0.75, 1.0)


def test_monte_carlo_matches_exact_on_random_pairs():
    rng = np.random.default_rng(4)
    e = BernoulliEndowment(1.0, 1.0, 1.0)
    for i in range(50):
        f, g = random_mixture(rng), random_mixture(rng)
        spec = spec_for(e, 1.0)
        mean, se = monte_carlo_payoff(StrategyProfile(f, f, g), spec, 20000, seed=i)
        assert abs(mean - exact_payoff(f, g)) <= 4 * se + 1e-12


def test_value_matches_closed_form_with_battlefields():
    prof = bl_equilibrium_strategy(CASE2, 1.0)
    report = verify_equilibrium(prof, spec_for(CASE2, 1.0, values=(1.0, 2.0)))
    assert report.value_a == pytest.approx(bl_payoff_nocost(CASE2, 1.0, 3.0).player_a, rel=1e-12)
