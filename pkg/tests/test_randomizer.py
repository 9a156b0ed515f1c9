import math

import numpy as np
import pytest

from bernoulli_lotto.core import BernoulliEndowment, ProbabilityRange, ZeroCost
from bernoulli_lotto.cost_eq import bl_payoff_cost
from bernoulli_lotto.lotto_ci import ci_payoff_cost
from bernoulli_lotto.randomizer import optimal_payoff, optimal_randomization, optimal_randomization_fixed_p


def test_fixed_p_examples():
    res = optimal_randomization_fixed_p(1.0, math.inf, 0.125, 0.25)
    assert res.payoff_a == pytest.approx(0.375, rel=1e-12)
    e = res.endowment
    assert bl_payoff_cost(e, math.inf, 0.125).payoffs.player_a == pytest.approx(0.375, rel=1e-12)
    assert e.mean == pytest.approx(1.0, rel=1e-12)
    assert optimal_randomization_fixed_p(1.0, math.inf, 0.6, 0.3).payoff_a == 1.0
    assert optimal_randomization_fixed_p(1.0, math.inf, 0.02, 0.25).payoff_a == pytest.approx(0.1, rel=1e-12)


def test_fixed_p_validation():
    with pytest.raises(ProbabilityRange):
        optimal_randomization_fixed_p(1.0, math.inf, 0.1, 1.0)
    with pytest.raises(ZeroCost):
        optimal_randomization(1.0, 1.0, 0.0)


def test_optimal_examples():
    res = optimal_randomization(1.0, math.inf, 0.125)
    assert (res.endowment.high, res.endowment.low, res.endowment.p_high) == pytest.approx((2.0, 0.0, 0.5))
    assert res.payoff_a == pytest.approx(0.5, rel=1e-12)
    res = optimal_randomization(1.0, math.inf, 0.6)
    assert res.endowment.high == res.endowment.low == 1.0 and res.payoff_a == 1.0
    res = optimal_randomization(1.0, 0.2, 0.125)
    assert res.payoff_a == pytest.approx(0.9) and res.endowment.is_degenerate


def test_doubling_and_neutralization():
    rng = np.random.default_rng(1)
    for _ in range(100):
        a, phi = rng.uniform(0.05, 5.0), rng.uniform(0.1, 5.0)
        c = rng.uniform(0.0, 1.0) * phi / (2 * a)
        if c == 0:
            continue
        res = optimal_randomization(a, math.inf, c, phi)
        ci = ci_payoff_cost(a, math.inf, c, phi).payoffs
        assert res.payoff_a == pytest.approx(2 * ci.player_a, rel=1e-10)
        assert res.payoff_b == pytest.approx(ci.player_b, abs=1e-10)
        assert res.endowment.mean == pytest.approx(a, rel=1e-12)


def test_result_payoff_is_reachable():
    rng = np.random.default_rng(2)
    for _ in range(200):
        a, c, phi = rng.uniform(0.05, 4.0), rng.uniform(0.01, 2.0), rng.uniform(0.2, 3.0)
        b = math.inf if rng.random() < 0.5 else rng.uniform(0.05, 6.0)
        res = optimal_randomization(a, b, c, phi)
        assert res.payoff_a == pytest.approx(bl_payoff_cost(res.endowment, b, c, phi).payoffs.player_a, rel=1e-10)
        assert res.payoff_a >= ci_payoff_cost(a, b, c, phi).payoffs.player_a - 1e-9
        p = rng.uniform(0.05, 0.95)
        fixed = optimal_randomization_fixed_p(a, b, c, p, phi)
        assert fixed.endowment.mean == pytest.approx(a, rel=1e-10)
        assert fixed.payoff_a == pytest.approx(bl_payoff_cost(fixed.endowment, b, c, phi).payoffs.player_a, rel=1e-10)
        assert fixed.payoff_a <= res.payoff_a + 1e-12


def test_dominates_random_randomizations():
    rng = np.random.default_rng(3)
    for _ in range(1000):
        a, c = rng.uniform(0.1, 3.0), rng.uniform(0.01, 1.0)
        p = rng.uniform(0.01, 0.99)
        a2 = rng.uniform(0.0, a)
        a1 = (a - (1 - p) * a2) / p
        rival = bl_payoff_cost(BernoulliEndowment(a1, a2, p), math.inf, c).payoffs.player_a
        assert optimal_payoff(a, math.inf, c) >= rival - 1e-9
