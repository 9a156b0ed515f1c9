"""Independent checks: exact payoffs, best-response envelopes, Monte Carlo."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .core import BattlefieldSet, GameSpec
from .strategies import Atom, MixedStrategy, Segment, StrategyProfile, Uniform

DEFAULT_GRID = 20001
DOMAIN_MARGIN = 0.01


def _ramp_integral(x: float, lo: float, hi: float) -> float:
    """Integral from -inf to x of the CDF of Uniform(lo, hi)."""
    if x <= lo:
        return 0.0
    if x <= hi:
        return (x - lo) ** 2 / (2.0 * (hi - lo))
    return 0.5 * (hi - lo) + (x - hi)


def _win_prob(x: Segment, y: Segment) -> float:
    """P(X > Y) for a single pair of segments; exact ties count as losses."""
    if isinstance(x, Atom) and isinstance(y, Atom):
        return float(x.point > y.point)
    if isinstance(x, Atom):
        return min(max((x.point - y.lo) / (y.hi - y.lo), 0.0), 1.0)
    if isinstance(y, Atom):
        return min(max((x.hi - y.point) / (x.hi - x.lo), 0.0), 1.0)
    area = _ramp_integral(x.hi, y.lo, y.hi) - _ramp_integral(x.lo, y.lo, y.hi)
    return area / (x.hi - x.lo)


def exact_payoff(f: MixedStrategy, g: MixedStrategy, phi: float = 1.0) -> float:
    """phi * P(X > Y) with X ~ f (player A) and Y ~ g (player B)."""
    total = 0.0
    for wf, sf in f.components:
        for wg, sg in g.components:
            total += wf * wg * _win_prob(sf, sg)
    return phi * total


def upper_hull(xs: np.ndarray, ys: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vertices of the upper concave envelope of points sorted by x (monotone chain)."""
    hx: list[float] = []
    hy: list[float] = []
    for x, y in zip(xs.tolist(), ys.tolist()):
        while len(hx) >= 2:
            x1, y1, x2, y2 = hx[-2], hy[-2], hx[-1], hy[-1]
            # drop the middle point when it lies on or below the chord
            if (y2 - y1) * (x - x1) <= (y - y1) * (x2 - x1):
                hx.pop()
                hy.pop()
            else:
                break
        hx.append(x)
        hy.append(y)
    return np.array(hx), np.array(hy)


def _bid_grid(top: float, knots: np.ndarray, grid: int) -> np.ndarray:
    if top <= 0:
        return np.array([0.0])
    xs = np.linspace(0.0, top * (1.0 + DOMAIN_MARGIN), grid)
    return np.unique(np.concatenate([xs, knots]))


def best_response_value_a(g: MixedStrategy, budget: float, phi: float = 1.0, grid: int = DEFAULT_GRID) -> float:
    """Best payoff of a mean-constrained bidder against ``g``.

    Bidding just above an atom of ``g`` wins it, so for a positive budget the
    supremum is the envelope of phi * CDF(x) with the right-continuous CDF.
    A zero budget forces a zero bid, which loses every tie.
    """
    if budget <= 0:
        return 0.0
    xs = _bid_grid(g.top, g.knots(), grid)
    hx, hy = upper_hull(xs, phi * g.cdf(xs))
    if budget >= hx[-1]:
        return float(hy[-1])
    return float(np.interp(budget, hx, hy))


def best_response_value_b(
    f_high: MixedStrategy,
    f_low: MixedStrategy,
    p: float,
    budget: float,
    unit_cost: float = 0.0,
    phi: float = 1.0,
    grid: int = DEFAULT_GRID,
) -> float:
    top = max(f_high.top, f_low.top)
    xs = _bid_grid(top, np.concatenate([f_high.knots(), f_low.knots()]), grid)
    vals = phi * (p * f_high.cdf(xs) + (1.0 - p) * f_low.cdf(xs)) - unit_cost * xs
    hx, hy = upper_hull(xs, vals)
    feasible = hx <= budget
    best = float(hy[feasible].max())
    if budget < hx[-1]:
        best = max(best, float(np.interp(budget, hx, hy)))
    return best


@dataclass(frozen=True)
class VerificationReport:
    value_a: float
    value_b: float
    exploitability_a_high: float
    exploitability_a_low: float
    exploitability_b: float
    epsilon: float
    grid_points: int
    budget_excess: float = 0.0

    def to_dict(self) -> dict:
        return asdict(self)


def verify_equilibrium(profile: StrategyProfile, spec: GameSpec, grid: int = DEFAULT_GRID) -> VerificationReport:
    e, opp, phi = spec.endowment, spec.opponent, spec.phi
    p, c = e.p_high, opp.unit_cost
    fh, fl, fb = profile.f_a_high, profile.f_a_low, profile.f_b
    pay_high = exact_payoff(fh, fb, phi)
    pay_low = exact_payoff(fl, fb, phi)
    value_a = p * pay_high + (1.0 - p) * pay_low
    value_b = phi - value_a - c * fb.mean
    ex_high = best_response_value_a(fb, e.high, phi, grid) - pay_high
    ex_low = best_response_value_a(fb, e.low, phi, grid) - pay_low
    ex_b = best_response_value_b(fh, fl, p, opp.budget, c, phi, grid) - value_b
    ex_high, ex_low, ex_b = (max(x, 0.0) for x in (ex_high, ex_low, ex_b))
    excess = max(
        fh.mean - e.high,
        fl.mean - e.low,
        fb.mean - opp.budget if math.isfinite(opp.budget) else 0.0,
        0.0,
    )
    return VerificationReport(
        value_a=value_a,
        value_b=value_b,
        exploitability_a_high=ex_high,
        exploitability_a_low=ex_low,
        exploitability_b=ex_b,
        epsilon=max(ex_high, ex_low, ex_b),
        grid_points=grid,
        budget_excess=excess,
    )


def sample_allocation(s: MixedStrategy, battlefields: BattlefieldSet, seed=None, n: int | None = None) -> np.ndarray:
    """Draw total allocations from ``s`` and split them in proportion to battlefield values.

    Returns a vector of length len(values), or an (n, len(values)) array when ``n`` is given.
    """
    rng = np.random.default_rng(seed)
    values = np.asarray(battlefields.values)
    shares = values / values.sum()
    totals = s.sample(rng, 1 if n is None else n)
    out = totals[:, None] * shares
    return out[0] if n is None else out


def monte_carlo_payoff(
    profile: StrategyProfile,
    spec: GameSpec,
    n_samples: int,
    seed=None,
    chunk: int = 250_000,
) -> tuple[float, float]:
    """Estimate player A's ex-ante payoff and its standard error."""
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    rng = np.random.default_rng(seed)
    values = np.asarray(spec.battlefields.values)
    shares = values / values.sum()
    p = spec.endowment.p_high
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < n_samples:
        n = min(chunk, n_samples - done)
        high = rng.random(n) < p
        x = np.empty(n)
        n_high = int(high.sum())
        if n_high:
            x[high] = profile.f_a_high.sample(rng, n_high)
        if n - n_high:
            x[~high] = profile.f_a_low.sample(rng, n - n_high)
        y = profile.f_b.sample(rng, n)
        won = (x[:, None] * shares > y[:, None] * shares) @ values
        total += float(won.sum())
        total_sq += float((won ** 2).sum())
        done += n
    mean = total / n_samples
    if n_samples == 1:
        return mean, 0.0
    var = max(total_sq - n_samples * mean ** 2, 0.0) / (n_samples - 1)
    return mean, math.sqrt(var / n_samples)
