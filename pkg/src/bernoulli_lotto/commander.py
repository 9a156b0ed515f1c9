"""Two-front commander assignment problems, deterministic and randomized."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np
from scipy.optimize import minimize_scalar

from .bernoulli_eq import bl_payoff_nocost
from .core import BernoulliEndowment, NonpositiveValue, SettingMismatch, parse_budget
from .cost_eq import bl_payoff_cost
from .lotto_ci import weak_side_payoff
from .randomizer import optimal_randomization

ROOT3_HALF = math.sqrt(3.0) / 2.0


@dataclass(frozen=True)
class CommanderInstance:
    c: float
    c1: float
    c2: float
    phi1: float
    phi2: float
    A: float = math.inf
    B1: float = math.inf
    B2: float = math.inf

    def __post_init__(self):
        for name in ("c", "c1", "c2"):
            x = getattr(self, name)
            if math.isnan(x) or math.isinf(x) or x < 0:
                raise NonpositiveValue(f"{name} must be finite and >= 0, got {x}")
        for name in ("phi1", "phi2"):
            x = getattr(self, name)
            if math.isnan(x) or math.isinf(x) or x <= 0:
                raise NonpositiveValue(f"{name} must be positive and finite, got {x}")
        if math.isnan(self.A) or self.A < 0:
            raise NonpositiveValue(f"A must be >= 0, got {self.A}")
        for name in ("B1", "B2"):
            x = getattr(self, name)
            if math.isnan(x) or x <= 0:
                raise NonpositiveValue(f"{name} must be positive, got {x}")

    @property
    def costs(self) -> tuple[float, float]:
        return (self.c1, self.c2)

    @property
    def values(self) -> tuple[float, float]:
        return (self.phi1, self.phi2)

    @property
    def budgets(self) -> tuple[float, float]:
        return (self.B1, self.B2)

    @property
    def setting(self) -> str:
        finite = all(math.isfinite(x) for x in (self.A, self.B1, self.B2))
        infinite = all(math.isinf(x) for x in (self.A, self.B1, self.B2))
        if self.c == self.c1 == self.c2 == 0 and finite:
            return "fixed_budget"
        if min(self.c, self.c1, self.c2) > 0 and infinite:
            return "per_unit"
        return "general"

    def with_cost(self, c: float) -> "CommanderInstance":
        return CommanderInstance(c, self.c1, self.c2, self.phi1, self.phi2, self.A, self.B1, self.B2)

    @classmethod
    def from_dict(cls, d: dict) -> "CommanderInstance":
        try:
            return cls(
                parse_budget(d["c"]),
                parse_budget(d["c1"]),
                parse_budget(d["c2"]),
                parse_budget(d["phi1"]),
                parse_budget(d["phi2"]),
                parse_budget(d.get("A", "inf")),
                parse_budget(d.get("B1", "inf")),
                parse_budget(d.get("B2", "inf")),
            )
        except (KeyError, TypeError) as exc:
            raise NonpositiveValue(f"malformed commander instance: {exc}") from exc


@dataclass(frozen=True)
class AssignmentDistribution:
    support: tuple[tuple[tuple[float, float], float], ...]

    @classmethod
    def from_marginals(cls, first, second) -> "AssignmentDistribution":
        """Independent product of two marginals given as [(value, prob), ...]."""
        pts = [((a, b), pa * pb) for (a, pa), (b, pb) in product(first, second) if pa * pb > 0]
        return cls(tuple(pts))

    @property
    def expected_total(self) -> float:
        return sum(prob * (a + b) for (a, b), prob in self.support)

    def marginal(self, front: int) -> BernoulliEndowment:
        probs: dict[float, float] = {}
        for pair, prob in self.support:
            probs[pair[front]] = probs.get(pair[front], 0.0) + prob
        if len(probs) > 2:
            raise ValueError("marginals may have at most two support points")
        if len(probs) == 1:
            (a,) = probs
            return BernoulliEndowment(a, a, 1.0)
        lo, hi = sorted(probs)
        return BernoulliEndowment(hi, lo, probs[hi])

    def to_list(self) -> list:
        return [{"a1": a, "a2": b, "prob": prob} for (a, b), prob in self.support]


@dataclass(frozen=True)
class AssignmentResult:
    distribution: AssignmentDistribution
    performance: float
    expected_spend: float
    case: str = ""


def _two_point(endowment: BernoulliEndowment) -> list[tuple[float, float]]:
    if endowment.high == endowment.low or endowment.p_high == 1.0:
        return [(endowment.high, 1.0)]
    return [(endowment.high, endowment.p_high), (endowment.low, 1.0 - endowment.p_high)]


def front_value(inst: CommanderInstance, front: int, endowment: BernoulliEndowment) -> float:
    """Sub-colonel ``front``'s equilibrium payoff with the given endowment distribution."""
    b, c, phi = inst.budgets[front], inst.costs[front], inst.values[front]
    if c > 0:
        return bl_payoff_cost(endowment, b, c, phi).payoffs.player_a
    return bl_payoff_nocost(endowment, b, phi).player_a


def evaluate_assignment(inst: CommanderInstance, dist: AssignmentDistribution) -> float:
    """Objective of the assignment problem: summed front payoffs minus the commander's cost."""
    gains = sum(front_value(inst, i, dist.marginal(i)) for i in (0, 1))
    return gains - inst.c * dist.expected_total


def _argmin_index(xs) -> int:
    return 0 if xs[0] <= xs[1] else 1


def _argmax_index(xs) -> int:
    return 0 if xs[0] >= xs[1] else 1


def _win_levels(inst: CommanderInstance) -> tuple[float, float]:
    """Budget at which each front is won outright: phi_i / (2 c_i)."""
    return tuple(phi / (2.0 * c) for phi, c in zip(inst.values, inst.costs))


def _require_budget_only_setting(inst: CommanderInstance) -> None:
    if not (inst.c == 0 and math.isfinite(inst.A) and inst.c1 > 0 and inst.c2 > 0
            and math.isinf(inst.B1) and math.isinf(inst.B2)):
        raise SettingMismatch("needs c = 0, finite A, c1, c2 > 0 and unlimited opponent budgets")


def _require_per_unit(inst: CommanderInstance) -> None:
    if inst.setting != "per_unit":
        raise SettingMismatch(f"needs the per-unit-cost setting, got {inst.setting}")


def _deterministic(inst: CommanderInstance, a1: float, a2: float, case: str) -> AssignmentResult:
    dist = AssignmentDistribution((((a1, a2), 1.0),))
    return AssignmentResult(dist, evaluate_assignment(inst, dist), a1 + a2, case)


# --- fixed budget, zero commander cost ---------------------------------------


def det_assign_fixed_budget(inst: CommanderInstance) -> AssignmentResult:
    _require_budget_only_setting(inst)
    A = inst.A
    phi, cost = inst.values, inst.costs
    win = _win_levels(inst)
    total = cost[0] * phi[0] + cost[1] * phi[1]

    def leftover_payoff(i: int) -> float:
        # front i gets whatever remains after the other front is won outright
        return math.sqrt(cost[i] * phi[i] * (A - win[1 - i]) / 2.0)

    def split(j: int, a_j: float) -> tuple[float, float]:
        return (a_j, A - a_j) if j == 0 else (A - a_j, a_j)

    if A < min(win):
        a1 = cost[0] * phi[0] * A / total
        res = _deterministic(inst, a1, A - a1, "1")
        return AssignmentResult(res.distribution, math.sqrt(A * total / 2.0), res.expected_spend, "1")
    if A < max(win):
        j = _argmin_index(win)
        outright = phi[j] + leftover_payoff(1 - j)
        if A >= total / (2.0 * cost[j] ** 2):
            return _with_value(inst, split(j, win[j]), outright, "2")
        interior = math.sqrt(A * total / 2.0)
        if outright >= interior:
            return _with_value(inst, split(j, win[j]), outright, "2")
        return _with_value(inst, split(j, cost[j] * phi[j] * A / total), interior, "2")
    if A < win[0] + win[1]:
        first = phi[0] + leftover_payoff(1)
        second = phi[1] + leftover_payoff(0)
        if first >= second:
            return _with_value(inst, split(0, win[0]), first, "3")
        return _with_value(inst, split(1, win[1]), second, "3")
    return _with_value(inst, split(0, win[0]), phi[0] + phi[1], "4")


def _with_value(inst, pair, value, case) -> AssignmentResult:
    dist = AssignmentDistribution(((pair, 1.0),))
    return AssignmentResult(dist, value, pair[0] + pair[1], case)


def rand_assign_fixed_budget(inst: CommanderInstance) -> AssignmentResult:
    _require_budget_only_setting(inst)
    A = inst.A
    phi, cost = inst.values, inst.costs
    win = _win_levels(inst)
    total = cost[0] * phi[0] + cost[1] * phi[1]

    def randomized(i: int, mean: float) -> list[tuple[float, float]]:
        return _two_point(optimal_randomization(mean, math.inf, cost[i], phi[i]).endowment)

    if A < min(total / (2.0 * c ** 2) for c in cost):
        marg = [randomized(i, cost[i] * phi[i] * A / total) for i in (0, 1)]
        value = math.sqrt(2.0 * A * total)
        case = "1"
    elif A < win[0] + win[1]:
        k = _argmax_index(cost)
        rest = A - win[k]
        marg = [None, None]
        marg[k] = [(win[k], 1.0)]
        marg[1 - k] = randomized(1 - k, rest)
        value = phi[k] + math.sqrt(2.0 * cost[1 - k] * phi[1 - k] * rest)
        case = "2"
    else:
        marg = [[(win[0], 1.0)], [(win[1], 1.0)]]
        value = phi[0] + phi[1]
        case = "3"
    dist = AssignmentDistribution.from_marginals(*marg)
    return AssignmentResult(dist, value, dist.expected_total, case)


# --- per-unit commander cost ---------------------------------------------------


def det_assign_per_unit(inst: CommanderInstance) -> AssignmentResult:
    """Deterministic optimum; the problem separates across the two fronts.

    On front i the commander either wins outright with phi_i/(2 c_i) or buys
    the interior optimum c_i phi_i/(8 c^2); the interior choice is better
    exactly when c > c_i (1 + sqrt(3)/2).
    """
    _require_per_unit(inst)
    c = inst.c
    alloc, value, interior = [], 0.0, []
    for ci, phi in zip(inst.costs, inst.values):
        if c > ci * (1.0 + ROOT3_HALF):
            alloc.append(ci * phi / (8.0 * c * c))
            value += ci * phi / (8.0 * c)
            interior.append(True)
        else:
            alloc.append(phi / (2.0 * ci))
            value += phi * (1.0 - c / (2.0 * ci))
            interior.append(False)
    j = _argmin_index(_win_levels(inst))
    labels = {(True, True): "i", (False, True): "ii", (True, False): "iii", (False, False): "iv"}
    case = labels[(interior[j], interior[1 - j])]
    dist = AssignmentDistribution((((alloc[0], alloc[1]), 1.0),))
    return AssignmentResult(dist, value, alloc[0] + alloc[1], case)


def rand_assign_per_unit(inst: CommanderInstance) -> AssignmentResult:
    _require_per_unit(inst)
    c = inst.c
    phi, cost = inst.values, inst.costs
    win = _win_levels(inst)
    k = _argmax_index(cost)
    m = 1 - k
    if c <= cost[m]:
        marg = [[(win[0], 1.0)], [(win[1], 1.0)]]
        value = sum(ph * (1.0 - c / (2.0 * ci)) for ph, ci in zip(phi, cost))
        spend = win[0] + win[1]
        case = "deterministic"
    elif c < cost[k]:
        marg = [None, None]
        marg[k] = [(win[k], 1.0)]
        marg[m] = [(phi[m] / (2.0 * c), cost[m] / c), (0.0, 1.0 - cost[m] / c)]
        value = phi[k] * (1.0 - c / (2.0 * cost[k])) + cost[m] * phi[m] / (2.0 * c)
        spend = cost[m] * phi[m] / (2.0 * c * c) + win[k]
        case = "mixed"
    else:
        marg = [[(ph / (2.0 * c), ci / c), (0.0, 1.0 - ci / c)] for ph, ci in zip(phi, cost)]
        value = (cost[0] * phi[0] + cost[1] * phi[1]) / (2.0 * c)
        spend = (cost[0] * phi[0] + cost[1] * phi[1]) / (2.0 * c * c)
        case = "randomized"
    dist = AssignmentDistribution.from_marginals(*marg)
    return AssignmentResult(dist, value, spend, case)


def improvement_factor(inst: CommanderInstance) -> float:
    return rand_assign_per_unit(inst).performance / det_assign_per_unit(inst).performance


def fourfold_condition(inst: CommanderInstance) -> bool:
    _require_per_unit(inst)
    phi, cost = inst.values, inst.costs
    j = _argmin_index(_win_levels(inst))
    k = _argmax_index(cost)
    total = cost[0] * phi[0] + cost[1] * phi[1]
    s1 = 0.5 * math.sqrt(cost[j] / phi[j] * total)
    return inst.c > max(s1, cost[k] * (1.0 + ROOT3_HALF))


# --- numerical settings ----------------------------------------------------------


def _weak_side(a: np.ndarray, b: float) -> np.ndarray:
    if math.isinf(b):
        raise SettingMismatch("zero opponent cost needs a finite opponent budget")
    safe = np.maximum(a, b)
    return np.where(a < b, a / (2.0 * b), 1.0 - b / (2.0 * safe))


def front_det_values(a: np.ndarray, b: float, c: float, phi: float) -> np.ndarray:
    """Vectorized complete-information payoff of a front holding ``a`` for certain."""
    a = np.asarray(a, dtype=float)
    if c == 0:
        return phi * _weak_side(a, b)
    vals = np.sqrt(c * phi * a / 2.0)
    if math.isfinite(b):
        vals = np.maximum(vals, phi * _weak_side(a, b))
    won = a >= phi / (2.0 * c) * (1.0 - 1e-12)
    return np.where(won, phi, vals)


def front_rand_values(a: np.ndarray, b: float, c: float, phi: float) -> np.ndarray:
    """Vectorized best randomized payoff of a front with mean budget ``a``."""
    a = np.asarray(a, dtype=float)
    if c == 0:
        return phi * _weak_side(a, b)
    vals = np.sqrt(2.0 * c * phi * a)
    if math.isfinite(b):
        vals = np.maximum(vals, phi * _weak_side(a, b))
    won = a >= phi / (2.0 * c) * (1.0 - 1e-12)
    return np.where(won, phi, vals)


def _best_split(inst: CommanderInstance, xs: np.ndarray, values_fn) -> float:
    A = inst.A
    f1 = values_fn(xs, inst.B1, inst.c1, inst.phi1) - inst.c * xs
    f2 = values_fn(xs, inst.B2, inst.c2, inst.phi2) - inst.c * xs
    best2 = np.maximum.accumulate(f2)
    idx = np.searchsorted(xs, A - xs + 1e-12 * A, side="right") - 1
    return float(np.max(f1 + best2[idx]))


def _split_grid(inst: CommanderInstance, n: int) -> np.ndarray:
    A = inst.A
    knots = [0.0, A]
    for b, c, phi in zip(inst.budgets, inst.costs, inst.values):
        if c > 0:
            knots.append(phi / (2.0 * c))
        if math.isfinite(b):
            knots.append(b)
    knots = [k for k in knots if 0.0 <= k <= A]
    knots += [A - k for k in knots]
    return np.unique(np.concatenate([np.linspace(0.0, A, n), knots]))


@dataclass(frozen=True)
class GeneralPerformance:
    w_det: float
    w_rand: float
    grid_points: int
    delta: float

    def __iter__(self):
        return iter((self.w_det, self.w_rand))


def general_setting_performance(
    inst: CommanderInstance, grid_size: int = 1025, max_grid: int = 2 ** 20 + 1
) -> GeneralPerformance:
    """Deterministic and randomized optima by grid search with breakpoints as knots.

    The grid doubles until both values move by less than 1e-4 (phi1 + phi2).
    """
    if not math.isfinite(inst.A):
        raise SettingMismatch("the general setting needs a finite commander budget")
    if inst.A == 0:
        return GeneralPerformance(0.0, 0.0, 1, 0.0)
    target = 1e-4 * (inst.phi1 + inst.phi2)
    n = max(int(grid_size), 3)
    xs = _split_grid(inst, n)
    prev = (_best_split(inst, xs, front_det_values), _best_split(inst, xs, front_rand_values))
    while True:
        n = 2 * n - 1
        xs = _split_grid(inst, n)
        cur = (_best_split(inst, xs, front_det_values), _best_split(inst, xs, front_rand_values))
        delta = max(abs(cur[0] - prev[0]), abs(cur[1] - prev[1]))
        if delta < target or n >= max_grid:
            return GeneralPerformance(cur[0], cur[1], len(xs), delta)
        prev = cur


@dataclass(frozen=True)
class FixedBudgetComparison:
    w_det: float
    w_rand: float
    equal: bool
    split: float

    def __iter__(self):
        return iter((self.w_det, self.w_rand, self.equal))


def _best_randomized_front(inst: CommanderInstance, front: int, mean: float, probs, ratios) -> float:
    b, phi = inst.budgets[front], inst.values[front]
    best = -math.inf
    for p in probs:
        for r in ratios:
            high = mean / (p + (1.0 - p) * r)
            e = BernoulliEndowment(high, min(r * high, high), p)
            best = max(best, bl_payoff_nocost(e, b, phi).player_a)
    return best


def fixed_budget_equality(
    inst: CommanderInstance, split_points: int = 41, p_points: int = 9, ratio_points: int = 9
) -> FixedBudgetComparison:
    """Compare deterministic and randomized performance with fixed budgets and no costs.

    The deterministic split maximizes a concave function, so a grid pass
    followed by bounded refinement finds it. The randomized value is a plain
    grid search over splits and two-point marginals (it includes the
    deterministic split), so any gain from randomizing would show up here.
    """
    if inst.setting != "fixed_budget":
        raise SettingMismatch(f"needs the fixed-budget setting, got {inst.setting}")
    A = inst.A
    if A == 0:
        return FixedBudgetComparison(0.0, 0.0, True, 0.0)

    def det(s: float) -> float:
        return (inst.phi1 * weak_side_payoff(s, inst.B1)
                + inst.phi2 * weak_side_payoff(A - s, inst.B2))

    xs = _split_grid(inst, 2001)
    vals = [det(s) for s in xs]
    i = int(np.argmax(vals))
    lo, hi = xs[max(i - 1, 0)], xs[min(i + 1, len(xs) - 1)]
    split, w_det = xs[i], vals[i]
    if hi > lo:
        res = minimize_scalar(lambda s: -det(s), bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-12 * max(A, 1.0)})
        if -res.fun > w_det:
            split, w_det = float(res.x), -float(res.fun)

    probs = np.linspace(0.05, 0.95, p_points)
    ratios = np.linspace(0.0, 1.0, ratio_points)
    splits = np.unique(np.append(np.linspace(0.0, A, split_points), split))
    w_rand = float(max(
        _best_randomized_front(inst, 0, s, probs, ratios)
        + _best_randomized_front(inst, 1, A - s, probs, ratios)
        for s in splits
    ))
    equal = w_rand - w_det <= 1e-4 * (inst.phi1 + inst.phi2)
    return FixedBudgetComparison(w_det, w_rand, bool(equal), float(split))
