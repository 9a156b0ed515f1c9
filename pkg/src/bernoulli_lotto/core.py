"""Domain types, validation and small numeric helpers shared by every module."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

REL_TOL = 1e-12
ABS_TOL = 1e-15


class LottoError(ValueError):
    """Base class for every error raised by the package."""


class ValidationError(LottoError):
    pass


class NonpositiveValue(ValidationError):
    pass


class EndowmentOrder(ValidationError):
    pass


class ProbabilityRange(ValidationError):
    pass


class DegenerateOpponent(ValidationError):
    pass


class InfiniteBudgetNoCost(ValidationError):
    pass


class ZeroCost(ValidationError):
    pass


class DegenerateP(ValidationError):
    pass


class OutsideR5(LottoError):
    pass


class Unclassifiable(LottoError):
    pass


class SettingMismatch(LottoError):
    pass


def tol(a: float, b: float) -> float:
    return REL_TOL * max(abs(a), abs(b)) + ABS_TOL


def leq(a: float, b: float) -> bool:
    """a <= b up to the boundary tolerance."""
    return a <= b + tol(a, b)


def geq(a: float, b: float) -> bool:
    return a >= b - tol(a, b)


def close(a: float, b: float) -> bool:
    return abs(a - b) <= tol(a, b)


@dataclass(frozen=True)
class BattlefieldSet:
    values: tuple[float, ...]

    def __init__(self, values: Sequence[float]):
        object.__setattr__(self, "values", tuple(float(v) for v in values))

    @property
    def total(self) -> float:
        return math.fsum(self.values)


@dataclass(frozen=True)
class BernoulliEndowment:
    """Two-point budget: ``high`` with probability ``p_high``, ``low`` otherwise."""

    high: float
    low: float
    p_high: float

    @property
    def mean(self) -> float:
        return self.p_high * self.high + (1.0 - self.p_high) * self.low

    @property
    def is_degenerate(self) -> bool:
        return self.p_high in (0.0, 1.0) or self.high == self.low


@dataclass(frozen=True)
class OpponentParams:
    budget: float
    unit_cost: float = 0.0


@dataclass(frozen=True)
class GameSpec:
    endowment: BernoulliEndowment
    opponent: OpponentParams
    battlefields: BattlefieldSet = field(default_factory=lambda: BattlefieldSet([1.0]))

    @property
    def phi(self) -> float:
        return self.battlefields.total


@dataclass(frozen=True)
class PayoffPair:
    player_a: float
    player_b: float


def validate_endowment(e: BernoulliEndowment) -> BernoulliEndowment:
    for name, x in (("A1", e.high), ("A2", e.low), ("p", e.p_high)):
        if not isinstance(x, (int, float)) or math.isnan(x) or math.isinf(x):
            raise NonpositiveValue(f"{name} must be a finite number, got {x!r}")
    if e.low < 0:
        raise EndowmentOrder(f"A2 must be nonnegative, got {e.low}")
    if e.high < e.low:
        raise EndowmentOrder(f"A1 >= A2 violated: A1={e.high}, A2={e.low}")
    if not 0.0 <= e.p_high <= 1.0:
        raise ProbabilityRange(f"p must lie in [0, 1], got {e.p_high}")
    return e


def validate_opponent(o: OpponentParams) -> OpponentParams:
    if math.isnan(o.budget) or o.budget <= 0:
        raise NonpositiveValue(f"opponent budget B must be positive, got {o.budget}")
    if math.isnan(o.unit_cost) or math.isinf(o.unit_cost) or o.unit_cost < 0:
        raise NonpositiveValue(f"opponent cost c must be finite and >= 0, got {o.unit_cost}")
    if math.isinf(o.budget) and o.unit_cost == 0:
        raise DegenerateOpponent("infinite opponent budget with zero cost")
    return o


def validate_battlefields(v: BattlefieldSet) -> BattlefieldSet:
    if not v.values:
        raise NonpositiveValue("at least one battlefield is required")
    for x in v.values:
        if math.isnan(x) or math.isinf(x) or x <= 0:
            raise NonpositiveValue(f"battlefield values must be positive and finite, got {x}")
    return v


def validate_spec(spec: GameSpec) -> GameSpec:
    validate_battlefields(spec.battlefields)
    validate_endowment(spec.endowment)
    validate_opponent(spec.opponent)
    return spec


def validate_phi(phi: float) -> float:
    if math.isnan(phi) or math.isinf(phi) or phi <= 0:
        raise NonpositiveValue(f"phi must be positive and finite, got {phi}")
    return phi


def expected_endowment(e: BernoulliEndowment) -> float:
    return e.mean


def parse_budget(x) -> float:
    """Accept numbers or the string "inf" (JSON has no infinity literal)."""
    if isinstance(x, str):
        if x.strip().lower() in ("inf", "+inf", "infinity"):
            return math.inf
        raise NonpositiveValue(f"cannot parse budget {x!r}")
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise NonpositiveValue(f"expected a number, got {x!r}")
    return float(x)


def spec_from_dict(d: dict) -> GameSpec:
    try:
        end = d["endowment"]
        opp = d["opponent"]
        e = BernoulliEndowment(parse_budget(end["A1"]), parse_budget(end["A2"]), parse_budget(end["p"]))
        o = OpponentParams(parse_budget(opp["B"]), parse_budget(opp.get("c", 0.0)))
        v = BattlefieldSet([parse_budget(x) for x in d.get("battlefields", [1.0])])
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed game spec: missing or invalid field {exc}") from exc
    return validate_spec(GameSpec(e, o, v))


def format_number(x: float):
    """Round to 9 significant digits; infinities become the string "inf"."""
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, int):
        return x
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    return float(f"{x:.9g}")
