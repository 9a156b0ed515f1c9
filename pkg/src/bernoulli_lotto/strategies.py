"""Mixtures of point masses and uniform intervals on the nonnegative reals."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

WEIGHT_TOL = 1e-12


@dataclass(frozen=True)
class Atom:
    point: float

    @property
    def lo(self) -> float:
        return self.point

    @property
    def hi(self) -> float:
        return self.point

    @property
    def mean(self) -> float:
        return self.point


@dataclass(frozen=True)
class Uniform:
    lo: float
    hi: float

    @property
    def mean(self) -> float:
        return 0.5 * (self.lo + self.hi)


Segment = Union[Atom, Uniform]


def _canonical(components: Iterable[tuple[float, Segment]]) -> tuple[tuple[float, Segment], ...]:
    atoms: dict[float, float] = {}
    uniforms: dict[tuple[float, float], float] = {}
    for w, seg in components:
        w = float(w)
        if w < -WEIGHT_TOL:
            raise ValueError(f"negative mixture weight {w}")
        if w <= WEIGHT_TOL * 1e-3:
            continue
        if isinstance(seg, Uniform) and not seg.hi > seg.lo:
            seg = Atom(seg.lo)
        if isinstance(seg, Atom):
            pt = max(float(seg.point), 0.0)
            atoms[pt] = atoms.get(pt, 0.0) + w
        else:
            key = (max(float(seg.lo), 0.0), float(seg.hi))
            uniforms[key] = uniforms.get(key, 0.0) + w
    out = [(w, Atom(pt)) for pt, w in atoms.items()]
    out += [(w, Uniform(lo, hi)) for (lo, hi), w in uniforms.items()]
    out.sort(key=lambda c: (c[1].lo, c[1].hi, isinstance(c[1], Uniform)))
    total = sum(w for w, _ in out)
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"mixture weights sum to {total}, not 1")
    return tuple((w / total, s) for w, s in out)


class MixedStrategy:
    """A finite mixture of ``Atom`` and ``Uniform`` components.

    Zero-weight components are dropped, coincident atoms merged and the
    components sorted by lower endpoint, so two equal mixtures compare equal.
    """

    def __init__(self, components: Iterable[tuple[float, Segment]]):
        self.components = _canonical(components)

    @classmethod
    def atom(cls, point: float) -> "MixedStrategy":
        return cls([(1.0, Atom(point))])

    @classmethod
    def uniform(cls, lo: float, hi: float) -> "MixedStrategy":
        return cls([(1.0, Uniform(lo, hi))])

    def __eq__(self, other) -> bool:
        if not isinstance(other, MixedStrategy) or len(self.components) != len(other.components):
            return False
        for (w1, s1), (w2, s2) in zip(self.components, other.components):
            if type(s1) is not type(s2) or abs(w1 - w2) > 1e-12:
                return False
            if abs(s1.lo - s2.lo) > 1e-12 or abs(s1.hi - s2.hi) > 1e-12:
                return False
        return True

    def __repr__(self) -> str:
        parts = []
        for w, s in self.components:
            if isinstance(s, Atom):
                parts.append(f"{w:.6g}*Atom({s.point:.6g})")
            else:
                parts.append(f"{w:.6g}*Uniform({s.lo:.6g}, {s.hi:.6g})")
        return "MixedStrategy(" + " + ".join(parts) + ")"

    @property
    def mean(self) -> float:
        return float(sum(w * s.mean for w, s in self.components))

    @property
    def top(self) -> float:
        return max(s.hi for _, s in self.components)

    def atom_weight(self, point: float) -> float:
        return sum(w for w, s in self.components if isinstance(s, Atom) and s.point == point)

    def knots(self) -> np.ndarray:
        pts = set()
        for _, s in self.components:
            pts.add(s.lo)
            pts.add(s.hi)
        return np.array(sorted(pts))

    def cdf(self, x, left: bool = False) -> np.ndarray:
        """P(X <= x), or P(X < x) when ``left`` is set."""
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for w, s in self.components:
            if isinstance(s, Atom):
                hit = x > s.point if left else x >= s.point
                out += w * hit
            else:
                out += w * np.clip((x - s.lo) / (s.hi - s.lo), 0.0, 1.0)
        return np.minimum(out, 1.0)

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        weights = np.array([w for w, _ in self.components])
        idx = rng.choice(len(weights), size=n, p=weights / weights.sum())
        u = rng.random(n)
        lo = np.array([s.lo for _, s in self.components])
        hi = np.array([s.hi for _, s in self.components])
        return lo[idx] + u * (hi[idx] - lo[idx])

    def scaled(self, factor: float) -> "MixedStrategy":
        """Same shape with every bid multiplied by ``factor``."""
        comps = []
        for w, s in self.components:
            if isinstance(s, Atom):
                comps.append((w, Atom(factor * s.point)))
            else:
                comps.append((w, Uniform(factor * s.lo, factor * s.hi)))
        return MixedStrategy(comps)

    def to_dict(self) -> dict:
        comps = []
        for w, s in self.components:
            if isinstance(s, Atom):
                comps.append({"w": w, "atom": s.point})
            else:
                comps.append({"w": w, "lo": s.lo, "hi": s.hi})
        return {"components": comps}

    @classmethod
    def from_dict(cls, d: dict) -> "MixedStrategy":
        comps = []
        for c in d["components"]:
            if "atom" in c:
                comps.append((c["w"], Atom(float(c["atom"]))))
            else:
                comps.append((c["w"], Uniform(float(c["lo"]), float(c["hi"]))))
        return cls(comps)


def mix(*parts: tuple[float, MixedStrategy]) -> MixedStrategy:
    """Convex combination of mixtures."""
    comps = []
    for a, m in parts:
        comps += [(a * w, s) for w, s in m.components]
    return MixedStrategy(comps)


@dataclass(frozen=True)
class StrategyProfile:
    f_a_high: MixedStrategy
    f_a_low: MixedStrategy
    f_b: MixedStrategy

    def to_dict(self) -> dict:
        return {
            "f_a_high": self.f_a_high.to_dict(),
            "f_a_low": self.f_a_low.to_dict(),
            "f_b": self.f_b.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "StrategyProfile":
        return cls(*(MixedStrategy.from_dict(d[k]) for k in ("f_a_high", "f_a_low", "f_b")))
