"""Pairwise interaction functions and point configurations.

All supported models are isotropic and purely inhibitory (``0 <= g <= 1``)
with a finite range ``R``, so ``g`` is exposed as a function of the
inter-point distance only.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np


class Family(str, enum.Enum):
    STRAUSS = "Strauss"
    STRAUSS_HARD_CORE = "StraussHardCore"
    PIECEWISE_STRAUSS_HARD_CORE = "PiecewiseStraussHardCore"
    DIGGLE_GRATTON = "DiggleGratton"


class ModelError(ValueError):
    """Raised for an invalid model description."""


@dataclass(frozen=True)
class PairwiseInteraction:
    """Immutable description of a pairwise interaction function ``g``.

    ``radii`` holds the outer breakpoints. For the piecewise family these
    are ``R_2 < ... < R_{I+1} = R`` and ``gamma[i]`` applies on the annulus
    starting at the previous breakpoint (the first annulus starts at the
    hard core). All other families carry the single range ``R``.
    """

    family: Family
    gamma: tuple[float, ...]
    radii: tuple[float, ...]
    hardcore: float = 0.0
    dim: int = 2

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        object.__setattr__(self, "gamma", tuple(float(g) for g in self.gamma))
        object.__setattr__(self, "radii", tuple(float(r) for r in self.radii))
        object.__setattr__(self, "hardcore", float(self.hardcore))
        if isinstance(self.dim, bool) or int(self.dim) != self.dim:
            raise ModelError(f"dim must be an integer, got {self.dim!r}")
        object.__setattr__(self, "dim", int(self.dim))
        self._validate()

    def _validate(self):
        gamma, radii, delta = self.gamma, self.radii, self.hardcore
        if self.dim < 1:
            raise ModelError("dim must be >= 1")
        if not gamma or not radii:
            raise ModelError("gamma and radii must be non-empty")
        for g in gamma:
            if not (0.0 <= g <= 1.0):
                raise ModelError(f"gamma values must lie in [0, 1], got {g}")
        for r in radii:
            if not (math.isfinite(r) and r > 0):
                raise ModelError(f"radii must be finite and positive, got {r}")
        if any(b <= a for a, b in zip(radii, radii[1:])):
            raise ModelError("radii must be strictly increasing")
        if not (math.isfinite(delta) and delta >= 0):
            raise ModelError(f"hardcore must be finite and >= 0, got {delta}")

        fam = self.family
        if fam is Family.PIECEWISE_STRAUSS_HARD_CORE:
            if len(gamma) != len(radii):
                raise ModelError("piecewise model needs one gamma per annulus")
            if delta >= radii[0]:
                raise ModelError("hardcore must be smaller than the first break")
        else:
            if len(gamma) != 1 or len(radii) != 1:
                raise ModelError(f"{fam.value} takes a single gamma and range")
            if fam is Family.STRAUSS_HARD_CORE:
                if not (0 < delta < radii[0]):
                    raise ModelError("StraussHardCore needs 0 < hardcore < R")
            elif delta != 0:
                raise ModelError(f"{fam.value} has no hard core")

    @property
    def range(self) -> float:
        return self.radii[-1]

    @property
    def breakpoints(self) -> tuple[float, ...]:
        """Radii where ``g`` may jump or change form, starting at 0."""
        pts = [0.0]
        if self.hardcore > 0:
            pts.append(self.hardcore)
        pts.extend(self.radii)
        return tuple(pts)

    def with_gamma1(self, gamma1: float) -> "PairwiseInteraction":
        """Return a copy with the first interaction parameter replaced."""
        return PairwiseInteraction(
            self.family, (gamma1,) + self.gamma[1:], self.radii, self.hardcore, self.dim
        )

    def g(self, r):
        return eval_g(self, r)

    def to_dict(self) -> dict[str, Any]:
        return {
            "family": self.family.value,
            "gamma": list(self.gamma),
            "radii": list(self.radii),
            "hardcore": self.hardcore,
            "dim": self.dim,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "PairwiseInteraction":
        if not isinstance(data, dict):
            raise ModelError("model must be a JSON object")
        unknown = set(data) - {"family", "gamma", "radii", "hardcore", "dim"}
        if unknown:
            raise ModelError(f"unknown model keys: {sorted(unknown)}")
        try:
            family = Family(data["family"])
        except KeyError:
            raise ModelError("model is missing 'family'") from None
        except ValueError:
            raise ModelError(f"unknown family {data['family']!r}") from None
        try:
            gamma = data["gamma"]
            radii = data["radii"]
        except KeyError as exc:
            raise ModelError(f"model is missing {exc.args[0]!r}") from None
        if isinstance(gamma, (int, float)):
            gamma = [gamma]
        if isinstance(radii, (int, float)):
            radii = [radii]
        try:
            return cls(family, tuple(gamma), tuple(radii),
                       data.get("hardcore", 0.0), data.get("dim", 2))
        except (TypeError, ValueError) as exc:
            raise ModelError(str(exc)) from None

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "PairwiseInteraction":
        return cls.from_dict(json.loads(text))


def strauss(gamma: float, R: float, dim: int = 2) -> PairwiseInteraction:
    return PairwiseInteraction(Family.STRAUSS, (gamma,), (R,), 0.0, dim)


def strauss_hard_core(gamma: float, delta: float, R: float, dim: int = 2) -> PairwiseInteraction:
    return PairwiseInteraction(Family.STRAUSS_HARD_CORE, (gamma,), (R,), delta, dim)


def piecewise_strauss_hard_core(gammas: Sequence[float], breaks: Sequence[float],
                                delta: float = 0.0, dim: int = 2) -> PairwiseInteraction:
    return PairwiseInteraction(
        Family.PIECEWISE_STRAUSS_HARD_CORE, tuple(gammas), tuple(breaks), delta, dim
    )


def diggle_gratton(gamma: float, R: float, dim: int = 2) -> PairwiseInteraction:
    return PairwiseInteraction(Family.DIGGLE_GRATTON, (gamma,), (R,), 0.0, dim)


def _g_scalar(model: PairwiseInteraction, r: float) -> float:
    R = model.range
    if r > R:
        return 1.0
    if r < model.hardcore:
        return 0.0
    fam = model.family
    if fam is Family.DIGGLE_GRATTON:
        gamma = model.gamma[0]
        t = r / R
        if gamma == 0.0:
            # t**inf with 1**inf = 1
            return 1.0 if t == 1.0 else 0.0
        return t ** (1.0 / gamma)
    if fam is Family.PIECEWISE_STRAUSS_HARD_CORE:
        # annulus i covers [R_i, R_{i+1}); the last one is closed at R
        for gamma_i, outer in zip(model.gamma, model.radii):
            if r < outer:
                return gamma_i
        return model.gamma[-1]
    return model.gamma[0]


def eval_g(model: PairwiseInteraction, r):
    """Evaluate the interaction function at distance(s) ``r >= 0``.

    Accepts a scalar or an array; returns the same shape.
    """
    if np.ndim(r) == 0:
        return _g_scalar(model, float(r))
    r = np.asarray(r, dtype=float)
    R = model.range
    fam = model.family
    if fam is Family.DIGGLE_GRATTON:
        gamma = model.gamma[0]
        t = np.minimum(r / R, 1.0)
        if gamma == 0.0:
            inner = np.where(t == 1.0, 1.0, 0.0)
        else:
            inner = t ** (1.0 / gamma)
    elif fam is Family.PIECEWISE_STRAUSS_HARD_CORE:
        idx = np.searchsorted(np.asarray(model.radii[:-1]), r, side="right")
        inner = np.asarray(model.gamma)[idx]
    else:
        inner = np.full(r.shape, model.gamma[0])
    out = np.where(r > R, 1.0, inner)
    return np.where(r < model.hardcore, 0.0, out)


@dataclass(frozen=True)
class PointPattern:
    """Finite point configuration in an axis-aligned rectangular window."""

    points: np.ndarray
    lower: tuple[float, ...]
    upper: tuple[float, ...]
    _checked: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        lower = tuple(float(v) for v in self.lower)
        upper = tuple(float(v) for v in self.upper)
        if len(lower) != len(upper) or not lower:
            raise ValueError("window corners must have the same positive dimension")
        if any(b <= a for a, b in zip(lower, upper)):
            raise ValueError("window must have positive side lengths")
        pts = np.array(self.points, dtype=float).reshape(-1, len(lower))
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        if self._checked and len(pts):
            lo, hi = np.array(lower), np.array(upper)
            if np.any(pts < lo) or np.any(pts > hi):
                raise ValueError("all points must lie inside the window")
            if len(np.unique(pts, axis=0)) != len(pts):
                raise ValueError("points must be distinct")

    @property
    def dim(self) -> int:
        return len(self.lower)

    @property
    def window(self) -> tuple[tuple[float, ...], tuple[float, ...]]:
        return self.lower, self.upper

    @property
    def area(self) -> float:
        return float(np.prod(np.subtract(self.upper, self.lower)))

    def __len__(self) -> int:
        return len(self.points)

    def count(self) -> int:
        return len(self.points)

    def intensity(self) -> float:
        return len(self.points) / self.area


def clip(x: PointPattern, window) -> PointPattern:
    """Restrict ``x`` to the sub-window ``window = (lower, upper)``."""
    lower, upper = window
    lo = np.asarray(lower, dtype=float)
    hi = np.asarray(upper, dtype=float)
    if lo.shape != (x.dim,) or hi.shape != (x.dim,):
        raise ValueError("window dimension does not match the pattern")
    if np.any(lo < x.lower) or np.any(hi > x.upper):
        raise ValueError("clip window must lie inside the pattern window")
    pts = x.points
    inside = np.all((pts >= lo) & (pts <= hi), axis=1) if len(pts) else np.zeros(0, bool)
    return PointPattern(pts[inside], tuple(lo), tuple(hi), _checked=False)


def papangelou(model: PairwiseInteraction, beta: float, u, x) -> float:
    """Papangelou conditional intensity ``beta * prod_{v in x} g(|u - v|)``.

    ``x`` may be a :class:`PointPattern` or an ``(n, d)`` array. Only points
    within the interaction range contribute.
    """
    pts = x.points if isinstance(x, PointPattern) else np.asarray(x, dtype=float)
    if len(pts) == 0:
        return float(beta)
    dist = np.sqrt(((pts - np.asarray(u, dtype=float)) ** 2).sum(axis=1))
    value = float(beta)
    for r in dist[dist <= model.range]:
        value *= _g_scalar(model, float(r))
        if value == 0.0:
            return 0.0
    return value
