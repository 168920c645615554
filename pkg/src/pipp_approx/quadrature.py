"""Interaction integrals G = int(1 - g), int(1 - g)^2 and the constant kappa."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .models import Family, PairwiseInteraction, _g_scalar

__all__ = [
    "QuadratureError",
    "InteractionSummary",
    "ball_volume",
    "adaptive_simpson",
    "radial_integral",
    "integral_one_minus_g",
    "compute_kappa",
    "summarize",
]

RTOL = 1e-10
MAX_DEPTH = 60


class QuadratureError(RuntimeError):
    """Adaptive quadrature did not reach the requested tolerance."""


def ball_volume(d: int, rho: float) -> float:
    """Volume of the ``d``-dimensional Euclidean ball of radius ``rho``."""
    if d < 1:
        raise ValueError("dimension must be >= 1")
    if rho < 0:
        raise ValueError("radius must be >= 0")
    if rho == 0:
        return 0.0
    return math.exp(0.5 * d * math.log(math.pi) + d * math.log(rho) - math.lgamma(0.5 * d + 1))


def adaptive_simpson(f: Callable[[float], float], a: float, b: float,
                     abs_tol: float, rel_tol: float = RTOL, max_depth: int = MAX_DEPTH) -> float:
    """Adaptive Simpson quadrature of ``f`` over ``[a, b]``.

    Interval halves are accepted when the two-level difference satisfies
    ``|S2 - S1| <= 15 * tol`` with the tolerance split between halves.
    Raises :class:`QuadratureError` when ``max_depth`` is exhausted.
    """
    if b == a:
        return 0.0
    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    tol = max(abs_tol, rel_tol * abs(whole))

    # explicit stack: (a, b, fa, fm, fb, whole, tol, depth)
    stack = [(a, b, fa, fm, fb, whole, tol, 0)]
    total = 0.0
    while stack:
        a, b, fa, fm, fb, whole, tol, depth = stack.pop()
        m = 0.5 * (a + b)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
        right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
        delta = left + right - whole
        if abs(delta) <= 15.0 * tol:
            total += left + right + delta / 15.0
        elif depth >= max_depth:
            raise QuadratureError(
                f"adaptive Simpson did not converge on [{a}, {b}] (depth {depth})"
            )
        else:
            stack.append((a, m, fa, flm, fm, left, 0.5 * tol, depth + 1))
            stack.append((m, b, fm, frm, fb, right, 0.5 * tol, depth + 1))
    return total


def radial_integral(model: PairwiseInteraction, power: int) -> float:
    """``int_{R^d} (1 - g(u))^power du`` by adaptive Simpson on the radial profile.

    The radial integrand is split at the model breakpoints so that every
    piece is smooth.
    """
    d = model.dim
    R = model.range
    surface = d * ball_volume(d, 1.0)
    abs_tol = 1e-10 * ball_volume(d, R)

    def integrand(r: float) -> float:
        return (1.0 - _g_scalar(model, r)) ** power * r ** (d - 1)

    pts = model.breakpoints
    total = 0.0
    for lo, hi in zip(pts, pts[1:]):
        # evaluate strictly inside each piece; endpoints sit on jumps
        eps = (hi - lo) * 1e-15

        def piece(r, lo=lo, hi=hi, eps=eps):
            return integrand(min(max(r, lo + eps), hi - eps))

        total += adaptive_simpson(piece, lo, hi, abs_tol / (surface * len(pts)))
    return surface * total


def _closed_form(model: PairwiseInteraction, power: int) -> float:
    d = model.dim
    inner = model.hardcore
    total = ball_volume(d, inner)
    for gamma_i, outer in zip(model.gamma, model.radii):
        shell = ball_volume(d, outer) - ball_volume(d, inner)
        total += (1.0 - gamma_i) ** power * shell
        inner = outer
    return total


def integral_one_minus_g(model: PairwiseInteraction, power: int = 1,
                         method: str = "auto") -> float:
    """``int (1 - g)^power`` over ``R^d`` for ``power`` in {1, 2}.

    ``method="auto"`` uses the exact annulus sum for piecewise-constant
    families and radial quadrature for Diggle-Gratton; ``"quadrature"``
    forces numerical integration.
    """
    if power not in (1, 2):
        raise ValueError("power must be 1 or 2")
    if method not in ("auto", "quadrature"):
        raise ValueError(f"unknown method {method!r}")
    if method == "auto" and model.family is not Family.DIGGLE_GRATTON:
        return _closed_form(model, power)
    return radial_integral(model, power)


def _ratio(num: float, den: float) -> float:
    if den == 0.0:
        return 0.0
    return num / den


def _kappa_from(int_sq: float, ball_R: float, ball_delta: float) -> float:
    kappa = max(_ratio(ball_delta, int_sq), _ratio(int_sq, ball_R))
    return min(max(kappa, 0.0), 1.0)


def compute_kappa(model: PairwiseInteraction) -> float:
    """Repulsiveness constant in [0, 1].

    ``max(|B(0,delta)| / int(1-g)^2, int(1-g)^2 / |B(0,R)|)``; a zero
    denominator contributes 0, so ``g == 1`` gives ``kappa = 0``.
    """
    int_sq = integral_one_minus_g(model, 2)
    return _kappa_from(int_sq, ball_volume(model.dim, model.range),
                       ball_volume(model.dim, model.hardcore))


@dataclass(frozen=True)
class InteractionSummary:
    G: float
    int_sq: float
    kappa: float
    ball_R: float
    ball_delta: float


def summarize(model: PairwiseInteraction) -> InteractionSummary:
    G = integral_one_minus_g(model, 1)
    int_sq = integral_one_minus_g(model, 2)
    ball_R = ball_volume(model.dim, model.range)
    ball_delta = ball_volume(model.dim, model.hardcore)
    return InteractionSummary(G, int_sq, _kappa_from(int_sq, ball_R, ball_delta),
                              ball_R, ball_delta)
