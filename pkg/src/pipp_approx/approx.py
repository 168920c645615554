"""Poisson-saddlepoint and DPP intensity approximations.

Both approximations are fixed points ``lam = f(lam)`` of maps that are
continuous and decreasing in ``lam`` with ``f(0) = beta``, so the root of
``lam - f(lam)`` is bracketed by ``[0, beta]`` and found by safeguarded
Newton iteration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .models import PairwiseInteraction
from .quadrature import summarize

__all__ = [
    "SolverError",
    "NoSolution",
    "ApproxResult",
    "EigenvalueSpec",
    "f_ps",
    "f_dpp",
    "solve_lambda_ps",
    "solve_lambda_dpp",
    "solve_lambda_dpp_discrete",
    "lambert_w",
    "lambert_w_kappa",
    "dpp_laplace_product",
    "equal_eigenvalues",
    "approximate_intensity",
]

TOL = 1e-12
MAX_ITER = 200


class SolverError(RuntimeError):
    """The root finder failed to meet its tolerance."""


class NoSolution(ValueError):
    """The discrete-N fixed-point equation has no solution in [0, beta]."""


def _bracketed_root(h: Callable[[float], float], dh: Callable[[float], float] | None,
                    lo: float, hi: float, ftol: float, xtol: float = 0.0,
                    max_iter: int = MAX_ITER, x0: float | None = None) -> tuple[float, float, int]:
    """Root of an increasing ``h`` on ``[lo, hi]`` with ``h(lo) <= 0 <= h(hi)``.

    Newton steps are taken when they stay inside the current bracket,
    bisection otherwise. Returns ``(x, |h(x)|, iterations)``.
    """
    h_lo, h_hi = h(lo), h(hi)
    if h_lo > 0 or h_hi < 0:
        raise SolverError(f"root not bracketed: h({lo})={h_lo}, h({hi})={h_hi}")
    if abs(h_lo) <= ftol:
        return lo, abs(h_lo), 0
    if abs(h_hi) <= ftol:
        return hi, abs(h_hi), 0

    x = x0 if x0 is not None and lo < x0 < hi else 0.5 * (lo + hi)
    for it in range(1, max_iter + 1):
        hx = h(x)
        if abs(hx) <= ftol:
            return x, abs(hx), it
        if hx < 0:
            lo = x
        else:
            hi = x
        if hi - lo <= max(xtol, 4.0 * math.ulp(hi)):
            return x, abs(hx), it
        step = None
        if dh is not None:
            slope = dh(x)
            if slope > 0 and math.isfinite(slope):
                step = x - hx / slope
        if step is None or not (lo < step < hi):
            step = 0.5 * (lo + hi)
        if abs(step - x) <= 2.0 * math.ulp(x):
            # no representable progress left
            hs = h(step)
            return (step, abs(hs), it) if abs(hs) <= abs(hx) else (x, abs(hx), it)
        x = step
    hx = h(x)
    if abs(hx) <= ftol:
        return x, abs(hx), max_iter
    raise SolverError(f"no convergence after {max_iter} iterations (|h|={abs(hx):.3e})")


def f_ps(beta: float, G: float, lam: float) -> float:
    """Poisson-saddlepoint map ``beta * exp(-lam * G)``."""
    return beta * math.exp(-lam * G)


def _log1p_ratio(x: float) -> float:
    # log1p(-x) / x, continuous at 0
    return -1.0 if x == 0.0 else math.log1p(-x) / x


def _log_f_dpp(beta: float, G: float, kappa: float, lam: float) -> float:
    # n log1p(-s/n) with n = 1 + s/kappa, rewritten via x = s/n so tiny kappa cannot overflow
    s = lam * G
    x = s * kappa / (kappa + s)
    return math.log(beta) + s * _log1p_ratio(x)


def f_dpp(beta: float, G: float, kappa: float, lam: float) -> float:
    """DPP envelope map ``beta * (1 - lam G / (1 + lam G / kappa))^(1 + lam G / kappa)``.

    ``kappa = 0`` is the Poisson limit and returns :func:`f_ps`.
    """
    if not (0.0 <= kappa <= 1.0):
        raise ValueError("kappa must lie in [0, 1]")
    if kappa == 0.0 or G == 0.0:
        return f_ps(beta, G, lam)
    if lam == 0.0:
        return float(beta)
    return math.exp(_log_f_dpp(beta, G, kappa, lam))


def _dlog_f_dpp(G: float, kappa: float, lam: float) -> float:
    """Derivative of ``log f_dpp`` with respect to ``lam``."""
    s = lam * G
    x = s * kappa / (kappa + s)
    return G * (s / (kappa + s) * _log1p_ratio(x) - kappa / (kappa + s * (1.0 - kappa)))


def _check(beta: float, G: float, kappa: float = 0.0):
    if not (beta > 0 and math.isfinite(beta)):
        raise ValueError(f"beta must be positive and finite, got {beta}")
    if not (G >= 0 and math.isfinite(G)):
        raise ValueError(f"G must be finite and >= 0, got {G}")
    if not (0.0 <= kappa <= 1.0):
        raise ValueError(f"kappa must lie in [0, 1], got {kappa}")


def _solve_ps(beta: float, G: float) -> tuple[float, float, int]:
    _check(beta, G)
    if G == 0.0:
        return float(beta), 0.0, 0

    def h(lam):
        return lam - f_ps(beta, G, lam)

    def dh(lam):
        return 1.0 + G * f_ps(beta, G, lam)

    return _bracketed_root(h, dh, 0.0, float(beta), TOL * beta)


def _solve_dpp(beta: float, G: float, kappa: float) -> tuple[float, float, int]:
    _check(beta, G, kappa)
    if G == 0.0 or kappa == 0.0:
        return _solve_ps(beta, G)

    def h(lam):
        return lam - f_dpp(beta, G, kappa, lam)

    def dh(lam):
        return 1.0 - f_dpp(beta, G, kappa, lam) * _dlog_f_dpp(G, kappa, lam)

    return _bracketed_root(h, dh, 0.0, float(beta), TOL * beta)


def solve_lambda_ps(beta: float, G: float) -> float:
    """Unique solution of ``lam = beta * exp(-lam G)``, i.e. ``W(beta G) / G``."""
    return _solve_ps(beta, G)[0]


def solve_lambda_dpp(beta: float, G: float, kappa: float) -> float:
    """Unique solution of ``lam = f_dpp(lam)``, i.e. ``W_kappa(beta G / kappa) / (G / kappa)``."""
    return _solve_dpp(beta, G, kappa)[0]


def lambert_w(y: float) -> float:
    """Principal branch of the inverse of ``x -> x exp(x)`` for ``y >= 0``."""
    if y < 0:
        raise ValueError("lambert_w is only defined here for y >= 0")
    if y == 0:
        return 0.0
    log_y = math.log(y)

    def h(x):
        return (math.log(x) + x - log_y) if x > 0 else -math.inf

    def dh(x):
        return 1.0 / x + 1.0

    hi = max(1.0, log_y + 1.0)
    x, _, _ = _bracketed_root(h, dh, 0.0, hi, ftol=0.0, x0=math.log1p(y))
    return x


def _log_phi_kappa(x: float, kappa: float) -> float:
    # log of x * (1 - kappa x / (1 + x))^(-1 - x)
    return math.log(x) - (1.0 + x) * math.log1p(-kappa * x / (1.0 + x))


def lambert_w_kappa(y: float, kappa: float) -> float:
    """Inverse of ``x -> x (1 - kappa x / (1 + x))^(-1 - x)`` on ``x >= 0``.

    ``kappa = 0`` reduces to ``x -> x`` and ``kappa = 1`` to ``x (1 + x)^(1 + x)``.
    """
    if y < 0:
        raise ValueError("lambert_w_kappa is only defined here for y >= 0")
    if not (0.0 <= kappa <= 1.0):
        raise ValueError("kappa must lie in [0, 1]")
    if y == 0:
        return 0.0
    if kappa == 0.0:
        return float(y)
    log_y = math.log(y)

    def h(x):
        return _log_phi_kappa(x, kappa) - log_y if x > 0 else -math.inf

    def dh(x):
        u = kappa * x / (1.0 + x)
        du = kappa / (1.0 + x) ** 2
        return 1.0 / x - math.log1p(-u) + (1.0 + x) * du / (1.0 - u)

    # phi(x) >= x exp(kappa x), so the root is at most W(kappa y) / kappa
    bound = lambert_w(kappa * y) / kappa * (1.0 + 1e-9)
    hi = min(float(y), bound) if bound > 0 else float(y)
    x0 = min(0.5 * hi, lambert_w(y)) if y > 1 else 0.5 * hi
    x, _, _ = _bracketed_root(h, dh, 0.0, hi, ftol=0.0, x0=x0)
    return x


@dataclass(frozen=True)
class EigenvalueSpec:
    """Finite list of eigenvalues in [0, 1]."""

    eigenvalues: tuple[float, ...]

    def __post_init__(self):
        vals = tuple(float(v) for v in self.eigenvalues)
        if any(not (0.0 <= v <= 1.0) for v in vals):
            raise ValueError("eigenvalues must lie in [0, 1]")
        object.__setattr__(self, "eigenvalues", vals)


def equal_eigenvalues(lam_G: float, N: int) -> EigenvalueSpec:
    """``N`` eigenvalues all equal to ``lam_G / N`` (requires ``N >= lam_G``)."""
    if N < 1:
        raise ValueError("N must be >= 1")
    return EigenvalueSpec((lam_G / N,) * N)


def dpp_laplace_product(spec: EigenvalueSpec | Sequence[float]) -> float:
    """``prod_i (1 - eigenvalue_i)``, the DPP Laplace functional."""
    vals = spec.eigenvalues if isinstance(spec, EigenvalueSpec) else EigenvalueSpec(tuple(spec)).eigenvalues
    if not vals:
        return 1.0
    arr = np.asarray(vals)
    if np.any(arr == 1.0):
        return 0.0
    return float(np.exp(np.sum(np.log1p(-arr))))


def solve_lambda_dpp_discrete(beta: float, G: float, kappa: float) -> float:
    """Smallest solution of ``lam = beta (1 - lam G / N)^N`` with ``N = ceil(lam G / kappa)``.

    On each interval ``((n - 1) kappa / G, n kappa / G]`` the integer ``N``
    is constant and ``lam - beta (1 - lam G / n)^n`` is increasing, so each
    interval holds at most one root. Several intervals may hold one. Raises
    :class:`NoSolution` when none of the intervals intersecting
    ``(0, beta]`` contains a root.
    """
    if not (beta > 0 and G > 0 and 0 < kappa <= 1):
        raise ValueError("need beta > 0, G > 0 and kappa in (0, 1]")
    n_max = math.ceil(beta * G / kappa)
    for n in range(1, n_max + 1):
        lo = (n - 1) * kappa / G
        hi = min(n * kappa / G, beta)
        if lo >= beta:
            break

        def h(lam, n=n):
            base = 1.0 - lam * G / n
            return lam - beta * (base ** n if base > 0 else 0.0)

        def dh(lam, n=n):
            base = 1.0 - lam * G / n
            return 1.0 + beta * G * (base ** (n - 1) if base > 0 else 0.0)

        h_lo, h_hi = h(lo), h(hi)
        if h_lo < 0 <= h_hi:
            lam, _, _ = _bracketed_root(h, dh, lo, hi, TOL * beta)
            if lam > lo:
                return lam
    raise NoSolution(f"no discrete-N fixed point for beta={beta}, G={G}, kappa={kappa}")


@dataclass(frozen=True)
class ApproxResult:
    lambda_ps: float
    lambda_dpp: float
    residual_ps: float
    residual_dpp: float
    iterations_ps: int
    iterations_dpp: int


def approximate_intensity(model: PairwiseInteraction | None = None, beta: float = 1.0,
                          G: float | None = None, kappa: float | None = None) -> ApproxResult:
    """Both approximations for ``model`` (or for explicit ``G`` and ``kappa``)."""
    if model is not None:
        s = summarize(model)
        G, kappa = s.G, s.kappa
    if G is None or kappa is None:
        raise ValueError("need a model or both G and kappa")
    lam_ps, res_ps, it_ps = _solve_ps(beta, G)
    lam_dpp, res_dpp, it_dpp = _solve_dpp(beta, G, kappa)
    return ApproxResult(lam_ps, lam_dpp, res_ps, res_dpp, it_ps, it_dpp)

