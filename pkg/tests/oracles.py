"""Independent reference computations used by the tests.

Nothing here imports the package solvers: plain bisection, closed-form
integrals and brute-force products.
"""

import math

import numpy as np


def bisect_increasing(h, lo, hi, iterations=200):
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if h(mid) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def lambda_ps_oracle(beta, G):
    if G == 0:
        return beta
    return bisect_increasing(lambda lam: lam - beta * math.exp(-lam * G), 0.0, beta)


def f_dpp_direct(beta, G, kappa, lam):
    n = 1.0 + lam * G / kappa
    return beta * (1.0 - lam * G / n) ** n


def lambda_dpp_oracle(beta, G, kappa):
    if G == 0 or kappa == 0:
        return lambda_ps_oracle(beta, G)
    return bisect_increasing(lambda lam: lam - f_dpp_direct(beta, G, kappa, lam), 0.0, beta)


def discrete_scan_oracle(beta, G, kappa):
    """All roots of lam = beta (1 - lam G / N)^N, N = ceil(lam G / kappa), via per-N bisection."""
    roots = []
    for N in range(1, math.ceil(beta * G / kappa) + 2):
        lo, hi = (N - 1) * kappa / G, min(N * kappa / G, beta)
        if lo >= beta:
            break

        def h(lam, N=N):
            return lam - beta * max(1.0 - lam * G / N, 0.0) ** N

        if h(lo) < 0 <= h(hi):
            roots.append(bisect_increasing(h, lo, hi))
    return roots


def dg_integral(gamma, R, d=2, power=1):
    """Closed-form int (1 - (r/R)^(1/gamma))^power over the d-ball of radius R."""
    ball = math.pi ** (d / 2) * R**d / math.gamma(d / 2 + 1)
    a = 1.0 / gamma
    if power == 1:
        return ball * (1.0 - d / (d + a))
    return ball * (1.0 - 2.0 * d / (d + a) + d / (d + 2.0 * a))


def simpson_fixed(f, a, b, n=20000):
    """Composite Simpson with a fixed even number of panels."""
    x = np.linspace(a, b, n + 1)
    y = f(x)
    h = (b - a) / n
    return h / 3.0 * (y[0] + y[-1] + 4.0 * y[1:-1:2].sum() + 2.0 * y[2:-1:2].sum())


def papangelou_brute(g, beta, u, pts):
    value = beta
    for v in pts:
        value *= g(math.dist(u, v))
    return value
