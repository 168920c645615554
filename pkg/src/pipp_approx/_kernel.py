"""Compiled birth-death Metropolis-Hastings kernel for planar patterns.

Points live in flat arrays; a uniform grid with cells no smaller than the
interaction range keeps each conditional-intensity evaluation local. Each
cell holds a doubly linked list of point indices so that insertion and
swap-with-last deletion are O(1).
"""

import math

import numpy as np
from numba import njit

from .models import Family, PairwiseInteraction

FAMILY_CODES = {
    Family.STRAUSS: 0,
    Family.STRAUSS_HARD_CORE: 1,
    Family.PIECEWISE_STRAUSS_HARD_CORE: 2,
    Family.DIGGLE_GRATTON: 3,
}

STATUS_DONE = 0
STATUS_FULL = 1


def model_arrays(model: PairwiseInteraction):
    return (
        FAMILY_CODES[model.family],
        np.asarray(model.gamma, dtype=np.float64),
        np.asarray(model.radii, dtype=np.float64),
        float(model.hardcore),
    )


@njit(cache=True, nogil=True)
def g_radial(family, gammas, radii, hardcore, r):
    R = radii[radii.shape[0] - 1]
    if r > R:
        return 1.0
    if r < hardcore:
        return 0.0
    if family == 3:
        gamma = gammas[0]
        t = r / R
        if gamma == 0.0:
            return 1.0 if t == 1.0 else 0.0
        return t ** (1.0 / gamma)
    if family == 2:
        for i in range(radii.shape[0]):
            if r < radii[i]:
                return gammas[i]
        return gammas[gammas.shape[0] - 1]
    return gammas[0]


@njit(cache=True, nogil=True)
def _cell_of(px, py, x0, y0, cw, ch, ncx, ncy):
    cx = int((px - x0) / cw)
    cy = int((py - y0) / ch)
    if cx >= ncx:
        cx = ncx - 1
    if cy >= ncy:
        cy = ncy - 1
    if cx < 0:
        cx = 0
    if cy < 0:
        cy = 0
    return cy * ncx + cx


@njit(cache=True, nogil=True)
def cond_intensity(px, py, skip, xs, ys, head, nxt, family, gammas, radii, hardcore,
                   beta, x0, y0, cw, ch, ncx, ncy):
    """beta * prod g(|p - x_j|) over grid neighbours, ignoring index ``skip``."""
    R = radii[radii.shape[0] - 1]
    R2 = R * R
    cx = int((px - x0) / cw)
    cy = int((py - y0) / ch)
    if cx >= ncx:
        cx = ncx - 1
    if cy >= ncy:
        cy = ncy - 1
    value = beta
    for jy in range(max(cy - 1, 0), min(cy + 2, ncy)):
        for jx in range(max(cx - 1, 0), min(cx + 2, ncx)):
            j = head[jy * ncx + jx]
            while j >= 0:
                if j != skip:
                    dx = xs[j] - px
                    dy = ys[j] - py
                    d2 = dx * dx + dy * dy
                    if d2 <= R2:
                        value *= g_radial(family, gammas, radii, hardcore, math.sqrt(d2))
                        if value == 0.0:
                            return 0.0
                j = nxt[j]
    return value


@njit(cache=True, nogil=True)
def _insert(i, c, cell, head, nxt, prv):
    cell[i] = c
    prv[i] = -1
    nxt[i] = head[c]
    if head[c] >= 0:
        prv[head[c]] = i
    head[c] = i


@njit(cache=True, nogil=True)
def _unlink(i, cell, head, nxt, prv):
    c = cell[i]
    if prv[i] >= 0:
        nxt[prv[i]] = nxt[i]
    else:
        head[c] = nxt[i]
    if nxt[i] >= 0:
        prv[nxt[i]] = prv[i]


@njit(cache=True, nogil=True)
def _delete(i, n, xs, ys, cell, head, nxt, prv):
    """Remove point ``i`` by moving point ``n - 1`` into its slot."""
    _unlink(i, cell, head, nxt, prv)
    last = n - 1
    if i != last:
        c = cell[last]
        xs[i] = xs[last]
        ys[i] = ys[last]
        cell[i] = c
        nxt[i] = nxt[last]
        prv[i] = prv[last]
        if prv[i] >= 0:
            nxt[prv[i]] = i
        else:
            head[c] = i
        if nxt[i] >= 0:
            prv[nxt[i]] = i
    return last


@njit(cache=True, nogil=True)
def run_chain(uniforms, n, xs, ys, cell, head, nxt, prv,
              family, gammas, radii, hardcore, beta,
              x0, y0, width, height, ncx, ncy):
    """Advance the chain by ``len(uniforms)`` steps.

    Each row of ``uniforms`` drives one step: move type, two proposal
    coordinates (or the deletion index), and the acceptance draw. Returns
    ``(status, n, steps_done)``; ``STATUS_FULL`` means the point arrays must
    be enlarged before the remaining rows are consumed.
    """
    area = width * height
    cw = width / ncx
    ch = height / ncy
    cap = xs.shape[0]
    for k in range(uniforms.shape[0]):
        if uniforms[k, 0] < 0.5:
            if n == cap:
                return 1, n, k
            px = x0 + uniforms[k, 1] * width
            py = y0 + uniforms[k, 2] * height
            lam = cond_intensity(px, py, -1, xs, ys, head, nxt, family, gammas, radii,
                                 hardcore, beta, x0, y0, cw, ch, ncx, ncy)
            if uniforms[k, 3] * (n + 1) < lam * area:
                xs[n] = px
                ys[n] = py
                _insert(n, _cell_of(px, py, x0, y0, cw, ch, ncx, ncy), cell, head, nxt, prv)
                n += 1
        elif n > 0:
            i = int(uniforms[k, 1] * n)
            if i >= n:
                i = n - 1
            lam = cond_intensity(xs[i], ys[i], i, xs, ys, head, nxt, family, gammas, radii,
                                 hardcore, beta, x0, y0, cw, ch, ncx, ncy)
            if uniforms[k, 3] * lam * area <= n:
                n = _delete(i, n, xs, ys, cell, head, nxt, prv)
    return 0, n, uniforms.shape[0]
