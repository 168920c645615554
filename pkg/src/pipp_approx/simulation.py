"""Monte-Carlo intensity estimates from a birth-death Metropolis-Hastings sampler.

Each replicate runs an independent chain on the target window enlarged by
``extension`` on every side, starting from the empty configuration, and
the final state is clipped to the target window.

Replicate ``i`` of a run with master seed ``s`` is driven by a PCG64
generator seeded with the first 64-bit word of ``SeedSequence((s, i))``,
so results do not depend on scheduling or on the number of workers.
"""

from __future__ import annotations

import csv
import json
import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.spatial.distance import pdist, squareform

from . import _kernel
from .models import PairwiseInteraction, PointPattern, clip, eval_g

__all__ = [
    "SimConfig",
    "MCEstimate",
    "ZeroConditionalIntensity",
    "replicate_seed",
    "mh_sample",
    "simulate_replicates",
    "estimate_intensity",
    "summarize_counts",
    "gnz_residual",
    "dump_patterns",
]

UNIT_SQUARE = ((0.0, 0.0), (1.0, 1.0))
CHUNK = 1 << 16


class ZeroConditionalIntensity(ValueError):
    """A point of the pattern has zero conditional intensity given the others."""


@dataclass(frozen=True)
class SimConfig:
    model: PairwiseInteraction
    beta: float
    target_window: tuple = UNIT_SQUARE
    extension: float | None = None
    n_steps: int = 1_000_000
    n_replicates: int = 1000
    seed: int = 0

    def __post_init__(self):
        if self.model.dim != 2:
            raise ValueError("the sampler supports planar models only")
        if not (self.beta > 0 and math.isfinite(self.beta)):
            raise ValueError("beta must be positive and finite")
        lower, upper = self.target_window
        lower = tuple(float(v) for v in lower)
        upper = tuple(float(v) for v in upper)
        if len(lower) != 2 or len(upper) != 2 or any(b <= a for a, b in zip(lower, upper)):
            raise ValueError("target_window must be a non-degenerate rectangle")
        object.__setattr__(self, "target_window", (lower, upper))
        ext = 2.0 * self.model.range if self.extension is None else float(self.extension)
        if ext < 0:
            raise ValueError("extension must be >= 0")
        if ext < self.model.range:
            warnings.warn(
                f"extension {ext} is smaller than the interaction range {self.model.range}; "
                "clipped estimates will carry edge bias",
                stacklevel=3,
            )
        object.__setattr__(self, "extension", ext)
        if int(self.n_steps) < 1 or int(self.n_replicates) < 1:
            raise ValueError("n_steps and n_replicates must be >= 1")
        object.__setattr__(self, "n_steps", int(self.n_steps))
        object.__setattr__(self, "n_replicates", int(self.n_replicates))
        object.__setattr__(self, "seed", int(self.seed))

    @property
    def extended_window(self):
        (x0, y0), (x1, y1) = self.target_window
        e = self.extension
        return (x0 - e, y0 - e), (x1 + e, y1 + e)

    @property
    def extended_area(self) -> float:
        (x0, y0), (x1, y1) = self.extended_window
        return (x1 - x0) * (y1 - y0)

    @property
    def target_area(self) -> float:
        (x0, y0), (x1, y1) = self.target_window
        return (x1 - x0) * (y1 - y0)

    def to_dict(self) -> dict:
        return {
            "model": self.model.to_dict(),
            "beta": self.beta,
            "target_window": [list(self.target_window[0]), list(self.target_window[1])],
            "extension": self.extension,
            "n_steps": self.n_steps,
            "n_replicates": self.n_replicates,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class MCEstimate:
    mean_intensity: float
    std_error: float
    replicate_counts: tuple[int, ...]
    quartiles: tuple[float, float, float]
    area: float = field(default=1.0, repr=False)

    @property
    def intensities(self) -> np.ndarray:
        return np.asarray(self.replicate_counts, dtype=float) / self.area


def replicate_seed(seed: int, index: int) -> int:
    ss = np.random.SeedSequence((int(seed) & (2**64 - 1), int(index)))
    return int(ss.generate_state(1, np.uint64)[0])


def mh_sample(config: SimConfig, replicate_seed: int) -> PointPattern:
    """One chain of ``config.n_steps`` birth-death steps on the extended window."""
    rng = np.random.Generator(np.random.PCG64(int(replicate_seed)))
    (x0, y0), (x1, y1) = config.extended_window
    width, height = x1 - x0, y1 - y0
    R = config.model.range
    ncx = max(1, min(int(width / R), 4096))
    ncy = max(1, min(int(height / R), 4096))
    family, gammas, radii, hardcore = _kernel.model_arrays(config.model)

    cap = int(config.beta * width * height + 10.0 * math.sqrt(config.beta * width * height) + 64)
    xs = np.empty(cap)
    ys = np.empty(cap)
    cell = np.empty(cap, dtype=np.int64)
    nxt = np.empty(cap, dtype=np.int64)
    prv = np.empty(cap, dtype=np.int64)
    head = np.full(ncx * ncy, -1, dtype=np.int64)
    n = 0

    remaining = config.n_steps
    while remaining > 0:
        block = rng.random((min(CHUNK, remaining), 4))
        remaining -= block.shape[0]
        while True:
            status, n, done = _kernel.run_chain(
                block, n, xs, ys, cell, head, nxt, prv, family, gammas, radii, hardcore,
                float(config.beta), x0, y0, width, height, ncx, ncy,
            )
            if status == _kernel.STATUS_DONE:
                break
            block = block[done:]
            cap *= 2
            xs, ys, cell, nxt, prv = (
                np.concatenate([a, np.empty(cap - a.shape[0], dtype=a.dtype)])
                for a in (xs, ys, cell, nxt, prv)
            )
    pts = np.column_stack([xs[:n], ys[:n]])
    return PointPattern(pts, (x0, y0), (x1, y1), _checked=False)


def simulate_replicates(config: SimConfig, workers: int = 1) -> list[PointPattern]:
    """All replicate chains, ordered by replicate index (unclipped)."""
    seeds = [replicate_seed(config.seed, i) for i in range(config.n_replicates)]
    if workers <= 1:
        return [mh_sample(config, s) for s in seeds]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda s: mh_sample(config, s), seeds))


def summarize_counts(counts: Sequence[int], area: float) -> MCEstimate:
    counts = tuple(int(c) for c in counts)
    lam = np.asarray(counts, dtype=float) / area
    m = len(counts)
    se = float(lam.std(ddof=1) / math.sqrt(m)) if m > 1 else 0.0
    q1, med, q3 = (float(v) for v in np.percentile(lam, [25, 50, 75]))
    return MCEstimate(float(lam.mean()), se, counts, (q1, med, q3), area)


def estimate_intensity(config: SimConfig, workers: int = 1) -> MCEstimate:
    patterns = simulate_replicates(config, workers)
    counts = [len(clip(p, config.target_window)) for p in patterns]
    return summarize_counts(counts, config.target_area)


def gnz_residual(pattern: PointPattern, model: PairwiseInteraction, beta: float) -> float:
    """Inverse-intensity residual ``sum_{u in x} 1 / lambda(u, x \\ u) - |W|``.

    Its expectation is zero when ``pattern`` is drawn from the model on
    its own window.
    """
    pts = pattern.points
    n = len(pts)
    if n == 0:
        return -pattern.area
    if n == 1:
        return 1.0 / beta - pattern.area
    dist = squareform(pdist(pts))
    g = eval_g(model, dist)
    np.fill_diagonal(g, 1.0)
    lam = beta * np.prod(g, axis=1)
    if np.any(lam == 0.0):
        bad = int(np.flatnonzero(lam == 0.0)[0])
        raise ZeroConditionalIntensity(
            f"point {bad} has zero conditional intensity given the rest of the pattern"
        )
    return float(np.sum(1.0 / lam) - pattern.area)


def _atomic_write_text(path: Path, text: str):
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def dump_patterns(config: SimConfig, patterns: Sequence[PointPattern], out_dir) -> Path:
    """Write one ``x,y`` CSV per replicate plus ``manifest.json``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = []
    for i, p in enumerate(patterns):
        name = f"replicate_{i:05d}.csv"
        lines = ["x,y"] + [f"{x:.17g},{y:.17g}" for x, y in p.points]
        _atomic_write_text(out / name, "\n".join(lines) + "\n")
        files.append(name)
    manifest = {
        "config": config.to_dict(),
        "replicate_seeds": [replicate_seed(config.seed, i) for i in range(len(patterns))],
        "files": files,
    }
    _atomic_write_text(out / "manifest.json", json.dumps(manifest, indent=2) + "\n")
    return out / "manifest.json"


def read_pattern_csv(path, window) -> PointPattern:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != ["x", "y"]:
            raise ValueError(f"{path}: expected header x,y")
        pts = [(float(a), float(b)) for a, b in reader]
    lower, upper = window
    return PointPattern(np.array(pts).reshape(-1, 2), lower, upper)
