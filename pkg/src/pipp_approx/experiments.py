"""Sweeps of the intensity approximations over the first interaction parameter."""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import os
import time
import traceback
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .approx import approximate_intensity
from .models import Family, ModelError, PairwiseInteraction
from .quadrature import summarize
from .simulation import SimConfig, estimate_intensity, replicate_seed

log = logging.getLogger(__name__)

BASE_COLUMNS = ("gamma1", "beta", "G", "kappa", "lambda_ps", "lambda_dpp")
MC_COLUMNS = ("mc_mean", "mc_se", "mc_q1", "mc_median", "mc_q3")
PAPER_N_STEPS = 1_000_000


class ConfigError(ValueError):
    """Malformed experiment or model configuration."""


def default_grid(family: Family) -> tuple[float, ...]:
    grid = tuple(round(0.05 * k, 10) for k in range(21))
    if family is Family.DIGGLE_GRATTON:
        # gamma1 = 0 degenerates to a hard core; excluded as in the reference runs
        grid = grid[1:]
    return grid


@dataclass(frozen=True)
class MCSettings:
    n_replicates: int = 1000
    n_steps: int = PAPER_N_STEPS
    extension: float | None = None
    seed: int = 0

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "MCSettings":
        if not isinstance(data, dict):
            raise ConfigError("'mc' must be a JSON object")
        unknown = set(data) - {"n_replicates", "n_steps", "extension", "seed"}
        if unknown:
            raise ConfigError(f"unknown mc keys: {sorted(unknown)}")
        try:
            return cls(int(data.get("n_replicates", 1000)), int(data.get("n_steps", PAPER_N_STEPS)),
                       data.get("extension"), int(data.get("seed", 0)))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad mc block: {exc}") from None

    def scaled(self, scale: float) -> "MCSettings":
        return MCSettings(max(1, round(self.n_replicates * scale)),
                          max(1, round(self.n_steps * scale)), self.extension, self.seed)


@dataclass(frozen=True)
class ExperimentSpec:
    model_template: PairwiseInteraction
    beta: float
    gamma1_grid: tuple[float, ...] = ()
    mc: MCSettings | None = None
    output_path: str | None = None

    def __post_init__(self):
        if not (self.beta > 0 and math.isfinite(self.beta)):
            raise ConfigError("beta must be positive and finite")
        grid = tuple(float(g) for g in self.gamma1_grid) or default_grid(self.model_template.family)
        if any(not (0.0 <= g <= 1.0) for g in grid):
            raise ConfigError("gamma1_grid values must lie in [0, 1]")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ConfigError("gamma1_grid must be sorted ascending without repeats")
        object.__setattr__(self, "gamma1_grid", grid)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ExperimentSpec":
        if not isinstance(data, dict):
            raise ConfigError("experiment config must be a JSON object")
        unknown = set(data) - {"model", "beta", "gamma1_grid", "mc", "output_path"}
        if unknown:
            raise ConfigError(f"unknown experiment keys: {sorted(unknown)}")
        if "model" not in data or "beta" not in data:
            raise ConfigError("experiment config needs 'model' and 'beta'")
        try:
            model = PairwiseInteraction.from_dict(data["model"])
        except ModelError as exc:
            raise ConfigError(f"bad model: {exc}") from None
        mc = MCSettings.from_dict(data["mc"]) if data.get("mc") is not None else None
        try:
            beta = float(data["beta"])
            grid = tuple(data.get("gamma1_grid") or ())
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from None
        return cls(model, beta, grid, mc, data.get("output_path"))

    def to_dict(self) -> dict[str, Any]:
        out = {"model": self.model_template.to_dict(), "beta": self.beta,
               "gamma1_grid": list(self.gamma1_grid)}
        if self.mc is not None:
            out["mc"] = {"n_replicates": self.mc.n_replicates, "n_steps": self.mc.n_steps,
                         "extension": self.mc.extension, "seed": self.mc.seed}
        if self.output_path is not None:
            out["output_path"] = self.output_path
        return out


@dataclass
class SweepTable:
    rows: list[dict[str, float]] = field(default_factory=list)
    has_mc: bool = False

    @property
    def columns(self) -> tuple[str, ...]:
        return BASE_COLUMNS + (MC_COLUMNS if self.has_mc else ())

    def column(self, name: str) -> np.ndarray:
        return np.array([row[name] for row in self.rows], dtype=float)

    def __len__(self):
        return len(self.rows)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(",".join(self.columns) + "\n")
        for row in self.rows:
            buf.write(",".join(f"{row[c]:.10g}" for c in self.columns) + "\n")
        return buf.getvalue()

    def write_csv(self, path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_name(path.name + ".tmp")
        tmp.write_text(self.to_csv())
        os.replace(tmp, path)
        return path

    @classmethod
    def read_csv(cls, path) -> "SweepTable":
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            try:
                header = tuple(next(reader))
            except StopIteration:
                raise ConfigError(f"{path}: empty file") from None
            if header == BASE_COLUMNS:
                has_mc = False
            elif header == BASE_COLUMNS + MC_COLUMNS:
                has_mc = True
            else:
                raise ConfigError(f"{path}: header {','.join(header)!r} is not a sweep table")
            rows = []
            for lineno, rec in enumerate(reader, start=2):
                if len(rec) != len(header):
                    raise ConfigError(f"{path}:{lineno}: expected {len(header)} fields")
                try:
                    rows.append({k: float(v) for k, v in zip(header, rec)})
                except ValueError:
                    raise ConfigError(f"{path}:{lineno}: non-numeric field") from None
        return cls(rows, has_mc)


def run_sweep(spec: ExperimentSpec, workers: int = 1) -> SweepTable:
    """Approximations (and optionally MC estimates) for every grid value.

    Row ``i`` of the MC columns uses master seed ``replicate_seed(mc.seed, i)``.
    """
    table = SweepTable(has_mc=spec.mc is not None)
    for i, gamma1 in enumerate(spec.gamma1_grid):
        model = spec.model_template.with_gamma1(gamma1)
        summary = summarize(model)
        res = approximate_intensity(model, spec.beta)
        row = {"gamma1": gamma1, "beta": spec.beta, "G": summary.G, "kappa": summary.kappa,
               "lambda_ps": res.lambda_ps, "lambda_dpp": res.lambda_dpp}
        if spec.mc is not None:
            cfg = SimConfig(model, spec.beta, extension=spec.mc.extension,
                            n_steps=spec.mc.n_steps, n_replicates=spec.mc.n_replicates,
                            seed=replicate_seed(spec.mc.seed, i))
            est = estimate_intensity(cfg, workers)
            q1, med, q3 = est.quartiles
            row.update(mc_mean=est.mean_intensity, mc_se=est.std_error,
                       mc_q1=q1, mc_median=med, mc_q3=q3)
            log.debug("gamma1=%g: mc=%.4f se=%.4f dpp=%.4f ps=%.4f", gamma1,
                      est.mean_intensity, est.std_error, res.lambda_dpp, res.lambda_ps)
        table.rows.append(row)
    return table


@dataclass(frozen=True)
class PaperConfig:
    name: str
    title: str
    model_template: PairwiseInteraction
    beta: float
    n_replicates: int


def _paper_configs() -> tuple[PaperConfig, ...]:
    S, SHC, PS, DG = (Family.STRAUSS, Family.STRAUSS_HARD_CORE,
                      Family.PIECEWISE_STRAUSS_HARD_CORE, Family.DIGGLE_GRATTON)
    P = PairwiseInteraction
    return (
        PaperConfig("S-R005-b100", "S: R=0.05, beta=100", P(S, (0.0,), (0.05,)), 100, 10000),
        PaperConfig("S-R01-b100", "S: R=0.1, beta=100", P(S, (0.0,), (0.1,)), 100, 10000),
        PaperConfig("S-R01-b50", "S: R=0.1, beta=50", P(S, (0.0,), (0.1,)), 50, 10000),
        PaperConfig("S-R015-b50", "S: R=0.15, beta=50", P(S, (0.0,), (0.15,)), 50, 10000),
        PaperConfig("S-R005-b200", "S: R=0.05, beta=200", P(S, (0.0,), (0.05,)), 200, 1000),
        PaperConfig("SHC-d0025-R005-b200", "SHC: delta=0.025, R=0.05, beta=200",
                    P(SHC, (0.0,), (0.05,), 0.025), 200, 1000),
        PaperConfig("DG-R0025-b200", "DG: R=0.025, beta=200", P(DG, (1.0,), (0.025,)), 200, 10000),
        PaperConfig("DG-R005-b200", "DG: R=0.05, beta=200", P(DG, (1.0,), (0.05,)), 200, 10000),
        PaperConfig("DG-R0075-b200", "DG: R=0.075, beta=200", P(DG, (1.0,), (0.075,)), 200, 1000),
        PaperConfig("DG-R015-b50", "DG: R=0.15, beta=50", P(DG, (1.0,), (0.15,)), 50, 10000),
        PaperConfig("PS-g2-05-b200", "PS: R=(0.05, 0.1), beta=200, gamma2=0.5",
                    P(PS, (0.0, 0.5), (0.05, 0.1)), 200, 1000),
        PaperConfig("PSHC-g2-05-b200", "PSHC: delta=0.025, R=(0.05, 0.1), beta=200, gamma2=0.5",
                    P(PS, (0.0, 0.5), (0.05, 0.1), 0.025), 200, 1000),
        PaperConfig("PS-g2-0-b200", "PS: R=(0.05, 0.1), beta=200, gamma2=0",
                    P(PS, (0.0, 0.0), (0.05, 0.1)), 200, 1000),
        PaperConfig("PSHC-g2-0-b200", "PSHC: delta=0.025, R=(0.05, 0.1), beta=200, gamma2=0",
                    P(PS, (0.0, 0.0), (0.05, 0.1), 0.025), 200, 1000),
    )


PAPER_CONFIGS = _paper_configs()


def paper_spec(cfg: PaperConfig, scale: float = 1.0, seed: int = 0,
               with_mc: bool = True) -> ExperimentSpec:
    mc = None
    if with_mc:
        mc = MCSettings(cfg.n_replicates, PAPER_N_STEPS, None, seed).scaled(scale)
    return ExperimentSpec(cfg.model_template, cfg.beta, (), mc)


def run_paper_suite(out_dir, scale: float = 1.0, seed: int = 0, with_mc: bool = True,
                    workers: int = 1, names: Sequence[str] | None = None,
                    figures: bool = True) -> dict[str, Any]:
    """Run every reference configuration, writing ``<name>.csv`` and ``<name>.svg``.

    Failures are recorded per configuration in ``manifest.json`` and do
    not stop the remaining configurations.
    """
    if not (0.0 < scale <= 1.0):
        raise ConfigError("scale must lie in (0, 1]")
    if names is not None:
        unknown = sorted(set(names) - {c.name for c in PAPER_CONFIGS})
        if unknown:
            raise ConfigError(f"unknown configuration(s): {', '.join(unknown)}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest: dict[str, Any] = {"scale": scale, "seed": seed, "with_mc": with_mc,
                                "configurations": []}
    for index, cfg in enumerate(PAPER_CONFIGS):
        if names is not None and cfg.name not in names:
            continue
        cfg_seed = replicate_seed(seed, index)
        spec = paper_spec(cfg, scale, cfg_seed, with_mc)
        entry: dict[str, Any] = {"name": cfg.name, "seed": cfg_seed, "spec": spec.to_dict()}
        start = time.perf_counter()
        try:
            table = run_sweep(spec, workers)
            table.write_csv(out / f"{cfg.name}.csv")
            entry["csv"] = f"{cfg.name}.csv"
            if figures:
                from .plotting import render_figure

                render_figure([table], out / f"{cfg.name}.svg", titles=[cfg.title])
                entry["svg"] = f"{cfg.name}.svg"
            entry["status"] = "ok"
        except Exception as exc:  # isolate configurations from each other
            log.error("configuration %s failed: %s", cfg.name, exc)
            entry["status"] = "failed"
            entry["error"] = "".join(traceback.format_exception_only(type(exc), exc)).strip()
        entry["runtime_s"] = round(time.perf_counter() - start, 3)
        log.info("%s: %s in %.1fs", cfg.name, entry["status"], entry["runtime_s"])
        manifest["configurations"].append(entry)
    manifest["failed"] = [e["name"] for e in manifest["configurations"] if e["status"] != "ok"]
    tmp = out / "manifest.json.tmp"
    tmp.write_text(json.dumps(manifest, indent=2) + "\n")
    os.replace(tmp, out / "manifest.json")
    return manifest
