"""Command-line interface: ``approx``, ``sweep``, ``figure`` and ``paper-suite``.

Exit codes: 0 success, 1 some paper-suite configuration failed,
2 configuration or schema error, 3 solver failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

from .approx import SolverError, approximate_intensity
from .experiments import ConfigError, ExperimentSpec, SweepTable, run_paper_suite, run_sweep
from .models import ModelError, PairwiseInteraction
from .quadrature import QuadratureError, summarize

EXIT_FAILED = 1
EXIT_CONFIG = 2
EXIT_SOLVER = 3


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None


def cmd_approx(args) -> int:
    data = _load_json(args.config)
    beta = args.beta
    if isinstance(data, dict) and "model" in data:
        beta = data.get("beta", beta) if beta is None else beta
        data = data["model"]
    if beta is None:
        raise ConfigError("beta is required (--beta or a 'beta' key in the config)")
    try:
        model = PairwiseInteraction.from_dict(data)
        beta = float(beta)
    except (ModelError, TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None
    if not beta > 0:
        raise ConfigError("beta must be positive")
    s = summarize(model)
    res = approximate_intensity(G=s.G, kappa=s.kappa, beta=beta)
    out = {
        "model": model.to_dict(),
        "beta": beta,
        "G": s.G,
        "int_sq": s.int_sq,
        "kappa": s.kappa,
        "lambda_ps": res.lambda_ps,
        "lambda_dpp": res.lambda_dpp,
        "residual_ps": res.residual_ps,
        "residual_dpp": res.residual_dpp,
        "iterations_ps": res.iterations_ps,
        "iterations_dpp": res.iterations_dpp,
    }
    print(json.dumps(out))
    return 0


def _scaled_spec(spec: ExperimentSpec, args) -> ExperimentSpec:
    if args.no_mc:
        return replace(spec, mc=None)
    if spec.mc is not None:
        mc = spec.mc
        if args.seed is not None:
            mc = replace(mc, seed=args.seed)
        if args.scale is not None:
            mc = mc.scaled(args.scale)
        spec = replace(spec, mc=mc)
    return spec


def cmd_sweep(args) -> int:
    spec = ExperimentSpec.from_dict(_load_json(args.config))
    if args.scale is not None and not (0.0 < args.scale <= 1.0):
        raise ConfigError("--scale must lie in (0, 1]")
    spec = _scaled_spec(spec, args)
    table = run_sweep(spec, args.workers)
    out = args.out or spec.output_path
    if out is None:
        sys.stdout.write(table.to_csv())
    else:
        table.write_csv(out)
    if args.figure:
        from .plotting import render_figure

        render_figure([table], args.figure)
    return 0


def cmd_figure(args) -> int:
    tables = [SweepTable.read_csv(p) for p in args.csv]
    from .plotting import render_figure

    render_figure(tables, args.out, titles=[Path(p).stem for p in args.csv])
    return 0


def cmd_paper_suite(args) -> int:
    scale = 1.0 if args.scale is None else args.scale
    manifest = run_paper_suite(args.out, scale=scale, seed=args.seed or 0,
                               with_mc=not args.no_mc, workers=args.workers,
                               names=args.only or None)
    for entry in manifest["configurations"]:
        print(f"{entry['name']}: {entry['status']} ({entry['runtime_s']:.1f}s)")
    return EXIT_FAILED if manifest["failed"] else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pipp-approx",
        description="Intensity approximations for repulsive pairwise-interaction Gibbs processes.",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("approx", help="print G, kappa, lambda_PS and lambda_DPP as JSON")
    p.add_argument("--config", required=True, help="model JSON file")
    p.add_argument("--beta", type=float, help="activity (overrides a 'beta' key)")
    p.set_defaults(func=cmd_approx)

    def run_flags(p):
        p.add_argument("--seed", type=int, help="master seed for the Monte-Carlo runs")
        p.add_argument("--scale", type=float,
                       help="multiply replicate and step counts by this factor in (0, 1]")
        p.add_argument("--no-mc", action="store_true", help="skip Monte-Carlo columns")
        p.add_argument("--workers", type=int, default=1, help="threads for replicate chains")

    p = sub.add_parser("sweep", help="sweep gamma1 and write a CSV table")
    p.add_argument("--config", required=True, help="experiment JSON file")
    p.add_argument("--out", help="CSV output path (default: output_path or stdout)")
    p.add_argument("--figure", help="also render an SVG figure to this path")
    run_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("figure", help="render sweep CSVs as side-by-side SVG panels")
    p.add_argument("csv", nargs="+", help="sweep CSV files")
    p.add_argument("--out", required=True, help="SVG output path")
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("paper-suite", help="run all 14 reference configurations")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--only", nargs="*", help="restrict to these configuration names")
    run_flags(p)
    p.set_defaults(func=cmd_paper_suite)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except (ConfigError, ModelError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SolverError, QuadratureError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
