"""Command line: ``gffpielm {run,table1,tune,sweep-l,list}``."""

from __future__ import annotations

import argparse
import json
import sys

from .app import METHODS, SCALES, RunConfig, run_case, run_sweep, run_table1
from .benchmarks import get_case, list_cases, manifest
from .pipeline import StageError

# CLI flag -> RunConfig field
FLAG_FIELDS = {
    "case": "case", "method": "method", "neurons": "M", "interior": "n_interior",
    "boundary": "n_per_boundary", "initial": "n_per_initial", "delta_min": "delta1",
    "delta_max": "deltaM", "L": "L", "rcond": "rcond", "seed": "seed", "grid": "grid",
    "out": "output_dir", "scale": "scale",
}


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--case")
    p.add_argument("--method", choices=METHODS)
    p.add_argument("--neurons", type=int)
    p.add_argument("--interior", type=int)
    p.add_argument("--boundary", type=int, help="points per boundary segment")
    p.add_argument("--initial", type=int, help="points per initial condition")
    p.add_argument("--delta-min", type=float)
    p.add_argument("--delta-max", type=float)
    p.add_argument("--L", type=float)
    p.add_argument("--rcond", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--grid", type=int, help="evaluation grid points per axis")
    p.add_argument("--out")
    p.add_argument("--config", help="JSON file with RunConfig fields")
    p.add_argument("--scale", choices=SCALES)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gffpielm", description="Random-feature PDE solver benchmarks")
    sub = parser.add_subparsers(dest="verb", required=True)
    _common(sub.add_parser("run", help="solve one case"))
    _common(sub.add_parser("table1", help="both methods on every case"))
    tune = sub.add_parser("tune", help="solve with frequency-interval refinement")
    _common(tune)
    tune.add_argument("--max-iterations", type=int)
    sweep = sub.add_parser("sweep-l", help="tanh baseline over several L values")
    _common(sweep)
    sweep.add_argument("--values", default="1,20,40,60", help="comma-separated L values")
    lst = sub.add_parser("list", help="list registry cases")
    lst.add_argument("--json", action="store_true", help="print the full case manifest")
    return parser


def config_from_args(args, **extra) -> RunConfig:
    overrides = {f: getattr(args, a, None) for a, f in FLAG_FIELDS.items()}
    overrides.update({k: v for k, v in extra.items() if v is not None})
    if getattr(args, "config", None):
        return RunConfig.from_file(args.config, **overrides)
    return RunConfig(**{k: v for k, v in overrides.items() if v is not None})


def _print_report(report) -> None:
    for row in report.rows():
        alpha = f"  alpha={row['alpha']:.6g}" if row["alpha"] != "" else ""
        print(f"{row['case']:22s} {row['method']:8s} mse={row['mse']:.3e}  l2={row['l2']:.3e}"
              f"  max_err={row['max_abs_error']:.3e}{alpha}"
              f"  ({row['assemble_seconds'] + row['solve_seconds']:.2f}s)")
        if row["iterations"]:
            for it in json.loads(row["iterations"]):
                print(f"    [{it['delta1']:g}, {it['deltaM']:g}] l2={it['l2']:.3e} -> {it['flag']}"
                      f" [{it['next_delta1']:g}, {it['next_deltaM']:g}]")
        if row["warnings"]:
            print(f"    warnings: {row['warnings']}")
    if report.output_dir is not None:
        print(f"outputs in {report.output_dir}")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.verb == "list":
            if args.json:
                print(json.dumps(manifest(), indent=2))
            else:
                for name in list_cases():
                    print(f"{name:22s} {get_case(name).description}")
            return 0
        if args.verb == "run":
            _print_report(run_case(config_from_args(args)))
        elif args.verb == "tune":
            cfg = config_from_args(args, tune=True, max_iterations=args.max_iterations, method="gff")
            _print_report(run_case(cfg))
        elif args.verb == "table1":
            cfg = config_from_args(args)
            out = args.out or f"runs/table1_{cfg.scale}"

            def show(row):
                status = row["error"] or f"mse={row['mse']:.3e} l2={row['l2']:.3e}"
                print(f"{row['case']:22s} {row['method']:8s} {row['initialization']:28s} {status}", flush=True)

            run_table1(cfg.scale, out, seed=cfg.seed, on_row=show)
        elif args.verb == "sweep-l":
            cfg = config_from_args(args)
            values = [float(v) for v in args.values.split(",") if v.strip()]
            outcome = run_sweep(cfg.case, values, seed=cfg.seed, M=cfg.M, output_dir=cfg.output_dir,
                                scale=cfg.scale)
            for r in outcome.rows:
                print(f"L={r.L:<6g} mse={r.mse:.3e} l2={r.l2:.3e} {r.error}")
            print(f"best L = {outcome.best.L:g}")
    except StageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: [config] {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
