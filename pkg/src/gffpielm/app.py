"""Run configuration, case orchestration and CSV outputs."""

from __future__ import annotations

import csv
import json
import shutil
import time
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from .benchmarks import DESK_NEURONS, DESK_PLAN, PAPER_NEURONS, PAPER_PLAN, CaseSpec, get_case, list_cases
from .diagnostics import evaluation_grid, write_spectrum_csv, write_sweep_csv
from .pipeline import LayerConfig, SolveResult, StageError, solve_problem
from .sampling import SamplingPlan
from .tuning import RefinementSettings, refine_and_resolve, sweep_vanilla_L

METHODS = ("gff", "vanilla", "both")
SCALES = ("paper", "desk")

REPORT_FIELDS = (
    "case", "method", "M", "n_interior", "n_per_boundary", "n_per_initial", "delta1", "deltaM", "L",
    "rcond", "ridge", "seed", "grid", "bins", "threshold_ratio", "margin", "statistic", "tune",
    "max_iterations", "mse", "l2", "max_abs_error", "alpha", "effective_rank", "n_rows",
    "assemble_seconds", "solve_seconds", "iterations", "warnings",
)
TIMING_FIELDS = ("assemble_seconds", "solve_seconds", "seconds")


@dataclass(frozen=True)
class RunConfig:
    """Everything that determines a run. ``None`` means "take the registry default"."""

    case: str = "poisson1d_demo"
    method: str = "gff"
    scale: str = "paper"
    M: int | None = None
    n_interior: int | None = None
    n_per_boundary: int | None = None
    n_per_initial: int | None = None
    delta1: float | None = None
    deltaM: float | None = None
    L: float | None = None
    rcond: float | None = None
    ridge: float = 0.0
    seed: int = 0
    grid: int | None = None
    output_dir: str = "runs"
    tune: bool = False
    max_iterations: int = 2
    bins: int = 50
    threshold_ratio: float = 1e-3
    margin: float = 1.1
    statistic: str = "median"

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.scale not in SCALES:
            raise ValueError(f"scale must be one of {SCALES}, got {self.scale!r}")

    @classmethod
    def from_file(cls, path, **overrides) -> RunConfig:
        """Load a flat JSON object keyed by field name; ``overrides`` that are not None win."""
        with open(path) as fh:
            raw = json.load(fh)
        if not isinstance(raw, dict):
            raise ValueError("config file must hold a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = set(raw) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        raw.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**raw)

    def resolved(self) -> RunConfig:
        """Fill every ``None`` from the registry and the chosen scale."""
        case = get_case(self.case)
        if case.fixed_scale:
            M, plan = case.neurons, case.plan
        elif self.scale == "desk":
            M, plan = DESK_NEURONS, DESK_PLAN
        else:
            M, plan = case.neurons, case.plan
        d1, dM = case.gff_defaults
        pick = lambda v, d: d if v is None else v  # noqa: E731
        return replace(
            self,
            M=pick(self.M, M),
            n_interior=pick(self.n_interior, plan.n_interior),
            n_per_boundary=pick(self.n_per_boundary, plan.n_per_boundary_segment),
            n_per_initial=pick(self.n_per_initial, plan.n_per_initial_condition),
            delta1=pick(self.delta1, d1),
            deltaM=pick(self.deltaM, dM),
            L=pick(self.L, case.vanilla_L),
        )

    def plan(self) -> SamplingPlan:
        r = self.resolved()
        return SamplingPlan(r.n_interior, r.n_per_boundary, r.n_per_initial, seed=self.seed)

    def layer(self, method: str) -> LayerConfig:
        r = self.resolved()
        return LayerConfig(method=method, M=r.M, delta1=r.delta1, deltaM=r.deltaM, L=r.L, seed=self.seed)

    def refinement(self) -> RefinementSettings:
        return RefinementSettings(self.bins, self.threshold_ratio, self.margin, self.statistic)


@dataclass
class MethodReport:
    method: str
    result: SolveResult
    iterations: list[dict] = field(default_factory=list)


@dataclass
class SolveReport:
    config: RunConfig
    methods: list[MethodReport]
    output_dir: Path | None = None

    def rows(self) -> list[dict]:
        cfg = self.config.resolved()
        out = []
        for m in self.methods:
            r = m.result
            lc = r.layer_config
            row = dict(
                case=cfg.case, method=m.method, M=lc.M, n_interior=cfg.n_interior,
                n_per_boundary=cfg.n_per_boundary, n_per_initial=cfg.n_per_initial,
                delta1=lc.delta1 if m.method == "gff" else "", deltaM=lc.deltaM if m.method == "gff" else "",
                L=lc.L if m.method == "vanilla" else "",
                rcond="" if cfg.rcond is None else cfg.rcond, ridge=cfg.ridge, seed=cfg.seed,
                grid="default" if cfg.grid is None else cfg.grid, bins=cfg.bins,
                threshold_ratio=cfg.threshold_ratio, margin=cfg.margin, statistic=cfg.statistic,
                tune=cfg.tune and m.method == "gff", max_iterations=cfg.max_iterations,
                mse=r.mse, l2=r.l2, max_abs_error=r.max_abs_error,
                alpha="" if r.alpha is None else r.alpha, effective_rank=r.effective_rank,
                n_rows=r.n_rows, assemble_seconds=r.assemble_seconds, solve_seconds=r.solve_seconds,
                iterations=json.dumps(m.iterations) if m.iterations else "",
                warnings="; ".join(r.warnings),
            )
            out.append(row)
        return out

    def by_method(self, method: str) -> SolveResult:
        for m in self.methods:
            if m.method == method:
                return m.result
        raise KeyError(method)


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return v


def _write_rows(path: Path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(header))
        w.writeheader()
        for row in rows:
            w.writerow({k: _fmt(v) for k, v in row.items()})


def write_prediction_grid(path: Path, coordinate_names, result: SolveResult) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([*coordinate_names, "exact", "predicted", "abs_error"])
        err = np.abs(result.exact - result.predicted)
        for p, e, q, a in zip(result.grid, result.exact, result.predicted, err):
            w.writerow([*(repr(float(c)) for c in p), repr(float(e)), repr(float(q)), repr(float(a))])


def _grid_for(case: CaseSpec, cfg: RunConfig):
    if cfg.grid is None:
        return None
    return evaluation_grid(case.problem.domain, int(cfg.grid))


def _solve_method(case: CaseSpec, cfg: RunConfig, method: str) -> MethodReport:
    data = case.labelled_data() if case.is_inverse else None
    kwargs = dict(rcond=cfg.rcond, ridge=cfg.ridge, data=data, grid=_grid_for(case, cfg))
    if method == "gff" and cfg.tune:
        out = refine_and_resolve(case.problem, cfg.layer("gff"), cfg.plan(), cfg.max_iterations,
                                 cfg.refinement(), **kwargs)
        trail = [
            dict(delta1=it.delta1, deltaM=it.deltaM, mse=it.result.mse, l2=it.result.l2,
                 flag=it.suggestion.flag.value, next_delta1=it.suggestion.delta1_new,
                 next_deltaM=it.suggestion.deltaM_new, active_fraction=it.suggestion.active_fraction)
            for it in out.trail
        ]
        return MethodReport(method, out.final, trail)
    return MethodReport(method, solve_problem(case.problem, cfg.layer(method), cfg.plan(),
                                              spectrum_bins=cfg.bins, **kwargs))


def run_case(config: RunConfig, write: bool = True) -> SolveReport:
    """Solve one case with one or both methods and write its CSV outputs.

    Outputs go to ``<output_dir>/<case>/``: ``report.csv`` (one row per
    method), ``<method>/prediction_grid.csv`` and ``gff/beta_vs_delta.csv``.
    Files are written into a staging directory first, so a failure leaves no
    partial outputs behind.
    """
    cfg = config.resolved()
    case = get_case(cfg.case)
    methods = ("gff", "vanilla") if cfg.method == "both" else (cfg.method,)
    reports = [_solve_method(case, cfg, m) for m in methods]
    report = SolveReport(cfg, reports)
    if not write:
        return report
    final = Path(cfg.output_dir) / cfg.case
    staging = Path(cfg.output_dir) / f".staging-{cfg.case}"
    try:
        if staging.exists():
            shutil.rmtree(staging)
        staging.mkdir(parents=True)
        _write_rows(staging / "report.csv", REPORT_FIELDS, report.rows())
        names = case.problem.domain.coordinate_names
        for m in reports:
            sub = staging / m.method
            sub.mkdir()
            write_prediction_grid(sub / "prediction_grid.csv", names, m.result)
            if m.result.spectrum is not None:
                write_spectrum_csv(sub / "beta_vs_delta.csv", m.result.spectrum)
        if final.exists():
            shutil.rmtree(final)
        staging.rename(final)
    except Exception as exc:
        shutil.rmtree(staging, ignore_errors=True)
        raise StageError("write", exc) from exc
    report.output_dir = final
    return report


TABLE1_FIELDS = (
    "case", "method", "initialization", "mse", "l2", "alpha", "seconds", "reported_mse", "reported_l2", "error",
)


def run_table1(scale: str = "desk", output_dir="runs/table1", seed: int = 0, cases=None,
               write_cases: bool = False, on_row=None) -> list[dict]:
    """Both methods on every registry case at registry defaults; failures become rows."""
    if scale not in SCALES:
        raise ValueError(f"scale must be one of {SCALES}")
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    for name in cases or list_cases():
        case = get_case(name)
        for method in ("gff", "vanilla"):
            cfg = RunConfig(case=name, method=method, scale=scale, seed=seed, output_dir=str(out))
            init = cfg.layer(method).describe()
            reported = case.reported.get(method)
            row = dict(case=name, method=method, initialization=init, mse="", l2="", alpha="", seconds="",
                       reported_mse=reported.mse if reported else "",
                       reported_l2=reported.l2 if reported else "", error="")
            t0 = time.perf_counter()
            try:
                r = run_case(cfg, write=write_cases).methods[0].result
                row.update(mse=r.mse, l2=r.l2, alpha="" if r.alpha is None else r.alpha)
            except Exception as exc:  # noqa: BLE001 - recorded, run continues
                row["error"] = str(exc)
            row["seconds"] = time.perf_counter() - t0
            rows.append(row)
            if on_row is not None:
                on_row(row)
    _write_rows(out / f"table1_{scale}.csv", TABLE1_FIELDS, rows)
    return rows


def run_sweep(case_name: str, L_values, seed: int = 0, M: int | None = None, output_dir="runs", scale="paper"):
    cfg = RunConfig(case=case_name, method="vanilla", scale=scale, seed=seed, M=M).resolved()
    case = get_case(case_name)
    outcome = sweep_vanilla_L(case.problem, cfg.plan(), L_values, seed=seed, M=cfg.M,
                              data=case.labelled_data() if case.is_inverse else None)
    out = Path(output_dir) / case_name
    out.mkdir(parents=True, exist_ok=True)
    write_sweep_csv(out / "l_sweep.csv", outcome.rows)
    return outcome


def numeric_fields(row: dict) -> dict:
    """Numeric entries of a report row, minus wall-clock timings."""
    out = {}
    for k, v in row.items():
        if k in TIMING_FIELDS:
            continue
        try:
            out[k] = float(v)
        except (TypeError, ValueError):
            continue
    return out


def config_dict(cfg: RunConfig) -> dict:
    return asdict(cfg)
