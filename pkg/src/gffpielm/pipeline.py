"""Sample, assemble, solve and evaluate one problem with one feature layer."""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace

import numpy as np

from .assembly import LinearSystem, assemble_system, augment_inverse
from .diagnostics import BetaSpectrum, beta_spectrum, evaluation_grid, relative_l2, training_mse
from .features import ActivationKind, FeatureLayer, feature_matrix, make_gff_layer, make_vanilla_layer
from .lstsq import LstsqSolution, solve_least_squares
from .pde import PdeProblem
from .sampling import CollocationSet, SamplingPlan, sample_collocation

EVAL_BLOCK = 20000


class StageError(RuntimeError):
    """A pipeline failure tagged with the stage that raised it."""

    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"[{stage}] {type(cause).__name__}: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass(frozen=True)
class LayerConfig:
    method: str = "gff"
    M: int = 1000
    delta1: float = 1.0
    deltaM: float = 100.0
    L: float = 10.0
    seed: int = 0

    def __post_init__(self):
        if self.method not in ("gff", "vanilla"):
            raise ValueError(f"method must be 'gff' or 'vanilla', got {self.method!r}")

    def describe(self) -> str:
        if self.method == "gff":
            return f"delta1={self.delta1:g}, deltaM={self.delta1 if self.M == 1 else self.deltaM:g}"
        return f"L={self.L:g}"


def build_layer(cfg: LayerConfig, d_in: int) -> FeatureLayer:
    # the layer's own stream is kept apart from the collocation streams
    seed = [cfg.seed, 7]
    if cfg.method == "gff":
        return make_gff_layer(cfg.M, d_in, cfg.delta1, cfg.deltaM, seed)
    return make_vanilla_layer(cfg.M, d_in, cfg.L, seed)


@dataclass
class SolveResult:
    layer_config: LayerConfig
    mse: float
    l2: float
    max_abs_error: float
    alpha: float | None
    effective_rank: int
    n_rows: int
    assemble_seconds: float
    solve_seconds: float
    grid: np.ndarray
    exact: np.ndarray
    predicted: np.ndarray
    beta: np.ndarray
    layer: FeatureLayer
    spectrum: BetaSpectrum | None
    warnings: tuple[str, ...] = field(default_factory=tuple)

    @property
    def method(self) -> str:
        return self.layer_config.method


def predict(layer: FeatureLayer, beta: np.ndarray, points: np.ndarray) -> np.ndarray:
    out = np.empty(len(points))
    w = beta[: layer.M]
    for start in range(0, len(points), EVAL_BLOCK):
        blk = points[start:start + EVAL_BLOCK]
        out[start:start + len(blk)] = feature_matrix(layer, blk) @ w
    return out


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except StageError:
        raise
    except Exception as exc:  # noqa: BLE001 - re-raised with the stage tag
        raise StageError(name, exc) from exc


def solve_problem(
    problem: PdeProblem,
    layer_cfg: LayerConfig,
    plan: SamplingPlan,
    rcond: float | None = None,
    ridge: float = 0.0,
    data: tuple[np.ndarray, np.ndarray] | None = None,
    grid: np.ndarray | None = None,
    spectrum_bins: int = 50,
) -> SolveResult:
    """Run the full pipeline. Errors come back as ``StageError``."""
    t0 = time.perf_counter()
    colloc: CollocationSet = _stage("sample", sample_collocation, problem, plan)
    layer = _stage("layer", build_layer, layer_cfg, problem.d_in)
    system: LinearSystem = _stage("assemble", assemble_system, problem, layer, colloc)
    if problem.is_inverse:
        pts, vals = data if data is not None else (np.empty((0, problem.d_in)), np.empty(0))
        system = _stage("augment", augment_inverse, system, problem, layer, colloc, pts, vals)
    t1 = time.perf_counter()
    sol: LstsqSolution = _stage("solve", solve_least_squares, system.H, system.Y, rcond, ridge)
    t2 = time.perf_counter()

    def evaluate():
        g = evaluation_grid(problem.domain) if grid is None else np.asarray(grid, dtype=float)
        exact = np.asarray(problem.exact_solution(g), dtype=float)
        pred = predict(layer, sol.beta, g)
        return g, exact, pred

    g, exact, pred = _stage("evaluate", evaluate)
    warnings = list(system.flags)
    mse = training_mse(system.H, sol.beta, system.Y)
    l2 = _stage("evaluate", relative_l2, exact, pred)
    alpha = float(sol.beta[-1]) if system.has_inverse_param else None
    spectrum = None
    if layer.kind is ActivationKind.GFF_COSINE and layer.M >= 2:
        spectrum = beta_spectrum(layer.delta, sol.beta[: layer.M], spectrum_bins)
    for name, value in (("mse", mse), ("l2", l2)):
        if not np.isfinite(value):
            warnings.append(f"non-finite {name}")
    return SolveResult(
        layer_config=layer_cfg,
        mse=mse,
        l2=l2,
        max_abs_error=float(np.max(np.abs(exact - pred))),
        alpha=alpha,
        effective_rank=sol.effective_rank,
        n_rows=system.shape[0],
        assemble_seconds=t1 - t0,
        solve_seconds=t2 - t1,
        grid=g,
        exact=exact,
        predicted=pred,
        beta=sol.beta,
        layer=layer,
        spectrum=spectrum,
        warnings=tuple(warnings),
    )


def with_interval(cfg: LayerConfig, delta1: float, deltaM: float) -> LayerConfig:
    return replace(cfg, delta1=float(delta1), deltaM=float(deltaM))
