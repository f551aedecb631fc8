"""Frequency-interval refinement for GFF layers and the L sweep for tanh layers."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .diagnostics import (
    DEFAULT_BINS,
    DEFAULT_MARGIN,
    DEFAULT_THRESHOLD_RATIO,
    IntervalFlag,
    IntervalSuggestion,
    beta_spectrum,
    effective_bins,
    suggest_frequency_interval,
)
from .pde import PdeProblem
from .pipeline import LayerConfig, SolveResult, solve_problem, with_interval
from .sampling import SamplingPlan


@dataclass(frozen=True)
class RefinementSettings:
    bins: int = DEFAULT_BINS
    threshold_ratio: float = DEFAULT_THRESHOLD_RATIO
    margin: float = DEFAULT_MARGIN
    statistic: str = "median"


@dataclass
class Iteration:
    delta1: float
    deltaM: float
    result: SolveResult
    suggestion: IntervalSuggestion


@dataclass
class RefinementOutcome:
    final: SolveResult
    trail: list[Iteration]
    settings: RefinementSettings

    @property
    def initial(self) -> SolveResult:
        return self.trail[0].result

    @property
    def suggested_deltaM(self) -> float:
        return self.trail[0].suggestion.deltaM_new


def refine_and_resolve(
    problem: PdeProblem,
    layer_cfg: LayerConfig,
    plan: SamplingPlan,
    max_iterations: int = 2,
    settings: RefinementSettings = RefinementSettings(),
    **solve_kwargs,
) -> RefinementOutcome:
    """Solve, shrink the interval to the weight-carrying bins, re-solve.

    Each iteration is one solve with the current interval plus a reading of
    its spectrum. A REFINED suggestion triggers the next iteration; UNCHANGED
    or DEGENERATE stops, as does reaching ``max_iterations`` solves.
    """
    if max_iterations < 1:
        raise ValueError("max_iterations must be >= 1")
    if layer_cfg.method != "gff":
        raise ValueError("interval refinement applies to GFF layers only")
    cfg = layer_cfg
    bins = effective_bins(cfg.M, settings.bins)
    trail: list[Iteration] = []
    for step in range(max_iterations):
        result = solve_problem(problem, cfg, plan, spectrum_bins=bins, **solve_kwargs)
        spec = result.spectrum or beta_spectrum(result.layer.delta, result.beta, bins)
        suggestion = suggest_frequency_interval(spec, settings.threshold_ratio, settings.margin, settings.statistic)
        trail.append(Iteration(cfg.delta1, cfg.deltaM, result, suggestion))
        if suggestion.flag is not IntervalFlag.REFINED or step == max_iterations - 1:
            break
        cfg = with_interval(cfg, suggestion.delta1_new, suggestion.deltaM_new)
    return RefinementOutcome(final=trail[-1].result, trail=trail, settings=settings)


@dataclass(frozen=True)
class SweepRow:
    L: float
    mse: float
    l2: float
    error: str = ""


@dataclass
class SweepOutcome:
    rows: list[SweepRow]

    @property
    def best(self) -> SweepRow:
        ok = [r for r in self.rows if not r.error and np.isfinite(r.l2)]
        if not ok:
            raise RuntimeError("every sweep entry failed")
        return min(ok, key=lambda r: r.l2)


def sweep_vanilla_L(
    problem: PdeProblem,
    plan: SamplingPlan,
    L_values,
    seed: int = 0,
    M: int = 1000,
    **solve_kwargs,
) -> SweepOutcome:
    """Solve with a tanh layer for each half-width ``L``; failures are recorded, not raised."""
    L_values = list(L_values)
    if not L_values:
        raise ValueError("need at least one L value")
    rows = []
    for L in L_values:
        cfg = LayerConfig(method="vanilla", M=M, L=float(L), seed=seed)
        try:
            r = solve_problem(problem, cfg, replace(plan, seed=seed), **solve_kwargs)
            rows.append(SweepRow(float(L), r.mse, r.l2))
        except Exception as exc:  # noqa: BLE001 - per-entry failure is data
            rows.append(SweepRow(float(L), float("nan"), float("nan"), str(exc)))
    return SweepOutcome(rows)
