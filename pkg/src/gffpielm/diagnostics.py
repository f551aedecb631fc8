"""Error metrics, evaluation grids and the output-weight spectrum.

The spectrum pairs each GFF neuron's frequency coefficient with ``|beta|``.
Neurons whose coefficient is too large for the target carry vanishing
weights, so the spectrum tells how far the frequency interval needs to
reach; ``suggest_frequency_interval`` turns that reading into numbers.
"""

from __future__ import annotations

import csv
import enum
from dataclasses import dataclass

import numpy as np

from .pde import Domain

DEFAULT_BINS = 50
DEFAULT_THRESHOLD_RATIO = 1e-3
DEFAULT_MARGIN = 1.1
MIN_NEURONS_PER_BIN = 10


def training_mse(H, beta, Y) -> float:
    r = np.asarray(H) @ np.asarray(beta) - np.asarray(Y)
    return float(r @ r / len(r))


def relative_l2(exact, predicted) -> float:
    exact = np.asarray(exact, dtype=float)
    predicted = np.asarray(predicted, dtype=float)
    if exact.shape != predicted.shape:
        raise ValueError(f"shape mismatch {exact.shape} vs {predicted.shape}")
    denom = np.linalg.norm(exact)
    if denom == 0:
        raise ValueError("relative L2 error is undefined for an all-zero exact solution")
    return float(np.linalg.norm(exact - predicted) / denom)


def evaluation_grid(domain: Domain, resolution: int | None = None) -> np.ndarray:
    """Held-out uniform grid used for the solution error.

    Defaults: 1000 points for 1D static problems, 100x100 over (x, t) for 1D
    time-dependent ones, a 100x100 box grid masked by membership for 2D static
    domains, and a 50x50 masked grid at 10 time slices for 2D time-dependent
    ones. ``resolution`` overrides the per-axis count (time slices stay 10 in
    the 2D time-dependent case).
    """
    box = domain.bbox()
    sd = domain.spatial_dim
    timed = domain.time is not None
    if sd == 1 and not timed:
        n = resolution or 1000
        return np.linspace(box[0, 0], box[0, 1], n)[:, None]
    if sd == 1 and timed:
        n = resolution or 100
        x = np.linspace(box[0, 0], box[0, 1], n)
        t = np.linspace(*domain.time, n)
        X, T = np.meshgrid(x, t, indexing="ij")
        return np.column_stack([X.ravel(), T.ravel()])
    n = resolution or (50 if timed else 100)
    axes = [np.linspace(lo, hi, n) for lo, hi in box]
    mesh = np.meshgrid(*axes, indexing="ij")
    xs = np.column_stack([m.ravel() for m in mesh])
    xs = xs[domain.contains_spatial(xs, 0.0)]
    if not timed:
        return xs
    slices = np.linspace(*domain.time, 10)
    return np.vstack([np.column_stack([xs, np.full(len(xs), t)]) for t in slices])


# ---------------------------------------------------------------------------
# spectrum


class IntervalFlag(enum.Enum):
    REFINED = "refined"
    UNCHANGED = "unchanged"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class BetaSpectrum:
    delta: np.ndarray
    abs_beta: np.ndarray
    bin_edges: np.ndarray
    bin_max: np.ndarray
    bin_median: np.ndarray

    @property
    def n_bins(self) -> int:
        return len(self.bin_edges) - 1

    def bin_statistic(self, statistic: str) -> np.ndarray:
        if statistic == "max":
            return self.bin_max
        if statistic == "median":
            return self.bin_median
        raise ValueError(f"unknown bin statistic {statistic!r}")

    def large_weight_ratio(self) -> float:
        """``max|beta| / median nonzero |beta|``; large values flag a too-narrow interval."""
        nz = self.abs_beta[self.abs_beta > 0]
        if not len(nz):
            return 0.0
        return float(nz.max() / np.median(nz))


def effective_bins(M: int, bins: int = DEFAULT_BINS) -> int:
    """Bin count, reduced so each bin holds at least ``MIN_NEURONS_PER_BIN`` neurons."""
    return int(max(1, min(bins, M // MIN_NEURONS_PER_BIN)))


def beta_spectrum(delta, beta, bins: int = DEFAULT_BINS) -> BetaSpectrum:
    delta = np.asarray(delta, dtype=float)
    abs_beta = np.abs(np.asarray(beta, dtype=float)[: len(delta)])
    order = np.argsort(delta, kind="stable")
    delta, abs_beta = delta[order], abs_beta[order]
    lo, hi = delta[0], delta[-1]
    if hi == lo:
        hi = lo + 1.0
    edges = np.linspace(lo, hi, bins + 1)
    idx = np.clip(np.searchsorted(edges, delta, side="right") - 1, 0, bins - 1)
    bin_max = np.zeros(bins)
    bin_median = np.zeros(bins)
    for k in range(bins):
        vals = abs_beta[idx == k]
        if len(vals):
            bin_max[k] = vals.max()
            bin_median[k] = np.median(vals)
    return BetaSpectrum(delta, abs_beta, edges, bin_max, bin_median)


@dataclass(frozen=True)
class IntervalSuggestion:
    delta1_new: float
    deltaM_new: float
    active_fraction: float
    flag: IntervalFlag


def suggest_frequency_interval(
    spectrum: BetaSpectrum,
    threshold_ratio: float = DEFAULT_THRESHOLD_RATIO,
    margin: float = DEFAULT_MARGIN,
    statistic: str = "median",
) -> IntervalSuggestion:
    """Shrink ``[delta_1, delta_M]`` to the bins that still carry weight.

    A bin is active when its statistic of ``|beta|`` reaches
    ``threshold_ratio`` times the largest bin statistic. The upper end moves
    to ``margin`` times the upper edge of the highest active bin, the lower
    end to the lower edge of the lowest active bin. The result never leaves
    the original interval.
    """
    if len(spectrum.delta) < 2:
        raise ValueError("need at least two neurons")
    if not 0 < threshold_ratio < 1:
        raise ValueError("threshold_ratio must lie in (0, 1)")
    if margin < 1:
        raise ValueError("margin must be >= 1")
    d1, dM = float(spectrum.delta[0]), float(spectrum.delta[-1])
    stat = spectrum.bin_statistic(statistic)
    peak = stat.max()
    if not np.isfinite(peak) or peak <= 0:
        return IntervalSuggestion(d1, dM, 0.0, IntervalFlag.DEGENERATE)
    active = np.nonzero(stat >= threshold_ratio * peak)[0]
    fraction = len(active) / len(stat)
    lo = max(float(spectrum.bin_edges[active[0]]), d1)
    hi = min(margin * float(spectrum.bin_edges[active[-1] + 1]), dM)
    if len(active) == len(stat) or (lo == d1 and hi == dM):
        return IntervalSuggestion(d1, dM, fraction, IntervalFlag.UNCHANGED)
    return IntervalSuggestion(lo, max(hi, lo), fraction, IntervalFlag.REFINED)


# ---------------------------------------------------------------------------
# csv export


def write_spectrum_csv(path, spectrum: BetaSpectrum) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["delta", "abs_beta"])
        for d, b in zip(spectrum.delta, spectrum.abs_beta):
            w.writerow([repr(float(d)), repr(float(b))])


def write_sweep_csv(path, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["L", "mse", "l2"])
        for r in rows:
            w.writerow([repr(float(r.L)), repr(float(r.mse)), repr(float(r.l2))])
