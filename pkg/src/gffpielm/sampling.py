"""Collocation point generation.

Every random draw goes through ``numpy.random.default_rng`` seeded with a
``[seed, stream]`` entropy list, so the interior set and each condition's set
use independent, reproducible streams.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .pde import INITIAL, ConditionSpec, Domain, PdeProblem

REJECTION_BUDGET = 1000
MIN_ACCEPTANCE = 1e-3


class SamplingError(RuntimeError):
    pass


@dataclass(frozen=True)
class SamplingPlan:
    n_interior: int
    n_per_boundary_segment: int
    n_per_initial_condition: int
    seed: int = 0

    def __post_init__(self):
        counts = (self.n_interior, self.n_per_boundary_segment, self.n_per_initial_condition)
        if any(c < 0 for c in counts):
            raise ValueError("sample counts must be non-negative")
        if not any(counts):
            raise ValueError("a sampling plan needs at least one positive count")


@dataclass(frozen=True)
class CollocationSet:
    interior: np.ndarray
    per_condition: tuple[np.ndarray, ...]
    seed: int
    flags: tuple[str, ...] = field(default_factory=tuple)

    @property
    def n_rows(self) -> int:
        return len(self.interior) + sum(len(p) for p in self.per_condition)


def _rng(seed, *stream):
    if isinstance(seed, (list, tuple)):
        return np.random.default_rng([*seed, *stream])
    return np.random.default_rng([int(seed), *stream])


def _uniform_box(rng, box: np.ndarray, n: int) -> np.ndarray:
    lo, hi = box[:, 0], box[:, 1]
    return lo + (hi - lo) * rng.random((n, len(lo)))


def _sample_spatial(domain: Domain, n: int, rng) -> np.ndarray:
    box = domain.bbox()
    if domain.kind == "BOX":
        # rng.random is in [0, 1); reject the measure-zero lower face
        pts = _uniform_box(rng, box, n)
        while True:
            bad = np.any(pts <= box[:, 0], axis=1)
            if not bad.any():
                return pts
            pts[bad] = _uniform_box(rng, box, int(bad.sum()))
    accepted = []
    n_acc = 0
    proposed = 0
    budget = REJECTION_BUDGET * max(n, 1)
    while n_acc < n:
        if proposed >= budget:
            raise SamplingError(
                f"rejection sampling on {domain.kind} accepted {n_acc}/{proposed} proposals"
            )
        batch = max(64, 2 * (n - n_acc))
        cand = _uniform_box(rng, box, batch)
        proposed += batch
        keep = cand[domain.contains_spatial(cand, 0.0)]
        accepted.append(keep)
        n_acc += len(keep)
        if proposed >= 10 * batch and n_acc / proposed < MIN_ACCEPTANCE:
            raise SamplingError(f"acceptance rate {n_acc / proposed:.2e} on {domain.kind} is degenerate")
    return np.concatenate(accepted)[:n]


def _with_time(domain: Domain, xs: np.ndarray, t: np.ndarray) -> np.ndarray:
    if domain.time is None:
        return xs
    return np.column_stack([xs, t])


def sample_interior(domain: Domain, n: int, seed) -> np.ndarray:
    """``n`` points strictly inside the domain (times a uniform time draw)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    rng = _rng(seed, 0)
    xs = _sample_spatial(domain, n, rng)
    if domain.time is None:
        return xs
    t0, t1 = domain.time
    t = t0 + (t1 - t0) * rng.random(n)
    return _with_time(domain, xs, t)


def sample_condition_region(domain: Domain, spec: ConditionSpec, n: int, seed) -> tuple[np.ndarray, bool]:
    """Points on a condition's region.

    Returns ``(points, padded)``; ``padded`` is true when the region is a
    single point and the request was filled by repetition.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    rng = _rng(seed, 1)
    if spec.region == INITIAL:
        xs = _sample_spatial(domain, n, rng)
        return _with_time(domain, xs, np.full(n, domain.time[0])), False
    seg = domain.segment(spec.segment_name)
    padded = False
    if domain.time is None:
        if seg.zero_measure:
            padded = n > 1
            return seg.point_at(np.zeros(n)), padded
        return seg.point_at(rng.random(n)), False
    xs = seg.point_at(rng.random(n)) if not seg.zero_measure else seg.point_at(np.zeros(n))
    t0, t1 = domain.time
    t = t0 + (t1 - t0) * rng.random(n)
    return _with_time(domain, xs, t), padded


def sample_collocation(problem: PdeProblem, plan: SamplingPlan) -> CollocationSet:
    interior = sample_interior(problem.domain, plan.n_interior, [plan.seed, 0])
    sets = []
    flags = []
    for k, spec in enumerate(problem.conditions):
        n = plan.n_per_initial_condition if spec.is_initial else plan.n_per_boundary_segment
        pts, padded = sample_condition_region(problem.domain, spec, n, [plan.seed, k + 1])
        if padded:
            flags.append(f"{spec.region}: zero-measure region, {n} repeated points")
        sets.append(pts)
    return CollocationSet(interior=interior, per_condition=tuple(sets), seed=plan.seed, flags=tuple(flags))


def uniform_grid_1d(lo: float, hi: float, n: int, include_ends: bool = False) -> np.ndarray:
    """Evenly spaced 1D points, as a column; for plotting, not training."""
    pts = np.linspace(lo, hi, n if include_ends else n + 2)
    if not include_ends:
        pts = pts[1:-1]
    return pts[:, None]


def write_points_csv(path, problem: PdeProblem, colloc: CollocationSet) -> None:
    names = problem.domain.coordinate_names
    with open(Path(path), "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([*names, "region"])
        for p in colloc.interior:
            w.writerow([*(repr(float(c)) for c in p), "interior"])
        for spec, pts in zip(problem.conditions, colloc.per_condition):
            tag = spec.label or spec.region
            for p in pts:
                w.writerow([*(repr(float(c)) for c in p), tag])
