"""Assemble ``H beta = Y`` from a problem, a feature layer and collocation points."""

from __future__ import annotations

import csv
from dataclasses import dataclass, replace

import numpy as np

from .features import FeatureLayer, feature_matrix
from .pde import LinearOperator, PdeProblem, operator_matrix
from .sampling import CollocationSet

INVERSE_PARAM = -1
PDE_ROW = "pde"
DATA_ROW = "data"

COLUMN_BLOCK = 1024


@dataclass(frozen=True)
class LinearSystem:
    """Dense system with per-row and per-column tags.

    ``column_meta`` holds the 0-based neuron index, or ``INVERSE_PARAM`` for
    the appended parameter column. ``row_meta`` holds ``"pde"``,
    ``"cond:<k>"`` or ``"data"``.
    """

    H: np.ndarray
    Y: np.ndarray
    column_meta: np.ndarray
    row_meta: np.ndarray
    flags: tuple[str, ...] = ()

    @property
    def shape(self):
        return self.H.shape

    @property
    def has_inverse_param(self) -> bool:
        return bool(np.any(self.column_meta == INVERSE_PARAM))

    def row_mask(self, tag: str) -> np.ndarray:
        return self.row_meta == tag


def _operator_rows(op: LinearOperator, layer: FeatureLayer, points: np.ndarray) -> np.ndarray:
    out = np.empty((len(points), layer.M))
    # stream over neuron blocks to bound temporaries
    for start in range(0, layer.M, COLUMN_BLOCK):
        stop = min(start + COLUMN_BLOCK, layer.M)
        sub = FeatureLayer(
            W=layer.W[start:stop], b=layer.b[start:stop], delta=layer.delta[start:stop], kind=layer.kind
        )
        out[:, start:stop] = operator_matrix(op, sub, points)
    return out


def _evaluate(fn, points, what):
    vals = np.asarray(fn(points), dtype=float).reshape(len(points))
    if not np.all(np.isfinite(vals)):
        raise ValueError(f"non-finite {what} values")
    return vals


def assemble_system(problem: PdeProblem, layer: FeatureLayer, colloc: CollocationSet) -> LinearSystem:
    if layer.d_in != problem.d_in:
        raise ValueError(f"layer expects {layer.d_in} inputs, problem has {problem.d_in}")
    if len(colloc.per_condition) != len(problem.conditions):
        raise ValueError("collocation set does not match the problem's conditions")
    blocks_H = []
    blocks_Y = []
    tags = []
    if len(colloc.interior):
        blocks_H.append(_operator_rows(problem.pde_operator, layer, colloc.interior))
        blocks_Y.append(_evaluate(problem.source, colloc.interior, "source"))
        tags += [PDE_ROW] * len(colloc.interior)
    for k, (spec, pts) in enumerate(zip(problem.conditions, colloc.per_condition)):
        if not len(pts):
            continue
        blocks_H.append(_operator_rows(spec.operator, layer, pts))
        blocks_Y.append(_evaluate(spec.target, pts, f"target for condition {k}"))
        tags += [f"cond:{k}"] * len(pts)
    if not blocks_H:
        raise ValueError("no collocation rows to assemble")
    H = np.vstack(blocks_H)
    if not np.all(np.isfinite(H)):
        raise ValueError("non-finite entries in H")
    return LinearSystem(
        H=H,
        Y=np.concatenate(blocks_Y),
        column_meta=np.arange(layer.M),
        row_meta=np.array(tags, dtype=object),
        flags=colloc.flags,
    )


def augment_inverse(system: LinearSystem, problem: PdeProblem, layer: FeatureLayer,
                    colloc: CollocationSet, data_points, data_values) -> LinearSystem:
    """Append the unknown-parameter column and labelled-data rows.

    The PDE reads ``D[u] = f_known + alpha * g``; moving ``alpha * g`` to the
    left gives ``-g(v)`` in the parameter column of every PDE row. ``colloc``
    must be the set the system was assembled from.
    """
    interior = colloc.interior
    if problem.inverse_profile is None:
        raise ValueError("problem has no inverse profile")
    if system.has_inverse_param:
        raise ValueError("system already carries an inverse parameter column")
    pde = system.row_mask(PDE_ROW)
    if pde.sum() != len(interior):
        raise ValueError("interior points do not match the PDE rows")
    col = np.zeros(len(system.Y))
    col[pde] = -_evaluate(problem.inverse_profile, interior, "inverse profile")
    data_points = np.atleast_2d(np.asarray(data_points, dtype=float)).reshape(-1, layer.d_in)
    data_values = np.asarray(data_values, dtype=float).reshape(len(data_points))
    data_rows = np.column_stack([feature_matrix(layer, data_points), np.zeros(len(data_points))])
    flags = system.flags
    if not len(data_points):
        flags = flags + ("inverse problem without labelled data",)
    return replace(
        system,
        H=np.vstack([np.column_stack([system.H, col]), data_rows]),
        Y=np.concatenate([system.Y, data_values]),
        column_meta=np.append(system.column_meta, INVERSE_PARAM),
        row_meta=np.concatenate([system.row_meta, np.array([DATA_ROW] * len(data_points), dtype=object)]),
        flags=flags,
    )


def dump_system(system: LinearSystem, path) -> None:
    """Write ``(H, Y)`` for small systems: ``.npz`` or ``.csv`` by suffix."""
    path = str(path)
    if path.endswith(".npz"):
        np.savez(path, H=system.H, Y=system.Y, column_meta=system.column_meta,
                 row_meta=system.row_meta.astype(str))
        return
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["row_tag", *(f"col{c}" if c >= 0 else "alpha" for c in system.column_meta), "Y"])
        for tag, row, y in zip(system.row_meta, system.H, system.Y):
            w.writerow([tag, *(repr(float(v)) for v in row), repr(float(y))])
