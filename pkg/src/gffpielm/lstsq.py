"""Closed-form output weights via an SVD-based pseudoinverse."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg


@dataclass(frozen=True)
class LstsqSolution:
    beta: np.ndarray
    residual_norm: float
    effective_rank: int
    singular_value_range: tuple[float, float]
    rcond: float
    ridge: float = 0.0


def default_rcond(shape) -> float:
    return max(shape) * np.finfo(float).eps * 16


def solve_least_squares(H, Y, rcond: float | None = None, ridge: float = 0.0) -> LstsqSolution:
    """Minimum-norm least-squares solution of ``H beta = Y``.

    Singular values below ``rcond * sigma_max`` are treated as zero. A positive
    ``ridge`` adds ``ridge * ||beta||^2`` to the objective (off by default).
    """
    H = np.asarray(H, dtype=float)
    Y = np.asarray(Y, dtype=float)
    if H.ndim != 2 or H.size == 0:
        raise ValueError("H must be a non-empty matrix")
    if Y.shape != (H.shape[0],):
        raise ValueError(f"Y has shape {Y.shape}, expected ({H.shape[0]},)")
    if not (np.all(np.isfinite(H)) and np.all(np.isfinite(Y))):
        raise ValueError("non-finite entries in the system")
    if rcond is None:
        rcond = default_rcond(H.shape)
    if not 0.0 <= rcond < 1.0:
        raise ValueError(f"rcond must lie in [0, 1), got {rcond}")
    if ridge < 0:
        raise ValueError("ridge must be non-negative")
    A, b = H, Y
    if ridge > 0:
        A = np.vstack([H, np.sqrt(ridge) * np.eye(H.shape[1])])
        b = np.concatenate([Y, np.zeros(H.shape[1])])
    try:
        beta, _, rank, sv = scipy.linalg.lstsq(A, b, cond=rcond, lapack_driver="gelsd", check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise np.linalg.LinAlgError(f"least-squares decomposition failed: {exc}") from exc
    kept = sv[sv > rcond * sv[0]] if sv[0] > 0 else sv[:0]
    return LstsqSolution(
        beta=beta,
        residual_norm=float(np.linalg.norm(H @ beta - Y)),
        effective_rank=int(rank),
        singular_value_range=(float(sv[0]), float(kept[-1]) if len(kept) else 0.0),
        rcond=float(rcond),
        ridge=float(ridge),
    )
