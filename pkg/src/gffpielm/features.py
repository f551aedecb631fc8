"""Single hidden layer of random features and their analytic derivatives.

Two activation families are supported:

* ``GFF_COSINE``: ``h_m(v) = cos(delta_m * w_m . v + b_m)`` with Gaussian
  input weights, uniform phases on ``[0, 2*pi]`` and a linearly spaced
  frequency coefficient per neuron.
* ``VANILLA_TANH``: ``h_m(v) = tanh(w_m . v + b_m)`` with weights and biases
  uniform on ``[-L, L]``.

Random draws come from ``numpy.random.default_rng(seed)`` in a fixed order:
the ``(M, d_in)`` weight matrix row-major first, then the ``M`` biases.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np


class ActivationKind(enum.Enum):
    GFF_COSINE = "gff"
    VANILLA_TANH = "vanilla"


class UnsupportedOrderError(ValueError):
    """Raised when a derivative order exceeds what an activation supports."""


TANH_MAX_ORDER = 2


@dataclass(frozen=True, eq=False)
class FeatureLayer:
    """Frozen hidden-layer parameters.

    ``W`` has shape ``(M, d_in)``, ``b`` and ``delta`` have shape ``(M,)``.
    For tanh layers ``delta`` is all ones.
    """

    W: np.ndarray
    b: np.ndarray
    delta: np.ndarray
    kind: ActivationKind
    seed: int | Sequence[int] | None = None

    def __post_init__(self):
        for arr in (self.W, self.b, self.delta):
            arr.setflags(write=False)

    @property
    def M(self) -> int:
        return self.W.shape[0]

    @property
    def d_in(self) -> int:
        return self.W.shape[1]

    @property
    def scaled_weights(self) -> np.ndarray:
        """``delta_m * w_m``; the effective frequency vector of each neuron."""
        return self.delta[:, None] * self.W


def _check_positive_int(name, value):
    if isinstance(value, bool) or int(value) != value or value < 1:
        raise ValueError(f"{name} must be a positive integer, got {value!r}")


def make_gff_layer(M: int, d_in: int, delta1: float, deltaM: float, seed) -> FeatureLayer:
    _check_positive_int("M", M)
    _check_positive_int("d_in", d_in)
    if not (math.isfinite(delta1) and math.isfinite(deltaM)):
        raise ValueError("frequency bounds must be finite")
    if not 0 < delta1 <= deltaM:
        raise ValueError(f"need 0 < delta1 <= deltaM, got [{delta1}, {deltaM}]")
    rng = np.random.default_rng(seed)
    W = rng.standard_normal((M, d_in))
    b = rng.uniform(0.0, 2.0 * np.pi, M)
    if M == 1:
        delta = np.array([float(delta1)])
    else:
        delta = np.linspace(delta1, deltaM, M)
    return FeatureLayer(W=W, b=b, delta=delta, kind=ActivationKind.GFF_COSINE, seed=seed)


def make_vanilla_layer(M: int, d_in: int, L: float, seed) -> FeatureLayer:
    _check_positive_int("M", M)
    _check_positive_int("d_in", d_in)
    if not (math.isfinite(L) and L > 0):
        raise ValueError(f"L must be positive and finite, got {L!r}")
    rng = np.random.default_rng(seed)
    W = rng.uniform(-L, L, (M, d_in))
    b = rng.uniform(-L, L, M)
    return FeatureLayer(W=W, b=b, delta=np.ones(M), kind=ActivationKind.VANILLA_TANH, seed=seed)


def activation_derivative(kind: ActivationKind, z: np.ndarray, n: int) -> np.ndarray:
    """n-th derivative of the activation evaluated at pre-activations ``z``."""
    if n < 0:
        raise ValueError("derivative order must be non-negative")
    if kind is ActivationKind.GFF_COSINE:
        # cos^(n)(z) = cos(z + n*pi/2); use the exact cycle to avoid phase rounding
        r = n % 4
        if r == 0:
            return np.cos(z)
        if r == 1:
            return -np.sin(z)
        if r == 2:
            return -np.cos(z)
        return np.sin(z)
    if n > TANH_MAX_ORDER:
        raise UnsupportedOrderError(
            f"tanh derivatives are implemented up to order {TANH_MAX_ORDER}, got {n}"
        )
    t = np.tanh(z)
    if n == 0:
        return t
    sech2 = 1.0 - t * t
    if n == 1:
        return sech2
    return -2.0 * t * sech2


def _as_points(layer: FeatureLayer, points) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[None, :]
    if pts.ndim != 2 or pts.shape[1] != layer.d_in:
        raise ValueError(f"points must have {layer.d_in} coordinates, got shape {np.shape(points)}")
    return pts


def _as_orders(layer: FeatureLayer, orders) -> tuple[int, ...]:
    orders = tuple(int(a) for a in orders)
    if len(orders) != layer.d_in:
        raise ValueError(f"multi-index must have length {layer.d_in}, got {len(orders)}")
    if any(a < 0 for a in orders):
        raise ValueError("multi-index entries must be non-negative")
    return orders


def preactivation(layer: FeatureLayer, points) -> np.ndarray:
    """``z[i, m] = delta_m * w_m . v_i + b_m`` for a batch of points."""
    pts = _as_points(layer, points)
    return pts @ layer.scaled_weights.T + layer.b


def derivative_matrix(layer: FeatureLayer, points, orders, z: np.ndarray | None = None) -> np.ndarray:
    """Mixed partial derivative of every feature at every point.

    Returns an ``(N, M)`` array whose entry ``[i, m]`` is
    ``prod_j (delta_m w_mj)**a_j * phi^(n)(z_im)`` with ``n = sum(a)``.
    A precomputed pre-activation matrix may be passed as ``z``.
    """
    orders = _as_orders(layer, orders)
    if z is None:
        z = preactivation(layer, points)
    n = sum(orders)
    out = activation_derivative(layer.kind, z, n)
    if n:
        scale = np.prod(layer.scaled_weights ** np.asarray(orders), axis=1)
        out = out * scale
    return out


def feature_derivative(layer: FeatureLayer, m: int, v, orders) -> float:
    """Analytic ``d^n h_m / dv^orders`` at a single point; ``m`` is 1-based."""
    if not 1 <= m <= layer.M:
        raise IndexError(f"neuron index {m} outside [1, {layer.M}]")
    orders = _as_orders(layer, orders)
    v = _as_points(layer, v)[0]
    k = m - 1
    s = layer.scaled_weights[k]
    z = float(s @ v + layer.b[k])
    n = sum(orders)
    value = float(activation_derivative(layer.kind, np.array(z), n))
    return float(np.prod(s ** np.asarray(orders))) * value


def feature_row(layer: FeatureLayer, v) -> np.ndarray:
    """Values of all ``M`` features at one point."""
    v = np.asarray(v, dtype=float)
    if v.ndim != 1:
        raise ValueError("feature_row expects a single point")
    if not np.all(np.isfinite(v)):
        raise ValueError("point has non-finite coordinates")
    return derivative_matrix(layer, v, (0,) * layer.d_in)[0]


def feature_matrix(layer: FeatureLayer, points) -> np.ndarray:
    """Values of all features at a batch of points, shape ``(N, M)``."""
    return derivative_matrix(layer, points, (0,) * layer.d_in)
