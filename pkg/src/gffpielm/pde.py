"""Linear PDE problems: operators, domains, conditions.

Points are arrays whose last axis holds the spatial coordinates followed by
time (when the domain has a time interval). Source terms, condition targets
and exact solutions are vectorized callables mapping an ``(N, d_in)`` array to
an ``(N,)`` array.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np
from scipy.integrate import trapezoid

from .features import FeatureLayer, derivative_matrix, preactivation

ScalarField = Callable[[np.ndarray], np.ndarray]
Coefficient = Union[float, ScalarField]

MAX_OPERATOR_ORDER = 2


# ---------------------------------------------------------------------------
# operators


@dataclass(frozen=True)
class OperatorTerm:
    coefficient: Coefficient
    orders: tuple[int, ...]

    def __post_init__(self):
        orders = tuple(int(a) for a in self.orders)
        if any(a < 0 for a in orders):
            raise ValueError("derivative orders must be non-negative")
        if sum(orders) > MAX_OPERATOR_ORDER:
            raise ValueError(f"operator terms are limited to total order {MAX_OPERATOR_ORDER}")
        object.__setattr__(self, "orders", orders)

    def coefficient_at(self, points: np.ndarray) -> np.ndarray:
        c = self.coefficient
        if callable(c):
            return np.asarray(c(points), dtype=float).reshape(len(points))
        return np.full(len(points), float(c))


@dataclass(frozen=True)
class LinearOperator:
    terms: tuple[OperatorTerm, ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if not self.terms:
            raise ValueError("an operator needs at least one term")
        dims = {len(t.orders) for t in self.terms}
        if len(dims) != 1:
            raise ValueError("all terms must share the same input dimension")

    @property
    def d_in(self) -> int:
        return len(self.terms[0].orders)

    def __add__(self, other: "LinearOperator") -> "LinearOperator":
        return LinearOperator(self.terms + other.terms)

    def scaled(self, c: float) -> "LinearOperator":
        return LinearOperator(
            tuple(OperatorTerm(_scale_coefficient(t.coefficient, c), t.orders) for t in self.terms)
        )


def _scale_coefficient(coef, c):
    if callable(coef):
        return lambda p, coef=coef: c * np.asarray(coef(p))
    return c * float(coef)


def derivative(d_in: int, coefficient: Coefficient = 1.0, **axes: int) -> LinearOperator:
    """Single-term operator; axes are given as ``axis0=2`` etc.

    >>> derivative(2, axis0=2).terms[0].orders
    (2, 0)
    """
    orders = [0] * d_in
    for key, order in axes.items():
        orders[int(key.removeprefix("axis"))] = order
    return LinearOperator((OperatorTerm(coefficient, tuple(orders)),))


def identity(d_in: int) -> LinearOperator:
    return derivative(d_in)


def operator_matrix(op: LinearOperator, layer: FeatureLayer, points: np.ndarray) -> np.ndarray:
    """``(N, M)`` matrix of the operator applied to every feature at every point."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if op.d_in != layer.d_in:
        raise ValueError(f"operator acts on {op.d_in} inputs but layer has {layer.d_in}")
    z = preactivation(layer, points)
    out = np.zeros((len(points), layer.M))
    for term in op.terms:
        coef = term.coefficient_at(points)
        out += coef[:, None] * derivative_matrix(layer, points, term.orders, z=z)
    return out


def apply_operator_to_feature(op: LinearOperator, layer: FeatureLayer, m: int, v) -> float:
    """Operator applied to feature ``m`` (1-based) at one point."""
    if not 1 <= m <= layer.M:
        raise IndexError(f"neuron index {m} outside [1, {layer.M}]")
    v = np.asarray(v, dtype=float).reshape(1, -1)
    z = preactivation(layer, v)[:, m - 1 : m]
    total = 0.0
    for term in op.terms:
        coef = term.coefficient_at(v)[0]
        sub = FeatureLayer(
            W=layer.W[m - 1 : m], b=layer.b[m - 1 : m], delta=layer.delta[m - 1 : m], kind=layer.kind
        )
        total += coef * derivative_matrix(sub, v, term.orders, z=z)[0, 0]
    return float(total)


def _fd_partial(u: ScalarField, points: np.ndarray, orders: Sequence[int], h: float) -> np.ndarray:
    """Central differences, applied one axis at a time (second-order accurate)."""
    stencils = {0: [(0, 1.0)], 1: [(-1, -0.5), (1, 0.5)], 2: [(-1, 1.0), (0, -2.0), (1, 1.0)]}
    offsets = [(np.zeros(points.shape[1]), 1.0)]
    for axis, a in enumerate(orders):
        if a > 2:
            raise ValueError("finite-difference oracle supports per-axis order <= 2")
        new = []
        for shift, w in offsets:
            for k, c in stencils[a]:
                s = shift.copy()
                s[axis] += k * h
                new.append((s, w * c / h**a))
        offsets = new
    total = np.zeros(len(points))
    for shift, w in offsets:
        total += w * np.asarray(u(points + shift), dtype=float)
    return total


def fd_term_values(op: LinearOperator, u: ScalarField, pts: np.ndarray, fd_step: float = 1e-4,
                   extrapolate: bool = True) -> list[np.ndarray]:
    """Per-term finite-difference values ``coefficient * partial`` at ``pts``.

    With ``extrapolate`` the step-``h`` and step-``h/2`` estimates are
    combined by Richardson extrapolation, giving fourth-order accuracy.
    """
    out = []
    for term in op.terms:
        d = _fd_partial(u, pts, term.orders, fd_step)
        if extrapolate and sum(term.orders):
            d = (4.0 * _fd_partial(u, pts, term.orders, fd_step / 2) - d) / 3.0
        out.append(term.coefficient_at(pts) * d)
    return out


def apply_operator_to_function(op: LinearOperator, u: ScalarField, v, fd_step: float = 1e-4,
                               extrapolate: bool = True) -> np.ndarray | float:
    """Finite-difference application of ``op`` to a callable; a test oracle.

    Accepts a single point or an ``(N, d_in)`` batch.
    """
    v = np.asarray(v, dtype=float)
    single = v.ndim == 1
    pts = np.atleast_2d(v)
    total = np.zeros(len(pts))
    for vals in fd_term_values(op, u, pts, fd_step, extrapolate):
        total += vals
    if not np.all(np.isfinite(total)):
        raise ValueError("non-finite value in finite-difference evaluation")
    return float(total[0]) if single else total


# ---------------------------------------------------------------------------
# domains


@dataclass(frozen=True)
class BoundarySegment:
    """A piece of the spatial boundary, parametrized by normalized arc length."""

    name: str
    point_at: Callable[[np.ndarray], np.ndarray]
    length: float

    @property
    def zero_measure(self) -> bool:
        return self.length == 0.0


class Domain:
    """Spatial region, optionally crossed with a time interval ``[t0, T]``."""

    kind = ""
    spatial_dim = 0
    time: tuple[float, float] | None = None

    @property
    def d_in(self) -> int:
        return self.spatial_dim + (1 if self.time is not None else 0)

    @property
    def coordinate_names(self) -> tuple[str, ...]:
        names = ("x", "y", "z")[: self.spatial_dim]
        return names + (("t",) if self.time is not None else ())

    def bbox(self) -> np.ndarray:
        """``(spatial_dim, 2)`` bounding box of the spatial region."""
        raise NotImplementedError

    def contains_spatial(self, xs: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def boundary_segments(self) -> list[BoundarySegment]:
        raise NotImplementedError

    def spatial_area(self) -> float:
        raise NotImplementedError

    def segment(self, name: str) -> BoundarySegment:
        for seg in self.boundary_segments():
            if seg.name == name:
                return seg
        raise KeyError(f"{self.kind} domain has no boundary segment {name!r}")

    def contains(self, points, tol: float = 1e-12) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        inside = self.contains_spatial(pts[:, : self.spatial_dim], tol)
        if self.time is not None:
            t = pts[:, self.spatial_dim]
            inside &= (t >= self.time[0] - tol) & (t <= self.time[1] + tol)
        return inside


def domain_contains(domain: Domain, v) -> bool:
    return bool(domain.contains(v)[0])


@dataclass(frozen=True)
class Box(Domain):
    bounds: tuple[tuple[float, float], ...]
    time: tuple[float, float] | None = None
    kind = "BOX"

    @property
    def spatial_dim(self) -> int:
        return len(self.bounds)

    def bbox(self):
        return np.array(self.bounds, dtype=float)

    def spatial_area(self):
        return float(np.prod([hi - lo for lo, hi in self.bounds]))

    def contains_spatial(self, xs, tol=1e-12):
        lo, hi = self.bbox().T
        return np.all((xs >= lo - tol) & (xs <= hi + tol), axis=1)

    def boundary_segments(self):
        if self.spatial_dim == 1:
            (lo, hi), = self.bounds
            return [
                BoundarySegment("x0", lambda s, lo=lo: np.full((len(s), 1), lo), 0.0),
                BoundarySegment("x1", lambda s, hi=hi: np.full((len(s), 1), hi), 0.0),
            ]
        if self.spatial_dim == 2:
            (x0, x1), (y0, y1) = self.bounds

            def edge(a, b):
                a, b = np.asarray(a, float), np.asarray(b, float)
                return lambda s: a + np.asarray(s)[:, None] * (b - a)

            return [
                BoundarySegment("bottom", edge((x0, y0), (x1, y0)), x1 - x0),
                BoundarySegment("right", edge((x1, y0), (x1, y1)), y1 - y0),
                BoundarySegment("top", edge((x1, y1), (x0, y1)), x1 - x0),
                BoundarySegment("left", edge((x0, y1), (x0, y0)), y1 - y0),
            ]
        raise NotImplementedError("boxes are supported in one and two spatial dimensions")


def _arc_length_table(curve, t0, t1, n=8192):
    t = np.linspace(t0, t1, n + 1)
    p = curve(t)
    seg = np.hypot(*np.diff(p, axis=0).T)
    cum = np.concatenate([[0.0], np.cumsum(seg)])
    return t, cum


def _arc_param(curve, t0, t1):
    """Map normalized arc length in [0, 1] to curve parameter, then to points."""
    t, cum = _arc_length_table(curve, t0, t1)
    total = cum[-1]

    def point_at(s):
        return curve(np.interp(np.asarray(s, float) * total, cum, t))

    return point_at, float(total)


@dataclass(frozen=True)
class PolarStar(Domain):
    """Star-shaped region ``|x - center| <= R(theta)``.

    ``radius`` must be a positive 2*pi-periodic vectorized function.
    """

    radius: Callable[[np.ndarray], np.ndarray]
    center: tuple[float, float] = (0.5, 0.5)
    time: tuple[float, float] | None = None
    label: str = ""
    kind = "POLAR_STAR"
    spatial_dim = 2

    def _curve(self, theta):
        r = self.radius(theta)
        return np.column_stack([self.center[0] + r * np.cos(theta), self.center[1] + r * np.sin(theta)])

    def bbox(self):
        pts = self._curve(np.linspace(0.0, 2 * np.pi, 4097))
        lo, hi = pts.min(axis=0), pts.max(axis=0)
        pad = 1e-3 * (hi - lo)
        return np.column_stack([lo - pad, hi + pad])

    def contains_spatial(self, xs, tol=1e-12):
        dx = xs[:, 0] - self.center[0]
        dy = xs[:, 1] - self.center[1]
        return np.hypot(dx, dy) <= self.radius(np.arctan2(dy, dx)) + tol

    def spatial_area(self):
        theta = np.linspace(0.0, 2 * np.pi, 20001)
        return float(0.5 * trapezoid(self.radius(theta) ** 2, theta))

    def boundary_segments(self):
        point_at, length = _arc_param(self._curve, 0.0, 2 * np.pi)
        return [BoundarySegment("curve", point_at, length)]


@dataclass(frozen=True)
class Pacman(Domain):
    """Disk minus the open wedge ``|theta - mouth_angle| < half_angle``."""

    radius: float = 0.5
    center: tuple[float, float] = (0.5, 0.5)
    half_angle: float = math.pi / 6
    mouth_angle: float = 0.0
    time: tuple[float, float] | None = None
    kind = "PACMAN"
    spatial_dim = 2

    def bbox(self):
        cx, cy = self.center
        r = self.radius
        return np.array([[cx - r, cx + r], [cy - r, cy + r]])

    def spatial_area(self):
        return (math.pi - self.half_angle) * self.radius**2

    def _relative_angle(self, dx, dy):
        a = np.arctan2(dy, dx) - self.mouth_angle
        return (a + np.pi) % (2 * np.pi) - np.pi

    def contains_spatial(self, xs, tol=1e-12):
        dx = xs[:, 0] - self.center[0]
        dy = xs[:, 1] - self.center[1]
        r = np.hypot(dx, dy)
        in_disk = r <= self.radius + tol
        rel = np.abs(self._relative_angle(dx, dy))
        # distance from a point to the wedge edge ray, for points inside the wedge
        edge_dist = r * np.sin(np.minimum(self.half_angle - rel, np.pi / 2))
        in_mouth = (rel < self.half_angle) & (edge_dist > tol)
        return in_disk & ~in_mouth

    def boundary_segments(self):
        cx, cy = self.center
        r, a, m = self.radius, self.half_angle, self.mouth_angle

        def arc(theta):
            return np.column_stack([cx + r * np.cos(theta), cy + r * np.sin(theta)])

        def ray(angle):
            d = np.array([math.cos(angle), math.sin(angle)])
            return lambda s: np.asarray(self.center, float) + np.asarray(s)[:, None] * r * d

        arc_len = r * (2 * np.pi - 2 * a)
        return [
            BoundarySegment("arc", lambda s: arc(m + a + np.asarray(s) * (2 * np.pi - 2 * a)), arc_len),
            BoundarySegment("upper_jaw", ray(m + a), r),
            BoundarySegment("lower_jaw", ray(m - a), r),
        ]


# ---------------------------------------------------------------------------
# problems

INITIAL = "initial"


def boundary_region(name: str) -> str:
    return f"boundary:{name}"


@dataclass(frozen=True)
class ConditionSpec:
    """A condition ``operator[u] = target`` on a region.

    ``region`` is ``"boundary:<segment>"`` (the segment crossed with the time
    interval when present) or ``"initial"`` (the spatial domain at ``t0``).
    """

    operator: LinearOperator
    region: str
    target: ScalarField
    label: str = ""

    @property
    def is_initial(self) -> bool:
        return self.region == INITIAL

    @property
    def segment_name(self) -> str | None:
        if self.region.startswith("boundary:"):
            return self.region.split(":", 1)[1]
        return None


@dataclass(frozen=True)
class PdeProblem:
    domain: Domain
    pde_operator: LinearOperator
    source: ScalarField
    conditions: tuple[ConditionSpec, ...]
    exact_solution: ScalarField | None = None
    inverse_profile: ScalarField | None = None
    name: str = ""
    notes: tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "conditions", tuple(self.conditions))
        d = self.domain.d_in
        if self.pde_operator.d_in != d:
            raise ValueError(f"pde operator acts on {self.pde_operator.d_in} inputs, domain has {d}")
        names = {s.name for s in self.domain.boundary_segments()}
        for c in self.conditions:
            if c.operator.d_in != d:
                raise ValueError(f"condition {c.label or c.region} has wrong input dimension")
            if c.is_initial:
                if self.domain.time is None:
                    raise ValueError("initial condition on a domain without a time interval")
            elif c.segment_name not in names:
                raise ValueError(f"condition region {c.region!r} not on the {self.domain.kind} domain")

    @property
    def is_inverse(self) -> bool:
        return self.inverse_profile is not None

    @property
    def d_in(self) -> int:
        return self.domain.d_in
