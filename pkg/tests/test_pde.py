import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gffpielm.features import make_gff_layer, make_vanilla_layer
from gffpielm.pde import (
    INITIAL,
    Box,
    ConditionSpec,
    LinearOperator,
    OperatorTerm,
    Pacman,
    PdeProblem,
    PolarStar,
    apply_operator_to_feature,
    apply_operator_to_function,
    boundary_region,
    derivative,
    domain_contains,
    identity,
    operator_matrix,
)



def _op(*terms):
    return LinearOperator(tuple(OperatorTerm(c, o) for c, o in terms))


def test_operator_term_order_limit():
    with pytest.raises(ValueError):
        OperatorTerm(1.0, (3,))
    with pytest.raises(ValueError):
        OperatorTerm(1.0, (2, 1))


def test_operator_sum_and_scaling():
    op = _op((1.0, (2, 0))) + _op((2.0, (0, 0)))
    assert op.d_in == 2 and len(op.terms) == 2
    assert op.scaled(-3.0).terms[1].coefficient == -6.0


def test_operator_mixed_dimensions_rejected():
    with pytest.raises(ValueError):
        _op((1.0, (2,))) + _op((1.0, (0, 0)))


@pytest.mark.parametrize(
    "u, op, expect",
    [
        (lambda p: p[:, 0] ** 2, _op((1.0, (2,))), lambda p: 2 + 0 * p[:, 0]),
        (lambda p: p[:, 0] ** 3 * p[:, 1], _op((1.0, (1, 1))), lambda p: 3 * p[:, 0] ** 2),
        (lambda p: np.sin(p[:, 0]) * p[:, 1] ** 2, _op((1.0, (0, 2)), (-1.0, (2, 0))),
         lambda p: 2 * np.sin(p[:, 0]) + np.sin(p[:, 0]) * p[:, 1] ** 2),
    ],
)
def test_fd_oracle_on_closed_forms(u, op, expect):
    pts = np.random.default_rng(0).random((20, op.d_in)) + 0.1
    np.testing.assert_allclose(apply_operator_to_function(op, u, pts), expect(pts), rtol=1e-7, atol=1e-7)


def test_variable_coefficient():
    op = _op((lambda p: p[:, 0], (1,)))
    pts = np.array([[0.5], [2.0]])
    np.testing.assert_allclose(apply_operator_to_function(op, lambda p: p[:, 0] ** 2, pts), [0.5, 8.0], rtol=1e-8)


@pytest.mark.parametrize("kind", ["gff", "vanilla"])
def test_operator_matrix_matches_oracle(kind):
    layer = make_gff_layer(6, 2, 1, 4, 1) if kind == "gff" else make_vanilla_layer(6, 2, 1.0, 1)
    op = _op((1.0, (0, 2)), (-4.0, (2, 0)), (0.5, (1, 0)), (1.0, (0, 0)))
    pts = np.random.default_rng(1).random((5, 2))
    H = operator_matrix(op, layer, pts)
    for m in range(1, 7):
        feat = lambda p, m=m: np.cos(p @ layer.scaled_weights[m - 1] + layer.b[m - 1]) if kind == "gff" \
            else np.tanh(p @ layer.W[m - 1] + layer.b[m - 1])
        np.testing.assert_allclose(H[:, m - 1], apply_operator_to_function(op, feat, pts, fd_step=1e-3), rtol=1e-6, atol=1e-8)
        assert apply_operator_to_feature(op, layer, m, pts[0]) == pytest.approx(H[0, m - 1], rel=1e-12)


def test_derivative_helper_names_axes():
    op = derivative(2, coefficient=3.0, axis0=1, axis1=1)
    assert op.terms[0].orders == (1, 1) and op.terms[0].coefficient == 3.0
    assert identity(3).terms[0].orders == (0, 0, 0)


# domains


def test_box_segments_1d_and_2d():
    d1 = Box(((0.0, 2.0),), time=(0.0, 1.0))
    assert d1.d_in == 2 and d1.coordinate_names == ("x", "t")
    assert [s.name for s in d1.boundary_segments()] == ["x0", "x1"]
    assert d1.segment("x1").point_at(np.zeros(3)).tolist() == [[2.0]] * 3
    assert d1.segment("x0").zero_measure
    d2 = Box(((0.0, 1.0), (0.0, 2.0)))
    lengths = {s.name: s.length for s in d2.boundary_segments()}
    assert lengths == {"bottom": 1.0, "right": 2.0, "top": 1.0, "left": 2.0}
    assert d2.spatial_area() == 2.0


def test_unknown_segment():
    with pytest.raises(KeyError):
        Box(((0.0, 1.0),)).segment("left")


def test_domain_contains_respects_time():
    d = Box(((0.0, 1.0),), time=(0.0, 1.0))
    assert domain_contains(d, [0.5, 0.5])
    assert not domain_contains(d, [0.5, 1.5])
    assert not domain_contains(d, [-0.1, 0.5])


def circle(theta):
    return 0.3 + 0 * theta


def test_polar_star_circle_geometry():
    d = PolarStar(radius=circle)
    assert d.spatial_area() == pytest.approx(math.pi * 0.09, rel=1e-8)
    seg = d.segment("curve")
    assert seg.length == pytest.approx(2 * math.pi * 0.3, rel=1e-6)
    pts = seg.point_at(np.linspace(0, 1, 50))
    np.testing.assert_allclose(np.hypot(pts[:, 0] - 0.5, pts[:, 1] - 0.5), 0.3, atol=1e-12)
    assert d.contains([[0.5, 0.5]])[0] and not d.contains([[0.9, 0.5]])[0]


def test_polar_star_arc_length_is_uniform():
    d = PolarStar(radius=lambda th: 0.4 + 0.1 * np.sin(3 * th))
    pts = d.segment("curve").point_at(np.linspace(0, 1, 401))
    steps = np.hypot(*np.diff(pts, axis=0).T)
    assert steps.max() / steps.min() < 1.01


def test_pacman_mouth_and_area():
    d = Pacman()
    assert d.spatial_area() == pytest.approx((math.pi - math.pi / 6) * 0.25)
    assert not d.contains([[0.9, 0.5]])[0]  # inside the open wedge
    assert d.contains([[0.1, 0.5]])[0]
    for s in d.boundary_segments():
        pts = s.point_at(np.linspace(0, 1, 25))
        assert d.contains(pts, tol=1e-9).all(), s.name
    assert {s.name for s in d.boundary_segments()} == {"arc", "upper_jaw", "lower_jaw"}


@given(st.floats(0.0, 1.0), st.floats(0.0, 1.0))
def test_pacman_jaw_points_are_on_the_boundary(s, eps):
    d = Pacman()
    p = d.segment("upper_jaw").point_at(np.array([s]))
    assert d.contains(p, tol=1e-9)[0]


# problems


def test_problem_validation():
    dom = Box(((0.0, 1.0),))
    op = _op((1.0, (2,)))
    zero = lambda p: np.zeros(len(p))  # noqa: E731
    PdeProblem(dom, op, zero, (ConditionSpec(identity(1), boundary_region("x0"), zero),))
    with pytest.raises(ValueError):
        PdeProblem(dom, op, zero, (ConditionSpec(identity(1), INITIAL, zero),))
    with pytest.raises(ValueError):
        PdeProblem(dom, op, zero, (ConditionSpec(identity(1), boundary_region("top"), zero),))
    with pytest.raises(ValueError):
        PdeProblem(dom, _op((1.0, (2, 0))), zero, ())


def test_condition_region_names():
    c = ConditionSpec(identity(2), boundary_region("x1"), lambda p: p[:, 0])
    assert c.segment_name == "x1" and not c.is_initial
    assert ConditionSpec(identity(2), INITIAL, lambda p: p[:, 0]).is_initial
