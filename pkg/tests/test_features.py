import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gffpielm.features import (
    ActivationKind,
    UnsupportedOrderError,
    activation_derivative,
    derivative_matrix,
    feature_derivative,
    feature_matrix,
    feature_row,
    make_gff_layer,
    make_vanilla_layer,
    preactivation,
)


def test_gff_layer_draw_order_and_shapes():
    layer = make_gff_layer(5, 2, 1.0, 9.0, seed=3)
    rng = np.random.default_rng(3)
    W = rng.standard_normal((5, 2))
    b = rng.uniform(0, 2 * np.pi, 5)
    np.testing.assert_array_equal(layer.W, W)
    np.testing.assert_array_equal(layer.b, b)
    np.testing.assert_allclose(layer.delta, [1, 3, 5, 7, 9])
    assert layer.kind is ActivationKind.GFF_COSINE


def test_single_neuron_uses_lower_bound():
    assert make_gff_layer(1, 1, 4.0, 10.0, 0).delta.tolist() == [4.0]


def test_vanilla_layer_range():
    layer = make_vanilla_layer(500, 3, 2.5, seed=1)
    assert np.all(np.abs(layer.W) <= 2.5) and np.all(np.abs(layer.b) <= 2.5)
    np.testing.assert_array_equal(layer.delta, 1.0)


@pytest.mark.parametrize(
    "args",
    [(0, 1, 1.0, 2.0), (3, 0, 1.0, 2.0), (3, 1, 0.0, 2.0), (3, 1, 5.0, 2.0), (3, 1, 1.0, np.inf), (2.5, 1, 1, 2)],
)
def test_gff_layer_rejects_bad_arguments(args):
    with pytest.raises(ValueError):
        make_gff_layer(*args, seed=0)


def test_layer_arrays_are_read_only():
    layer = make_gff_layer(3, 1, 1, 2, 0)
    with pytest.raises(ValueError):
        layer.W[0, 0] = 1.0


def test_same_seed_same_layer():
    a, b = make_gff_layer(50, 2, 1, 30, 11), make_gff_layer(50, 2, 1, 30, 11)
    np.testing.assert_array_equal(a.W, b.W)
    np.testing.assert_array_equal(a.b, b.b)


def test_single_point_value_by_hand():
    layer = make_gff_layer(2, 2, 2.0, 3.0, 0)
    v = np.array([0.3, 0.7])
    expect = np.cos(layer.delta[1] * layer.W[1] @ v + layer.b[1])
    assert feature_derivative(layer, 2, v, (0, 0)) == pytest.approx(expect, rel=1e-15)
    # d/dx then d/dt of cos gives -(dw_x)(dw_t) cos
    s = layer.delta[1] * layer.W[1]
    assert feature_derivative(layer, 2, v, (1, 1)) == pytest.approx(-s[0] * s[1] * expect, rel=1e-13)


def test_cosine_derivative_cycle():
    z = np.linspace(-3, 3, 7)
    np.testing.assert_allclose(activation_derivative(ActivationKind.GFF_COSINE, z, 1), -np.sin(z))
    np.testing.assert_allclose(activation_derivative(ActivationKind.GFF_COSINE, z, 4), np.cos(z))
    np.testing.assert_allclose(activation_derivative(ActivationKind.GFF_COSINE, z, 7), np.sin(z))


def test_tanh_derivatives_closed_form():
    z = np.linspace(-2, 2, 9)
    t = np.tanh(z)
    np.testing.assert_allclose(activation_derivative(ActivationKind.VANILLA_TANH, z, 1), 1 - t**2)
    np.testing.assert_allclose(activation_derivative(ActivationKind.VANILLA_TANH, z, 2), -2 * t * (1 - t**2))


def test_tanh_order_three_is_unsupported():
    layer = make_vanilla_layer(3, 2, 1.0, 0)
    with pytest.raises(UnsupportedOrderError):
        derivative_matrix(layer, np.zeros((1, 2)), (2, 1))


def test_bad_neuron_index_and_multi_index():
    layer = make_gff_layer(3, 2, 1, 2, 0)
    with pytest.raises(IndexError):
        feature_derivative(layer, 0, [0, 0], (0, 0))
    with pytest.raises(ValueError):
        feature_derivative(layer, 1, [0, 0], (1,))
    with pytest.raises(ValueError):
        feature_derivative(layer, 1, [0, 0], (-1, 0))


def test_non_finite_point_rejected():
    layer = make_gff_layer(3, 1, 1, 2, 0)
    with pytest.raises(ValueError):
        feature_row(layer, [np.nan])


def _fd(layer, m, v, orders, h=1e-4):
    """Fourth-order central differences, one axis at a time."""
    st1 = [(-2, 1 / 12), (-1, -2 / 3), (1, 2 / 3), (2, -1 / 12)]
    st2 = [(-2, -1 / 12), (-1, 4 / 3), (0, -5 / 2), (1, 4 / 3), (2, -1 / 12)]
    terms = [(np.zeros_like(v), 1.0)]
    for axis, a in enumerate(orders):
        if a == 0:
            continue
        new = []
        for shift, w in terms:
            for k, c in (st1 if a == 1 else st2):
                s = shift.copy()
                s[axis] += k * h
                new.append((s, w * c / h**a))
        terms = new
    return sum(w * feature_row(layer, v + s)[m - 1] for s, w in terms)


MULTI_INDICES = [(1, 0), (0, 1), (2, 0), (0, 2), (1, 1)]


@pytest.mark.parametrize("kind", ["gff", "vanilla"])
@pytest.mark.parametrize("orders", MULTI_INDICES)
def test_derivatives_match_finite_differences(kind, orders):
    rng = np.random.default_rng(hash((kind, orders)) % 2**32)
    layer = make_gff_layer(20, 2, 1, 5, 2) if kind == "gff" else make_vanilla_layer(20, 2, 1.5, 2)
    for _ in range(4):
        m = int(rng.integers(1, 21))
        v = rng.random(2)
        exact = feature_derivative(layer, m, v, orders)
        fd = _fd(layer, m, v, orders)
        assert fd == pytest.approx(exact, rel=1e-5, abs=1e-7)


@given(st.integers(1, 6), st.integers(1, 3), st.integers(0, 2**31))
def test_feature_row_agrees_with_matrix(M, d, seed):
    layer = make_gff_layer(M, d, 1.0, 20.0, seed)
    pts = np.random.default_rng(seed).random((4, d))
    F = feature_matrix(layer, pts)
    assert F.shape == (4, M)
    for i in range(4):
        np.testing.assert_allclose(feature_row(layer, pts[i]), F[i], rtol=0, atol=1e-13)
    np.testing.assert_allclose(np.cos(preactivation(layer, pts)), F)


@given(st.integers(0, 2**31), st.integers(0, 3))
def test_cosine_features_are_bounded(seed, n):
    layer = make_gff_layer(8, 2, 1.0, 50.0, seed)
    pts = np.random.default_rng(seed).random((16, 2))
    D = derivative_matrix(layer, pts, (n, 0))
    bound = np.abs(layer.scaled_weights[:, 0]) ** n
    assert np.all(np.abs(D) <= bound * (1 + 1e-12))
