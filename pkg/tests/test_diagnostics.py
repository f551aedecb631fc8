import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gffpielm.diagnostics import (
    IntervalFlag,
    beta_spectrum,
    effective_bins,
    evaluation_grid,
    relative_l2,
    suggest_frequency_interval,
    training_mse,
    write_spectrum_csv,
    write_sweep_csv,
)
from gffpielm.benchmarks import get_case
from gffpielm.pde import Box
from gffpielm.tuning import SweepRow


def test_mse_of_unit_residual():
    assert training_mse(np.eye(2), np.array([1.0, -1.0]), np.zeros(2)) == 1.0
    assert training_mse(np.eye(2), np.array([3.0, 4.0]), np.array([3.0, 4.0])) == 0.0


def test_relative_l2_basics():
    e = np.array([3.0, 4.0])
    assert relative_l2(e, e) == 0.0
    assert relative_l2(e, np.zeros(2)) == 1.0
    with pytest.raises(ValueError):
        relative_l2(np.zeros(3), np.ones(3))
    with pytest.raises(ValueError):
        relative_l2(e, np.ones(3))


@given(
    st.lists(st.floats(-1e3, 1e3), min_size=2, max_size=20),
    st.floats(1e-3, 1e3) | st.floats(-1e3, -1e-3),
    st.integers(0, 2**31),
)
def test_relative_l2_scale_invariance(vals, c, seed):
    exact = np.array(vals)
    if np.linalg.norm(exact) < 1e-6:
        exact = exact + 1.0
    pred = exact + np.random.default_rng(seed).standard_normal(len(exact))
    assert relative_l2(c * exact, c * pred) == pytest.approx(relative_l2(exact, pred), rel=1e-12)


@pytest.mark.parametrize(
    "name, size",
    [("poisson1d_demo", 1000), ("wave_multifreq", 10000)],
)
def test_grid_sizes(name, size):
    assert len(evaluation_grid(get_case(name).problem.domain)) == size


def test_masked_grids():
    bat = get_case("helmholtz_bat").problem.domain
    g = evaluation_grid(bat)
    assert 0 < len(g) < 10000 and bat.contains(g).all()
    pac = get_case("advdiff_2d_pacman").problem.domain
    g3 = evaluation_grid(pac)
    assert len(g3) % 10 == 0 and len(np.unique(g3[:, 2])) == 10 and pac.contains(g3).all()
    assert len(evaluation_grid(Box(((0.0, 1.0),)), 7)) == 7


def test_spectrum_is_sorted_listing():
    delta = np.array([3.0, 1.0, 2.0])
    s = beta_spectrum(delta, np.array([-0.3, 0.1, 0.2, 99.0]), bins=2)
    assert s.delta.tolist() == [1.0, 2.0, 3.0]
    assert s.abs_beta.tolist() == [0.1, 0.2, 0.3]
    assert s.bin_edges[0] == 1.0 and s.bin_edges[-1] == 3.0 and s.n_bins == 2
    assert s.bin_max.tolist() == [0.1, 0.3]


@given(st.integers(2, 300), st.integers(1, 60), st.integers(0, 2**31))
def test_spectrum_completeness(M, bins, seed):
    rng = np.random.default_rng(seed)
    delta = np.linspace(1, 500, M)
    beta = rng.standard_normal(M)
    s = beta_spectrum(delta, beta, bins)
    assert len(s.delta) == M
    np.testing.assert_array_equal(s.delta, delta)
    np.testing.assert_array_equal(s.abs_beta, np.abs(beta))
    assert s.bin_edges[0] == delta[0] and s.bin_edges[-1] == delta[-1]
    assert s.bin_max.max() == pytest.approx(np.abs(beta).max())


@pytest.mark.parametrize("statistic", ["median", "max"])
def test_first_bin_only(statistic):
    delta = np.linspace(1, 1000, 500)
    beta = np.where(delta <= 1 + 999 / 50, 1.0, 0.0)
    s = suggest_frequency_interval(beta_spectrum(delta, beta, 50), 1e-3, 1.1, statistic)
    assert s.flag is IntervalFlag.REFINED
    assert s.deltaM_new == pytest.approx(1.1 * (1 + 999 / 50))
    assert s.delta1_new == 1.0 and s.active_fraction == pytest.approx(1 / 50)


def test_uniform_weights_unchanged():
    delta = np.linspace(1, 1000, 500)
    s = suggest_frequency_interval(beta_spectrum(delta, np.ones(500), 50))
    assert s.flag is IntervalFlag.UNCHANGED
    assert (s.delta1_new, s.deltaM_new) == (1.0, 1000.0) and s.active_fraction == 1.0


def test_zero_weights_degenerate():
    delta = np.linspace(1, 10, 20)
    s = suggest_frequency_interval(beta_spectrum(delta, np.zeros(20), 5))
    assert s.flag is IntervalFlag.DEGENERATE and (s.delta1_new, s.deltaM_new) == (1.0, 10.0)


def test_suggestion_validation():
    s = beta_spectrum(np.linspace(1, 2, 4), np.ones(4), 2)
    for kw in ({"threshold_ratio": 0.0}, {"threshold_ratio": 1.0}, {"margin": 0.5}):
        with pytest.raises(ValueError):
            suggest_frequency_interval(s, **kw)
    with pytest.raises(ValueError):
        suggest_frequency_interval(beta_spectrum(np.ones(1), np.ones(1), 1))
    with pytest.raises(ValueError):
        suggest_frequency_interval(s, statistic="mean")


def test_large_weight_ratio():
    s = beta_spectrum(np.arange(1.0, 5.0), np.array([1.0, 1.0, 1.0, 100.0]), 2)
    assert s.large_weight_ratio() == 100.0


def test_effective_bins():
    assert effective_bins(200) == 20 and effective_bins(5000) == 50 and effective_bins(5) == 1


@given(
    st.integers(2, 400),
    st.integers(1, 50),
    st.floats(1e-6, 0.5),
    st.floats(1.0, 3.0),
    st.integers(0, 2**31),
)
def test_suggestion_stays_inside_and_is_pure(M, bins, ratio, margin, seed):
    rng = np.random.default_rng(seed)
    delta = np.linspace(rng.uniform(0.1, 10), rng.uniform(20, 2000), M)
    beta = rng.standard_normal(M) * np.exp(-rng.uniform(0, 20) * np.linspace(0, 1, M))
    spec = beta_spectrum(delta, beta, bins)
    a = suggest_frequency_interval(spec, ratio, margin)
    b = suggest_frequency_interval(spec, ratio, margin)
    assert a == b
    assert 0 < a.delta1_new <= a.deltaM_new
    assert delta[0] <= a.delta1_new and a.deltaM_new <= delta[-1]
    assert 0 <= a.active_fraction <= 1


def test_csv_writers(tmp_path):
    s = beta_spectrum(np.array([1.0, 2.0]), np.array([0.5, -0.25]), 1)
    write_spectrum_csv(tmp_path / "b.csv", s)
    assert (tmp_path / "b.csv").read_text().splitlines() == ["delta,abs_beta", "1.0,0.5", "2.0,0.25"]
    write_sweep_csv(tmp_path / "l.csv", [SweepRow(40.0, 1.0, 0.5)])
    assert (tmp_path / "l.csv").read_text().splitlines() == ["L,mse,l2", "40.0,1.0,0.5"]
