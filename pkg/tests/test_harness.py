"""Discretized wavelet maps and the operator harness: grids, signals,
round trips, cell-mean homogenization, truncation, and decay reports."""

import json
import math

import numpy as np
import pytest

from ctspec.harness import (
    Grid2D,
    HalfLineSignal,
    admissibility_defect,
    approximation_decay,
    decay_report,
    default_grid,
    default_signal_grid,
    r_apply,
    r_star_apply,
    random_signals,
    report_to_json,
    symbol_cell_means,
    tapered_signal,
    toeplitz_apply,
    truncation_sequence,
    verify_multiplier_equivalence,
    wavelet_inner,
    wavelet_norm,
)
from ctspec.symbols import const, eval_symbol, sininvpow, vpow


@pytest.fixture(scope="module")
def grid():
    return default_grid()


@pytest.fixture(scope="module")
def small_grid():
    # coarse half-plane grid: structure tests only, no accuracy claims
    return default_grid(u_max=5.0, du=0.25, v_min=1e-2, v_max=20.0, n_v=60)


@pytest.fixture(scope="module")
def small_signals():
    xi, w = default_signal_grid(xi_max=4.0, panels=32, order=4)
    return random_signals(count=2, seed=11, xi=xi, weights=w)


# ---------------------------------------------------------------------------
# grids and signals


def test_default_grid_shape_and_weights(grid):
    p = grid.params()
    assert p["u_max"] == 40.0 and p["n_u"] == 1281 and p["n_v"] == 400
    assert np.allclose(grid.u_grid, -grid.u_grid[::-1])
    # trapezoid weights: endpoint halving, total length preserved
    assert grid.u_weights[0] == grid.u_weights[-1] == grid.u_weights[1] / 2
    assert float(grid.u_weights.sum()) == pytest.approx(80.0)
    assert float(grid.v_weights.sum()) == pytest.approx(50.0 - 1e-3, rel=2e-4)


def test_truncation_estimate_recorded(grid):
    # the v window loses genuine basis mass at the low-xi end; the grid
    # records the worst case instead of pretending the window is exact
    assert 0.0 < grid.truncation_estimate < 0.2
    assert grid.params()["truncation_estimate"] == grid.truncation_estimate


def test_signal_grid_resolution():
    xi, w = default_signal_grid()
    assert xi.size == 2048 and np.all(xi > 0.0) and np.all(xi < 8.0)
    assert float(np.sum(w)) == pytest.approx(8.0, rel=1e-14)
    assert float(np.sum(w * xi**3)) == pytest.approx(8.0**4 / 4, rel=1e-13)


def test_tapered_signal_keeps_interior_floor():
    f = tapered_signal()
    vals = np.abs(f.values)
    assert np.all(f.values.imag == 0.0)
    peak = float(vals.max())
    assert f.xi_grid[int(np.argmax(vals))] == pytest.approx(1.0, abs=0.01)
    # the equivalence metric divides by |f| on the interior 80 percent of
    # the grid; the rolloff must not kill the signal there
    n = f.xi_grid.size
    cut = max(1, n // 10)
    assert float(vals[cut : n - cut].min()) > 5e-3 * peak
    assert vals[-1] < 1e-4 * peak


def test_random_signals_deterministic():
    a = random_signals(count=3, seed=7)
    b = random_signals(count=3, seed=7)
    c = random_signals(count=3, seed=8)
    assert len(a) == 3
    for fa, fb in zip(a, b):
        assert np.array_equal(fa.values, fb.values)
    assert not np.array_equal(a[0].values, c[0].values)
    assert all(f.norm() > 0.0 for f in a)


def test_signal_with_values():
    f = tapered_signal()
    g = f.with_values(np.ones(f.xi_grid.size))
    assert g.values.dtype == np.complex128
    assert g.xi_grid is f.xi_grid
    assert g.norm() == pytest.approx(math.sqrt(8.0), rel=1e-12)


# ---------------------------------------------------------------------------
# wavelet maps


def test_admissibility_defect_small():
    for k in (0, 2, 5):
        assert admissibility_defect(k) < 1e-9


def test_r_star_shape_and_linearity(small_grid, small_signals):
    f = small_signals[0]
    F = r_star_apply(0, f, small_grid)
    assert F.shape == (small_grid.u_grid.size, small_grid.v_grid.size)
    F2 = r_star_apply(0, f.with_values(2.0 * f.values), small_grid)
    assert np.allclose(F2, 2.0 * F, rtol=1e-12, atol=1e-15)


def test_wavelet_inner_hermitian(small_grid, small_signals):
    F1 = r_star_apply(1, small_signals[0], small_grid)
    F2 = r_star_apply(1, small_signals[1], small_grid)
    z12 = wavelet_inner(F1, F2, small_grid)
    z21 = wavelet_inner(F2, F1, small_grid)
    assert z12 == pytest.approx(np.conj(z21), rel=1e-12)
    z11 = wavelet_inner(F1, F1, small_grid)
    assert z11.real > 0.0 and abs(z11.imag) <= 1e-12 * z11.real
    assert wavelet_norm(F1, small_grid) == pytest.approx(math.sqrt(z11.real), rel=1e-12)


def test_round_trip_isometry_and_identity(grid):
    f = random_signals(count=1, seed=3)[0]
    n = f.xi_grid.size
    cut = max(1, n // 10)
    sl = slice(cut, n - cut)
    eps = 1e-8 * float(np.max(np.abs(f.values)))
    for k in (0, 3):
        F = r_star_apply(k, f, grid)
        assert wavelet_norm(F, grid) == pytest.approx(f.norm(), rel=2e-2)
        out = r_apply(k, F, grid, f.xi_grid, f.weights)
        dev = np.abs(out.values[sl] - f.values[sl]) / (np.abs(f.values[sl]) + eps)
        assert float(np.max(dev)) < 3e-2


# ---------------------------------------------------------------------------
# the discretized operator


def test_cell_means_exact_for_polynomials(grid):
    means = symbol_cell_means(const(2.5), grid)
    assert np.allclose(means, 2.5, rtol=0, atol=1e-12)
    v = grid.v_grid
    edges = np.empty(v.size + 1)
    edges[1:-1] = np.sqrt(v[:-1] * v[1:])
    edges[0], edges[-1] = v[0], v[-1]
    # mean of a(v) = v over a cell is the midpoint of its edges
    means = symbol_cell_means(vpow(1.0), grid)
    assert np.allclose(means, (edges[:-1] + edges[1:]) / 2, rtol=1e-12)


def test_cell_means_track_subgrid_oscillation(grid):
    # near v_min the phase of sin(1/v) advances ~27 rad per cell; the
    # pointwise sample is meaningless there while the mean homogenizes
    s = sininvpow(1.0, 0.5)
    means = symbol_cell_means(s, grid)
    point = eval_symbol(s, grid.v_grid)
    head = slice(0, 40)
    assert float(np.max(np.abs(means[head]))) < 0.2 * float(np.max(np.abs(point[head])))


def test_equivalence_const_and_toeplitz_paths(grid):
    f = tapered_signal()
    dev = verify_multiplier_equivalence(const(1.0), 0, f, grid)
    assert dev < 3e-2
    # pointwise sampling agrees with cell means for a constant symbol
    a = toeplitz_apply(const(1.0), 0, f, grid, cell_average=False)
    b = toeplitz_apply(const(1.0), 0, f, grid, cell_average=True)
    assert np.allclose(a.values, b.values, rtol=0, atol=1e-12 * float(np.max(np.abs(a.values))))


# ---------------------------------------------------------------------------
# truncation and norm decay


def test_truncation_sequence_cuts_at_sign_change():
    for n in (1, 4):
        s = truncation_sequence(1.0, 0.5, n)
        theta = (math.pi * n) ** -1.0
        assert complex(eval_symbol(s, np.array([theta / 2]))[0]) == 0.0
        full = sininvpow(1.0, 0.5)
        v = np.array([2.0 * theta])
        assert eval_symbol(s, v)[0] == pytest.approx(eval_symbol(full, v)[0], rel=1e-14)


def test_truncation_sequence_rejects_bad_args():
    with pytest.raises(ValueError):
        truncation_sequence(0.5, 0.5, 1)
    with pytest.raises(ValueError):
        truncation_sequence(1.0, 0.5, 0)


def test_approximation_decay_validates_n_list():
    with pytest.raises(ValueError):
        approximation_decay(1.0, 0.5, 0, [8, 4])
    with pytest.raises(ValueError):
        approximation_decay(1.0, 0.5, 0, [4])


def test_approximation_decay_small_run():
    d, slope = approximation_decay(1.0, 0.5, 0, [4, 16], points=60)
    assert d[0] > d[1] > 0.0
    assert slope > 0.3


def test_decay_report_structure():
    rep = decay_report(ks=(0,), n_list=(4, 8, 16))
    assert rep["suite"] == "decay" and rep["pass"]
    assert set(rep["grid"]) >= {"u_max", "n_u", "v_min", "v_max", "n_v"}
    (t,) = rep["tests"]
    assert t["slope"] > t["budget"] and t["pass"]
    assert len(t["d_n"]) == 3 and t["d_n"] == sorted(t["d_n"], reverse=True)
    parsed = json.loads(report_to_json(rep))
    assert parsed["pass"] is True
