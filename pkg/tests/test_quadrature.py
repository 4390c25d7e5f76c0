"""Integration primitives: the cached half-line rule, the oscillatory
tail accelerator, and the by-parts series for distant power-trig tails."""

import math

import numpy as np
import pytest

from ctspec.quadrature import (
    QuadratureError,
    euler_sum,
    half_line_table,
    log_panel_nodes,
    oscillatory_tail,
    panel_nodes,
    power_trig_tail,
)


@pytest.mark.parametrize("q", [-0.9, -0.5, 0.0, 0.5, 1.0, 2.0, 4.0])
def test_half_line_moments_real(q):
    # the table integrates plain dx; the decay lives in the integrand
    from scipy.special import gamma as G

    x, w = half_line_table(300.0)
    got = float(np.sum(w * x**q * np.exp(-x)))
    assert got == pytest.approx(G(q + 1), rel=1e-10)


def test_half_line_moment_imaginary_exponent():
    from scipy.special import gamma as G

    x, w = half_line_table(300.0)
    got = complex(np.sum(w * x ** (1j) * np.exp(-x)))
    ref = complex(G(1 + 1j))
    assert abs(got - ref) <= 1e-10 * abs(ref)


def test_panel_nodes_integrate_polynomials_exactly():
    x, w = panel_nodes(np.linspace(0.0, 2.0, 5), 6)
    # degree up to 2*6-1 exact per panel
    for deg in (0, 3, 7, 11):
        got = float(np.sum(w * x**deg))
        assert got == pytest.approx(2.0 ** (deg + 1) / (deg + 1), rel=1e-13)


def test_log_panel_nodes_cover_decades():
    x, w = log_panel_nodes(1e-8, 1e2)
    got = float(np.sum(w / x))  # integral dx/x = log span
    assert got == pytest.approx(math.log(1e2 / 1e-8), rel=1e-12)


def test_euler_sum_accelerates_alternating_series():
    # log 2 = sum (-1)^{j+1}/j, terms passed with signs included
    terms = np.array([(-1.0) ** (j + 1) / j for j in range(1, 25)])
    val, err = euler_sum(terms)
    ref = math.log(2.0)
    assert abs(val - ref) <= max(5 * err, 1e-12)
    assert err < 1e-8


def test_oscillatory_tail_sine_integral():
    # integral_w^inf sin(u)/u du = pi/2 - Si(w)
    from scipy.special import sici

    w0 = 7.0
    val, err = oscillatory_tail(lambda u: np.sin(u) / u, w0, 2 * math.pi, atol=0.0, rtol=1e-12)
    ref = math.pi / 2 - sici(w0)[0]
    assert val == pytest.approx(ref, abs=1e-12)
    assert err <= 1e-10


def test_oscillatory_tail_error_estimate_is_honest():
    from scipy.special import sici

    for w0 in (3.0, 12.0, 40.0):
        val, err = oscillatory_tail(lambda u: np.sin(u) / u, w0, 2 * math.pi, atol=0.0, rtol=1e-11)
        ref = math.pi / 2 - sici(w0)[0]
        assert abs(val - ref) <= max(10 * err, 1e-13)


def test_oscillatory_tail_flags_wrong_period():
    # a period too short to produce alternation starves the accelerator
    with pytest.raises(QuadratureError):
        oscillatory_tail(
            lambda u: np.sin(u) / u, 3.0, 0.05, atol=0.0, rtol=1e-12, max_panels=64
        )


@pytest.mark.parametrize("sigma,trig", [(-2.5, "sin"), (-1.5, "cos"), (-1.02, "sin"), (-3.5, "cos")])
def test_power_trig_tail_matches_panel_summation(sigma, trig):
    w = 1.2e4
    got = power_trig_tail(sigma, w, trig)
    f = (lambda u: np.sin(u) * u**sigma) if trig == "sin" else (lambda u: np.cos(u) * u**sigma)
    ref, err = oscillatory_tail(f, w, 2 * math.pi, atol=0.0, rtol=1e-13)
    assert got == pytest.approx(ref, rel=1e-10)


def test_power_trig_tail_against_analytic_si():
    # sigma = -1: integral_w^inf sin(u)/u du = pi/2 - Si(w)
    from scipy.special import sici

    w = 2.0e4
    got = power_trig_tail(-1.0, w, "sin")
    ref = math.pi / 2 - sici(w)[0]
    assert got == pytest.approx(ref, rel=1e-9)
