"""Basis functions, exact product integrals, and the dominating bound.

The product-integral oracle in oracles.py is an independent
log-substitution rule over scipy's evaluator; its values are what the
closed finite sum is tested against.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ctspec.laguerre import (
    LaguerreBasis,
    LambdaParams,
    ell_eval,
    laguerre_complex,
    laguerre_eval,
    laguerre_product_integral,
    lambda_bound_constant,
    lambda_eval,
    generalized_binomial,
    pochhammer,
)
from ctspec.quadrature import half_line_table

from oracles import orthonormality_gram, product_integral_oracle

PARAM_GRID = [
    (p, a, b, m, n)
    for p in (0.0, 0.5, 1.0, 2.0, 1j)
    for a in (0.0, 1.0)
    for b in (0.0, 1.0)
    for m in (0, 1, 3, 8)
    for n in (0, 2, 8)
]


def test_orthonormality_to_degree_20():
    gram = orthonormality_gram(20)
    np.testing.assert_allclose(gram, np.eye(21), atol=1e-9)


def test_basis_table_matches_pointwise():
    basis = LaguerreBasis(12)
    y = np.linspace(0.0, 80.0, 50)
    table = basis.ell_table(y)
    for n in (0, 5, 12):
        np.testing.assert_allclose(table[n], ell_eval(n, y), rtol=1e-12, atol=1e-300)


def test_laguerre_complex_agrees_with_mpmath():
    import mpmath as mp

    for n in (0, 1, 4):
        for z in (0.5 + 0.0j, 1.0 - 0.7j, 3.0 + 2.0j):
            got = laguerre_complex(n, 0.0, np.array([z]))[0]
            ref = complex(mp.laguerre(n, 0, z))
            assert abs(got - ref) <= 1e-12 * max(1.0, abs(ref))


def test_binomial_negative_integer_upper_index():
    # falling-factorial continuation: binom(-1, 1) = -1, binom(-2, 2) = 3
    assert generalized_binomial(-1.0, 1) == pytest.approx(-1.0)
    assert generalized_binomial(-2.0, 2) == pytest.approx(3.0)
    assert generalized_binomial(3.0, 2) == pytest.approx(3.0)
    assert generalized_binomial(0.5, 0) == pytest.approx(1.0)


def test_pochhammer_matches_gamma_quotient():
    from scipy.special import gamma as G

    for x in (0.5, 1.0, 2.5):
        for n in (0, 1, 4):
            assert pochhammer(x, n) == pytest.approx(G(x + n) / G(x), rel=1e-12)


@pytest.mark.parametrize("p,a,b,m,n", PARAM_GRID)
def test_product_integral_against_oracle(p, a, b, m, n):
    got = laguerre_product_integral(p, a, b, m, n)
    ref = product_integral_oracle(p, a, b, m, n)
    scale = max(abs(ref), 1e-3)
    assert abs(got - ref) <= 1e-8 * scale


@pytest.mark.parametrize("k", [0, 1, 2, 5, 9])
def test_anchor_norm_square_weighted_by_x(k):
    # integral x e^-x L_k(x)^2 dx = 2k + 1
    assert laguerre_product_integral(1.0, 0.0, 0.0, k, k) == pytest.approx(2 * k + 1, rel=1e-13)


def test_anchor_cross_term():
    # integral x e^-x L_0 L_1 dx = -1
    assert laguerre_product_integral(1.0, 0.0, 0.0, 0, 1) == pytest.approx(-1.0, rel=1e-13)


def test_product_integral_rejects_bad_domain():
    with pytest.raises(ValueError):
        laguerre_product_integral(-1.0, 0.0, 0.0, 0, 0)
    with pytest.raises(ValueError):
        laguerre_product_integral(1.0, -1.0, 0.0, 0, 0)


@pytest.mark.parametrize(
    "p,a,b,m,n",
    [(p, a, b, m, n) for p in (0.0, 0.5, 1.0, 2.0) for a in (0.0, 1.0) for b in (0.0, 1.0) for m in (0, 2, 6) for n in (1, 5)],
)
def test_bound_dominates_weighted_integral(p, a, b, m, n):
    params = LambdaParams(p, m, n, a, b)
    x, w = half_line_table(300.0)
    quad = float(np.sum(w * lambda_eval(params, x)))
    assert quad <= lambda_bound_constant(params) + 1e-10


def test_bound_also_dominates_exact_value():
    for p in (0.0, 0.5, 2.0):
        for m, n in ((0, 0), (3, 2), (8, 8)):
            exact = abs(laguerre_product_integral(p, 0.0, 0.0, m, n))
            assert exact <= lambda_bound_constant(LambdaParams(p, m, n)) + 1e-12


@settings(max_examples=40, deadline=None)
@given(
    m=st.integers(min_value=0, max_value=10),
    n=st.integers(min_value=0, max_value=10),
)
def test_product_integral_symmetry(m, n):
    # symmetric in (m, alpha) <-> (n, beta) when the types match
    a = laguerre_product_integral(1.5, 0.0, 0.0, m, n)
    b = laguerre_product_integral(1.5, 0.0, 0.0, n, m)
    assert a == pytest.approx(b, rel=1e-12)


def test_ell_decay_at_large_argument():
    # e^{-y/2} wins: the basis functions die fast past the turning region
    val = ell_eval(6, np.array([200.0]))[0]
    assert abs(val) < 1e-30
