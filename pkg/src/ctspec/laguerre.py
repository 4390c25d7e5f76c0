"""Laguerre polynomials, the ell_n basis, and the product-integral identities.

Everything here is about the weighted system ell_n(y) = exp(-y/2) L_n(y),
which is orthonormal in L2(R+), and about integrals of the form

    integral_0^inf  x^p e^{-x} L_m^(alpha)(x) L_n^(beta)(x) dx,

which admit both a closed finite-sum evaluation and an explicit upper
bound with Pochhammer coefficients.  The closed sum and the bound are
kept as two independent routes; tests compare both against quadrature.
"""

from dataclasses import dataclass, field
from math import factorial

import numpy as np
from scipy.special import gamma as _gamma_fn

from . import kernels

__all__ = [
    "LaguerreBasis",
    "LambdaParams",
    "laguerre_eval",
    "laguerre_complex",
    "ell_eval",
    "lambda_eval",
    "laguerre_product_integral",
    "lambda_bound_constant",
    "pochhammer",
    "generalized_binomial",
]


def laguerre_eval(n, alpha, x):
    """Evaluate L_n^(alpha)(x) by upward three-term recurrence.

    Parameters
    ----------
    n : int
        Degree, >= 0.
    alpha : float
        Type, > -1.
    x : float or ndarray
        Evaluation points, >= 0.

    Returns
    -------
    float or ndarray
    """
    if n < 0:
        raise ValueError("degree n must be >= 0")
    if alpha <= -1:
        raise ValueError("type alpha must be > -1")
    arr = np.asarray(x, dtype=np.float64)
    if np.any(arr < 0):
        raise ValueError("x must be >= 0")
    out = kernels.laguerre_array(n, float(alpha), np.atleast_1d(arr))
    if arr.ndim == 0:
        return float(out[0])
    return out


def laguerre_complex(n, alpha, z):
    """L_n^(alpha) on a complex array, same recurrence in complex arithmetic.

    Needed when the integration contour is rotated off the real axis.
    """
    z = np.asarray(z, dtype=np.complex128)
    if n == 0:
        return np.ones_like(z)
    prev = np.ones_like(z)
    curr = 1.0 + alpha - z
    for j in range(1, n):
        prev, curr = curr, ((2 * j + 1 + alpha - z) * curr - (j + alpha) * prev) / (j + 1)
    return curr


def ell_eval(n, y):
    """Evaluate ell_n(y) = exp(-y/2) L_n(y), the orthonormal basis of L2(R+)."""
    if n < 0:
        raise ValueError("degree n must be >= 0")
    arr = np.asarray(y, dtype=np.float64)
    if np.any(arr < 0):
        raise ValueError("y must be >= 0")
    out = kernels.ell_array(n, np.atleast_1d(arr))
    if arr.ndim == 0:
        return float(out[0])
    return out


@dataclass(frozen=True)
class LaguerreBasis:
    """Evaluator for the first max_degree+1 basis functions ell_n.

    Caches the recurrence coefficients once; evaluation sweeps the
    recurrence upward and returns the whole table, which is what the
    quadrature and harness code actually consumes.
    """

    max_degree: int
    _coeff_a: np.ndarray = field(init=False, repr=False)
    _coeff_b: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.max_degree < 0:
            raise ValueError("max_degree must be >= 0")
        n = np.arange(self.max_degree + 1, dtype=np.float64)
        # recurrence (n+1) L_{n+1} = (2n+1-x) L_n - n L_{n-1}, alpha = 0
        object.__setattr__(self, "_coeff_a", 2 * n + 1)
        object.__setattr__(self, "_coeff_b", n / (n + 1))

    def laguerre_table(self, x):
        """Return L_n(x) for n = 0..max_degree, shape (max_degree+1, len(x))."""
        x = np.atleast_1d(np.asarray(x, dtype=np.float64))
        table = np.empty((self.max_degree + 1, x.size))
        table[0] = 1.0
        if self.max_degree >= 1:
            table[1] = 1.0 - x
        for n in range(1, self.max_degree):
            table[n + 1] = ((self._coeff_a[n] - x) * table[n]) / (n + 1) - self._coeff_b[n] * table[n - 1]
        return table

    def ell_table(self, y):
        """Return ell_n(y) for n = 0..max_degree, shape (max_degree+1, len(y))."""
        y = np.atleast_1d(np.asarray(y, dtype=np.float64))
        table = self.laguerre_table(y)
        table *= np.exp(-0.5 * y)[None, :]
        return table


@dataclass(frozen=True)
class LambdaParams:
    """Parameters of the weighted product x^p e^{-x} |L_m^(alpha) L_n^(beta)|."""

    p: complex
    m: int
    n: int
    alpha: float = 0.0
    beta: float = 0.0

    def __post_init__(self):
        if complex(self.p).real <= -1:
            raise ValueError("Re p must be > -1")
        if self.m < 0 or self.n < 0:
            raise ValueError("degrees must be >= 0")
        if self.alpha < -0.5 or self.beta < -0.5:
            raise ValueError("types must be >= -1/2 for the bound to apply")


def lambda_eval(params, x):
    """Evaluate the non-negative weight x^p e^{-x} |L_m^(alpha)(x) L_n^(beta)(x)|.

    Only real p is meaningful here (the modulus of x^p depends on Re p
    alone); complex p belongs to laguerre_product_integral.
    """
    p = complex(params.p)
    if p.imag != 0:
        raise ValueError("lambda_eval requires real p; complex exponents enter only the exact product integral")
    p = p.real
    x = np.asarray(x, dtype=np.float64)
    if np.any(x < 0):
        raise ValueError("x must be >= 0")
    lm = laguerre_eval(params.m, params.alpha, x)
    ln = laguerre_eval(params.n, params.beta, x)
    with np.errstate(divide="ignore"):
        xp = np.where(x > 0, x ** p, 0.0 if p > 0 else (1.0 if p == 0 else np.inf))
    out = xp * np.exp(-x) * np.abs(lm * ln)
    if np.ndim(x) == 0:
        return float(out)
    return out


def pochhammer(x, n):
    """Rising factorial (x)_n = x (x+1) ... (x+n-1) by iterated product."""
    if n < 0:
        raise ValueError("n must be >= 0")
    out = 1.0
    for j in range(n):
        out *= x + j
    return out


def generalized_binomial(a, b):
    """Binomial coefficient with arbitrary (possibly complex) upper index.

    The lower index b must be a non-negative integer, which is the only
    case the finite product-integral sum needs.  Computed as the falling
    factorial a (a-1) ... (a-b+1) / b!, which is the limit value of
    Gamma(a+1) / (Gamma(b+1) Gamma(a-b+1)) at all parameter choices,
    including negative-integer upper indices where the Gamma quotient is
    an indeterminate form.
    """
    if b < 0 or int(b) != b:
        raise ValueError("lower index must be a non-negative integer")
    out = 1.0 + 0.0j if isinstance(a, complex) else 1.0
    for j in range(int(b)):
        out *= a - j
    return out / factorial(int(b))


def laguerre_product_integral(p, alpha, beta, m, n):
    """Exact value of integral_0^inf x^p e^{-x} L_m^(alpha)(x) L_n^(beta)(x) dx.

    Evaluates the closed finite sum

        Gamma(p+1) * sum_{i=0}^{min(m,n)} (-1)^(m+n)
            binom(p-alpha, m-i) binom(p-beta, n-i) binom(p+i, i),

    valid for Re p > -1 and alpha, beta > -1.  The result is complex when
    p is complex (the exponent v^i needs this), real otherwise.
    """
    p = complex(p)
    if p.real <= -1:
        raise ValueError("Re p must be > -1")
    if alpha <= -1 or beta <= -1:
        raise ValueError("alpha and beta must be > -1")
    if m < 0 or n < 0:
        raise ValueError("degrees must be >= 0")
    sign = -1.0 if (m + n) % 2 else 1.0
    total = 0.0 + 0.0j
    for i in range(min(m, n) + 1):
        total += (
            generalized_binomial(p - alpha, m - i)
            * generalized_binomial(p - beta, n - i)
            * generalized_binomial(p + i, i)
        )
    value = _gamma_fn(p + 1) * sign * total
    if p.imag == 0:
        return float(value.real)
    return complex(value)


def lambda_bound_constant(params):
    """Upper bound for integral of the weighted product by the double Pochhammer sum.

    Dominates |laguerre_product_integral| on matching parameters; requires
    real p > -1 and types alpha, beta >= -1/2.
    """
    p = complex(params.p)
    if p.imag != 0:
        raise ValueError("the bound constant is defined for real p")
    p = p.real
    total = 0.0
    for i in range(params.m + 1):
        ai = pochhammer(params.alpha + 1, params.m - i) / (factorial(params.m - i) * factorial(i))
        for j in range(params.n + 1):
            bj = pochhammer(params.beta + 1, params.n - j) / (factorial(params.n - j) * factorial(j))
            total += ai * bj * float(_gamma_fn(p + i + j + 1))
    return total
