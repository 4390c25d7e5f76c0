"""Pure-NumPy fallback for the hot evaluation kernels.

Same contract as the compiled extension ``ctspec._kernels``: upward
three-term recurrence in the degree, one vectorized pass per degree.
The compiled version fuses the recurrence per element instead; results
agree to the last few ulps.
"""

import numpy as np

BACKEND = "python"


def laguerre_array(n, alpha, x, out=None):
    """Evaluate the generalized Laguerre polynomial L_n^(alpha) on an array.

    Parameters
    ----------
    n : int
        Degree, >= 0.
    alpha : float
        Type parameter, > -1.
    x : ndarray of float
        Evaluation points (any shape).
    out : ndarray, optional
        Preallocated output of the same shape.

    Returns
    -------
    ndarray of float, same shape as x.
    """
    x = np.asarray(x, dtype=np.float64)
    if out is None:
        out = np.empty_like(x)
    if n == 0:
        out[...] = 1.0
        return out
    prev = np.ones_like(x)
    curr = 1.0 + alpha - x
    for j in range(1, n):
        prev, curr = curr, ((2 * j + 1 + alpha - x) * curr - (j + alpha) * prev) / (j + 1)
    out[...] = curr
    return out


def ell_array(n, x, out=None):
    """Evaluate the orthonormal basis function ell_n(x) = exp(-x/2) L_n(x)."""
    out = laguerre_array(n, 0.0, x, out=out)
    out *= np.exp(-0.5 * np.asarray(x, dtype=np.float64))
    return out


def ell_sq_weighted_sum(k, x, w):
    """Compute sum_i w[i] * ell_k(x[i])**2 in one pass."""
    vals = ell_array(k, np.asarray(x, dtype=np.float64))
    return float(np.dot(w, vals * vals))
