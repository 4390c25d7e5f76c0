# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled evaluation kernels: Laguerre recurrences fused per element.

The three-term recurrence runs in registers for each point, so a single
pass over the input array suffices regardless of the degree.  This is
the inner loop of every quadrature in the package.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp

cnp.import_array()

BACKEND = "compiled"


cdef inline double _laguerre_scalar(int n, double alpha, double x) nogil:
    cdef double prev, curr, tmp
    cdef int j
    if n == 0:
        return 1.0
    prev = 1.0
    curr = 1.0 + alpha - x
    for j in range(1, n):
        tmp = ((2 * j + 1 + alpha - x) * curr - (j + alpha) * prev) / (j + 1)
        prev = curr
        curr = tmp
    return curr


def laguerre_array(int n, double alpha, x, out=None):
    """Evaluate L_n^(alpha) elementwise; see the fallback for the contract."""
    x_arr = np.ascontiguousarray(x, dtype=np.float64)
    shape = x_arr.shape
    cdef double[::1] xv = x_arr.ravel()
    if out is None:
        out = np.empty(shape, dtype=np.float64)
    cdef double[::1] ov = out.ravel()
    cdef Py_ssize_t i, m = xv.shape[0]
    with nogil:
        for i in range(m):
            ov[i] = _laguerre_scalar(n, alpha, xv[i])
    return out


def ell_array(int n, x, out=None):
    """Evaluate ell_n(x) = exp(-x/2) L_n(x) elementwise."""
    x_arr = np.ascontiguousarray(x, dtype=np.float64)
    shape = x_arr.shape
    cdef double[::1] xv = x_arr.ravel()
    if out is None:
        out = np.empty(shape, dtype=np.float64)
    cdef double[::1] ov = out.ravel()
    cdef Py_ssize_t i, m = xv.shape[0]
    with nogil:
        for i in range(m):
            ov[i] = exp(-0.5 * xv[i]) * _laguerre_scalar(n, 0.0, xv[i])
    return out


def ell_sq_weighted_sum(int k, x, w):
    """Compute sum_i w[i] * ell_k(x[i])**2 without materializing ell values."""
    x_arr = np.ascontiguousarray(x, dtype=np.float64)
    w_arr = np.ascontiguousarray(w, dtype=np.float64)
    cdef double[::1] xv = x_arr.ravel()
    cdef double[::1] wv = w_arr.ravel()
    if xv.shape[0] != wv.shape[0]:
        raise ValueError("x and w must have the same length")
    cdef Py_ssize_t i, m = xv.shape[0]
    cdef double acc = 0.0, e
    with nogil:
        for i in range(m):
            e = exp(-0.5 * xv[i]) * _laguerre_scalar(k, 0.0, xv[i])
            acc += wv[i] * e * e
    return acc
