"""Quadrature building blocks shared by the gamma engine and the means.

Three kinds of machinery live here:

* composite Gauss-Legendre rules over explicit panel edges, with a
  log-space variant for integrands carrying power singularities at 0;
* a cached half-line node table tuned so that exp(-v) times a Laguerre
  polynomial square integrates to full double precision, with enough
  log-space depth below v = 1 to absorb v^q factors for Re q > -0.95;
* an accelerated summation scheme for integrals of oscillatory tails,
  splitting the axis into half-period panels and applying iterated
  averaging (Euler transform) to the sequence of partial sums.
"""

from functools import lru_cache

import numpy as np
from numpy.polynomial.laguerre import laggauss
from numpy.polynomial.legendre import leggauss

__all__ = [
    "QuadratureError",
    "leggauss_cached",
    "laggauss_cached",
    "panel_nodes",
    "log_panel_nodes",
    "half_line_table",
    "euler_sum",
    "oscillatory_tail",
    "power_trig_tail",
]

# deepest point of the log-space region; (1e-200)^{0.05} ~ 1e-10 keeps the
# discarded head below tolerance even for exponents close to -1
_LOG_FLOOR = 1e-200


class QuadratureError(RuntimeError):
    """An integral failed to converge within the allotted work."""


@lru_cache(maxsize=64)
def leggauss_cached(n):
    x, w = leggauss(n)
    return x, w


@lru_cache(maxsize=16)
def laggauss_cached(n):
    x, w = laggauss(n)
    return x, w


def panel_nodes(edges, n):
    """Gauss-Legendre nodes/weights for the panels between consecutive edges.

    Parameters
    ----------
    edges : ndarray
        Increasing panel boundaries, length >= 2.
    n : int
        Nodes per panel.

    Returns
    -------
    (nodes, weights) : ndarray pair, both of length n * (len(edges) - 1).
    """
    edges = np.asarray(edges, dtype=np.float64)
    xs, ws = leggauss_cached(n)
    a = edges[:-1]
    b = edges[1:]
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    nodes = (half[:, None] * xs[None, :] + mid[:, None]).ravel()
    weights = (half[:, None] * ws[None, :]).ravel()
    return nodes, weights


def log_panel_nodes(lo, hi, panel_width=2.0, n=12):
    """Nodes/weights on [lo, hi] built in log space, Jacobian included.

    Integrates f(x) dx as f(e^y) e^y dy over uniform panels in y; suited
    to integrands that behave like a power of x across many decades.
    """
    if not (0 < lo < hi):
        raise ValueError("need 0 < lo < hi")
    ylo, yhi = np.log(lo), np.log(hi)
    count = max(1, int(np.ceil((yhi - ylo) / panel_width)))
    edges = np.linspace(ylo, yhi, count + 1)
    y, wy = panel_nodes(edges, n)
    x = np.exp(y)
    return x, wy * x


@lru_cache(maxsize=32)
def half_line_table(v_max, floor=_LOG_FLOOR):
    """Cached composite rule on (0, v_max] for exp(-v)-weighted integrands.

    Log panels cover (floor, 1]; linear panels of width 4 cover [1, v_max].
    The table integrates v^q exp(-v) L^2 products to ~1e-13 relative for
    Re q in (-0.95, 4] and polynomial degrees up to ~100.
    """
    x_log, w_log = log_panel_nodes(floor, 1.0, panel_width=2.0, n=12)
    count = max(1, int(np.ceil((v_max - 1.0) / 4.0)))
    edges = np.linspace(1.0, v_max, count + 1)
    x_lin, w_lin = panel_nodes(edges, 16)
    return np.concatenate([x_log, x_lin]), np.concatenate([w_log, w_lin])


def euler_sum(terms):
    """Sum a (near-)alternating series by iterated averaging of partial sums.

    Returns (value, error_estimate).  The averaging operator halves the
    amplitude of any oscillating mode of the partial-sum sequence each
    level, so mixtures of harmonics converge geometrically as long as the
    underlying series does.
    """
    terms = np.asarray(terms, dtype=np.complex128)
    if terms.size == 0:
        return 0.0 + 0.0j, np.inf
    s = np.cumsum(terms)
    if s.size < 4:
        return s[-1], abs(terms[-1])
    diag = [s[-1]]
    cur = s
    while cur.size > 1:
        cur = 0.5 * (cur[1:] + cur[:-1])
        diag.append(cur[-1])
    # two deepest-level increments; a single one can cancel spuriously
    err = abs(diag[-1] - diag[-2]) + abs(diag[-2] - diag[-3]) + 1e-300
    return diag[-1], err


def power_trig_tail(sigma, w, trig):
    """integral_w^inf u^sigma trig(u) du by the integration-by-parts series.

    Valid (improperly) for Re sigma < 1; the series is asymptotic in 1/w,
    so w must be large enough that |sigma| / w is small -- callers switch
    to panel summation below w ~ 1e4.  Avoids evaluating the phase at
    huge arguments where half-period panel placement loses digits to ulp
    rounding.  sigma may be complex.
    """
    if w <= abs(sigma) + 2:
        raise QuadratureError("by-parts tail series needs w >> |sigma|")
    cw, sw = np.cos(w), np.sin(w)
    total = 0.0 + 0.0j
    coeff = 1.0 + 0.0j
    s = complex(sigma)
    cur = trig
    first = abs(w**s)
    for _ in range(40):
        term = coeff * (cw if cur == "sin" else -sw) * w**s
        total += term
        if cur == "sin":
            coeff *= s
            cur = "cos"
        else:
            coeff *= -s
            cur = "sin"
        s -= 1
        bound = abs(coeff) * abs(w**s)
        if bound < 1e-18 * max(abs(total), first):
            return total
    raise QuadratureError("by-parts tail series did not converge; w too small")


def oscillatory_tail(f, start, period, atol=0.0, rtol=1e-10, max_panels=4096, n=24, chunk=48):
    """Integrate f from start to infinity, f oscillating with the given period.

    f must accept an ndarray and return complex values whose sign pattern
    alternates between consecutive half-period panels (up to a decaying
    envelope).  Panels of length period/2 are accumulated in chunks and
    the partial sums accelerated; iteration stops once the acceleration
    error estimate drops below atol + rtol * |value|.
    """
    half = 0.5 * period
    terms = []
    value, err = 0.0 + 0.0j, np.inf
    j = 0
    while j < max_panels:
        hi = min(j + chunk, max_panels)
        edges = start + half * np.arange(j, hi + 1)
        nodes, weights = panel_nodes(edges, n)
        vals = (weights * f(nodes)).reshape(hi - j, n).sum(axis=1)
        terms.extend(vals.tolist())
        j = hi
        value, err = euler_sum(terms)
        scale = max(abs(value), abs(terms[0]), 1e-300)
        if err <= atol + rtol * scale + 1e-300:
            return value, err
    raise QuadratureError(
        f"oscillatory tail failed to reach atol={atol:g}/rtol={rtol:g} within "
        f"{max_panels} panels (err~{err:.2g})"
    )
