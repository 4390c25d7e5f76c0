"""Discretized wavelet-transform operators for desk-scale verification.

The maps realized here are quadrature versions of

    (R_k* f)(u, v) = sqrt(2) v integral f(xi) ell_k(2 xi v) e^{2 pi i xi u} sqrt(xi) dxi,
    (R_k F)(xi)    = sqrt(2 xi) integral integral F(u, v) ell_k(2 v xi) e^{-2 pi i xi u} du dv / v,

between L_2(R_+) signals and functions on the upper half-plane carrying
the measure v^{-2} du dv.  R_k* is an isometry onto the k-th wavelet
subspace, R_k R_k* is the identity, and R_k M_a R_k* is the Toeplitz
operator with vertical symbol a, unitarily equivalent to multiplication
by gamma_{a,k}.  None of that survives discretization exactly; the
point of this module is to verify it within stated budgets on fixed
default grids, and to measure the norm decay that places the operators
for oscillating symbols in the algebra generated by smooth ones.

Tolerances in the verification helpers are discretization budgets, not
claims about the continuum statements.
"""

import json
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .gamma import gamma_many, gamma_profile
from .quadrature import half_line_table, panel_nodes
from .symbols import eval_symbol, iterated_mean, restrict, sininvpow

__all__ = [
    "Grid2D",
    "HalfLineSignal",
    "r_star_apply",
    "r_apply",
    "toeplitz_apply",
    "wavelet_norm",
    "wavelet_inner",
    "verify_multiplier_equivalence",
    "truncation_sequence",
    "approximation_decay",
    "admissibility_defect",
    "random_signals",
    "tapered_signal",
    "default_grid",
    "default_signal_grid",
    "isometry_report",
    "equivalence_report",
    "decay_report",
]


@dataclass(frozen=True)
class Grid2D:
    """Product grid on the upper half-plane with weights for du and dv.

    u_grid is uniform on [-u_max, u_max]; v_grid is log-spaced.  The
    Haar factor v^-2 is applied by the norm and inner product, not
    baked into v_weights.  truncation_estimate records the worst basis
    mass the v window loses over the reference xi range, a floor on
    every budget quoted against this grid.
    """

    u_grid: np.ndarray
    u_weights: np.ndarray
    v_grid: np.ndarray
    v_weights: np.ndarray
    truncation_estimate: float

    def params(self):
        return {
            "u_max": float(-self.u_grid[0]),
            "n_u": int(self.u_grid.size),
            "v_min": float(self.v_grid[0]),
            "v_max": float(self.v_grid[-1]),
            "n_v": int(self.v_grid.size),
            "truncation_estimate": self.truncation_estimate,
        }


def default_grid(u_max=40.0, du=1.0 / 16.0, v_min=1e-3, v_max=50.0, n_v=400, k_ref=5):
    """The default half-plane grid; arguments exist for refinement studies."""
    n_u = int(round(2 * u_max / du)) + 1
    u = np.linspace(-u_max, u_max, n_u)
    wu = np.full(n_u, du)
    wu[0] = wu[-1] = du / 2
    y = np.linspace(math.log(v_min), math.log(v_max), n_v)
    v = np.exp(y)
    dy = y[1] - y[0]
    wv = v * dy
    wv[0] *= 0.5
    wv[-1] *= 0.5
    # worst-case ell_k^2 mass outside [2 xi v_min, 2 xi v_max] for the
    # reference signal band xi in [0.2, 8]
    x, w = half_line_table(260.0)
    worst = 0.0
    for xi in (0.2, 8.0):
        for k in range(k_ref + 1):
            sq = w * kernels.ell_array(k, x) ** 2
            inside = (x >= 2 * xi * v_min) & (x <= 2 * xi * v_max)
            worst = max(worst, abs(1.0 - float(sq[inside].sum())))
    return Grid2D(u, wu, v, wv, worst)


@dataclass(frozen=True)
class HalfLineSignal:
    """A signal f on (0, Xi] with quadrature weights for dxi."""

    xi_grid: np.ndarray
    values: np.ndarray
    weights: np.ndarray

    def norm(self):
        return math.sqrt(float(np.sum(self.weights * np.abs(self.values) ** 2)))

    def with_values(self, values):
        return HalfLineSignal(self.xi_grid, np.asarray(values, dtype=np.complex128), self.weights)


def default_signal_grid(xi_max=8.0, panels=512, order=4):
    """Composite Gauss-Legendre grid on (0, xi_max] resolving e^{2 pi i xi u}
    oscillation for |u| up to the default u_max."""
    return panel_nodes(np.linspace(0.0, xi_max, panels + 1), order)


def tapered_signal(xi=None, weights=None, roll_from=6.8):
    """The reference signal xi e^-xi with a cos^2 rolloff to zero at the
    grid edge.  It keeps a genuine floor through the interior window used
    by the equivalence metric, so the relative deviation there measures
    operator error rather than division by a dead signal."""
    if xi is None:
        xi, weights = default_signal_grid()
    xi_max = float(xi[-1])
    window = np.ones_like(xi)
    ramp = xi > roll_from
    window[ramp] = np.cos(0.5 * math.pi * (xi[ramp] - roll_from) / (xi_max - roll_from)) ** 2
    vals = xi * np.exp(-xi) * window
    return HalfLineSignal(xi, vals.astype(np.complex128), weights)


def random_signals(count=5, seed=7, xi=None, weights=None):
    """Random smooth test signals: sums of two Gaussian bumps with centers
    in [1, 3], width 0.15, and complex amplitudes; fixed seed by default."""
    if xi is None:
        xi, weights = default_signal_grid()
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        vals = np.zeros(xi.shape, dtype=np.complex128)
        for _b in range(2):
            mu = rng.uniform(1.0, 3.0)
            amp = rng.normal() + 1j * rng.normal()
            vals += amp * np.exp(-((xi - mu) ** 2) / (2 * 0.15**2))
        out.append(HalfLineSignal(xi, vals, weights))
    return out


def _check_grids(f, g):
    if f.xi_grid.ndim != 1 or g.u_grid.ndim != 1 or g.v_grid.ndim != 1:
        raise ValueError("grids must be one-dimensional")
    if f.xi_grid.size != f.values.size:
        raise ValueError("signal values do not match its grid")


def r_star_apply(k, f, g):
    """Wavelet-domain samples F[u, v] of R_k* f on the grid g."""
    _check_grids(f, g)
    # M[q, j] = w_q f_q sqrt(xi_q) ell_k(2 xi_q v_j) sqrt(2) v_j
    x = 2.0 * f.xi_grid[:, None] * g.v_grid[None, :]
    m = kernels.ell_array(k, x)
    m *= (f.weights * np.sqrt(f.xi_grid))[:, None]
    m = m * (math.sqrt(2.0) * g.v_grid)[None, :] * f.values[:, None]
    phase = np.exp(2j * math.pi * np.outer(g.u_grid, f.xi_grid))
    return phase @ m


def r_apply(k, F, g, xi_out, weights=None):
    """Half-line signal (R_k F)(xi) on xi_out from wavelet-domain samples F."""
    xi_out = np.asarray(xi_out, dtype=np.float64)
    if weights is None:
        weights = np.gradient(xi_out)
    # contract u first: G[r, j] = sum_i w_i e^{-2 pi i xi_r u_i} F[i, j]
    phase = np.exp(-2j * math.pi * np.outer(xi_out, g.u_grid))
    gmat = phase @ (g.u_weights[:, None] * F)
    x = 2.0 * xi_out[:, None] * g.v_grid[None, :]
    lk = kernels.ell_array(k, x)
    vals = np.sqrt(2.0 * xi_out) * np.sum(gmat * lk * (g.v_weights / g.v_grid)[None, :], axis=1)
    return HalfLineSignal(xi_out, vals, np.asarray(weights, dtype=np.float64))


def symbol_cell_means(s, g):
    """Cell averages of the symbol over the log cells of g's v grid.

    The operator couples a(v) only against products of basis functions
    the grid resolves, so replacing pointwise samples by cell means is
    second-order accurate for smooth symbols and remains faithful for
    symbols oscillating below the grid scale, where pointwise sampling
    aliases.  The averages are exact: differences of the first iterated
    mean of the symbol at the cell edges.
    """
    v = g.v_grid
    edges = np.empty(v.size + 1)
    edges[1:-1] = np.sqrt(v[:-1] * v[1:])
    edges[0] = v[0]
    edges[-1] = v[-1]
    c1 = np.array([iterated_mean(s, 1, e) for e in edges])
    return np.diff(c1) / np.diff(edges)


def toeplitz_apply(s, k, f, g, cell_average=True):
    """R_k M_a R_k* f: the discretized Toeplitz operator with symbol s."""
    F = r_star_apply(k, f, g)
    if cell_average:
        a = symbol_cell_means(s, g)
    else:
        a = eval_symbol(s, g.v_grid)
    F = F * a[None, :]
    return r_apply(k, F, g, f.xi_grid, f.weights)


def wavelet_inner(F1, F2, g):
    """Inner product in L_2 of the half-plane with the measure v^-2 du dv."""
    wv = g.v_weights / g.v_grid**2
    return complex(np.einsum("i,ij,j->", g.u_weights, F1 * np.conj(F2), wv))


def wavelet_norm(F, g):
    return math.sqrt(max(wavelet_inner(F, F, g).real, 0.0))


def verify_multiplier_equivalence(s, k, f, g, tol=1e-8):
    """Max interior relative deviation between T_a^(k) f and gamma_{a,k} f.

    Interior excludes the outer 10 percent of the xi grid at each end,
    where window truncation pollutes the discretized operator.
    """
    out = toeplitz_apply(s, k, f, g)
    n = f.xi_grid.size
    cut = max(1, n // 10)
    sl = slice(cut, n - cut)
    gam = gamma_many(s, k, f.xi_grid[sl], tol)
    eps = 1e-8 * float(np.max(np.abs(f.values)))
    dev = np.abs(out.values[sl] - gam * f.values[sl]) / (np.abs(f.values[sl]) + eps)
    return float(np.max(dev))


def admissibility_defect(k):
    """|1 - integral 2 xi ell_k(2 xi)^2 dxi / xi|: the wavelet normalization
    at level k, evaluated with the cached half-line rule."""
    x, w = half_line_table(260.0)
    return abs(1.0 - float(np.sum(w * kernels.ell_array(k, x) ** 2)))


# ---------------------------------------------------------------------------
# truncation of oscillating symbols and norm decay


def truncation_sequence(alpha, beta, n):
    """The n-th truncation a_n of a(v) = v^-beta sin(v^-alpha): zero below
    the sign-change point (pi n)^(-1/alpha), untouched above it.  a_n is
    bounded and continuous since the cut lands on a zero of the sine."""
    if not alpha > beta:
        raise ValueError("the truncation study requires alpha > beta")
    if n < 1:
        raise ValueError("n must be >= 1")
    theta = (math.pi * n) ** (-1.0 / alpha)
    return restrict(sininvpow(alpha, beta), theta, math.inf)


def approximation_decay(alpha, beta, k, n_list, points=120, tol=1e-9):
    """Norm distances d_n = sup |gamma| of a - a_n and their log-log slope.

    a - a_n is the head piece of the symbol supported on (0, theta_n),
    so d_n is the operator-norm distance to the truncated symbol.  The
    slope of log d_n against log theta_n should be at least alpha - beta.
    """
    if list(n_list) != sorted(n_list) or len(n_list) < 2:
        raise ValueError("n_list must be ascending with at least two entries")
    thetas = [(math.pi * n) ** (-1.0 / alpha) for n in n_list]
    d = []
    for theta in thetas:
        head = restrict(sininvpow(alpha, beta), 0.0, theta)
        prof = gamma_profile(head, k, points=points, tol=tol)
        d.append(prof.sup_estimate)
    slope = float(np.polyfit(np.log(thetas), np.log(d), 1)[0])
    return d, slope


# ---------------------------------------------------------------------------
# verification reports


def _report(suite, grid, tests):
    return {
        "suite": suite,
        "grid": grid.params(),
        "tests": tests,
        "pass": all(t["pass"] for t in tests),
    }


def isometry_report(k_max=5, count=5, seed=7, budget=2e-2, idempotence_budget=3e-2, grid=None):
    """Isometry, identity, cross-level orthogonality, and projection
    idempotence of the discretized maps, against random test signals."""
    g = grid or default_grid()
    signals = random_signals(count, seed)
    tests = []
    for k in range(k_max + 1):
        tests.append(
            {
                "name": f"admissibility k={k}",
                "error": admissibility_defect(k),
                "budget": budget,
                "pass": admissibility_defect(k) <= budget,
            }
        )
    transforms = []
    for idx, f in enumerate(signals):
        nf = f.norm()
        for k in range(k_max + 1):
            F = r_star_apply(k, f, g)
            transforms.append((idx, k, f, F))
            err = abs(wavelet_norm(F, g) - nf) / nf
            tests.append(
                {"name": f"isometry k={k} signal={idx}", "error": err, "budget": budget, "pass": err <= budget}
            )
            back = r_apply(k, F, g, f.xi_grid, f.weights)
            err = (
                math.sqrt(float(np.sum(f.weights * np.abs(back.values - f.values) ** 2))) / nf
            )
            tests.append(
                {"name": f"identity k={k} signal={idx}", "error": err, "budget": budget, "pass": err <= budget}
            )
    # cross-level orthogonality on the first signal's transforms
    first = [(k, F) for idx, k, f, F in transforms if idx == 0]
    nf = signals[0].norm()
    for i, (k1, F1) in enumerate(first):
        for k2, F2 in first[i + 1 :]:
            err = abs(wavelet_inner(F1, F2, g)) / nf**2
            tests.append(
                {
                    "name": f"orthogonality k={k1},{k2}",
                    "error": err,
                    "budget": budget,
                    "pass": err <= budget,
                }
            )
    # projection idempotence on a wavelet-domain sample; the e^{2 pi i 2 u}
    # modulation keeps its frequency content inside the resolved xi band
    bump = np.exp(2j * math.pi * 2.0 * g.u_grid[:, None]) * np.exp(
        -((g.u_grid[:, None] - 1.3) ** 2) / 8.0
        - ((np.log(g.v_grid[None, :]) - 0.2) ** 2) / 0.5
    )
    for k in (0, 2):
        pk1 = r_star_apply(k, r_apply(k, bump, g, signals[0].xi_grid, signals[0].weights), g)
        pk2 = r_star_apply(k, r_apply(k, pk1, g, signals[0].xi_grid, signals[0].weights), g)
        err = wavelet_norm(pk2 - pk1, g) / max(wavelet_norm(pk1, g), 1e-300)
        tests.append(
            {
                "name": f"idempotence k={k}",
                "error": err,
                "budget": idempotence_budget,
                "pass": err <= idempotence_budget,
            }
        )
    return _report("isometry", g, tests)


def equivalence_report(symbols=None, ks=(0, 2), budget=3e-2, grid=None):
    """Multiplier equivalence T_a^(k) f = gamma_{a,k} f on the default grid."""
    from .symbols import const, oscexp, vi, vpow

    g = grid or default_grid()
    if symbols is None:
        symbols = [
            ("const(1)", const(1.0)),
            ("oscexp()", oscexp()),
            ("vpow(1)", vpow(1.0)),
            ("vi()", vi()),
            ("sininvpow(1, 0.5)", sininvpow(1.0, 0.5)),
        ]
    f = tapered_signal()
    tests = []
    for name, s in symbols:
        for k in ks:
            dev = verify_multiplier_equivalence(s, k, f, g)
            tests.append(
                {
                    "name": f"equivalence {name} k={k}",
                    "error": dev,
                    "budget": budget,
                    "pass": dev <= budget,
                }
            )
    return _report("equivalence", g, tests)


def decay_report(alpha=1.0, beta=0.5, ks=(0, 1, 2), n_list=(4, 8, 16, 32, 64), margin=0.15):
    """Norm decay of the truncation remainders against theta_n."""
    g = default_grid()
    want = (alpha - beta) * (1.0 - margin)
    tests = []
    for k in ks:
        d, slope = approximation_decay(alpha, beta, k, n_list)
        monotone = all(d[i + 1] < d[i] for i in range(len(d) - 1))
        tests.append(
            {
                "name": f"decay k={k}",
                "d_n": d,
                "slope": slope,
                "budget": want,
                "pass": monotone and slope >= want,
            }
        )
    return _report("decay", g, tests)


def report_to_json(report):
    return json.dumps(report, indent=2)
