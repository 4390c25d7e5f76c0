"""Boundedness classification of vertical symbols, with recorded evidence.

The operator norm on every wavelet level equals sup |gamma_{a,k}|, so
boundedness of the whole operator family reduces to properties of the
symbol near v = 0 and v = infinity.  The classifier applies, in order:

1. exact family rules on the normalized term list (powers, log weights,
   oscillating powers, restrictions, and sums with a single divergent
   part);
2. for non-negative symbols, divergence of the running infima theta_a
   (near zero) and Theta_a (near infinity), which forces unboundedness
   on every level;
3. for non-negative symbols, divergence of the normalized first mean
   C^(1)(v)/v at either endpoint (the contrapositive of the lift bound
   C^(1)(v) <= e sup|gamma_{a,0}| v);
4. empirical mean-growth exponent fits: a witness order m at zero with
   envelope exponent >= m + lambda_1 and a witness order n at infinity
   with exponent <= n - lambda_2, lambda_2 in (0, n+1), give bounded
   operators whose gamma vanishes at both endpoints.

Fits within 0.1 of a threshold return inconclusive rather than a
verdict; slope fits on oscillatory envelopes are noisy and a wrong
verdict is worse than no verdict.
"""

import json
import math
from dataclasses import dataclass

import numpy as np

from .quadrature import QuadratureError
from .symbols import (
    Const,
    IntegrabilityError,
    LogPow,
    NotNonNegativeError,
    OscExp,
    PowerOsc,
    Restrict,
    SymbolError,
    Theta_inf,
    ensure_nonnegative,
    fit_mean_asymptotic,
    iterated_mean,
    normal_terms,
    theta_inf,
)

__all__ = ["BoundednessVerdict", "classify", "nonneg_lift"]

BOUNDED = "bounded_all_k"
BOUNDED_ZERO = "bounded_all_k_with_zero_limits"
UNBOUNDED = "unbounded_all_k"
INCONCLUSIVE = "inconclusive"

# fitted exponents this close to the decision threshold prove nothing
FIT_MARGIN = 0.1

# running-infimum growth demanded per two decades before declaring divergence
INF_RATIO = 8.0


@dataclass(frozen=True)
class BoundednessVerdict:
    """Classification outcome; evidence entries carry the measured numbers."""

    verdict: str
    evidence: tuple
    basis: tuple

    def to_json(self):
        def default(obj):
            if isinstance(obj, np.generic):
                obj = obj.item()
            if isinstance(obj, complex):
                return {"re": obj.real, "im": obj.imag}
            raise TypeError(f"{obj!r} is not JSON serializable")

        return json.dumps(
            {
                "verdict": self.verdict,
                "basis": list(self.basis),
                "evidence": [dict(e) for e in self.evidence],
            },
            indent=2,
            default=default,
        )


def _verdict(verdict, evidence, basis):
    return BoundednessVerdict(verdict, tuple(evidence), tuple(basis))


# ---------------------------------------------------------------------------
# step 1: exact family rules on normalized terms


@dataclass(frozen=True)
class _Facts:
    """What the family rules know about one normalized term.

    zero_v0 / zero_vinf say whether the term's contribution to gamma
    vanishes in the averaged sense when the symbol argument approaches
    that end (v -> 0 governs gamma at xi -> infinity and vice versa).
    div_v0 / div_vinf mark where the term itself blows up; the shipped
    families only ever diverge at v = 0 or v = infinity.
    """

    zero_v0: bool
    zero_vinf: bool
    div_v0: bool
    div_vinf: bool
    rule: str
    data: dict

    @property
    def bounded(self):
        return not (self.div_v0 or self.div_vinf)


def _leaf_facts(node):
    if isinstance(node, Const):
        return _Facts(False, False, False, False, "constant", {"value_abs": abs(node.value)})
    if isinstance(node, OscExp):
        # |gamma| <= 1 with gamma -> 0 at xi -> 0 (averaged) and -> 1 at xi -> inf
        return _Facts(False, True, False, False, "oscillating-exponential", {"rate": node.rate})
    if isinstance(node, LogPow):
        data = {"alpha": node.alpha, "beta": node.beta}
        # alpha^2 v^-beta ln^2 v blows up at 0; for beta = 0 also at infinity
        return _Facts(False, node.beta > 0, True, node.beta == 0, "log-weight-divergence", data)
    if isinstance(node, PowerOsc):
        tau = node.power.real
        if node.trig == "one":
            if node.power == 0:
                return _Facts(False, False, False, False, "constant", {"value_abs": 1.0})
            if tau == 0.0:
                # v^(iq): unimodular, gamma modulus constant, no limits
                return _Facts(
                    False, False, False, False, "unimodular-power", {"power_imag": node.power.imag}
                )
            data = {"power": tau}
            return _Facts(tau > 0, tau < 0, tau < 0, tau > 0, "power-divergence", data)
        alpha = node.alpha
        data = {"alpha": alpha, "envelope_power": tau, "trig": node.trig}
        # near infinity sin(mult v^-alpha) ~ mult v^-alpha while cos(...) -> 1
        tail_exp = tau - alpha if node.trig == "sin" else tau
        data["tail_exponent"] = tail_exp
        if tail_exp > 0:
            return _Facts(True, False, False, True, "oscillation-tail-growth", data)
        if tau < 0:
            beta = -tau
            m0 = math.floor(beta / alpha) + 1
            data["m0"] = m0
            data["lambda1"] = m0 * alpha - beta
            data["lambda2"] = -tail_exp
            return _Facts(True, True, False, False, "oscillation-mean-decay", data)
        data["m0"] = 1
        data["lambda1"] = 1 + tau + (alpha if node.trig == "sin" else 0.0)
        if tail_exp < 0:
            data["lambda2"] = -tail_exp
            return _Facts(True, True, False, False, "oscillation-mean-decay", data)
        # tail_exp == 0: bounded symbol with a nonzero limit at infinity
        return _Facts(True, False, False, False, "oscillation-bounded-tail", data)
    return None


def _node_facts(node):
    if isinstance(node, Restrict):
        inner = _node_facts(node.inner)
        if inner is None:
            return None
        data = dict(inner.data)
        data["window"] = [node.lo, node.hi]
        return _Facts(
            inner.zero_v0 or node.lo > 0,
            inner.zero_vinf or math.isfinite(node.hi),
            inner.div_v0 and node.lo == 0,
            inner.div_vinf and math.isinf(node.hi),
            "restricted " + inner.rule,
            data,
        )
    return _leaf_facts(node)


def _family_verdict(s):
    """Family-rule classification; None when a term defies the rules."""
    terms = normal_terms(s)
    rows = []
    for c, node in terms:
        f = _node_facts(node)
        if f is None and c != 0:
            return None
        rows.append((c, node, f))

    divergent = [(c, n, f) for c, n, f in rows if c != 0 and not f.bounded]
    evidence = []
    for c, node, f in rows:
        entry = {"criterion": f.rule, "coefficient_abs": abs(c)}
        entry.update(f.data)
        if not f.bounded:
            entry["divergent"] = True
        evidence.append(entry)

    if len(divergent) == 1:
        c, node, f = divergent[0]
        basis = ["family-rule"]
        if f.rule.endswith("log-weight-divergence") and len(rows) == 1 and c.real > 0 and c.imag == 0:
            # record the running-infimum divergence that certifies this family
            theta = [theta_inf(s, v) for v in (1e-2, 1e-4, 1e-6)]
            evidence.append(
                {"criterion": "infimum-divergence", "theta_at": [1e-2, 1e-4, 1e-6], "theta": theta}
            )
            basis.append("infimum-divergence")
        if len(rows) > 1:
            basis.append("sum-rule")
            evidence.append(
                {
                    "criterion": "sum-rule",
                    "note": "one divergent term plus bounded terms cannot cancel",
                }
            )
        return _verdict(UNBOUNDED, evidence, basis)
    if divergent:
        return None  # several divergent parts may in principle cancel

    live = [(c, n, f) for c, n, f in rows if c != 0]
    zero_limits = bool(live) and all(f.zero_v0 and f.zero_vinf for _, _, f in live)
    if all(isinstance(n, Const) for _, n, _ in rows):
        norm = abs(sum(c * n.value for c, n, _ in rows))
        evidence.append({"criterion": "exact-norm", "norm": float(norm)})
    basis = ["family-rule"]
    if any("oscillation-mean-decay" in f.rule for _, _, f in rows):
        basis.append("mean-growth")
    return _verdict(BOUNDED_ZERO if zero_limits else BOUNDED, evidence, basis)


# ---------------------------------------------------------------------------
# steps 2-4: sampled divergence tests and exponent fits


def _infimum_divergence(s):
    """Running-infimum divergence samples for a non-negative symbol."""
    theta = [theta_inf(s, v) for v in (1e-2, 1e-4, 1e-6)]
    if theta[0] > 0 and theta[1] >= INF_RATIO * theta[0] and theta[2] >= INF_RATIO * theta[1]:
        return {
            "criterion": "infimum-divergence",
            "side": "zero",
            "v": [1e-2, 1e-4, 1e-6],
            "theta": theta,
        }
    big = [Theta_inf(s, v) for v in (1e2, 1e4, 1e6)]
    if big[0] > 0 and big[1] >= INF_RATIO * big[0] and big[2] >= INF_RATIO * big[1]:
        return {
            "criterion": "infimum-divergence",
            "side": "infinity",
            "v": [1e2, 1e4, 1e6],
            "Theta": big,
        }
    return None


def _try_fit(s, m, endpoint):
    try:
        return fit_mean_asymptotic(s, m, endpoint)
    except (SymbolError, IntegrabilityError, QuadratureError, ValueError):
        return None


def classify(s, max_mean_order=4):
    """Classify boundedness of the operator family of symbol s.

    Applies exact family rules first, then the sampled divergence tests
    (non-negative symbols only), then mean-growth exponent fits up to
    order max_mean_order.  Returns the first conclusive verdict; the
    evidence list records every measured quantity along the way.
    """
    fam = _family_verdict(s)
    if fam is not None:
        return fam

    evidence = []
    nonneg = False
    try:
        ensure_nonnegative(s)
        nonneg = True
    except NotNonNegativeError as exc:
        evidence.append(
            {"criterion": "nonnegativity", "holds": False, "point": exc.point, "value": exc.value}
        )
    except (SymbolError, IntegrabilityError):
        pass

    if nonneg:
        evidence.append({"criterion": "nonnegativity", "holds": True})
        hit = _infimum_divergence(s)
        if hit is not None:
            evidence.append(hit)
            return _verdict(UNBOUNDED, evidence, ["infimum-divergence"])
        # normalized first mean: C^(1)(v)/v must stay bounded for bounded T^(0)
        for endpoint, bad in (("zero", -1), ("infinity", +1)):
            fit = _try_fit(s, 1, endpoint)
            if fit is None or not fit.conclusive:
                continue
            entry = {
                "criterion": "normalized-mean",
                "endpoint": endpoint,
                "exponent": fit.exponent,
                "residual": fit.residual,
            }
            evidence.append(entry)
            if bad * (fit.exponent - 1.0) > FIT_MARGIN:
                return _verdict(UNBOUNDED, evidence, ["normalized-mean-divergence", "nonneg-lift"])

    witness_zero = None
    witness_inf = None
    for m in range(1, max_mean_order + 1):
        if witness_zero is None:
            fit = _try_fit(s, m, "zero")
            if fit is not None and fit.conclusive:
                evidence.append(
                    {
                        "criterion": "mean-growth",
                        "endpoint": "zero",
                        "order": m,
                        "exponent": fit.exponent,
                        "residual": fit.residual,
                    }
                )
                if fit.exponent >= m + FIT_MARGIN:
                    witness_zero = (m, fit.exponent)
        if witness_inf is None:
            fit = _try_fit(s, m, "infinity")
            if fit is not None and fit.conclusive:
                evidence.append(
                    {
                        "criterion": "mean-growth",
                        "endpoint": "infinity",
                        "order": m,
                        "exponent": fit.exponent,
                        "residual": fit.residual,
                    }
                )
                # lambda2 = m - exponent must land in (0, m+1): exponent > -1
                if fit.exponent <= m - FIT_MARGIN and fit.exponent > -1.0:
                    witness_inf = (m, fit.exponent)
        if witness_zero is not None and witness_inf is not None:
            m0, e0 = witness_zero
            n0, e1 = witness_inf
            evidence.append(
                {
                    "criterion": "mean-growth-witness",
                    "order_zero": m0,
                    "lambda1": e0 - m0,
                    "order_infinity": n0,
                    "lambda2": n0 - e1,
                }
            )
            return _verdict(BOUNDED_ZERO, evidence, ["mean-growth"])
    return _verdict(INCONCLUSIVE, evidence, [])


def _nonneg_mean_order(s, max_order=4):
    """Smallest m <= max_order whose iterated mean stays non-negative on samples."""
    vs = np.geomspace(1e-3, 1e3, 25)
    for m in range(1, max_order + 1):
        try:
            vals = [iterated_mean(s, m, v) for v in vs]
        except (SymbolError, IntegrabilityError, QuadratureError):
            continue
        arr = np.asarray(vals, dtype=complex)
        mags = np.abs(arr)
        # the m-fold mean grows like v^m, so one global scale would let an
        # oscillation near v = 0 hide under the tolerance of the large-v
        # samples; judge each sample against its immediate neighbours
        loc = mags.copy()
        loc[:-1] = np.maximum(loc[:-1], mags[1:])
        loc[1:] = np.maximum(loc[1:], mags[:-1])
        loc += 1e-300
        if np.all(arr.real >= -1e-9 * loc) and np.all(np.abs(arr.imag) <= 1e-9 * loc):
            return m
    return None


def nonneg_lift(s, profile0):
    """Lift k = 0 boundedness of a non-negative symbol to every level.

    profile0 is the k = 0 gamma profile of s.  When s (or one of its
    iterated means, searched up to order 4) is non-negative and the
    profile shows a finite sup, every T^(k) is bounded, with the mean
    bound C^(m0+1)(v) <= e sup|gamma_{a,0}| v^(m0+1) recorded as
    evidence.  A divergent profile is passed through as unboundedness
    evidence instead; negativity raises the underlying precondition
    error naming the failing sample.
    """
    m0 = 0
    try:
        ensure_nonnegative(s)
    except NotNonNegativeError:
        found = _nonneg_mean_order(s)
        if found is None:
            raise
        m0 = found

    evidence = [{"criterion": "nonnegativity", "holds": True, "mean_order": m0}]
    divergent = [
        side
        for side, lim in (("zero", profile0.limit_at_zero), ("infinity", profile0.limit_at_infinity))
        if lim.kind == "divergent"
    ]
    if divergent:
        evidence.append(
            {
                "criterion": "profile-divergence",
                "k": profile0.k,
                "sides": divergent,
                "sup_estimate": profile0.sup_estimate,
            }
        )
        # the lift itself says nothing here; pass through any unboundedness
        # evidence the classifier can establish
        full = classify(s)
        if full.verdict == UNBOUNDED:
            return _verdict(UNBOUNDED, evidence + list(full.evidence), full.basis)
        return _verdict(INCONCLUSIVE, evidence, ["profile-divergence"])

    sup0 = profile0.sup_estimate
    order = m0 + 1
    vs = np.geomspace(1e-3, 1e3, 13)
    ratios = []
    for v in vs:
        mean = iterated_mean(s, order, float(v))
        ratios.append(abs(mean) / (math.e * sup0 * float(v) ** order))
    evidence.append(
        {
            "criterion": "nonneg-lift",
            "sup_gamma0": sup0,
            "bound_constant": math.e * sup0,
            "mean_order": order,
            "max_bound_ratio": float(max(ratios)),
        }
    )
    return _verdict(BOUNDED, evidence, ["nonneg-lift"])
