"""Vertical symbols a(v): representation, parsing, evaluation, averaging.

A symbol is an expression tree over a fixed set of primitive families
(constants, powers, powers times an oscillation in v^-alpha, the
exponential oscillation e^{i r v}, log-squared weights) combined by
sums, products, scalar multiples, and restriction to a subinterval.

The analysis operations are the iterated means

    C_a^(1)(v) = integral_0^v a(t) dt,
    C_a^(m)(v) = integral_0^v C_a^(m-1)(t) dt,

the running infima theta (over (0, v)) and Theta (over (v/2, v)), and
envelope growth exponents of |C_a^(m)| at the two endpoints.  The means
are evaluated through the repeated-integral identity

    C_a^(m)(v) = integral_0^v a(t) (v-t)^(m-1) / (m-1)! dt,

which turns every order into a single weighted integral; families with
elementary antiderivatives use them directly, oscillatory families are
integrated in phase space (u = mult * t^-alpha) with accelerated
half-period panel summation.
"""

import math
import re
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .quadrature import (
    QuadratureError,
    log_panel_nodes,
    oscillatory_tail,
    panel_nodes,
    power_trig_tail,
)

__all__ = [
    "Symbol",
    "Const",
    "PowerOsc",
    "LogPow",
    "OscExp",
    "Sum",
    "Product",
    "Scale",
    "Restrict",
    "MeanAsymptotic",
    "SymbolError",
    "SymbolParseError",
    "IntegrabilityError",
    "NotNonNegativeError",
    "const",
    "vpow",
    "vi",
    "oscexp",
    "sininvpow",
    "cosinvpow",
    "plainsin_invpow",
    "logpow",
    "restrict",
    "truncate",
    "parse_symbol",
    "print_symbol",
    "eval_symbol",
    "normal_terms",
    "normalize",
    "iterated_mean",
    "theta_inf",
    "Theta_inf",
    "mean_growth_exponent",
    "fit_mean_asymptotic",
    "ensure_nonnegative",
]

MAX_MEAN_ORDER = 6


class SymbolError(ValueError):
    """Base class for symbol domain problems."""


class SymbolParseError(SymbolError):
    """Text does not conform to the symbol grammar."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class IntegrabilityError(SymbolError):
    """The symbol is not integrable near 0 at the requested operation."""


class NotNonNegativeError(SymbolError):
    """An operation requiring a non-negative symbol met a negative value."""

    def __init__(self, point, value):
        super().__init__(
            f"symbol is not non-negative: value {value!r} at v = {point:g}"
        )
        self.point = point
        self.value = value


# ---------------------------------------------------------------------------
# expression tree


class Symbol:
    """Base node.  Immutable; supports +, * sugar for building trees."""

    def __add__(self, other):
        if not isinstance(other, Symbol):
            return NotImplemented
        a = self.terms if isinstance(self, Sum) else (self,)
        b = other.terms if isinstance(other, Sum) else (other,)
        return Sum(a + b)

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return Scale(complex(other), self)
        if not isinstance(other, Symbol):
            return NotImplemented
        a = self.factors if isinstance(self, Product) else (self,)
        b = other.factors if isinstance(other, Product) else (other,)
        return Product(a + b)

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex)):
            return Scale(complex(other), self)
        return NotImplemented


@dataclass(frozen=True)
class Const(Symbol):
    value: complex


@dataclass(frozen=True)
class PowerOsc(Symbol):
    """v^power, optionally times sin or cos of mult * v^-alpha.

    trig is one of "one", "sin", "cos"; for "one" the phase fields are 0.
    Covers vpow (trig="one"), vi (power=i), sininvpow/cosinvpow
    (power=-beta), and plainsin_invpow (power=tau).
    """

    power: complex
    trig: str = "one"
    alpha: float = 0.0
    mult: float = 0.0

    def __post_init__(self):
        if self.trig not in ("one", "sin", "cos"):
            raise SymbolError(f"unknown trig kind {self.trig!r}")
        if self.trig != "one" and (self.alpha <= 0 or self.mult <= 0):
            raise SymbolError("oscillating power needs alpha > 0 and mult > 0")


@dataclass(frozen=True)
class LogPow(Symbol):
    """v^-beta * ln^2(v^-alpha) = alpha^2 v^-beta ln^2 v."""

    alpha: float
    beta: float


@dataclass(frozen=True)
class OscExp(Symbol):
    """e^{i rate v}; the grammar's oscexp() fixes rate = 2."""

    rate: float = 2.0


@dataclass(frozen=True)
class Sum(Symbol):
    terms: tuple


@dataclass(frozen=True)
class Product(Symbol):
    factors: tuple


@dataclass(frozen=True)
class Scale(Symbol):
    factor: complex
    inner: Symbol


@dataclass(frozen=True)
class Restrict(Symbol):
    """inner on [lo, hi), zero elsewhere; hi may be inf (truncation wrapper)."""

    inner: Symbol
    lo: float
    hi: float = math.inf

    def __post_init__(self):
        if not (0 <= self.lo < self.hi):
            raise SymbolError("restriction needs 0 <= lo < hi")


# family constructors with domain validation


def const(c):
    return Const(complex(c))


def vpow(p):
    p = complex(p)
    if p.real <= -1:
        raise SymbolError("vpow requires Re p > -1")
    return PowerOsc(p)


def vi():
    return PowerOsc(1j)


def oscexp():
    return OscExp(2.0)


def sininvpow(alpha, beta):
    if alpha <= 0:
        raise SymbolError("sininvpow requires alpha > 0")
    if not (0 < beta < 1):
        raise SymbolError("sininvpow requires beta in (0, 1)")
    return PowerOsc(-beta, "sin", alpha, 1.0)


def cosinvpow(alpha, beta):
    if alpha <= 0:
        raise SymbolError("cosinvpow requires alpha > 0")
    if not (0 < beta < 1):
        raise SymbolError("cosinvpow requires beta in (0, 1)")
    return PowerOsc(-beta, "cos", alpha, 1.0)


def plainsin_invpow(alpha, tau):
    if alpha <= 0:
        raise SymbolError("plainsin_invpow requires alpha > 0")
    if tau <= 0:
        raise SymbolError("plainsin_invpow requires tau > 0")
    return PowerOsc(tau, "sin", alpha, 1.0)


def logpow(alpha, beta):
    if alpha <= 0:
        raise SymbolError("logpow requires alpha > 0")
    if not (0 <= beta <= 1):
        raise SymbolError("logpow requires beta in [0, 1]")
    return LogPow(alpha, beta)


def restrict(s, lo, hi=math.inf):
    return Restrict(s, lo, hi)


def truncate(s, cutoff):
    """The truncation wrapper: zero on [0, cutoff), s itself above."""
    return Restrict(s, cutoff, math.inf)


# ---------------------------------------------------------------------------
# evaluation


def eval_symbol(s, v):
    """Pointwise value a(v) for v > 0 (scalar or ndarray), complex."""
    arr = np.asarray(v, dtype=np.float64)
    if np.any(arr <= 0):
        raise SymbolError("symbols are defined for v > 0")
    out = _eval(s, np.atleast_1d(arr))
    if arr.ndim == 0:
        return complex(out[0])
    return out


def _eval(s, v):
    if isinstance(s, Const):
        return np.full(v.shape, s.value, dtype=np.complex128)
    if isinstance(s, PowerOsc):
        out = v.astype(np.complex128) ** s.power
        if s.trig == "sin":
            out *= np.sin(s.mult * v ** (-s.alpha))
        elif s.trig == "cos":
            out *= np.cos(s.mult * v ** (-s.alpha))
        return out
    if isinstance(s, LogPow):
        return (s.alpha**2 * v ** (-s.beta) * np.log(v) ** 2).astype(np.complex128)
    if isinstance(s, OscExp):
        return np.exp(1j * s.rate * v)
    if isinstance(s, Sum):
        return sum(_eval(t, v) for t in s.terms)
    if isinstance(s, Product):
        out = np.ones(v.shape, dtype=np.complex128)
        for f in s.factors:
            out *= _eval(f, v)
        return out
    if isinstance(s, Scale):
        return s.factor * _eval(s.inner, v)
    if isinstance(s, Restrict):
        out = _eval(s.inner, v)
        out[(v < s.lo) | (v >= s.hi)] = 0.0
        return out
    raise TypeError(f"not a symbol node: {s!r}")


# ---------------------------------------------------------------------------
# normalization: flatten to sum of scaled monomial leaves


_UNIT = Const(1.0)


def normal_terms(s):
    """Flatten s into a list of (coefficient, node) pairs summing to s.

    Products of oscillating powers sharing the same alpha are expanded by
    product-to-sum trig identities, so most trees reduce to monomial
    leaves; factors that cannot be merged stay behind as Product nodes.
    """
    terms = _norm(s)
    merged = {}
    for c, node in terms:
        if node in merged:
            merged[node] += c
        else:
            merged[node] = c
    return [(c, node) for node, c in merged.items() if c != 0] or [(0j, _UNIT)]


def _norm(s):
    if isinstance(s, Const):
        return [(complex(s.value), _UNIT)]
    if isinstance(s, (PowerOsc, LogPow, OscExp)):
        return [(1.0 + 0j, s)]
    if isinstance(s, Scale):
        return [(s.factor * c, node) for c, node in _norm(s.inner)]
    if isinstance(s, Sum):
        out = []
        for t in s.terms:
            out.extend(_norm(t))
        return out
    if isinstance(s, Product):
        out = [(1.0 + 0j, _UNIT)]
        for f in s.factors:
            fn = _norm(f)
            out = [
                (c1 * c2 * c3, node)
                for c1, n1 in out
                for c2, n2 in fn
                for c3, node in _merge_leaves(n1, n2)
            ]
        return out
    if isinstance(s, Restrict):
        out = []
        for c, node in _norm(s.inner):
            if isinstance(node, Restrict):
                lo, hi = max(node.lo, s.lo), min(node.hi, s.hi)
                if lo < hi:
                    out.append((c, Restrict(node.inner, lo, hi)))
            else:
                out.append((c, Restrict(node, s.lo, s.hi)))
        return out
    raise TypeError(f"not a symbol node: {s!r}")


def _merge_leaves(a, b):
    """Product of two monomial leaves as [(coeff, leaf)]; may stay a Product."""
    if a == _UNIT:
        return [(1.0 + 0j, b)]
    if b == _UNIT:
        return [(1.0 + 0j, a)]
    if isinstance(a, PowerOsc) and isinstance(b, PowerOsc):
        if a.trig == "one" or b.trig == "one":
            osc, plain = (a, b) if b.trig == "one" else (b, a)
            return [(1.0 + 0j, PowerOsc(a.power + b.power, osc.trig, osc.alpha, osc.mult))]
        if a.alpha == b.alpha:
            return _trig_product(a, b)
    if isinstance(a, OscExp) and isinstance(b, OscExp):
        return [(1.0 + 0j, OscExp(a.rate + b.rate))]
    if isinstance(a, LogPow) and isinstance(b, PowerOsc) and b.trig == "one" and b.power.imag == 0:
        # alpha^2 v^-beta ln^2 v * v^q = alpha^2 * (v^-(beta-q) ln^2 v)
        return [(a.alpha**2 + 0j, LogPow(1.0, a.beta - b.power.real))]
    if isinstance(b, LogPow) and isinstance(a, PowerOsc):
        return _merge_leaves(b, a)
    return [(1.0 + 0j, Product((a, b)))]


def _trig_product(a, b):
    """Expand trig(m1 u) * trig(m2 u) with the shared phase u = v^-alpha."""
    q = a.power + b.power
    al = a.alpha
    s_, d = a.mult + b.mult, abs(a.mult - b.mult)
    kinds = (a.trig, b.trig)
    out = []

    def emit(coeff, trig, mult):
        if mult == 0:
            if trig == "cos":
                out.append((coeff, PowerOsc(q)))
            # sin(0) contributes nothing
        else:
            out.append((coeff, PowerOsc(q, trig, al, mult)))

    if kinds == ("sin", "sin"):
        emit(0.5 + 0j, "cos", d)
        emit(-0.5 + 0j, "cos", s_)
    elif kinds == ("cos", "cos"):
        emit(0.5 + 0j, "cos", d)
        emit(0.5 + 0j, "cos", s_)
    else:
        sin_first = kinds == ("sin", "cos")
        m_sin = a.mult if sin_first else b.mult
        m_cos = b.mult if sin_first else a.mult
        emit(0.5 + 0j, "sin", s_)
        if m_sin >= m_cos:
            emit(0.5 + 0j, "sin", d)
        else:
            emit(-0.5 + 0j, "sin", d)
    return out


def normalize(s):
    """Rebuild s as a flat Sum of scaled monomial leaves (value-preserving)."""
    terms = normal_terms(s)
    nodes = []
    for c, node in terms:
        if node == _UNIT:
            nodes.append(Const(c))
        elif c == 1:
            nodes.append(node)
        else:
            nodes.append(Scale(c, node))
    if len(nodes) == 1:
        return nodes[0]
    return Sum(tuple(nodes))


# ---------------------------------------------------------------------------
# parsing and printing


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?i?)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[+*(),=-]))"
)

_FAMILIES = {
    "const": (("c",), lambda c: const(c)),
    "vpow": (("p",), lambda p: vpow(p)),
    "oscexp": ((), oscexp),
    "vi": ((), vi),
    "sininvpow": (("alpha", "beta"), sininvpow),
    "cosinvpow": (("alpha", "beta"), cosinvpow),
    "plainsin_invpow": (("alpha", "tau"), plainsin_invpow),
    "logpow": (("alpha", "beta"), logpow),
}


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise SymbolParseError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup == "number":
            tok = ("number", m.group("number"), m.start("number"))
        elif m.lastgroup == "name":
            tok = ("name", m.group("name"), m.start("name"))
        else:
            tok = (m.group("op"), m.group("op"), m.start("op"))
        tokens.append(tok)
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind=None):
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            raise SymbolParseError(f"expected {kind!r}, found {tok[1]!r}", tok[2])
        self.i += 1
        return tok

    def number(self):
        sign = 1.0
        if self.peek()[0] == "-":
            self.take()
            sign = -1.0
        tok = self.take("number")
        text = tok[1]
        if text.endswith("i"):
            return complex(0.0, sign * float(text[:-1] or "1"))
        return sign * float(text)

    def atom(self):
        tok = self.take("name")
        name = tok[1]
        if name not in _FAMILIES:
            raise SymbolParseError(f"unknown family {name!r}", tok[2])
        params, ctor = _FAMILIES[name]
        self.take("(")
        values = {}
        if self.peek()[0] != ")":
            if self.peek()[0] == "name" and self.tokens[self.i + 1][0] == "=":
                while True:
                    ptok = self.take("name")
                    if ptok[1] not in params:
                        raise SymbolParseError(
                            f"{name} has no parameter {ptok[1]!r} (expected {', '.join(params)})",
                            ptok[2],
                        )
                    if ptok[1] in values:
                        raise SymbolParseError(f"duplicate parameter {ptok[1]!r}", ptok[2])
                    self.take("=")
                    values[ptok[1]] = self.number()
                    if self.peek()[0] != ",":
                        break
                    self.take(",")
            else:
                # positional values, in declared order
                idx = 0
                while True:
                    if idx >= len(params):
                        raise SymbolParseError(f"{name} takes {len(params)} parameter(s)", self.peek()[2])
                    values[params[idx]] = self.number()
                    idx += 1
                    if self.peek()[0] != ",":
                        break
                    self.take(",")
        close = self.take(")")
        if len(values) != len(params):
            missing = [p for p in params if p not in values]
            raise SymbolParseError(f"{name} missing parameter(s): {', '.join(missing)}", close[2])
        args = []
        for p in params:
            val = values[p]
            if p != "c" and p != "p":
                if val.imag != 0:
                    raise SymbolParseError(f"parameter {p} of {name} must be real", close[2])
                val = val.real
            args.append(val)
        try:
            return ctor(*args)
        except SymbolError as exc:
            raise SymbolParseError(str(exc), tok[2]) from exc

    def term(self):
        tok = self.peek()
        if tok[0] == "number" or tok[0] == "-":
            value = self.number()
            self.take("*")
            return Scale(complex(value), self.atom())
        return self.atom()

    def expr(self):
        node = self.term()
        while self.peek()[0] in ("+", "*"):
            op = self.take()[0]
            rhs = self.term()
            if op == "+":
                if isinstance(node, Sum):
                    node = Sum(node.terms + (rhs,))
                else:
                    node = Sum((node, rhs))
            else:
                if isinstance(node, Product):
                    node = Product(node.factors + (rhs,))
                else:
                    node = Product((node, rhs))
        return node


def parse_symbol(text):
    """Parse grammar text into a Symbol tree.

    Grammar: expr := term (('+'|'*') term)*, left-associative with equal
    precedence; term := number '*' atom | atom; atom := family '(' params ')'.
    Parameters may be named (alpha=1) or positional; numbers take an 'i'
    suffix for pure imaginary values.
    """
    p = _Parser(text)
    node = p.expr()
    tok = p.peek()
    if tok[0] != "end":
        raise SymbolParseError(f"unexpected trailing input {tok[1]!r}", tok[2])
    return node


def _fmt_float(x):
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


def _fmt_scalar(c):
    c = complex(c)
    if c.imag == 0:
        return _fmt_float(c.real)
    if c.real == 0:
        return _fmt_float(c.imag) + "i"
    raise SymbolError(
        f"scalar {c} is neither real nor purely imaginary; split it into a sum"
    )


def _print_leaf(s):
    if isinstance(s, Const):
        return f"const({_fmt_scalar(s.value)})"
    if isinstance(s, OscExp):
        if s.rate != 2.0:
            raise SymbolError("only rate-2 exponential oscillation is expressible")
        return "oscexp()"
    if isinstance(s, LogPow):
        return f"logpow(alpha={_fmt_float(s.alpha)},beta={_fmt_float(s.beta)})"
    if isinstance(s, PowerOsc):
        if s.trig == "one":
            if s.power == 1j:
                return "vi()"
            return f"vpow(p={_fmt_scalar(s.power)})"
        if s.mult != 1.0 or s.power.imag != 0:
            raise SymbolError(f"{s!r} is not expressible in the symbol grammar")
        q = s.power.real
        al = _fmt_float(s.alpha)
        if s.trig == "sin" and -1 < q < 0:
            return f"sininvpow(alpha={al},beta={_fmt_float(-q)})"
        if s.trig == "cos" and -1 < q < 0:
            return f"cosinvpow(alpha={al},beta={_fmt_float(-q)})"
        if s.trig == "sin" and q > 0:
            return f"plainsin_invpow(alpha={al},tau={_fmt_float(q)})"
    raise SymbolError(f"{s!r} is not expressible in the symbol grammar")


def _print_term(s):
    if isinstance(s, Scale):
        return f"{_fmt_scalar(s.factor)}*{_print_leaf(s.inner)}"
    return _print_leaf(s)


def print_symbol(s):
    """Canonical grammar text for s; parse(print_symbol(t)) == t for parsed t."""
    if isinstance(s, (Sum, Product)):
        op = "+" if isinstance(s, Sum) else "*"
        children = s.terms if isinstance(s, Sum) else s.factors
        composite = [c for c in children if isinstance(c, (Sum, Product))]
        if len(composite) > 1:
            raise SymbolError("tree has no left-associative rendering in the grammar")
        rest = [c for c in children if not isinstance(c, (Sum, Product))]
        ordered = composite + rest
        parts = [print_symbol(ordered[0])] + [_print_term(c) for c in ordered[1:]]
        return op.join(parts)
    if isinstance(s, Restrict):
        raise SymbolError("restriction wrappers have no grammar form")
    return _print_term(s)


# ---------------------------------------------------------------------------
# iterated means


def iterated_mean(s, m, v, tol=1e-10):
    """The m-fold mean C_a^(m)(v), via the repeated-integral identity.

    Absolute error targets max(tol, tol * |result|); m must be 1..6.
    """
    if not 1 <= m <= MAX_MEAN_ORDER:
        raise SymbolError(f"mean order must be in 1..{MAX_MEAN_ORDER}")
    if v <= 0:
        raise SymbolError("v must be > 0")
    total = 0j
    terms = normal_terms(s)
    for c, node in terms:
        total += c * _mean_node(node, m, float(v), tol / max(1, len(terms)))
    return total


def _mean_node(node, m, v, tol, lo=0.0, hi=math.inf):
    if isinstance(node, Restrict):
        return _mean_node(node.inner, m, v, tol, max(lo, node.lo), min(hi, node.hi))
    hi = min(hi, v)
    if hi <= lo:
        return 0j
    if isinstance(node, Const):
        if lo == 0.0 and hi == v:
            return complex(node.value) * v**m / math.factorial(m)
        return complex(node.value) * ((v - lo) ** m - (v - hi) ** m) / math.factorial(m)
    if isinstance(node, PowerOsc) and node.trig == "one":
        if node.power.real <= -1 and lo == 0.0:
            raise IntegrabilityError(f"v^{node.power} is not integrable near 0")
        if lo == 0.0 and hi == v:
            out = complex(v) ** (node.power + m)
            for j in range(1, m + 1):
                out /= node.power + j
            return out
        return _mean_smooth_numeric(node, m, v, tol, lo, hi)
    if isinstance(node, OscExp):
        if lo == 0.0 and hi == v:
            return _oscexp_mean(node.rate, m, v)
        return _mean_smooth_numeric(node, m, v, tol, lo, hi)
    if isinstance(node, LogPow):
        if lo == 0.0 and hi == v:
            return _logpow_mean(node, m, v)
        return _mean_smooth_numeric(node, m, v, tol, lo, hi)
    if isinstance(node, PowerOsc):
        return _mean_phase_numeric(node, m, v, tol, lo, hi)
    if isinstance(node, Product):
        alphas = _trig_alphas(node)
        if alphas:
            return _mean_phase_numeric(node, m, v, tol, lo, hi)
        return _mean_smooth_numeric(node, m, v, tol, lo, hi)
    raise TypeError(f"cannot average node {node!r}")


def _oscexp_mean(rate, m, v):
    z = 1j * rate * v
    if abs(z) < 1.0:
        # Taylor remainder sum, avoids cancellation for small phases
        term = z**m / math.factorial(m)
        total = term
        j = m + 1
        while abs(term) > 1e-20 * abs(total):
            term *= z / j
            total += term
            j += 1
        return total / (1j * rate) ** m * 1.0
    head = sum(z**j / math.factorial(j) for j in range(m))
    return (np.exp(z) - head) / (1j * rate) ** m


def _logpow_int(c, v):
    """integral_0^v t^(c-1) ln^2 t dt for c > 0."""
    lv = math.log(v)
    return v**c * (lv * lv / c - 2 * lv / c**2 + 2 / c**3)


def _logpow_mean(node, m, v):
    if node.beta >= 1:
        raise IntegrabilityError("logpow with beta = 1 is not integrable near 0")
    total = 0.0
    for r in range(m):
        c = 1.0 - node.beta + r
        total += math.comb(m - 1, r) * (-1.0) ** r * v ** (m - 1 - r) * _logpow_int(c, v)
    return node.alpha**2 * total / math.factorial(m - 1) + 0j


def _trig_alphas(node):
    """All (alpha, total mult) pairs of trig leaves inside node."""
    if isinstance(node, PowerOsc) and node.trig != "one":
        return [(node.alpha, node.mult)]
    if isinstance(node, Product):
        out = []
        for f in node.factors:
            out.extend(_trig_alphas(f))
        return out
    if isinstance(node, (Scale, Restrict)):
        return _trig_alphas(node.inner)
    return []


def _kernel_weight(t, v, m):
    if m == 1:
        return np.ones_like(t)
    return (v - t) ** (m - 1) / math.factorial(m - 1)


def _mean_smooth_numeric(node, m, v, tol, lo, hi):
    """Mean of a non-oscillatory (or slowly oscillating) node on [lo, hi]."""
    if lo <= 0:
        if isinstance(node, PowerOsc) and node.trig == "one" and node.power.real <= -1:
            raise IntegrabilityError(f"v^{node.power} is not integrable near 0")
        if isinstance(node, LogPow) and node.beta >= 1:
            raise IntegrabilityError("logpow with beta = 1 is not integrable near 0")
    rates = _exp_rates(node)
    lo = max(lo, 1e-280)
    pieces = []
    split = min(hi, max(lo * 1.0000001, min(1.0, hi)))
    if split > lo:
        x, w = log_panel_nodes(lo, split, panel_width=1.0, n=16)
        pieces.append((x, w))
    if hi > split:
        width = 0.5 * math.pi / max(rates) if rates else 4.0
        count = max(2, int(math.ceil((hi - split) / width)))
        x, w = panel_nodes(np.linspace(split, hi, count + 1), 16)
        pieces.append((x, w))
    total = 0j
    for x, w in pieces:
        vals = _eval(node, x) * _kernel_weight(x, v, m)
        total += np.sum(w * vals)
    return complex(total)


def _exp_rates(node):
    if isinstance(node, OscExp):
        return [abs(node.rate)]
    if isinstance(node, Product):
        out = []
        for f in node.factors:
            out.extend(_exp_rates(f))
        return out
    if isinstance(node, (Scale, Restrict)):
        return _exp_rates(node.inner)
    return []


def _mean_phase_numeric(node, m, v, tol, lo, hi):
    """Mean of a node with v^-alpha oscillation, integrated in phase space.

    Substitutes u = t^-alpha for the largest alpha present; the total trig
    mult at that alpha bounds the phase frequency, fixing the half-period
    panel length for the accelerated tail.
    """
    pairs = _trig_alphas(node)
    alpha = max(a for a, _ in pairs)
    freq = sum(mu for a, mu in pairs if a == alpha)
    if any(a != alpha for a, _ in pairs) or _exp_rates(node):
        raise SymbolError(
            "mixed oscillation scales in one product are not supported; "
            "expand the product first"
        )
    hi = min(hi, v)
    if isinstance(node, PowerOsc) and node.mult * hi ** (-alpha) >= 1e4:
        # the whole phase range sits at huge arguments, where half-period
        # panel placement loses digits to ulp rounding; use the by-parts series
        return _mean_phase_series(node, m, v, lo, hi)
    mult0 = _phase_mult(node, alpha)

    def f(u):
        t = (u / mult0) ** (-1.0 / alpha)
        vals = _eval(node, t) * _kernel_weight(t, v, m)
        return vals * (1.0 / alpha) * mult0 ** (1.0 / alpha) * u ** (-1.0 / alpha - 1.0)

    u_lo = mult0 * hi ** (-alpha)
    u_hi = mult0 * lo ** (-alpha) if lo > 0 else math.inf
    rel_freq = freq / mult0
    # head: below the first half-period the phase cannot alternate
    head_hi = min(u_hi, max(u_lo * (1 + 1e-12), math.pi / rel_freq))
    total = 0j
    if head_hi > u_lo:
        x, w = log_panel_nodes(u_lo, head_hi, panel_width=0.8, n=16)
        total += np.sum(w * f(x))
    if u_hi > head_hi:
        if math.isinf(u_hi):
            val, _err = oscillatory_tail(f, head_hi, 2 * math.pi / rel_freq, atol=tol, rtol=tol)
            total += val
        else:
            # finite phase range: fixed panels of half a period
            width = math.pi / rel_freq
            count = max(2, int(math.ceil((u_hi - head_hi) / width)))
            x, w = panel_nodes(np.linspace(head_hi, u_hi, count + 1), 16)
            total += np.sum(w * f(x))
    return complex(total)


def _phase_mult(node, alpha):
    """mult of the substituted phase: the node's own mult for a single leaf, 1 otherwise."""
    if isinstance(node, PowerOsc):
        return node.mult
    return 1.0


def _mean_phase_series(node, m, v, lo, hi):
    """Kernel-expanded by-parts series for a single power-times-trig leaf.

    Exact in the kernel expansion; each term is a pure power tail
    integral_w^inf u^sigma trig(u) du evaluated asymptotically.  Valid
    when the phase at the upper t-limit already exceeds ~1e4, where the
    expansion terms v^{m-1-r} t^r carry no cancellation (t <= v small).
    """
    q, al, mu, trig = node.power, node.alpha, node.mult, node.trig
    w_hi_t = mu * hi ** (-al)
    w_lo_t = mu * lo ** (-al) if lo > 0 else math.inf
    total = 0j
    for r in range(m):
        sigma = -(q + r + 1) / al - 1.0
        tail = power_trig_tail(sigma, w_hi_t, trig)
        if lo > 0:
            tail -= power_trig_tail(sigma, w_lo_t, trig)
        coeff = math.comb(m - 1, r) * (-1.0) ** r * v ** (m - 1 - r) / math.factorial(m - 1)
        total += coeff * (complex(mu) ** ((q + r + 1) / al) / al) * tail
    return total


# ---------------------------------------------------------------------------
# infima and non-negativity


def ensure_nonnegative(s, lo=1e-10, hi=1e8, n=4096):
    """Verify a >= 0 by dense geometric sampling; raise naming a violation."""
    v = np.geomspace(lo, hi, n)
    vals = _eval(s, v)
    scale = float(np.max(np.abs(vals))) or 1.0
    bad = np.abs(vals.imag) > 1e-12 * scale
    bad |= vals.real < -1e-12 * scale
    if np.any(bad):
        i = int(np.argmax(bad))
        raise NotNonNegativeError(float(v[i]), complex(vals[i]))


def _sampled_inf(s, lo, hi, n=512, rounds=3):
    lo = max(lo, 1e-300)
    best_v, best = None, math.inf
    for _ in range(rounds + 1):
        v = np.geomspace(lo, hi, n)
        vals = _eval(s, v).real
        i = int(np.argmin(vals))
        if vals[i] < best:
            best, best_v = float(vals[i]), float(v[i])
        # zoom one grid cell around the running minimum
        lo_new = v[max(0, i - 1)]
        hi_new = v[min(n - 1, i + 1)]
        if not lo_new < hi_new:
            break
        lo, hi = lo_new, hi_new
    return best


def theta_inf(s, v):
    """inf of a over (0, v) for non-negative a, by log sampling + refinement."""
    if v <= 0:
        raise SymbolError("v must be > 0")
    ensure_nonnegative(s, lo=min(1e-10, v * 1e-13), hi=v)
    if isinstance(s, Const):
        return max(s.value.real, 0.0)
    if isinstance(s, Scale) and s.factor.imag == 0 and isinstance(s.inner, PowerOsc) and s.inner.trig == "one" and s.inner.power.imag == 0:
        q = s.inner.power.real
        c = s.factor.real
        return c * v**q if q < 0 else (c if q == 0 else 0.0)
    if isinstance(s, PowerOsc) and s.trig == "one" and s.power.imag == 0:
        q = s.power.real
        return v**q if q < 0 else (1.0 if q == 0 else 0.0)
    return max(_sampled_inf(s, v * 1e-15, v * (1 - 1e-12)), 0.0)


def Theta_inf(s, v):  # noqa: N802  (capitalization separates the window infimum from theta_inf)
    """inf of a over (v/2, v) for non-negative a."""
    if v <= 0:
        raise SymbolError("v must be > 0")
    ensure_nonnegative(s, lo=v * 0.5, hi=v)
    if isinstance(s, Const):
        return max(s.value.real, 0.0)
    return max(_sampled_inf(s, v * 0.5 * (1 + 1e-12), v * (1 - 1e-12)), 0.0)


# ---------------------------------------------------------------------------
# envelope growth exponents of the means


@dataclass(frozen=True)
class MeanAsymptotic:
    """Fitted envelope behavior |C_a^(m)(v)| ~ coeff * v^exponent at an endpoint."""

    order: int
    endpoint: str
    exponent: float
    leading: complex = None
    residual: float = math.nan
    conclusive: bool = True


def _is_oscillatory(s):
    if isinstance(s, (OscExp, LogPow)):
        return isinstance(s, OscExp)
    if isinstance(s, PowerOsc):
        return s.trig != "one" or s.power.imag != 0
    if isinstance(s, (Sum, Product)):
        kids = s.terms if isinstance(s, Sum) else s.factors
        return any(_is_oscillatory(t) for t in kids)
    if isinstance(s, (Scale, Restrict)):
        return _is_oscillatory(s.inner)
    return False


def fit_mean_asymptotic(s, m, endpoint, tol=1e-9, per_half_decade=16):
    """Least-squares envelope exponent of |C_a^(m)| approaching an endpoint.

    Samples v geometrically over [1e-6, 1e-2] (zero) or [1e2, 1e6]
    (infinity); for oscillatory symbols the fit uses the maximum of each
    half-decade bucket, which tracks the envelope rather than the phase.
    """
    if endpoint not in ("zero", "infinity"):
        raise SymbolError("endpoint must be 'zero' or 'infinity'")
    lo, hi = (1e-6, 1e-2) if endpoint == "zero" else (1e2, 1e6)
    half_decades = int(round(2 * math.log10(hi / lo)))
    v = np.geomspace(lo, hi, half_decades * per_half_decade)
    vals = np.array([abs(iterated_mean(s, m, x, tol)) for x in v])
    if _is_oscillatory(s):
        xs, ys = [], []
        for b in range(half_decades):
            chunk = slice(b * per_half_decade, (b + 1) * per_half_decade)
            peak = np.max(vals[chunk])
            if peak > 0:
                xs.append(np.log(v[chunk][np.argmax(vals[chunk])]))
                ys.append(np.log(peak))
        xs, ys = np.array(xs), np.array(ys)
    else:
        keep = vals > 0
        xs, ys = np.log(v[keep]), np.log(vals[keep])
    if xs.size < 4:
        return MeanAsymptotic(m, endpoint, math.nan, None, math.inf, False)
    slope, intercept = np.polyfit(xs, ys, 1)
    resid = float(np.sqrt(np.mean((ys - slope * xs - intercept) ** 2)))
    return MeanAsymptotic(
        order=m,
        endpoint=endpoint,
        exponent=float(slope),
        leading=float(np.exp(intercept)),
        residual=resid,
        conclusive=resid < 0.15,
    )


def mean_growth_exponent(s, m, endpoint):
    """Envelope slope of log|C_a^(m)(v)| against log v at the endpoint."""
    return fit_mean_asymptotic(s, m, endpoint).exponent
