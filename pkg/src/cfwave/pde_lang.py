"""Conformable fractional PDE text grammar and traveling-wave lowering.

Grammar (whitespace insignificant)::

    equation := sum "=" sum
    sum      := ["+"|"-"] term (("+"|"-") term)*
    term     := factor ("*" factor)*
    factor   := primary ("^" int)?
    primary  := rational | ident | "u" | dchain "u" | "(" sum ")"
    dchain   := ("D{" ("t"|"x") "," order "}")+
    order    := int | [int] ("a"|"b")

``D{t,na}`` applies the alpha-order time derivative n times, ``D{x,nb}`` the
beta-order space derivative, ``D{x,na}`` the space derivative with beta=alpha
and ``D{x,n}`` the classical space derivative.  Repeated orders are iterated
applications, so ``D{x,2b}`` means ``D{x,b}D{x,b}``.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction

from .multipoly import FIXED_ORDER, MultiPoly, grlex_key, sort_symbols

MAX_CHAIN_COUNT = 4
MAX_XI_ORDER = 3
RESERVED = frozenset(FIXED_ORDER) | {"u", "D"}


class PdeSyntaxError(ValueError):
    def __init__(self, message, pos=None):
        where = f" at position {pos}" if pos is not None else ""
        super().__init__(message + where)
        self.pos = pos


class LexError(PdeSyntaxError):
    pass


class UndeclaredSymbol(PdeSyntaxError):
    pass


class MalformedDerivative(PdeSyntaxError):
    pass


class OrderBoundExceeded(PdeSyntaxError):
    pass


class LoweringError(ValueError):
    pass


class BetaMode(enum.Enum):
    INDEPENDENT = "beta"
    ALPHA = "alpha"
    ONE = "one"


@dataclass(frozen=True, order=True)
class DerivChain:
    """Counts of derivative applications on u; all zero means u itself."""

    t_alpha: int = 0
    x_beta: int = 0
    x_int: int = 0
    x_alpha: int = 0

    def __post_init__(self):
        for name in ("t_alpha", "x_beta", "x_int", "x_alpha"):
            n = getattr(self, name)
            if n < 0:
                raise ValueError(f"{name} must be nonnegative")
            if n > MAX_CHAIN_COUNT:
                raise OrderBoundExceeded(f"{name}={n} exceeds {MAX_CHAIN_COUNT}")

    @property
    def order(self):
        return self.t_alpha + self.x_beta + self.x_int + self.x_alpha

    def __add__(self, other):
        return DerivChain(
            self.t_alpha + other.t_alpha,
            self.x_beta + other.x_beta,
            self.x_int + other.x_int,
            self.x_alpha + other.x_alpha,
        )

    def to_text(self):
        def tok(axis, n, suffix):
            if not n:
                return ""
            count = "" if n == 1 and suffix else str(n)
            return f"D{{{axis},{count}{suffix}}}"

        return (
            tok("x", self.x_int, "")
            + tok("x", self.x_beta, "b")
            + tok("x", self.x_alpha, "a")
            + tok("t", self.t_alpha, "a")
            + "u"
        )


@dataclass(frozen=True)
class Term:
    coefficient: Fraction
    params: tuple = ()          # ((symbol, exponent), ...) sorted
    u_power: int = 0
    derivs: tuple = ()          # sorted DerivChain tuple

    def key(self):
        return (self.params, self.u_power, self.derivs)

    def factor_texts(self):
        out = [s if e == 1 else f"{s}^{e}" for s, e in self.params]
        if self.u_power:
            out.append("u" if self.u_power == 1 else f"u^{self.u_power}")
        out.extend(d.to_text() for d in self.derivs)
        return out


@dataclass(frozen=True)
class FPDE:
    """A parsed equation ``sum(terms) = 0`` with its declared parameters."""

    terms: tuple
    params: tuple = ()

    def to_text(self):
        return format_pde(self)

    def __add__(self, other):
        return _build_fpde(_merge(_as_dict(self), _as_dict(other)), sorted(set(self.params) | set(other.params)))


def _as_dict(ast):
    return {t.key(): t.coefficient for t in ast.terms}


def _merge(d1, d2, sign=1):
    out = dict(d1)
    for k, c in d2.items():
        v = out.get(k, Fraction(0)) + sign * c
        if v:
            out[k] = v
        else:
            out.pop(k, None)
    return out


def _term_sort_key(term):
    chains = sorted(term.derivs, reverse=True)
    return (
        not chains,
        tuple((-c.t_alpha, -c.x_int, -c.x_beta, -c.x_alpha) for c in chains),
        -sum(c.order for c in chains),
        term.u_power,
        tuple(term.params),
    )


def _build_fpde(poly, params):
    terms = [Term(c, k[0], k[1], k[2]) for k, c in poly.items() if c]
    terms.sort(key=_term_sort_key)
    return FPDE(tuple(terms), tuple(sorted(params)))


# -- lexer -------------------------------------------------------------------

_TOKENS = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<deriv>D\{[^}]*\})
  | (?P<num>\d+(?:/\d+)?)
  | (?P<ident>[a-z][a-z0-9_]*)
  | (?P<op>[-+*^()=])
    """,
    re.VERBOSE,
)
_DERIV = re.compile(r"D\{\s*([tx])\s*,\s*(\d*)\s*([ab]?)\s*\}$")


def _tokenize(text):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKENS.match(text, pos)
        if m is None:
            if text.startswith("D", pos):
                raise MalformedDerivative("malformed derivative token", pos)
            raise LexError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            out.append((kind, m.group(), pos))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


def _deriv_chain(token, pos):
    m = _DERIV.match(token)
    if not m:
        raise MalformedDerivative(f"malformed derivative token {token!r}", pos)
    axis, count, kind = m.groups()
    if count == "" and kind == "":
        raise MalformedDerivative(f"derivative {token!r} has no order", pos)
    n = int(count) if count else 1
    if n == 0:
        raise MalformedDerivative(f"derivative {token!r} has zero order", pos)
    if n > MAX_CHAIN_COUNT:
        raise OrderBoundExceeded(f"derivative {token!r} exceeds order bound {MAX_CHAIN_COUNT}", pos)
    if axis == "t":
        if kind != "a":
            raise MalformedDerivative(f"time derivatives must have alpha order, got {token!r}", pos)
        return DerivChain(t_alpha=n)
    if kind == "b":
        return DerivChain(x_beta=n)
    if kind == "a":
        return DerivChain(x_alpha=n)
    return DerivChain(x_int=n)


# -- parser ------------------------------------------------------------------
# Intermediate values are dicts {(params, u_power, derivs): Fraction}.

_ONE = {((), 0, ()): Fraction(1)}


def _mul(p1, p2):
    out = {}
    for (pa, ua, da), ca in p1.items():
        for (pb, ub, db), cb in p2.items():
            exps = dict(pa)
            for s, e in pb:
                exps[s] = exps.get(s, 0) + e
            key = (tuple(sorted(exps.items())), ua + ub, tuple(sorted(da + db)))
            v = out.get(key, Fraction(0)) + ca * cb
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    return out


class _Parser:
    def __init__(self, text, params):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.params = set(params)

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def at_op(self, *ops):
        kind, val, _ = self.peek()
        return kind == "op" and val in ops

    def expect_op(self, op):
        kind, val, pos = self.take()
        if kind != "op" or val != op:
            raise PdeSyntaxError(f"expected {op!r}, found {val or 'end of input'!r}", pos)

    def equation(self):
        lhs = self.sum()
        self.expect_op("=")
        rhs = self.sum()
        kind, val, pos = self.peek()
        if kind != "end":
            raise PdeSyntaxError(f"unexpected {val!r} after equation", pos)
        return _merge(lhs, rhs, sign=-1)

    def sum(self):
        sign = 1
        if self.at_op("+", "-"):
            sign = -1 if self.take()[1] == "-" else 1
        acc = _merge({}, self.term(), sign)
        while self.at_op("+", "-"):
            sign = -1 if self.take()[1] == "-" else 1
            acc = _merge(acc, self.term(), sign)
        return acc

    def term(self):
        acc = self.factor()
        while self.at_op("*"):
            self.take()
            acc = _mul(acc, self.factor())
        return acc

    def factor(self):
        base = self.primary()
        if self.at_op("^"):
            self.take()
            kind, val, pos = self.take()
            if kind != "num" or "/" in val:
                raise PdeSyntaxError("expected integer exponent", pos)
            result = _ONE
            for _ in range(int(val)):
                result = _mul(result, base)
            return result
        return base

    def primary(self):
        kind, val, pos = self.take()
        if kind == "num":
            return {((), 0, ()): Fraction(val)}
        if kind == "ident":
            if val == "u":
                return {((), 1, ()): Fraction(1)}
            if val not in self.params:
                raise UndeclaredSymbol(f"undeclared symbol {val!r}", pos)
            return {(((val, 1),), 0, ()): Fraction(1)}
        if kind == "deriv":
            chain = _deriv_chain(val, pos)
            while self.peek()[0] == "deriv":
                _, v, p = self.take()
                chain = chain + _deriv_chain(v, p)
            k, v, p = self.take()
            if (k, v) != ("ident", "u"):
                raise MalformedDerivative("derivative must be applied to u", p)
            return {((), 0, (chain,)): Fraction(1)}
        if kind == "op" and val == "(":
            inner = self.sum()
            self.expect_op(")")
            return inner
        raise PdeSyntaxError(f"unexpected {val or 'end of input'!r}", pos)


def parse_pde(text, params=()):
    """Parse an equation into canonical ``expression = 0`` form."""
    params = tuple(params)
    for p in params:
        if not re.fullmatch(r"[a-z][a-z0-9_]*", p) or p in RESERVED:
            raise PdeSyntaxError(f"invalid parameter name {p!r}")
    poly = _Parser(text, params).equation()
    for params_, u_power, derivs in poly:
        if len(derivs) >= 2 and sum(d.order for d in derivs) > 3 and u_power > 3:
            raise OrderBoundExceeded("term exceeds the cubic/third-order sanity bound")
    return _build_fpde(poly, params)


def format_pde(ast):
    if not ast.terms:
        return "0 = 0"
    parts = []
    for i, term in enumerate(ast.terms):
        c = term.coefficient
        factors = term.factor_texts()
        mag = abs(c)
        body = "*".join(([str(mag)] if mag != 1 or not factors else []) + factors)
        if i == 0:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append((" - " if c < 0 else " + ") + body)
    return "".join(parts) + " = 0"


# -- lowering ----------------------------------------------------------------

U_SYMBOLS = ("u", "u'", "u''", "u'''")


@dataclass(frozen=True)
class ReducedODE:
    """Polynomial in u and its xi-derivatives.

    ``terms`` maps exponent vectors ``(e0, e1, e2, e3)`` of ``u, u', u'', u'''``
    to coefficient polynomials in omega and the equation parameters.
    """

    terms: tuple  # sorted ((exponents, MultiPoly), ...)

    @classmethod
    def from_dict(cls, mapping):
        return cls(tuple(sorted((k, v) for k, v in mapping.items() if v)))

    def as_dict(self):
        return dict(self.terms)

    def __add__(self, other):
        out = self.as_dict()
        for k, v in other.terms:
            out[k] = out.get(k, MultiPoly()) + v
        return ReducedODE.from_dict(out)

    @property
    def max_order(self):
        orders = [max((i for i, e in enumerate(k) if e), default=0) for k, _ in self.terms]
        return max(orders, default=0)

    def to_text(self):
        return format_ode(self)

    def evaluate(self, derivs, values):
        """Evaluate numerically at ``derivs=(U, U', U'', U''')`` and symbol values."""
        total = 0.0
        for exps, coeff in self.terms:
            c = sum(float(k) * _mono_float(m, values) for m, k in coeff)
            for d, e in zip(derivs, exps):
                c *= d ** e
            total += c
        return total


def _mono_float(mono, values):
    out = 1.0
    for s, e in mono:
        out *= float(values[s]) ** e
    return out


def lower_to_ode(ast, beta_mode=BetaMode.INDEPENDENT):
    """Apply the wave transformation u(x,t) = U(xi), xi = x^b/b + omega t^a/a."""
    beta_mode = BetaMode(beta_mode)
    omega = MultiPoly.symbol("omega")
    out = {}
    for term in ast.terms:
        coeff = MultiPoly({term.params: term.coefficient})
        exps = [term.u_power, 0, 0, 0]
        for chain in term.derivs:
            if chain.x_int and beta_mode is not BetaMode.ONE:
                raise LoweringError("integer-order x derivative needs beta=1")
            if chain.x_alpha and beta_mode is not BetaMode.ALPHA:
                raise LoweringError("alpha-order x derivative needs beta=alpha")
            if chain.order > MAX_XI_ORDER:
                raise LoweringError(f"xi-derivative order {chain.order} > {MAX_XI_ORDER} unsupported")
            coeff = coeff * omega ** chain.t_alpha
            exps[chain.order] += 1
        key = tuple(exps)
        out[key] = out.get(key, MultiPoly()) + coeff
    return ReducedODE.from_dict(out)


def _umono_text(exps):
    parts = []
    for sym, e in zip(U_SYMBOLS, exps):
        if e:
            parts.append(sym if e == 1 else f"{sym}^{e}")
    return "*".join(parts)


def _umono_key(exps):
    order = max((i for i, e in enumerate(exps) if e), default=0)
    return (-order, sum(exps), exps)


def format_ode(ode):
    """Deterministic text, e.g. ``(omega^2-1)*u'' + omega*u' + mu*u + nu*u^3``."""
    if not ode.terms:
        return "0"
    syms = sort_symbols(s for _, c in ode.terms for s in c.symbols())

    def key(item):
        exps, coeff = item
        lead = coeff.leading_monomial(syms)
        neg_lead = tuple(-x for x in _flatten(grlex_key(lead, syms)))
        return (neg_lead, _umono_key(exps))

    parts = []
    for i, (exps, coeff) in enumerate(sorted(ode.terms, key=key)):
        mono = _umono_text(exps)
        if len(coeff) > 1:
            body = f"({coeff.to_text()})"
            neg = False
        else:
            (m, c), = coeff.sorted_terms()
            neg = c < 0
            single = MultiPoly({m: abs(c)}).to_text()
            body = "" if single == "1" and mono else single
        body = "*".join(p for p in (body, mono) if p)
        if i == 0:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)


def _flatten(key):
    deg, exps = key
    return (deg,) + exps


def read_ode(text):
    """Parse the output of :func:`format_ode` back into a :class:`ReducedODE`."""
    poly = MultiPoly.parse(text)
    out = {}
    for mono, c in poly:
        exps = [0, 0, 0, 0]
        rest = []
        for s, e in mono:
            if s in U_SYMBOLS:
                exps[U_SYMBOLS.index(s)] = e
            else:
                rest.append((s, e))
        key = tuple(exps)
        out[key] = out.get(key, MultiPoly()) + MultiPoly({tuple(rest): c})
    return ReducedODE.from_dict(out)
