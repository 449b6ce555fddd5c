"""Sparse multivariate polynomials with exact coefficients.

A polynomial is a mapping from monomials to nonzero coefficients.  A monomial
is a tuple of ``(symbol, exponent)`` pairs sorted by :func:`symbol_key`.
Coefficients are normally :class:`fractions.Fraction`, but any exact field
element with the usual operators works (the solver uses surd numbers).

Terms are ordered graded-lexicographically over the fixed symbol order
``a0, a1, a, b, c, omega`` followed by every other symbol alphabetically.
"""

from __future__ import annotations

import re
from fractions import Fraction
from types import MappingProxyType

FIXED_ORDER = ("a0", "a1", "a", "b", "c", "omega")
_FIXED_RANK = {name: i for i, name in enumerate(FIXED_ORDER)}


def symbol_key(name):
    rank = _FIXED_RANK.get(name)
    if rank is None:
        return (1, 0, name)
    return (0, rank, "")


def sort_symbols(names):
    return sorted(set(names), key=symbol_key)


def _as_coeff(value):
    if isinstance(value, int):
        return Fraction(value)
    return value


def _mono_mul(m1, m2):
    if not m1:
        return m2
    if not m2:
        return m1
    exps = dict(m1)
    for s, e in m2:
        exps[s] = exps.get(s, 0) + e
    return tuple(sorted(exps.items(), key=lambda se: symbol_key(se[0])))


def mono_degree(mono):
    return sum(e for _, e in mono)


def grlex_key(mono, symbols):
    """Sort key: larger key means larger monomial in graded lex order."""
    exps = dict(mono)
    return (mono_degree(mono), tuple(exps.get(s, 0) for s in symbols))


class MultiPoly:
    """Immutable sparse polynomial.

    >>> a, b = MultiPoly.symbol("a"), MultiPoly.symbol("b")
    >>> ((a + b) ** 2).to_text()
    'a^2+2*a*b+b^2'
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for mono, coeff in dict(terms).items():
                coeff = _as_coeff(coeff)
                if coeff:
                    mono = tuple(sorted(((s, e) for s, e in mono if e), key=lambda se: symbol_key(se[0])))
                    if mono in clean:
                        coeff = clean[mono] + coeff
                        if not coeff:
                            del clean[mono]
                            continue
                    clean[mono] = coeff
        self._terms = clean
        self._hash = None

    @classmethod
    def constant(cls, value):
        return cls({(): value})

    @classmethod
    def symbol(cls, name, exponent=1):
        return cls({((name, exponent),): Fraction(1)})

    @classmethod
    def _raw(cls, terms):
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @property
    def terms(self):
        return MappingProxyType(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms.items())

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            try:
                other = MultiPoly.constant(other)
            except TypeError:
                return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    @staticmethod
    def _lift(value):
        if isinstance(value, MultiPoly):
            return value
        return MultiPoly.constant(value)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self._terms)
        for mono, c in other._terms.items():
            v = out.get(mono)
            if v is None:
                out[mono] = c
            else:
                v = v + c
                if v:
                    out[mono] = v
                else:
                    del out[mono]
        return MultiPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            other = _as_coeff(other)
            if not other:
                return MultiPoly()
            return MultiPoly._raw({m: c * other for m, c in self._terms.items()})
        out = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mono_mul(m1, m2)
                v = out.get(m)
                v = c1 * c2 if v is None else v + c1 * c2
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return MultiPoly._raw(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, MultiPoly):
            if not other.is_constant() or not other:
                raise ZeroDivisionError("division only by nonzero constants")
            other = other.constant_value()
        other = _as_coeff(other)
        return MultiPoly._raw({m: c / other for m, c in self._terms.items()})

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = MultiPoly.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def symbols(self):
        return sort_symbols(s for mono in self._terms for s, _ in mono)

    def degree(self, symbol=None):
        if not self._terms:
            return -1
        if symbol is None:
            return max(mono_degree(m) for m in self._terms)
        return max(dict(m).get(symbol, 0) for m in self._terms)

    def is_constant(self):
        return all(not m for m in self._terms)

    def constant_value(self):
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self._terms.get((), Fraction(0))

    def coefficients_in(self, symbol):
        """Split into ``{exponent: coefficient polynomial}`` with respect to ``symbol``."""
        out = {}
        for mono, c in self._terms.items():
            e = 0
            rest = []
            for s, k in mono:
                if s == symbol:
                    e = k
                else:
                    rest.append((s, k))
            out.setdefault(e, {})[tuple(rest)] = c
        return {e: MultiPoly._raw(t) for e, t in out.items()}

    def min_exponent(self, symbol):
        if not self._terms:
            return 0
        return min(dict(m).get(symbol, 0) for m in self._terms)

    def divide_symbol(self, symbol, k):
        out = {}
        for mono, c in self._terms.items():
            exps = dict(mono)
            if exps.get(symbol, 0) < k:
                raise ValueError(f"not divisible by {symbol}^{k}")
            out[tuple((s, e - k) if s == symbol else (s, e) for s, e in mono if not (s == symbol and e == k))] = c
        return MultiPoly._raw(out)

    def substitute(self, values):
        """Replace symbols by numbers or polynomials."""
        result = MultiPoly()
        power_cache = {}
        for mono, c in self._terms.items():
            term = MultiPoly.constant(c)
            keep = []
            for s, e in mono:
                if s in values:
                    key = (s, e)
                    if key not in power_cache:
                        v = values[s]
                        power_cache[key] = v ** e if isinstance(v, MultiPoly) else _as_coeff(v) ** e
                    term = term * power_cache[key]
                else:
                    keep.append((s, e))
            if keep:
                term = term * MultiPoly._raw({tuple(keep): Fraction(1)})
            result = result + term
        return result

    def evaluate(self, values):
        """Evaluate at a full assignment; returns a coefficient-field element."""
        total = Fraction(0)
        for mono, c in self._terms.items():
            term = c
            for s, e in mono:
                term = term * (_as_coeff(values[s]) ** e)
            total = total + term
        return total

    def sorted_terms(self):
        syms = self.symbols()
        return sorted(self._terms.items(), key=lambda mc: grlex_key(mc[0], syms), reverse=True)

    def leading_monomial(self, symbols=None):
        if not self._terms:
            return ()
        syms = symbols if symbols is not None else self.symbols()
        return max(self._terms, key=lambda m: grlex_key(m, syms))

    def to_text(self):
        if not self._terms:
            return "0"
        parts = []
        for i, (mono, c) in enumerate(self.sorted_terms()):
            text = _term_text(mono, c)
            if i and not text.startswith("-"):
                text = "+" + text
            parts.append(text)
        return "".join(parts)

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"MultiPoly({self.to_text()!r})"

    @classmethod
    def parse(cls, text):
        return _Parser(text).parse()


def mono_text(mono):
    return "*".join(s if e == 1 else f"{s}^{e}" for s, e in mono)


def _coeff_text(c):
    if isinstance(c, Fraction):
        return str(c)
    return f"({c})"


def _term_text(mono, c):
    if not mono:
        return _coeff_text(c)
    m = mono_text(mono)
    if c == 1:
        return m
    if c == -1:
        return "-" + m
    return f"{_coeff_text(c)}*{m}"


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*'*)|(.))")


class PolySyntaxError(ValueError):
    def __init__(self, message, pos):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


class _Parser:
    def __init__(self, text):
        self.tokens = []
        pos = 0
        text = text.rstrip()
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            num, ident, op = m.groups()
            start = m.start(m.lastindex)
            if op is not None and op not in "+-*/^()":
                raise PolySyntaxError(f"unexpected character {op!r}", start)
            self.tokens.append((("num", int(num)) if num else ("id", ident) if ident else ("op", op), start))
            pos = m.end()
        self.i = 0
        self.text = text

    def peek(self):
        return self.tokens[self.i][0] if self.i < len(self.tokens) else ("end", None)

    def pos(self):
        return self.tokens[self.i][1] if self.i < len(self.tokens) else len(self.text)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, op):
        if self.peek() != ("op", op):
            raise PolySyntaxError(f"expected {op!r}", self.pos())
        self.i += 1

    def parse(self):
        p = self.sum()
        if self.peek()[0] != "end":
            raise PolySyntaxError("trailing input", self.pos())
        return p

    def sum(self):
        sign = 1
        if self.peek() in (("op", "+"), ("op", "-")):
            sign = -1 if self.take()[1] == "-" else 1
        acc = self.term() * sign
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self):
        acc = self.power()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            rhs = self.power()
            if op == "*":
                acc = acc * rhs
            else:
                if not rhs.is_constant() or not rhs:
                    raise PolySyntaxError("division by a non-constant", self.pos())
                acc = acc / rhs
        return acc

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, val = self.take()
            if kind != "num":
                raise PolySyntaxError("expected integer exponent", self.pos())
            base = base ** val
        return base

    def atom(self):
        kind, val = self.peek()
        if kind == "num":
            self.take()
            return MultiPoly.constant(Fraction(val))
        if kind == "id":
            self.take()
            return MultiPoly.symbol(val)
        if (kind, val) == ("op", "("):
            self.take()
            inner = self.sum()
            self.expect(")")
            return inner
        if (kind, val) == ("op", "-"):
            self.take()
            return -self.power()
        raise PolySyntaxError("expected a number, symbol or '('", self.pos())
