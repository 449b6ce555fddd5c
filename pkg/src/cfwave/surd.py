"""Exact numbers of the form p + q*sqrt(d) with rational p, q, d."""

from __future__ import annotations

import math
from fractions import Fraction


class IncompatibleRadicands(ArithmeticError):
    """Raised when one operation mixes sqrt(d1) and sqrt(d2) with d1 != d2."""


class NegativeRadicand(ArithmeticError):
    """Square root of a negative number requested (no real value)."""


class NestedRadical(ArithmeticError):
    """Square root does not exist in the current quadratic field."""


def squarefree_split(n):
    """Return ``(s, k)`` with ``n == s*s*k`` and ``k`` squarefree (``n >= 1``)."""
    s, k = 1, 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            s *= p ** (e // 2)
            if e % 2:
                k *= p
        p += 1 if p == 2 else 2
    return s, k * n


def _rational_sqrt(r):
    """Exact square root of a nonnegative Fraction, or None."""
    if r < 0:
        return None
    n, d = math.isqrt(r.numerator), math.isqrt(r.denominator)
    if n * n == r.numerator and d * d == r.denominator:
        return Fraction(n, d)
    return None


def _frac(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


class SurdNumber:
    """Element of Q(sqrt(d)) in canonical form.

    ``d`` is a squarefree integer > 1 whenever ``q != 0``; otherwise both
    ``q`` and ``d`` are zero and the number is rational.

    >>> SurdNumber(0, 1, Fraction(1, 2))
    SurdNumber('1/2*sqrt(2)')
    >>> SurdNumber.sqrt_of(8) * SurdNumber.sqrt_of(2)
    SurdNumber('4')
    """

    __slots__ = ("p", "q", "d")

    def __init__(self, p=0, q=0, d=0):
        p, q, d = _frac(p), _frac(q), _frac(d)
        if d < 0:
            raise NegativeRadicand(f"negative radicand {d}")
        if q and d:
            s, k = squarefree_split(d.numerator * d.denominator)
            q = q * s / d.denominator
            d = Fraction(k)
            if k == 1:
                p, q, d = p + q, Fraction(0), Fraction(0)
        else:
            q, d = Fraction(0), Fraction(0)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("SurdNumber is immutable")

    @classmethod
    def sqrt_of(cls, r):
        r = _frac(r)
        if r < 0:
            raise NegativeRadicand(f"sqrt of negative {r}")
        return cls(0, 1, r)

    @staticmethod
    def coerce(x):
        if isinstance(x, SurdNumber):
            return x
        return SurdNumber(_frac(x))

    @property
    def is_rational(self):
        return self.q == 0

    def key(self):
        return (self.p, self.q, self.d)

    def _radicand(self, other):
        if self.q == 0:
            return other.d
        if other.q == 0 or other.d == self.d:
            return self.d
        raise IncompatibleRadicands(f"cannot combine sqrt({self.d}) and sqrt({other.d})")

    def __add__(self, other):
        try:
            other = SurdNumber.coerce(other)
        except TypeError:
            return NotImplemented
        d = self._radicand(other)
        return SurdNumber(self.p + other.p, self.q + other.q, d)

    __radd__ = __add__

    def __neg__(self):
        return SurdNumber(-self.p, -self.q, self.d)

    def __sub__(self, other):
        try:
            other = SurdNumber.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return SurdNumber.coerce(other) - self

    def __mul__(self, other):
        try:
            other = SurdNumber.coerce(other)
        except TypeError:
            return NotImplemented
        d = self._radicand(other)
        return SurdNumber(
            self.p * other.p + self.q * other.q * d,
            self.p * other.q + self.q * other.p,
            d,
        )

    __rmul__ = __mul__

    def inverse(self):
        norm = self.p * self.p - self.q * self.q * self.d
        if norm == 0:
            raise ZeroDivisionError("SurdNumber division by zero")
        return SurdNumber(self.p / norm, -self.q / norm, self.d)

    def __truediv__(self, other):
        try:
            other = SurdNumber.coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return SurdNumber.coerce(other) * self.inverse()

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result, base = SurdNumber(1), self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __bool__(self):
        return bool(self.p) or bool(self.q)

    def __eq__(self, other):
        if isinstance(other, SurdNumber):
            return self.key() == other.key()
        if isinstance(other, (int, Fraction)):
            return self.q == 0 and self.p == other
        return NotImplemented

    def __hash__(self):
        if self.q == 0:
            return hash(self.p)
        return hash(self.key())

    def sign(self):
        """Exact sign of the real value: -1, 0 or 1."""
        sp = (self.p > 0) - (self.p < 0)
        sq = (self.q > 0) - (self.q < 0)
        if sq == 0:
            return sp
        if sp == 0 or sp == sq:
            return sq
        diff = self.p * self.p - self.q * self.q * self.d
        return sp if diff > 0 else sq

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __float__(self):
        return float(self.p) + float(self.q) * math.sqrt(self.d)

    def sqrt(self):
        """Square root inside the same field (nonnegative root)."""
        if self.sign() < 0:
            raise NegativeRadicand(f"sqrt of negative {self}")
        if self.q == 0:
            return SurdNumber.sqrt_of(self.p)
        disc = _rational_sqrt(self.p * self.p - self.d * self.q * self.q)
        if disc is not None:
            for x2 in ((self.p + disc) / 2, (self.p - disc) / 2):
                x = _rational_sqrt(x2)
                if x:
                    root = SurdNumber(x, self.q / (2 * x), self.d)
                    return root if root.sign() > 0 else -root
        raise NestedRadical(f"sqrt({self}) is not in Q(sqrt({self.d}))")

    def to_json(self):
        return {k: f"{v.numerator}/{v.denominator}" for k, v in (("p", self.p), ("q", self.q), ("d", self.d))}

    @classmethod
    def from_json(cls, obj):
        return cls(Fraction(obj["p"]), Fraction(obj["q"]), Fraction(obj["d"]))

    def __str__(self):
        if self.q == 0:
            return str(self.p)
        root = f"sqrt({self.d})"
        if self.q == 1:
            irr = root
        elif self.q == -1:
            irr = "-" + root
        else:
            irr = f"{self.q}*{root}"
        if self.p == 0:
            return irr
        return f"{self.p}{'' if irr.startswith('-') else '+'}{irr}"

    def __repr__(self):
        return f"SurdNumber({str(self)!r})"
