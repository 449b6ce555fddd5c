"""Ansatz substitution, auxiliary-ODE rewriting and coefficient collection.

Polynomials in the formal symbols F and F' are stored as
``{(i, j): MultiPoly}`` for the monomial ``F^i (F')^j``.  Every F'' produced
by differentiation is immediately replaced by the right-hand side of the
chosen auxiliary equation, so no F'' ever survives.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType

from .multipoly import MultiPoly, sort_symbols
from .pde_lang import MAX_XI_ORDER, LoweringError

A0, A1, A, B, C, OMEGA = (MultiPoly.symbol(s) for s in ("a0", "a1", "a", "b", "c", "omega"))


class AuxKind(enum.Enum):
    """F'' = b F^2 - 6a^2 F + 5a F'  (A)   or   F'' = c F^3 - 2a^2 F - 3a F'  (B)."""

    A = "A"
    B = "B"

    @property
    def constant_symbol(self):
        return "b" if self is AuxKind.A else "c"


class AnsatzForm(enum.Enum):
    WITH_CONSTANT = "with-constant"   # u = a0 + a1 F
    PURE_LINEAR = "pure-linear"       # u = a1 F


class MissingAuxConstant(ValueError):
    pass


class AnsatzPolynomial:
    """Immutable polynomial in F and F' with MultiPoly coefficients."""

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        clean = {}
        for key, coeff in (terms or {}).items():
            coeff = coeff if isinstance(coeff, MultiPoly) else MultiPoly.constant(coeff)
            if key in clean:
                coeff = clean[key] + coeff
            if coeff:
                clean[key] = coeff
            else:
                clean.pop(key, None)
        self._terms = clean

    @classmethod
    def F(cls, power=1):
        return cls({(power, 0): MultiPoly.constant(1)})

    @classmethod
    def Fp(cls, power=1):
        return cls({(0, power): MultiPoly.constant(1)})

    @classmethod
    def constant(cls, value):
        return cls({(0, 0): value})

    @property
    def terms(self):
        return MappingProxyType(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if not isinstance(other, AnsatzPolynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __add__(self, other):
        out = dict(self._terms)
        for k, v in _lift(other)._terms.items():
            out[k] = out[k] + v if k in out else v
        return AnsatzPolynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return AnsatzPolynomial({k: -v for k, v in self._terms.items()})

    def __sub__(self, other):
        return self + (-_lift(other))

    def __mul__(self, other):
        other = _lift(other)
        out = {}
        for (i1, j1), c1 in self._terms.items():
            for (i2, j2), c2 in other._terms.items():
                key = (i1 + i2, j1 + j2)
                prod = c1 * c2
                out[key] = out[key] + prod if key in out else prod
        return AnsatzPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        result = AnsatzPolynomial.constant(1)
        for _ in range(n):
            result = result * self
        return result

    def to_text(self):
        if not self._terms:
            return "0"
        parts = []
        for (i, j), c in sorted(self._terms.items(), reverse=True):
            mono = "*".join(
                s for s in (
                    "" if not i else ("F" if i == 1 else f"F^{i}"),
                    "" if not j else ("F'" if j == 1 else f"F'^{j}"),
                ) if s
            )
            parts.append(f"({c.to_text()})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    def __repr__(self):
        return f"AnsatzPolynomial({self.to_text()!r})"


def _lift(value):
    if isinstance(value, AnsatzPolynomial):
        return value
    return AnsatzPolynomial.constant(value)


def aux_rhs(aux, constant=None):
    """Right-hand side of the auxiliary equation as an AnsatzPolynomial."""
    aux = AuxKind(aux)
    if constant is None:
        k = MultiPoly.symbol(aux.constant_symbol)
    else:
        if not constant:
            raise MissingAuxConstant(f"auxiliary constant {aux.constant_symbol} must be nonzero")
        k = MultiPoly.constant(Fraction(constant))
    if aux is AuxKind.A:
        return AnsatzPolynomial({(2, 0): k, (1, 0): -6 * A ** 2, (0, 1): 5 * A})
    return AnsatzPolynomial({(3, 0): k, (1, 0): -2 * A ** 2, (0, 1): -3 * A})


def xi_derivative(p, aux, constant=None):
    """d/dxi of ``p`` with F'' eliminated through the auxiliary equation."""
    rhs = aux_rhs(aux, constant)
    out = AnsatzPolynomial()
    for (i, j), coeff in p.terms.items():
        if i:
            out = out + AnsatzPolynomial({(i - 1, j + 1): coeff * i})
        if j:
            out = out + AnsatzPolynomial({(i, j - 1): coeff * j}) * rhs
    return out


def ansatz_substitute(ode, form, aux, constant=None):
    """Replace u, u', u'', u''' in ``ode`` by the ansatz and its derivatives."""
    form = AnsatzForm(form)
    if ode.max_order > MAX_XI_ORDER:
        raise LoweringError("ODE order exceeds 3")
    u = AnsatzPolynomial({(1, 0): A1})
    if form is AnsatzForm.WITH_CONSTANT:
        u = u + AnsatzPolynomial({(0, 0): A0})
    derivs = [u]
    for _ in range(MAX_XI_ORDER):
        derivs.append(xi_derivative(derivs[-1], aux, constant))
    powers = {}

    def power(k, e):
        if (k, e) not in powers:
            powers[(k, e)] = derivs[k] ** e
        return powers[(k, e)]

    total = AnsatzPolynomial()
    for exps, coeff in ode.terms:
        term = AnsatzPolynomial.constant(coeff)
        for k, e in enumerate(exps):
            if e:
                term = term * power(k, e)
        total = total + term
    return total


@dataclass(frozen=True)
class AlgebraicSystem:
    """Coefficient equations (each ``= 0``) keyed by their F^i F'^j monomial."""

    keys: tuple
    equations: tuple
    unknowns: tuple
    parameters: tuple

    def __len__(self):
        return len(self.equations)

    def as_dict(self):
        return dict(zip(self.keys, self.equations))

    def to_json(self):
        return {
            "unknowns": list(self.unknowns),
            "parameters": list(self.parameters),
            "equations": [
                {"F": i, "Fp": j, "poly": eq.to_text()} for (i, j), eq in zip(self.keys, self.equations)
            ],
        }


def collect_system(p, unknowns):
    """One equation per nonzero F^i F'^j coefficient, ordered by (i, j)."""
    keys = tuple(sorted(p.terms))
    equations = tuple(p.terms[k] for k in keys)
    unknowns = tuple(unknowns)
    syms = sort_symbols(s for eq in equations for s in eq.symbols())
    params = tuple(s for s in syms if s not in unknowns)
    return AlgebraicSystem(keys, equations, unknowns, params)
