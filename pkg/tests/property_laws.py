"""Randomized algebraic laws shared by the acceptance run."""

import random
from fractions import Fraction

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from cfwave.multipoly import MultiPoly
from cfwave.surd import SurdNumber
from cfwave.sym_poly import AnsatzPolynomial, AuxKind, xi_derivative

EXAMPLES = 1000
SYMBOLS = ("a0", "a1", "a", "b", "c", "omega", "lambda", "mu")

law = settings(
    max_examples=EXAMPLES, deadline=None, database=None,
    suppress_health_check=[HealthCheck.too_slow],
)

# Each case draws one seed and builds its operands locally: drawing nested
# structures through hypothesis costs more than the laws themselves.
cases = st.integers(0, 2**32 - 1).map(random.Random)
RADICANDS = (2, 3, 5, 6, 7, Fraction(1, 2), Fraction(7, 3))


def rational(rng):
    return Fraction(rng.randint(-40, 40), rng.randint(1, 12))


def monomial(rng, symbols=SYMBOLS, max_degree=4):
    exps, total = {}, 0
    for sym in rng.sample(symbols, rng.randint(0, min(4, len(symbols)))):
        e = rng.randint(0, max_degree - total)
        if e:
            exps[sym] = e
            total += e
    return tuple(sorted(exps.items()))


def poly(rng, symbols=SYMBOLS, max_terms=4):
    return MultiPoly({monomial(rng, symbols): rational(rng) for _ in range(rng.randint(0, max_terms))})


def ansatz(rng):
    keys = {(rng.randint(0, 3), rng.randint(0, 2)) for _ in range(rng.randint(0, 4))}
    return AnsatzPolynomial({k: poly(rng, ("a", "a1", "b", "c"), 2) for k in keys})


def surd(rng, d):
    return SurdNumber(rational(rng), rational(rng), d)


@law
@given(cases)
def check_ring_axioms(rng):
    p, q, r = poly(rng), poly(rng), poly(rng)
    zero, one = MultiPoly(), MultiPoly.constant(1)
    assert p + q == q + p
    assert p * q == q * p
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p + zero == p and p * one == p
    assert p - p == zero
    assert all(c != 0 for _, c in p)


@law
@given(cases)
def check_xi_derivative_laws(rng):
    p, q, aux = ansatz(rng), ansatz(rng), rng.choice(list(AuxKind))
    d = lambda x: xi_derivative(x, aux)  # noqa: E731
    assert d(p + q) == d(p) + d(q)
    assert d(p * q) == d(p) * q + p * d(q)


@law
@given(cases)
def check_field_axioms(rng):
    d = rng.choice(RADICANDS)
    x, y, z = surd(rng, d), surd(rng, d), surd(rng, d)
    assert x + y == y + x
    assert x * y == y * x
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x - x == 0 and x + 0 == x and x * 1 == x
    if x:
        assert x * x.inverse() == 1
        assert (y / x) * x == y
