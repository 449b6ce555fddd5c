"""Real-argument special functions used by the solution families.

Jacobi elliptic functions come from the AGM / descending Landen scheme, and
the Weierstrass function (invariant g2 = 0) from its Laurent series near the
origin followed by repeated argument doubling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

SQRT2_2 = math.sqrt(2.0) / 2.0
JACOBI_POLE_EPS = 1e-10
WP_POLE_VALUE = 1e12
WP_POLE_DIST = 1e-8


class PoleProximity(ArithmeticError):
    """Evaluation point is too close to a pole; the caller should skip it."""


def agm(x, y, rtol=1e-15):
    """Arithmetic-geometric mean of two positive reals."""
    if x <= 0 or y <= 0:
        raise ValueError("agm needs positive arguments")
    for _ in range(64):
        if abs(x - y) <= rtol * x:
            break
        x, y = 0.5 * (x + y), math.sqrt(x * y)
    return 0.5 * (x + y)


@lru_cache(maxsize=64)
def ellipk(k):
    """Complete elliptic integral of the first kind K(k), modulus k in [0, 1)."""
    if not 0 <= k < 1:
        raise ValueError("modulus must lie in [0, 1)")
    return math.pi / (2.0 * agm(1.0, math.sqrt((1.0 - k) * (1.0 + k))))


@dataclass(frozen=True)
class EllipticModulus:
    k: float

    def __post_init__(self):
        if not 0 < self.k < 1:
            raise ValueError("modulus must lie in (0, 1)")

    @property
    def K(self):
        return ellipk(self.k)


@lru_cache(maxsize=64)
def _landen_table(k):
    a, b, c = [1.0], math.sqrt((1.0 - k) * (1.0 + k)), [k]
    while abs(c[-1]) > 1e-8 * a[-1] or len(a) < 2:
        an, bn = 0.5 * (a[-1] + b), math.sqrt(a[-1] * b)
        c.append(0.5 * (a[-1] - b))
        a.append(an)
        b = bn
    return tuple(a), tuple(c)


def jacobi_sn_cn_dn(z, k):
    """(sn, cn, dn) at real ``z`` for modulus ``k`` in (0, 1)."""
    if not 0 < k < 1:
        raise ValueError("modulus must lie in (0, 1)")
    K = ellipk(k)
    z = math.remainder(z, 4.0 * K)
    a, c = _landen_table(k)
    n = len(a) - 1
    phi = (2.0 ** n) * a[n] * z
    for i in range(n, 0, -1):
        phi = 0.5 * (phi + math.asin(c[i] / a[i] * math.sin(phi)))
    sn, cn = math.sin(phi), math.cos(phi)
    dn = math.sqrt(1.0 - k * k * sn * sn)
    return sn, cn, dn


def jacobi_named(name, z, k=SQRT2_2):
    """One of cn, nc, ds, sd; raises PoleProximity near a pole."""
    sn, cn, dn = jacobi_sn_cn_dn(z, k)
    if name == "cn":
        return cn
    if name == "nc":
        if abs(cn) < JACOBI_POLE_EPS:
            raise PoleProximity(f"nc pole near z={z}")
        return 1.0 / cn
    if name == "ds":
        if abs(sn) < JACOBI_POLE_EPS:
            raise PoleProximity(f"ds pole near z={z}")
        return dn / sn
    if name == "sd":
        return sn / dn
    raise ValueError(f"unknown Jacobi function {name!r}")


@dataclass(frozen=True)
class WeierstrassParams:
    g3: float
    g2: float = 0.0

    def __post_init__(self):
        if self.g2 != 0.0:
            raise ValueError("only g2 = 0 is supported")

    @property
    def series_radius(self):
        if self.g3 == 0:
            return 1.0
        return min(1.0, max(0.25, 0.5 * abs(self.g3) ** (-1.0 / 6.0)))


_EQUIANHARMONIC = math.gamma(1.0 / 3.0) ** 3 / (2.0 * math.pi)


def wp_real_period(g3):
    """Spacing of the real poles of wp(z; 0, g3).

    The g2 = 0 lattice is hexagonal; for g3 < 0 the real axis runs along the
    long diagonal, so the spacing grows by sqrt(3).
    """
    if g3 == 0:
        return math.inf
    period = _EQUIANHARMONIC * abs(g3) ** (-1.0 / 6.0)
    return period if g3 > 0 else math.sqrt(3.0) * period


@lru_cache(maxsize=32)
def laurent_coefficients(g3, n_terms=40):
    """c_k for wp(z) = 1/z^2 + sum_{k>=2} c_k z^(2k-2), with g2 = 0."""
    c = {2: 0.0, 3: g3 / 28.0}
    for k in range(4, n_terms + 2):
        c[k] = 3.0 / ((2 * k + 1) * (k - 3)) * sum(c[m] * c[k - m] for m in range(2, k - 1))
    return tuple((k, c[k]) for k in range(2, n_terms + 2) if c[k] != 0.0)


def _wp_series(z, g3):
    z2 = z * z
    p = 1.0 / z2
    dp = -2.0 / (z2 * z)
    for k, ck in laurent_coefficients(g3):
        term = ck * z ** (2 * k - 2)
        p += term
        dp += (2 * k - 2) * ck * z ** (2 * k - 3)
        if abs(term) < 1e-18 * abs(p):
            break
    return p, dp


def weierstrass_p(z, params, steps=None):
    """(wp, wp') at real ``z`` for invariants (0, g3).

    ``steps`` overrides the number of doublings (used to cross-check the
    duplication formula against itself).
    """
    if not isinstance(params, WeierstrassParams):
        params = WeierstrassParams(float(params))
    g3 = params.g3
    if abs(z) < WP_POLE_DIST:
        raise PoleProximity("wp pole at the origin")
    r0 = params.series_radius
    if steps is None:
        steps = max(0, math.ceil(math.log2(abs(z) / r0))) if abs(z) > r0 else 0
    w = z / 2.0 ** steps
    p, dp = _wp_series(w, g3)
    for _ in range(steps):
        # wp(2w) = wp (wp^3 + 2 g3) / (4 wp^3 - g3), i.e. (wp''/2wp')^2 - 2 wp
        # with wp'^2 = 4 wp^3 - g3, written without the cancelling difference.
        p3 = p * p * p
        den = 4.0 * p3 - g3
        if den == 0.0:
            raise PoleProximity(f"wp pole near z={z}")
        p2 = p * (p3 + 2.0 * g3) / den
        dp = dp * (2.0 * p3 * p3 - 10.0 * g3 * p3 - g3 * g3) / (den * den)
        p = p2
        if not math.isfinite(p) or abs(p) > WP_POLE_VALUE:
            raise PoleProximity(f"wp pole near z={z}")
    if abs(p) > WP_POLE_VALUE:
        raise PoleProximity(f"wp pole near z={z}")
    return p, dp


def solitary(name, a, xi, *, b=1.0, eps=1):
    """Hyperbolic members of the two auxiliary families.

    ``tanh-sq-plus``/``coth-sq-plus``: (3a^2/2b)[1 + tanh|coth(a xi/2)]^2;
    ``tanh-minus``/``coth-minus``: (eps a/2)[1 - tanh|coth(a xi/2)].
    """
    arg = 0.5 * a * xi
    if name.startswith("coth"):
        if abs(arg) <= 1e-10:
            raise PoleProximity("coth singularity at xi = 0")
        h = 1.0 / math.tanh(arg)
    elif name.startswith("tanh"):
        h = math.tanh(arg)
    else:
        raise ValueError(f"unknown solitary form {name!r}")
    if name.endswith("sq-plus"):
        return 3.0 * a * a / (2.0 * b) * (1.0 + h) ** 2
    if name.endswith("minus"):
        return 0.5 * eps * a * (1.0 - h)
    raise ValueError(f"unknown solitary form {name!r}")


# -- the nine auxiliary-equation families -------------------------------------
# Each takes (a, xi, consts) where consts carries b/g3/c1 (A) or eps/shift (B).

def weierstrass_family(a, xi, *, b, g3, c1):
    e = math.exp(a * xi)
    p, _ = weierstrass_p(e / a + c1, WeierstrassParams(g3))
    return 6.0 / b * e * e * p


def jacobi_family(name, a, xi, *, eps=1, shift=0.0):
    """exp-Jacobi members: ds/nc with c = 2, cn/sd with c = -2."""
    e = math.exp(-a * xi)
    if name == "ds":
        return eps * a * e * jacobi_named("ds", e + shift)
    if name == "nc":
        return eps * a * e * jacobi_named("nc", math.sqrt(2.0) * e + shift)
    if name == "cn":
        return eps * a * e * jacobi_named("cn", math.sqrt(2.0) * e + shift)
    if name == "sd":
        return SQRT2_2 * eps * a * e * jacobi_named("sd", math.sqrt(2.0) * e + shift)
    raise ValueError(f"unknown Jacobi family {name!r}")


@dataclass(frozen=True)
class AuxFamily:
    name: str
    aux: str          # "A" or "B"
    c_value: int      # 0 for variant A
    kind: str         # weierstrass, solitary, jacobi

    def evaluate(self, a, xi, *, b=1.0, g3=0.0, c1=0.0, eps=1, shift=0.0):
        if self.kind == "weierstrass":
            return weierstrass_family(a, xi, b=b, g3=g3, c1=c1)
        if self.kind == "solitary":
            return solitary(self.name, a, xi, b=b, eps=eps)
        return jacobi_family(self.name, a, xi, eps=eps, shift=shift)


AUX_FAMILIES = (
    AuxFamily("weierstrass", "A", 0, "weierstrass"),
    AuxFamily("tanh-sq-plus", "A", 0, "solitary"),
    AuxFamily("coth-sq-plus", "A", 0, "solitary"),
    AuxFamily("ds", "B", 2, "jacobi"),
    AuxFamily("nc", "B", 2, "jacobi"),
    AuxFamily("tanh-minus", "B", 2, "solitary"),
    AuxFamily("coth-minus", "B", 2, "solitary"),
    AuxFamily("cn", "B", -2, "jacobi"),
    AuxFamily("sd", "B", -2, "jacobi"),
)
FAMILIES_BY_NAME = {f.name: f for f in AUX_FAMILIES}
