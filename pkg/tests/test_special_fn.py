import math
import random

import mpmath
import pytest

from cfwave.special_fn import (
    AUX_FAMILIES, SQRT2_2, EllipticModulus, PoleProximity, WeierstrassParams, agm, ellipk,
    jacobi_named, jacobi_sn_cn_dn, laurent_coefficients, solitary, weierstrass_p, wp_real_period,
)

K = 1.854074677301372


def test_agm():
    assert agm(1, 1) == 1
    assert agm(3.5, 3.5) == 3.5
    # mpmath.agm(2, 8)
    assert agm(2, 8) == pytest.approx(4.486057160575205, rel=1e-15)
    assert agm(8, 2) == pytest.approx(agm(2, 8), rel=1e-15)


@pytest.mark.parametrize("x,y", [(0, 1), (1, -2)])
def test_agm_rejects_nonpositive(x, y):
    with pytest.raises(ValueError):
        agm(x, y)


def test_lemniscatic_constant():
    lemn = math.gamma(0.25) ** 2 / (4 * math.sqrt(math.pi))
    assert ellipk(SQRT2_2) == pytest.approx(lemn, rel=1e-14)
    assert ellipk(SQRT2_2) == pytest.approx(K, rel=1e-14)
    assert EllipticModulus(SQRT2_2).K == ellipk(SQRT2_2)
    assert ellipk(0.0) == pytest.approx(math.pi / 2, rel=1e-15)


@pytest.mark.parametrize("k", [0.1, 0.5, 0.9, 0.999])
def test_ellipk_against_mpmath(k):
    assert ellipk(k) == pytest.approx(float(mpmath.ellipk(k * k)), rel=1e-14)


def test_jacobi_initial_and_quarter_period():
    assert jacobi_sn_cn_dn(0.0, SQRT2_2) == (0.0, 1.0, 1.0)
    sn, cn, dn = jacobi_sn_cn_dn(K, SQRT2_2)
    assert sn == pytest.approx(1.0, abs=1e-14)
    assert cn == pytest.approx(0.0, abs=1e-14)
    assert dn == pytest.approx(SQRT2_2, abs=1e-14)


# values from mpmath.ellipfun at m = 1/2
@pytest.mark.parametrize("z,expected", [
    (0.7, (0.6243400909662173, 0.7811526424536343, 0.8972734953213249)),
    (3.0, (0.6300289982420332, -0.7765716073705890, 0.8952830450126206)),
    (9.1, (0.9927170120448580, 0.1204696393151789, 0.7122193952697193)),
    (-4.2, (0.4639506742131592, -0.8858610341905524, 0.9446559616858285)),
])
def test_jacobi_values(z, expected):
    got = jacobi_sn_cn_dn(z, SQRT2_2)
    for g, e in zip(got, expected):
        assert g == pytest.approx(e, abs=1e-12)


@pytest.mark.parametrize("k", [0.2, SQRT2_2, 0.95])
def test_jacobi_identities(k):
    rng = random.Random(3)
    for _ in range(200):
        z = rng.uniform(-30, 30)
        sn, cn, dn = jacobi_sn_cn_dn(z, k)
        assert abs(sn * sn + cn * cn - 1) < 1e-12
        assert abs(dn * dn + k * k * sn * sn - 1) < 1e-12
        ref = float(mpmath.ellipfun("sn", z, m=k * k))
        assert sn == pytest.approx(ref, abs=1e-12)


def test_named_values():
    assert jacobi_named("cn", 0.0) == 1.0
    assert jacobi_named("nc", 0.0) == 1.0
    assert jacobi_named("ds", 1e-3) == pytest.approx(1000.0, rel=1e-3)
    assert jacobi_named("sd", K) == pytest.approx(math.sqrt(2), rel=1e-13)


def test_named_poles():
    with pytest.raises(PoleProximity):
        jacobi_named("ds", 0.0)
    with pytest.raises(PoleProximity):
        jacobi_named("nc", K)
    with pytest.raises(ValueError):
        jacobi_named("sc", 0.5)


def test_laurent_leading_coefficients():
    coeffs = dict(laurent_coefficients(4.0))
    assert coeffs[3] == pytest.approx(4 / 28)
    # c_6 = g3^2 / (28^2 * 13); c_4 = c_5 = 0 when g2 = 0
    assert coeffs[6] == pytest.approx(16 / (28 ** 2 * 13), rel=1e-14)
    assert 4 not in coeffs and 5 not in coeffs


def test_wp_small_argument_series():
    p, _ = weierstrass_p(0.1, WeierstrassParams(4.0))
    assert p == pytest.approx(100.00001428571443, rel=1e-14)


# (z, wp, wp') for g3 = 4 by integrating wp'' = 6 wp^2 in mpmath from z = 0.05
@pytest.mark.parametrize("z,wp,dwp", [
    (0.5, 4.008930104673845, -15.928540761504227),
    (0.9, 1.3288460434422677, -2.3207917703622154),
    (1.3, 1.0221832776870630, 0.5216782258456109),
])
def test_wp_against_ode_integration(z, wp, dwp):
    p, dp = weierstrass_p(z, 4.0)
    assert p == pytest.approx(wp, rel=1e-12)
    assert dp == pytest.approx(dwp, rel=1e-11)


@pytest.mark.parametrize("g3", [4.0, 0.5, -2.0])
def test_wp_differential_equation(g3):
    rng = random.Random(11)
    for _ in range(100):
        z = rng.uniform(0.05, 2.0)
        p, dp = weierstrass_p(z, g3)
        assert abs(dp * dp - 4 * p ** 3 + g3) <= 1e-9 * (4 * abs(p) ** 3 + abs(g3))


def test_wp_duplication_consistency():
    rng = random.Random(5)
    for _ in range(50):
        z = rng.uniform(0.3, 2.0)
        n = max(1, math.ceil(math.log2(z / 0.25)))
        a, _ = weierstrass_p(z, 4.0, steps=n)
        b, _ = weierstrass_p(z, 4.0, steps=n + 1)
        assert a == pytest.approx(b, rel=1e-9)


@pytest.mark.parametrize("g3", [4.0, 0.5, -2.0])
def test_wp_real_period(g3):
    P = wp_real_period(g3)
    for z in (0.3, 0.7, 1.1):
        assert weierstrass_p(z + P, g3)[0] == pytest.approx(weierstrass_p(z, g3)[0], rel=1e-9)
    # no pole strictly inside (0, P)
    for i in range(1, 40):
        weierstrass_p(P * i / 40, g3)


def test_wp_degenerate_g3_zero():
    assert wp_real_period(0) == math.inf
    assert weierstrass_p(1.7, 0.0)[0] == pytest.approx(1 / 1.7 ** 2, rel=1e-14)


def test_wp_pole_signal():
    with pytest.raises(PoleProximity):
        weierstrass_p(1e-9, 4.0)
    with pytest.raises(ValueError):
        WeierstrassParams(g3=1.0, g2=1.0)


def test_solitary_forms():
    a, b = 1.3, 2.0
    assert solitary("tanh-sq-plus", a, 60.0, b=b) == pytest.approx(6 * a * a / b, rel=1e-14)
    assert solitary("tanh-minus", a, 0.0, eps=-1) == pytest.approx(-a / 2)
    xi = 2.0 / a  # a xi / 2 = 1
    coth_sq = 5.350132231964973  # (1 + coth 1)^2
    assert solitary("coth-sq-plus", a, xi, b=b) == pytest.approx(3 * a * a / (2 * b) * coth_sq, rel=1e-14)
    assert solitary("coth-minus", a, xi) == pytest.approx(a / 2 * (1 - 1 / math.tanh(1.0)), rel=1e-14)


def test_coth_forms_singular_at_zero():
    with pytest.raises(PoleProximity):
        solitary("coth-minus", 1.0, 0.0)


def test_family_table():
    names = [f.name for f in AUX_FAMILIES]
    assert names == ["weierstrass", "tanh-sq-plus", "coth-sq-plus", "ds", "nc",
                     "tanh-minus", "coth-minus", "cn", "sd"]
    assert {f.name: f.c_value for f in AUX_FAMILIES if f.aux == "B"} == {
        "ds": 2, "nc": 2, "tanh-minus": 2, "coth-minus": 2, "cn": -2, "sd": -2,
    }


def test_weierstrass_family_is_exponential_times_wp():
    a, xi, b, g3, c1 = 0.8, -0.4, 3.0, 4.0, 0.1
    e = math.exp(a * xi)
    f = next(f for f in AUX_FAMILIES if f.name == "weierstrass")
    expected = 6 / b * e * e * weierstrass_p(e / a + c1, g3)[0]
    assert f.evaluate(a, xi, b=b, g3=g3, c1=c1) == pytest.approx(expected, rel=1e-15)
