from __future__ import annotations

import pickle
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cyclicalg.interval import digits_to_bits
from cyclicalg.numberfield import (ElementParseError, FieldAutomorphism, FieldError,
                                   FieldTower, ReducibleMinimalPolynomial, TowerMismatch,
                                   aut_commute_check, embed_complex, fixed_field_basis,
                                   is_fixed_by, nf_arith, relative_norm)

from conftest import autos, towers

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)


def elements(tower):
    return st.lists(rationals, min_size=tower.degree, max_size=tower.degree).map(tower.element)


K = towers()[4]
Ft = towers()[3]


@settings(max_examples=60, deadline=None)
@given(elements(K), elements(K), elements(K))
def test_field_axioms(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x
    assert x - x == K.zero()
    if not x.is_zero():
        assert x * x.inverse() == K.one()
        assert (y / x) * x == y


@settings(max_examples=40, deadline=None)
@given(elements(Ft))
def test_cubic_inverse_and_powers(x):
    if x.is_zero():
        return
    assert x ** 3 == x * x * x
    assert x ** -2 * x ** 2 == Ft.one()


@settings(max_examples=60, deadline=None)
@given(elements(K))
def test_string_round_trip(x):
    assert K(x.to_string()) == x
    assert pickle.loads(pickle.dumps(x)) == x


def test_known_products():
    Fs = towers()[2]
    omega = Fs("(1 + s)/2")
    assert omega * Fs("(1 - s)/2") == Fs(2)
    th = Ft("theta")
    assert th ** 3 == Ft("1 + 2*theta - theta^2")
    assert Ft("theta").to_string() == "theta"
    assert Fs("1/2 + s/2").to_string() == "1/2 + 1/2*s"
    assert K.zero().to_string() == "0"
    assert K("-s").to_string() == "-s"


def test_parse_errors():
    with pytest.raises(ElementParseError):
        K("s +")
    with pytest.raises(ElementParseError):
        K("q")          # unknown generator
    with pytest.raises(ZeroDivisionError):
        K("1/0")


def test_reducible_minimal_polynomial_detected_on_inverse():
    T = FieldTower.rationals().extend("u", [-1, 0, 1])
    with pytest.raises(ReducibleMinimalPolynomial):
        (T("u") - 1).inverse()


def test_construction_errors():
    Q = FieldTower.rationals()
    with pytest.raises(FieldError):
        Q.extend("u", [1, 2])            # degree 1
    with pytest.raises(FieldError):
        Q.extend("u", [1, 0, 2])         # not monic
    with pytest.raises(FieldError):
        FieldAutomorphism(K, {"i": "i + 1"})


def test_tower_mismatch():
    Li, Fs = towers()[1], towers()[2]
    with pytest.raises(TowerMismatch):
        nf_arith("add", Li("i"), Fs("s"))


def test_coercion_from_subtower_and_by_name():
    Li, Fs = towers()[1], towers()[2]
    assert K(Fs("s")) == K("s")
    assert K(Li("1 + i")) == K("1 + i")


def test_automorphism_orders_and_commutation():
    a = autos()
    assert a["sigma_K"].exact_order == 2
    assert a["tau_theta"].exact_order == 3
    assert aut_commute_check(a["sigma_K"], a["tau_K"])
    st_ = a["sigma_K"].compose(a["tau_K"])
    assert st_(K("s + i")) == K("-s - i")
    assert a["tau_theta"].inverse()(a["tau_theta"](Ft("theta"))) == Ft("theta")


def test_relative_norms():
    a = autos()
    Fs = towers()[2]
    assert relative_norm(Fs("(1 + s)/2"), a["tau_s"]) == Fs(2)
    assert relative_norm(Ft("theta"), a["tau_theta"]) == Ft(1)
    # norm of x + y*i from K to Q(s) is x^2 + y^2
    x, y = K("2 + s"), K("3")
    assert relative_norm(x + y * K("i"), a["sigma_K"]) == x * x + y * y


def test_fixed_fields():
    a = autos()
    basis = fixed_field_basis(K, [a["sigma_K"]])
    assert [b.to_string() for b in basis] == ["1", "s"]
    f0 = fixed_field_basis(K, [a["sigma_K"], a["tau_K"]])
    assert [b.to_string() for b in f0] == ["1"]
    assert is_fixed_by(K("s*i"), a["sigma_K"].compose(a["tau_K"]))


def _numeric(x, values):
    """Evaluate x at the given generator values with mpmath."""
    total = mpmath.mpc(0)
    for i, q in enumerate(x.coeffs):
        term = mpmath.mpf(q.numerator) / q.denominator
        for name, e in zip(x.tower.names, x.tower.exponents(i)):
            term *= values[name] ** e
        total += term
    return total


@settings(max_examples=40, deadline=None)
@given(elements(K))
def test_embedding_encloses_independent_evaluation(x):
    mpmath.mp.dps = 60
    vals = {"s": mpmath.mpc(0, mpmath.sqrt(7)), "i": mpmath.mpc(0, 1)}
    z = _numeric(x, vals)
    ball = embed_complex(x, precision=40)
    err = abs(z - mpmath.mpc(mpmath.mpf(ball.re.numerator) / ball.re.denominator,
                             mpmath.mpf(ball.im.numerator) / ball.im.denominator))
    assert err <= mpmath.mpf(ball.rad.numerator) / ball.rad.denominator + mpmath.mpf(10) ** -50
    assert ball.rad < Fraction(1, 10 ** 35)


def test_embedding_of_theta():
    mpmath.mp.dps = 40
    ball = embed_complex(Ft("theta"), precision=30)
    assert abs(mpmath.mpf(ball.re.numerator) / ball.re.denominator
               - 2 * mpmath.cos(2 * mpmath.pi / 7)) < mpmath.mpf(10) ** -29
    assert embed_complex(Ft.zero()).rad == 0


def test_digits_to_bits_monotone():
    assert digits_to_bits(30) > 30 * 3.32
    assert digits_to_bits(60) > digits_to_bits(30)
