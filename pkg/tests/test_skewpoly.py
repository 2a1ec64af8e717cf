from __future__ import annotations

import pytest

from cyclicalg.algebra import CyclicAlgebra
from cyclicalg.iterated import petit_ring
from cyclicalg.numberfield import FieldAutomorphism, FieldTower
from cyclicalg.skewpoly import (SkewPoly, SkewPolyError, SkewRing, SufficientCondition,
                                irreducibility_status, linear_factor_search, petit_mul,
                                quadratic_factor_search, quartic_quadratic_remainder,
                                right_nucleus_member, sp_divmod_left, sp_divmod_right, sp_mul)

from conftest import autos, quat_cubic, quaternion_over_F, towers


def field_ring():
    Ft = towers()[3]
    return SkewRing(Ft, autos()["tau_theta"])


def quat_ring():
    return SkewRing(quaternion_over_F(), autos()["tau_K"].inverse())


def quartic_ring():
    Q = FieldTower.rationals()
    Z = Q.extend("z", [1, 1, 1, 1, 1], ("0.30901699437494742", "0.95105651629515357"))
    return SkewRing(Z, FieldAutomorphism(Z, {"z": "z^2"}))


def test_twist_rule_and_unit(rng):
    for R in (field_ring(), quat_ring()):
        t = R.t()
        for _ in range(5):
            a = R.random_coefficient(rng, 3)
            assert t * R.constant(a) == R.poly([0, R.apply(a)])
            g = R.random_poly(rng, 3)
            assert g * R.one() == g == R.one() * g


def test_degree_additive_over_division_domain(rng):
    R = quat_ring()
    for _ in range(50):
        g, h = R.random_poly(rng, rng.randint(0, 3), 2), R.random_poly(rng, rng.randint(0, 3), 2)
        assert (g * h).degree == g.degree + h.degree


def test_zero_polynomial():
    R = field_ring()
    assert R.zero().degree == float("-inf")
    assert R.poly([0, 0]).coeffs == ()
    with pytest.raises(ZeroDivisionError):
        sp_divmod_right(R.one(), R.zero())


def test_ring_mismatch():
    with pytest.raises(SkewPolyError):
        field_ring().one() * quat_ring().one()


@pytest.mark.parametrize("make", [field_ring, quat_ring])
def test_division_laws(make, rng):
    R = make()
    for _ in range(40):
        g = R.random_poly(rng, rng.randint(0, 5), 2)
        f = R.random_poly(rng, rng.randint(1, 3), 2, monic=rng.random() < 0.5)
        q, r = sp_divmod_right(g, f)
        assert q * f + r == g and r.degree < f.degree
        assert sp_divmod_right(g, f) == (q, r)
        q2, r2 = sp_divmod_left(g, f)
        assert f * q2 + r2 == g and r2.degree < f.degree


def test_trivial_divisions(rng):
    R = quat_ring()
    f = R.random_poly(rng, 3, 2, monic=True)
    g = R.random_poly(rng, 2, 2)
    assert sp_divmod_right(g, f) == (R.zero(), g)
    assert sp_divmod_left(g, f) == (R.zero(), g)
    assert sp_divmod_right(f, f) == (R.one(), R.zero())


@pytest.mark.parametrize("make", [field_ring, quat_ring])
def test_cubic_remainder_formula(make, rng):
    R = make()
    for _ in range(30):
        z, d = R.random_coefficient(rng, 3), R.random_coefficient(rng, 3)
        f = R.t_power_minus(3, d)
        _, r = sp_divmod_right(f, R.poly([-z, 1]))
        expected = R.apply(z, 2) * R.apply(z) * z - d
        assert r == (R.constant(expected) if expected else R.zero())


@pytest.mark.parametrize("make", [field_ring, quat_ring])
def test_left_remainder_criterion(make, rng):
    R = make()
    for k in range(30):
        z = R.random_coefficient(rng, 3)
        target = R.apply(z, 2) * R.apply(z) * z
        # d chosen so that sigma^2(d) = sigma^2(z) sigma(z) z on even rounds
        d = R.apply(target, -2) if k % 2 == 0 else R.random_coefficient(rng, 3)
        _, r = sp_divmod_left(R.t_power_minus(3, d), R.poly([-z, 1]))
        assert r.is_zero() == (R.apply(d, 2) == target)


def test_quartic_quadratic_remainder_closed_form(rng):
    for R in (quartic_ring(), quat_ring()):
        for _ in range(20):
            d = R.random_coefficient(rng, 3)
            z0, z1 = R.random_coefficient(rng, 2), R.random_coefficient(rng, 2)
            f = R.t_power_minus(4, d)
            _, r = sp_divmod_right(f, R.poly([-z0, -z1, 1]))
            r0, r1 = quartic_quadratic_remainder(f, z0, z1)
            assert r.coefficient(0) == r0 and r.coefficient(1) == r1


def test_petit_basic_rules(rng):
    Fs = towers()[2]
    R = SkewRing(Fs, autos()["tau_s"].inverse())
    f = R.t_power_minus(2, Fs("s"))
    assert petit_mul(R.t(), R.t(), f) == R.constant(Fs("s"))
    Rq = quat_ring()
    f = Rq.t_power_minus(3, Rq.domain.scalar(Rq.domain.K("s")))
    for _ in range(10):
        g = Rq.random_poly(rng, 1, 2)
        h = Rq.random_poly(rng, 1, 2)
        assert petit_mul(g, Rq.one(), f) == g
        assert petit_mul(g, h, f) == g * h
    with pytest.raises(SkewPolyError):
        petit_mul(Rq.t_power_minus(3, 1), Rq.one(), f)


def test_petit_bilinear_and_domain_in_left_middle_nucleus(rng):
    R = quat_ring()
    D = R.domain
    f = R.t_power_minus(2, D.scalar(D.K("s")))
    for _ in range(20):
        g, h, k = (R.random_poly(rng, 1, 2) for _ in range(3))
        a = R.constant(R.random_coefficient(rng, 2))
        assert petit_mul(g, h + k, f) == petit_mul(g, h, f) + petit_mul(g, k, f)
        assert petit_mul(petit_mul(a, g, f), h, f) == petit_mul(a, petit_mul(g, h, f), f)
        assert petit_mul(petit_mul(g, a, f), h, f) == petit_mul(g, petit_mul(a, h, f), f)


def _cyclic_vs_petit(A: CyclicAlgebra):
    R = SkewRing(A.K, A.sigma.inverse())
    f = R.t_power_minus(A.n, A.c)

    def to_poly(x):
        return SkewPoly(R, tuple(A.sigma_power(-i)(c) for i, c in enumerate(x.coeffs)))

    basis = A.basis_q()
    for x in basis:
        for y in basis:
            assert petit_mul(to_poly(x), to_poly(y), f) == to_poly(x * y)


def test_petit_algebra_reproduces_cyclic_algebras():
    _cyclic_vs_petit(quaternion_over_F())
    Fs = towers()[2]
    _cyclic_vs_petit(CyclicAlgebra(Fs, autos()["tau_s"], Fs("s")))
    Ft = towers()[3]
    _cyclic_vs_petit(CyclicAlgebra(Ft, autos()["tau_theta"], Ft("theta")))


def test_right_nucleus_membership(rng):
    R = quat_ring()
    D = R.domain
    f = R.t_power_minus(2, D.scalar(D.K("s")))
    assert right_nucleus_member(R.one(), f)
    assert right_nucleus_member(R.constant(D.scalar(3)), f)
    trues = 0
    for _ in range(20):
        g = R.random_poly(rng, 1, 2)
        if right_nucleus_member(g, f):
            trues += 1
            q, r = sp_divmod_right(f * g, f)
            assert r.is_zero() and q * f == f * g
    assert trues < 20


def test_linear_factor_search():
    Li = towers()[1]
    R = SkewRing(Li, autos()["sigma_i"])
    f = R.t_power_minus(2, 1)
    wit, _ = linear_factor_search(f, 1)
    assert wit.right == R.poly([-1, 1])
    assert sp_mul(wit.left, wit.right) == f


def test_linear_factor_search_finds_nothing_for_biquaternion_constant():
    R = SkewRing(quaternion_over_F(), autos()["tau_K"])
    f = R.t_power_minus(2, R.domain.scalar(R.domain.K("s")))
    wit, searched = linear_factor_search(f, 1)
    assert wit is None and searched == 3 ** 8


def test_quadratic_factor_search():
    Li = towers()[1]
    R = SkewRing(Li, autos()["sigma_i"])
    f = R.t_power_minus(4, 1)
    wit, _ = quadratic_factor_search(f, 1)
    assert wit.right == R.poly([-1, 0, 1])
    assert sp_mul(wit.left, wit.right) == f


def test_irreducibility_verdicts():
    Li = towers()[1]
    R = SkewRing(Li, autos()["sigma_i"])
    v = irreducibility_status(R.t_power_minus(2, 1))
    assert v.status == "Reducible" and v.witness.verify(R.t_power_minus(2, 1))

    Rq = SkewRing(quaternion_over_F(), autos()["tau_K"].inverse())
    f = Rq.t_power_minus(2, Rq.domain.scalar(Rq.domain.K("s")))
    cert = SufficientCondition("biquaternion", {"checked elsewhere": True})
    v = irreducibility_status(f, certificates=[cert])
    assert v.status == "Irreducible" and v.certificate == "SufficientCondition(biquaternion)"
    assert irreducibility_status(f).status != "Irreducible"

    R3, f3 = petit_ring(quat_cubic())
    v = irreducibility_status(f3)
    assert v.status == "Irreducible" and v.certificate == "SufficientCondition(tau(d^n)!=d^n)"
    assert all(v.hypotheses.values())


def test_irreducibility_never_irreducible_from_search_alone():
    R = quartic_ring()
    f = R.t_power_minus(4, R.domain("z + 2"))
    v = irreducibility_status(f, budget=1, max_candidates=300)
    assert v.status == "Unknown" and v.certificate == "SearchExhausted(1)"
    v = irreducibility_status(f, budget=1, max_candidates=300, exhaustive=True)
    assert v.status == "Irreducible" and v.certificate == "Degree4Criterion"


def test_unsupported_degree():
    R = field_ring()
    with pytest.raises(SkewPolyError):
        irreducibility_status(R.t_power_minus(5, 2))
    with pytest.raises(SkewPolyError):
        irreducibility_status(R.poly([1, 1, 1]))
