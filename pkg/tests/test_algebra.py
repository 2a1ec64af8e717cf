from __future__ import annotations

import pytest

from cyclicalg import linalg
from cyclicalg.algebra import (AlgebraError, CyclicAlgebra, DivisionCertified, NormWitness,
                               Unknown, ZeroDivisorWitness, associator, cyclic_division_probe,
                               lambda_matrix, nucleus_decide, reduced_norm, tau_tilde)
from cyclicalg.numberfield import FieldAutomorphism, FieldTower, relative_norm

from conftest import autos, hamilton_over_Q, quaternion_over_F, towers


def nonassoc_quaternion():
    Fs = towers()[2]
    return CyclicAlgebra(Fs, autos()["tau_s"], Fs("s"), name="(Q(s)/Q, tau, s)")


def test_hamilton_rules():
    H = hamilton_over_Q()
    e = H.e_power(1)
    i = H(H.K("i"))
    assert e * e == H(-1)
    assert i * e == e * H(H.K("-i"))          # l e = e sigma(l)
    assert (i * e) * (i * e) == H(-1)
    assert H.associative


def test_associative_iff_c_fixed(rng):
    H = quaternion_over_F()
    for _ in range(20):
        x, y, z = (H.random_element(rng, 2) for _ in range(3))
        assert associator(x, y, z).is_zero()
    N = nonassoc_quaternion()
    assert not N.associative
    e = N.e_power(1)
    assert not associator(e, e, e).is_zero()


def test_mul_is_bilinear_and_unital(rng):
    N = nonassoc_quaternion()
    for _ in range(20):
        x, y, z = (N.random_element(rng, 3) for _ in range(3))
        assert x * (y + z) == x * y + x * z
        assert (x + y) * z == x * z + y * z
        assert N.one() * x == x == x * N.one()


def test_lambda_matrix_represents_left_multiplication(rng):
    for A in (quaternion_over_F(), nonassoc_quaternion()):
        for _ in range(20):
            x, y = A.random_element(rng, 3), A.random_element(rng, 3)
            assert linalg.mat_vec(lambda_matrix(x), list(y.coeffs)) == list((x * y).coeffs)


def test_reduced_norm_quaternion_formula_and_multiplicativity(rng):
    H = quaternion_over_F()
    sigma = H.sigma
    for _ in range(30):
        x = H.random_element(rng, 3)
        x0, x1 = x.coeffs
        # det [[x0, c sigma(x1)], [x1, sigma(x0)]]
        assert reduced_norm(x) == x0 * sigma(x0) + x1 * sigma(x1)
        y = H.random_element(rng, 3)
        assert reduced_norm(x * y) == reduced_norm(x) * reduced_norm(y)


def test_inverse(rng):
    H = quaternion_over_F()
    for _ in range(10):
        x = H.random_element(rng, 3)
        if x:
            assert x * x.inverse() == H.one() == x.inverse() * x
    with pytest.raises(AlgebraError):
        nonassoc_quaternion().e_power(1).inverse()


def test_left_scalar_rule():
    H = quaternion_over_F()
    k = H.K("1 + i")
    x = H.element([0, 1])                     # e
    assert k * x == H(k) * x


def test_nucleus_nonassociative():
    N = nonassoc_quaternion()
    for b in N.K.basis():
        assert nucleus_decide(N(b)).full
    assert not nucleus_decide(N.e_power(1)).full


def test_nucleus_associative_is_everything(rng):
    H = hamilton_over_Q()
    for _ in range(10):
        assert nucleus_decide(H.random_element(rng, 2)).full


def test_tau_tilde_is_multiplicative(rng):
    H = quaternion_over_F()
    tau = autos()["tau_K"]
    for _ in range(20):
        x, y = H.random_element(rng, 2), H.random_element(rng, 2)
        assert tau_tilde(x * y, tau) == tau_tilde(x, tau) * tau_tilde(y, tau)


def test_probe_split_and_asserted():
    _, Li, *_ = towers()
    split = CyclicAlgebra(Li, autos()["sigma_i"], 1)
    res = cyclic_division_probe(split, 1)
    assert isinstance(res, ZeroDivisorWitness) and res.verify()
    # norms from Q(i) are sums of two squares, never -1
    H = hamilton_over_Q()
    res = cyclic_division_probe(H, 2)
    assert isinstance(res, DivisionCertified) and res.assumed
    unasserted = CyclicAlgebra(Li, autos()["sigma_i"], -1)
    assert isinstance(cyclic_division_probe(unasserted, 1), Unknown)


def test_probe_witness_from_nontrivial_norm():
    # c = 2 = N(1 + i) in Q(i)
    _, Li, *_ = towers()
    A = CyclicAlgebra(Li, autos()["sigma_i"], 2)
    res = cyclic_division_probe(A, 1)
    assert isinstance(res, ZeroDivisorWitness) and res.verify()


def test_probe_norm_witness_when_exponent_shares_a_factor():
    # Q(zeta_5), sigma: zeta -> zeta^2 of order 4, c = -1: N(1) = 1 = c^2
    Q = FieldTower.rationals()
    Z = Q.extend("z", [1, 1, 1, 1, 1], ("0.30901699437494742", "0.95105651629515357"))
    sig = FieldAutomorphism(Z, {"z": "z^2"})
    A = CyclicAlgebra(Z, sig, -1)
    res = cyclic_division_probe(A, 1)
    assert isinstance(res, NormWitness) and res.s == 2 and res.verify(A)
    assert relative_norm(res.z, sig) == A.c ** 2


def test_probe_nonassociative():
    assert isinstance(cyclic_division_probe(nonassoc_quaternion()), DivisionCertified)


def test_reduced_norm_rejects_nonassociative():
    with pytest.raises(AlgebraError):
        reduced_norm(nonassoc_quaternion().one())
