from __future__ import annotations

import functools
import random

import pytest

from cyclicalg.algebra import CyclicAlgebra
from cyclicalg.iterated import tensor_construct
from cyclicalg.numberfield import FieldAutomorphism, FieldTower

SQRT_M7 = (0, "2.6457513110645906")
THETA = ("1.2469796037174670", 0)      # 2 cos(2 pi / 7)


@functools.lru_cache(maxsize=None)
def towers():
    Q = FieldTower.rationals()
    Li = Q.extend("i", [1, 0, 1], (0, 1))
    Fs = Q.extend("s", [7, 0, 1], SQRT_M7)
    Ft = Q.extend("theta", [-1, -2, 1, 1], THETA)
    K = Fs.extend("i", [1, 0, 1], (0, 1))
    return Q, Li, Fs, Ft, K


@functools.lru_cache(maxsize=None)
def autos():
    Q, Li, Fs, Ft, K = towers()
    return dict(
        sigma_i=FieldAutomorphism(Li, {"i": "-i"}),
        tau_s=FieldAutomorphism(Fs, {"s": "-s"}),
        tau_theta=FieldAutomorphism(Ft, {"theta": "theta^2 - 2"}),
        sigma_K=FieldAutomorphism(K, {"i": "-i"}),
        tau_K=FieldAutomorphism(K, {"s": "-s"}),
    )


@functools.lru_cache(maxsize=None)
def hamilton_over_Q():
    _, Li, *_ = towers()
    return CyclicAlgebra(Li, autos()["sigma_i"], -1, division_asserted=True, name="(-1,-1)_Q")


@functools.lru_cache(maxsize=None)
def quaternion_over_F():
    """(-1,-1) over Q(s), s^2 = -7, on K = Q(s, i)."""
    K = towers()[4]
    return CyclicAlgebra(K, autos()["sigma_K"], -1, division_asserted=True, name="(-1,-1)_F")


@functools.lru_cache(maxsize=None)
def silver(d="s"):
    Fs = towers()[2]
    return tensor_construct(hamilton_over_Q(), autos()["tau_s"], Fs(d))


@functools.lru_cache(maxsize=None)
def quat_cubic():
    Ft = towers()[3]
    return tensor_construct(hamilton_over_Q(), autos()["tau_theta"], Ft("theta"))


@pytest.fixture
def rng():
    return random.Random(20240611)
