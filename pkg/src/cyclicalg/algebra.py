"""Associative and nonassociative cyclic algebras (K/F, sigma, c).

Elements are written ``x = x_0 + e x_1 + ... + e^(n-1) x_(n-1)`` with the
K-coefficients on the right, and multiply by

    (e^i a)(e^j b) = e^(i+j) sigma^j(a) b              if i + j < n
                   = e^(i+j-n) c sigma^j(a) b          otherwise.

The algebra is associative exactly when c lies in the fixed field F of sigma.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Sequence

from . import linalg
from .numberfield import (FieldAutomorphism, FieldElement, FieldError, FieldTower,
                          aut_commute_check, is_fixed_by, relative_norm)
from .search import random_vector, vectors_by_height


class AlgebraError(ValueError):
    pass


class AlgebraMismatch(AlgebraError):
    pass


class InternalInvariantError(AssertionError):
    """An exact invariant that must hold by construction failed."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % p for p in range(2, math.isqrt(n) + 1))


class CyclicAlgebra:
    def __init__(self, K: FieldTower, sigma: FieldAutomorphism, c, *,
                 division_asserted: bool = False, name: str | None = None):
        if sigma.tower != K:
            raise AlgebraError("sigma does not act on K")
        self.K = K
        self.sigma = sigma
        self.n = sigma.exact_order
        self.c = K(c)
        if self.c.is_zero():
            raise AlgebraError("structure constant c must be nonzero")
        self.name = name
        self.associative = is_fixed_by(self.c, sigma)
        self.division_asserted = division_asserted
        self._sig = [sigma.power(j) for j in range(self.n)]
        self._commutes: dict[int, bool] = {}

    def __repr__(self):
        kind = "associative" if self.associative else "nonassociative"
        return f"CyclicAlgebra({self.name or ''}: n={self.n}, c={self.c}, {kind})"

    @property
    def dim_q(self) -> int:
        return self.n * self.K.degree

    def __eq__(self, other):
        return (isinstance(other, CyclicAlgebra) and self.K == other.K
                and self.sigma == other.sigma and self.c == other.c)

    def __hash__(self):
        return hash((self.K, self.c, self.n))

    # -- elements ----------------------------------------------------------

    def element(self, coeffs: Sequence) -> AlgElement:
        if len(coeffs) != self.n:
            raise AlgebraError(f"expected {self.n} coefficients, got {len(coeffs)}")
        return AlgElement(self, tuple(self.K(c) for c in coeffs))

    def __call__(self, value) -> AlgElement:
        if isinstance(value, AlgElement):
            if value.algebra != self:
                raise AlgebraMismatch("element of a different algebra")
            return value
        if isinstance(value, (list, tuple)):
            return self.element(value)
        return self.scalar(value)

    def scalar(self, k) -> AlgElement:
        z = self.K.zero()
        return AlgElement(self, (self.K(k),) + (z,) * (self.n - 1))

    def zero(self) -> AlgElement:
        z = self.K.zero()
        return AlgElement(self, (z,) * self.n)

    def one(self) -> AlgElement:
        return self.scalar(1)

    def e_power(self, i: int) -> AlgElement:
        z, o = self.K.zero(), self.K.one()
        return AlgElement(self, tuple(o if k == i else z for k in range(self.n)))

    def basis_q(self) -> list[AlgElement]:
        """Q-basis e^i * b with b running over the power basis of K."""
        out = []
        for i in range(self.n):
            for b in self.K.basis():
                out.append(self.e_power(i) * b)
        return out

    def from_vector(self, vec: Sequence) -> AlgElement:
        N = self.K.degree
        return self.element([self.K.element(vec[i * N:(i + 1) * N]) for i in range(self.n)])

    def random_element(self, rng: random.Random, h: int = 3) -> AlgElement:
        return self.from_vector(random_vector(rng, self.dim_q, h))

    def sigma_power(self, j: int) -> FieldAutomorphism:
        return self._sig[j % self.n]

    # -- multiplication ------------------------------------------------------

    def mul(self, x: AlgElement, y: AlgElement) -> AlgElement:
        n, c = self.n, self.c
        out = [self.K.zero()] * n
        for i, a in enumerate(x.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(y.coeffs):
                if b.is_zero():
                    continue
                t = self._sig[j](a) * b
                k = i + j
                if k >= n:
                    k -= n
                    t = c * t
                out[k] = out[k] + t
        return AlgElement(self, tuple(out))

    def commutes_with(self, tau: FieldAutomorphism) -> bool:
        key = id(tau)
        if key not in self._commutes:
            self._commutes[key] = aut_commute_check(self.sigma, tau)
        return self._commutes[key]


@dataclass(frozen=True, eq=False)
class AlgElement:
    algebra: CyclicAlgebra
    coeffs: tuple[FieldElement, ...]

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def _check(self, other: AlgElement):
        if other.algebra is not self.algebra and other.algebra != self.algebra:
            raise AlgebraMismatch("elements of different algebras")

    def __add__(self, other):
        if not isinstance(other, AlgElement):
            other = self.algebra(other)
        self._check(other)
        return AlgElement(self.algebra, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, AlgElement):
            other = self.algebra(other)
        self._check(other)
        return AlgElement(self.algebra, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return self.algebra(other) - self

    def __neg__(self):
        return AlgElement(self.algebra, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, AlgElement):
            self._check(other)
            return self.algebra.mul(self, other)
        # right scalar: (e^i x_i) k = e^i (x_i k)
        k = self.algebra.K(other)
        return AlgElement(self.algebra, tuple(a * k for a in self.coeffs))

    def __rmul__(self, other):
        # left scalar: k (e^i x_i) = e^i sigma^i(k) x_i
        k = self.algebra.K(other)
        A = self.algebra
        return AlgElement(A, tuple(A.sigma_power(i)(k) * a for i, a in enumerate(self.coeffs)))

    def __pow__(self, e: int):
        """Left-normed power ((x x) x) ...; equals the usual power when associative."""
        if e < 0:
            return self.inverse() ** (-e)
        out = self.algebra.one()
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, AlgElement):
            return self.algebra == other.algebra and self.coeffs == other.coeffs
        try:
            return self == self.algebra(other)
        except (TypeError, FieldError, AlgebraError):
            return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def vector(self) -> list:
        out = []
        for c in self.coeffs:
            out.extend(c.coeffs)
        return out

    def height(self) -> int:
        return max(c.height() for c in self.coeffs)

    def is_scalar(self) -> bool:
        """True when x lies in K (only the e^0 coefficient is nonzero)."""
        return all(c.is_zero() for c in self.coeffs[1:])

    def is_central_scalar(self) -> bool:
        """True when x lies in F = Fix(sigma)."""
        return self.is_scalar() and is_fixed_by(self.coeffs[0], self.algebra.sigma)

    def inverse(self) -> AlgElement:
        A = self.algebra
        if not A.associative:
            raise AlgebraError("inverse is only provided in associative algebras")
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        rhs = [A.K.one()] + [A.K.zero()] * (A.n - 1)
        sol = linalg.solve(lambda_matrix(self), rhs)
        if sol is None:
            raise ZeroDivisionError(f"{self} is a zero divisor")
        return AlgElement(A, tuple(sol))

    def to_strings(self) -> list[str]:
        return [c.to_string() for c in self.coeffs]

    def __repr__(self):
        return f"AlgElement({self.to_strings()})"


def alg_mul(x: AlgElement, y: AlgElement) -> AlgElement:
    x._check(y)
    return x.algebra.mul(x, y)


def lambda_matrix(x: AlgElement) -> list[list[FieldElement]]:
    """Matrix of y -> x y on the right K-module basis 1, e, ..., e^(n-1).

    Column j holds the coefficients of x e^j, so that
    coeffs(x y) = lambda_matrix(x) . coeffs(y).
    """
    A = x.algebra
    n = A.n
    zero = A.K.zero()
    M = [[zero] * n for _ in range(n)]
    for j in range(n):
        sj = A.sigma_power(j)
        for i, a in enumerate(x.coeffs):
            if a.is_zero():
                continue
            v = sj(a)
            k = i + j
            if k >= n:
                k -= n
                v = A.c * v
            M[k][j] = v
    return M


def associator(x: AlgElement, y: AlgElement, z: AlgElement) -> AlgElement:
    return (x * y) * z - x * (y * z)


@dataclass(frozen=True)
class NucleusMembership:
    left: bool
    middle: bool
    right: bool

    @property
    def full(self) -> bool:
        return self.left and self.middle and self.right


def nucleus_decide(x: AlgElement) -> NucleusMembership:
    """Exact nucleus membership; the associator is Q-trilinear so basis pairs suffice."""
    basis = x.algebra.basis_q()
    left = middle = right = True
    for a in basis:
        for b in basis:
            if left and associator(x, a, b):
                left = False
            if middle and associator(a, x, b):
                middle = False
            if right and associator(a, b, x):
                right = False
            if not (left or middle or right):
                return NucleusMembership(False, False, False)
    return NucleusMembership(left, middle, right)


def tau_tilde(x: AlgElement, tau: FieldAutomorphism) -> AlgElement:
    """Coefficient-wise application of tau."""
    A = x.algebra
    if not A.commutes_with(tau):
        raise AlgebraError("tau does not commute with the algebra's sigma")
    return AlgElement(A, tuple(tau(a) for a in x.coeffs))


def reduced_norm(x: AlgElement) -> FieldElement:
    A = x.algebra
    if not A.associative:
        raise AlgebraError("reduced norm requested for a nonassociative algebra")
    det = linalg.det_bareiss(lambda_matrix(x))
    if not is_fixed_by(det, A.sigma):
        raise InternalInvariantError(f"det lambda(x) = {det} is not in F")
    return det


# -- division probe ---------------------------------------------------------

@dataclass(frozen=True)
class DivisionCertified:
    reason: str
    assumed: bool = False


@dataclass(frozen=True)
class ZeroDivisorWitness:
    x: AlgElement
    y: AlgElement
    note: str = ""

    def verify(self) -> bool:
        return bool(self.x) and bool(self.y) and (self.x * self.y).is_zero()


@dataclass(frozen=True)
class NormWitness:
    """z with N_{K/F}(z) = c^s; the algebra is not division."""
    z: FieldElement
    s: int

    def verify(self, A: CyclicAlgebra) -> bool:
        return relative_norm(self.z, A.sigma) == A.c ** self.s


@dataclass(frozen=True)
class Unknown:
    reason: str
    searched: int = 0


def _powers_independent_over_fixed_field(A: CyclicAlgebra) -> bool:
    # 1, c, ..., c^(n-1) are F-independent iff det[sigma^a(c^b)] != 0
    pw = [A.c ** b for b in range(A.n)]
    M = [[A.sigma_power(a)(pw[b]) for b in range(A.n)] for a in range(A.n)]
    return bool(linalg.det_bareiss(M))


def cyclic_division_probe(A: CyclicAlgebra, budget: int = 1, *,
                          max_candidates: int = 200_000):
    """Decide or falsify the division property of a cyclic algebra.

    Nonassociative algebras are decided exactly.  For associative ones a
    bounded search for z with N(z) = c^s, 1 <= s < n, is the only tool; with
    no witness the answer is Unknown unless division was asserted.
    """
    if A.n == 1:
        return DivisionCertified("degree 1: the algebra is the field K")
    if not A.associative:
        if is_prime(A.n):
            return DivisionCertified("nonassociative of prime degree")
        if _powers_independent_over_fixed_field(A):
            return DivisionCertified("1, c, ..., c^(n-1) linearly independent over F")
        return Unknown("nonassociative of composite degree with dependent powers of c")
    targets = {s: A.c ** s for s in range(1, A.n)}
    searched = 0
    K = A.K
    for vec in vectors_by_height(K.degree, budget):
        if searched >= max_candidates:
            break
        searched += 1
        z = K.element(vec)
        nz = relative_norm(z, A.sigma)
        for s, cs in targets.items():
            if nz == cs:
                return _norm_to_witness(A, z, s)
    if A.division_asserted:
        return DivisionCertified(
            f"user-asserted (no norm witness among {searched} candidates of height <= {budget})",
            assumed=True)
    return Unknown(f"no norm witness among {searched} candidates of height <= {budget}",
                   searched=searched)


def _norm_to_witness(A: CyclicAlgebra, z: FieldElement, s: int):
    n = A.n
    g = math.gcd(s, n)
    if g != 1:
        return NormWitness(z, s)
    # a*s + b*n = 1  =>  N(z^a c^b) = c^(a s + b n) = c
    a = pow(s, -1, n)
    b = (1 - a * s) // n
    w = z ** a * A.c ** b
    u = A.e_power(1) * w.inverse()          # u^n = c N(w^-1) = 1
    x = u - A.one()
    y = A.zero()
    p = A.one()
    for _ in range(n):
        y = y + p
        p = p * u
    wit = ZeroDivisorWitness(x, y, note=f"N(z) = c^{s} with z = {z}")
    if not wit.verify():
        raise InternalInvariantError("constructed zero-divisor witness does not multiply to 0")
    return wit
