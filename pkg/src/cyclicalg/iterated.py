"""Iterated algebras It(D, tau, d) and their division certification.

An element is ``x = x_0 + f x_1 + ... + f^(m-1) x_(m-1)`` with parts in an
associative cyclic algebra D = (K/F, sigma, c), multiplied by

    (f^i x)(f^j y) = f^(i+j) tau~^j(x) y          if i + j < m
                   = f^(i+j-m) tau~^j(x) y d      otherwise,

where tau~ applies tau to every K-coefficient.  The algebra coincides with
the Petit algebra S_f for f = t^m - d over D[t; tau~^-1].
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg
from .algebra import (AlgebraError, AlgElement, CyclicAlgebra, InternalInvariantError,
                      ZeroDivisorWitness, cyclic_division_probe, is_prime, lambda_matrix,
                      reduced_norm)
from .numberfield import (FieldAutomorphism, FieldElement, FieldError, FieldTower,
                          aut_commute_check, fixed_field_basis, is_fixed_by, relative_norm)
from .search import vectors_by_height
from .skewpoly import (FactorWitness, SkewPoly, SkewRing, linear_factor_search,
                       petit_mul, quadratic_factor_search)


class DegreeCollapse(AlgebraError):
    """The composite of two fields is not a field of the expected degree."""


class IteratedAlgebra:
    def __init__(self, D: CyclicAlgebra, tau: FieldAutomorphism, d, *,
                 name: str | None = None, check: bool = True):
        if not D.associative:
            raise AlgebraError("the coefficient algebra D must be associative")
        if tau.tower != D.K:
            raise AlgebraError("tau does not act on the field of D")
        self.D = D
        self.K = D.K
        self.tau = tau
        self.n = D.n
        self.m = tau.exact_order
        self.name = name
        self.d = D(d)
        if self.d.is_zero():
            raise AlgebraError("d must be nonzero")
        if check:
            if not aut_commute_check(D.sigma, tau):
                raise AlgebraError("sigma and tau do not commute")
            if tau(D.c) != D.c:
                raise AlgebraError("c is not fixed by tau (c must lie in F_0)")
        self._tau = [tau.power(k) for k in range(self.m)]
        self.d_in_F = self.d.is_central_scalar()
        self._f0_basis: list[FieldElement] | None = None

    def __repr__(self):
        return (f"IteratedAlgebra({self.name or ''}: n={self.n}, m={self.m}, "
                f"d={self.d.to_strings()})")

    def __eq__(self, other):
        return (isinstance(other, IteratedAlgebra) and self.D == other.D
                and self.tau == other.tau and self.d == other.d)

    def __hash__(self):
        return hash((self.D, self.tau, self.d))

    @property
    def dim_q(self) -> int:
        return self.m * self.D.dim_q

    @property
    def d_scalar(self) -> FieldElement:
        if not self.d_in_F:
            raise AlgebraError("d does not lie in F")
        return self.d.coeffs[0]

    def f0_basis(self) -> list[FieldElement]:
        """Q-basis of F_0 = Fix(sigma) cap Fix(tau) inside K."""
        if self._f0_basis is None:
            self._f0_basis = fixed_field_basis(self.K, [self.D.sigma, self.tau])
        return self._f0_basis

    def in_F0(self, x: FieldElement) -> bool:
        return is_fixed_by(x, self.D.sigma) and is_fixed_by(x, self.tau)

    # -- elements --------------------------------------------------------------

    def element(self, parts: Sequence) -> ItElement:
        if len(parts) != self.m:
            raise AlgebraError(f"expected {self.m} parts, got {len(parts)}")
        return ItElement(self, tuple(self.D(p) for p in parts))

    def __call__(self, value) -> ItElement:
        if isinstance(value, ItElement):
            if value.algebra != self:
                raise AlgebraError("element of a different iterated algebra")
            return value
        if isinstance(value, (list, tuple)):
            return self.element(value)
        return self.element([value] + [0] * (self.m - 1))

    def zero(self) -> ItElement:
        return self.element([0] * self.m)

    def one(self) -> ItElement:
        return self(1)

    def f_power(self, i: int) -> ItElement:
        return self.element([1 if k == i else 0 for k in range(self.m)])

    def from_vector(self, vec: Sequence) -> ItElement:
        w = self.D.dim_q
        return ItElement(self, tuple(self.D.from_vector(vec[i * w:(i + 1) * w])
                                     for i in range(self.m)))

    def random_element(self, rng: random.Random, h: int = 3) -> ItElement:
        return ItElement(self, tuple(self.D.random_element(rng, h) for _ in range(self.m)))

    def tau_tilde(self, x: AlgElement, k: int = 1) -> AlgElement:
        phi = self._tau[k % self.m]
        return AlgElement(x.algebra, tuple(phi(a) for a in x.coeffs))

    def basis_over_F(self) -> list[ItElement]:
        """f^i e^j b with b running over a basis of K as an F-vector space."""
        kb = field_basis_over(self.K, fixed_field_basis(self.K, [self.D.sigma]))
        out = []
        for i in range(self.m):
            for j in range(self.n):
                for b in kb:
                    parts = [self.D.zero()] * self.m
                    parts[i] = self.D.e_power(j) * b
                    out.append(ItElement(self, tuple(parts)))
        return out

    def basis_q(self) -> list[ItElement]:
        out = []
        for i in range(self.m):
            for x in self.D.basis_q():
                parts = [self.D.zero()] * self.m
                parts[i] = x
                out.append(ItElement(self, tuple(parts)))
        return out

    # -- multiplication ----------------------------------------------------------

    def mul(self, x: ItElement, y: ItElement) -> ItElement:
        m, D = self.m, self.D
        out = [D.zero()] * m
        for i, a in enumerate(x.parts):
            if a.is_zero():
                continue
            for j, b in enumerate(y.parts):
                if b.is_zero():
                    continue
                t = self.tau_tilde(a, j) * b
                k = i + j
                if k >= m:
                    k -= m
                    t = t * self.d
                out[k] = out[k] + t
        return ItElement(self, tuple(out))


def field_basis_over(K: FieldTower, sub_basis: Sequence[FieldElement]) -> list[FieldElement]:
    """Power-basis elements of K forming a basis over the subfield spanned by ``sub_basis``."""
    chosen: list[FieldElement] = []
    rows: list[list[Fraction]] = []
    target = K.degree // len(sub_basis)
    for b in K.basis():
        trial = rows + [list((b * s).coeffs) for s in sub_basis]
        if linalg.rank_q(trial) == len(trial):
            rows = trial
            chosen.append(b)
            if len(chosen) == target:
                break
    if len(chosen) != target:
        raise InternalInvariantError("could not extract a relative basis")
    return chosen


@dataclass(frozen=True, eq=False)
class ItElement:
    algebra: IteratedAlgebra
    parts: tuple[AlgElement, ...]

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.parts)

    def __bool__(self):
        return not self.is_zero()

    def _other(self, other) -> ItElement:
        if isinstance(other, ItElement):
            if other.algebra is not self.algebra and other.algebra != self.algebra:
                raise AlgebraError("elements of different iterated algebras")
            return other
        return self.algebra(other)

    def __add__(self, other):
        other = self._other(other)
        return ItElement(self.algebra, tuple(a + b for a, b in zip(self.parts, other.parts)))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._other(other)
        return ItElement(self.algebra, tuple(a - b for a, b in zip(self.parts, other.parts)))

    def __neg__(self):
        return ItElement(self.algebra, tuple(-a for a in self.parts))

    def __mul__(self, other):
        return self.algebra.mul(self, self._other(other))

    def __eq__(self, other):
        if not isinstance(other, ItElement):
            try:
                other = self.algebra(other)
            except (AlgebraError, FieldError, TypeError):
                return NotImplemented
        return self.algebra == other.algebra and self.parts == other.parts

    def __hash__(self):
        return hash(self.parts)

    def k_vector(self) -> list[FieldElement]:
        """K-coordinates on the right K-basis f^i e^j (length nm)."""
        out = []
        for p in self.parts:
            out.extend(p.coeffs)
        return out

    def vector(self) -> list[Fraction]:
        out = []
        for p in self.parts:
            out.extend(p.vector())
        return out

    def to_strings(self) -> list[list[str]]:
        return [p.to_strings() for p in self.parts]

    def __repr__(self):
        return f"ItElement({self.to_strings()})"


def it_mul(x: ItElement, y: ItElement) -> ItElement:
    return x * x._other(y)


# -- the S_f correspondence ------------------------------------------------------

def petit_ring(A: IteratedAlgebra) -> tuple[SkewRing, SkewPoly]:
    """R = D[t; tau~^-1] and f = t^m - d."""
    R = SkewRing(A.D, A.tau.inverse(), check=True)
    return R, R.t_power_minus(A.m, A.d)


def to_petit(x: ItElement, R: SkewRing) -> SkewPoly:
    # f^i x_i corresponds to t^i x_i = tau~^-i(x_i) t^i
    A = x.algebra
    return SkewPoly(R, tuple(A.tau_tilde(p, -i) for i, p in enumerate(x.parts)))


def from_petit(g: SkewPoly, A: IteratedAlgebra) -> ItElement:
    parts = [A.D.zero()] * A.m
    for i, a in enumerate(g.coeffs):
        parts[i] = A.tau_tilde(a, i)
    return ItElement(A, tuple(parts))


def petit_iso_check(A: IteratedAlgebra, *, random_pairs: int = 500, full_q_basis: bool = False,
                    seed: int = 0, height: int = 2) -> bool:
    """Compare it_mul with petit multiplication in S_f on basis and random pairs."""
    if A.m == 1:
        return True
    R, f = petit_ring(A)
    basis = A.basis_q() if full_q_basis else A.basis_over_F()
    pairs = [(x, y) for x in basis for y in basis]
    rng = random.Random(seed)
    pairs += [(A.random_element(rng, height), A.random_element(rng, height))
              for _ in range(random_pairs)]
    for x, y in pairs:
        direct = x * y
        via = from_petit(petit_mul(to_petit(x, R), to_petit(y, R), f), A)
        if direct != via:
            return False
    return True


# -- matrices ----------------------------------------------------------------------

def _apply_matrix(phi: FieldAutomorphism, M):
    return [[phi(v) for v in row] for row in M]


def it_lambda(x: ItElement) -> list[list[FieldElement]]:
    """nm x nm matrix of y -> x y on K-coordinates; requires d in F.

    Block (k, j) is tau^j(lambda(x_(k-j mod m))), scaled by d when k < j.
    """
    A = x.algebra
    m, n = A.m, A.n
    d = A.d_scalar
    lams = [lambda_matrix(p) for p in x.parts]
    zero = A.K.zero()
    M = [[zero] * (n * m) for _ in range(n * m)]
    for k in range(m):
        for j in range(m):
            i = (k - j) % m
            if x.parts[i].is_zero():
                continue
            block = _apply_matrix(A._tau[j], lams[i]) if j else lams[i]
            for r in range(n):
                for s in range(n):
                    v = block[r][s]
                    if v and k < j:
                        v = d * v
                    M[k * n + r][j * n + s] = v
    return M


def m_A(x: ItElement) -> FieldElement:
    """det it_lambda(x); always lies in F."""
    det = linalg.det_bareiss(it_lambda(x))
    if not is_fixed_by(det, x.algebra.D.sigma):
        raise InternalInvariantError(f"M_A(x) = {det} does not lie in F")
    return det


def norm_to_F0(x: AlgElement, A: IteratedAlgebra) -> FieldElement:
    """N_{F/F_0}(N_{D/F}(x)) for x in D."""
    return relative_norm(reduced_norm(x), A.tau)


# -- tensor products ---------------------------------------------------------------

def _is_field(K: FieldTower, attempts: int = 12) -> bool:
    """True if some element has an irreducible characteristic polynomial of degree [K:Q]."""
    import sympy

    if K.degree == 1:
        return True
    X = sympy.Symbol("X")
    gens = list(K.generators().values())
    rng = random.Random(7)
    cands = [sum((g * (k + 1) for k, g in enumerate(gens)), K.zero())]
    for _ in range(attempts - 1):
        cands.append(sum((g * rng.randint(-3, 3) for g in gens), K.zero())
                     + gens[0] * gens[-1] * rng.randint(0, 2))
    for x in cands:
        rows = [[sympy.Rational(q.numerator, q.denominator) for q in (x * b).coeffs]
                for b in K.basis()]
        cp = sympy.Matrix(rows).charpoly(X).as_expr()
        _, factors = sympy.factor_list(cp, X)
        if len(factors) == 1 and factors[0][1] == 1:
            return True
    return False


def tensor_construct(D0: CyclicAlgebra, tau: FieldAutomorphism, d, *,
                     name: str | None = None, check_field: bool = True):
    """(L/Q, sigma, c) tensor (F/Q, tau, d) as It(D0 tensor F, tau, d).

    D0 lives on a tower L over Q and tau on a tower F over Q; K is F extended
    by the levels of L.  Returns D0 itself when tau is the identity.
    """
    F = tau.tower
    L = D0.K
    if not D0.associative:
        raise AlgebraError("c must lie in the fixed field of sigma")
    if tau.exact_order == 1:
        return D0
    if set(F.names) & set(L.names):
        raise AlgebraError("L and F must use distinct generator names")
    K = F
    for gen, minpoly, root in L.levels():
        K = K.extend(gen, minpoly, root)
    if check_field and not _is_field(K):
        raise DegreeCollapse(
            f"L and F are not linearly disjoint: the composite ring of degree {K.degree} "
            "is not a field")
    sigma_K = FieldAutomorphism(K, {g: K(D0.sigma.images[g].to_string()) for g in L.names})
    tau_K = FieldAutomorphism(K, {g: K(tau.images[g].to_string()) for g in F.names})
    D = CyclicAlgebra(K, sigma_K, K(D0.c.to_string()),
                      division_asserted=D0.division_asserted,
                      name=f"{D0.name or 'D0'} tensor F")
    d_K = K(d.to_string()) if isinstance(d, FieldElement) else K(d)
    if not is_fixed_by(d_K, sigma_K):
        raise AlgebraError("d must lie in F")
    return IteratedAlgebra(D, tau_K, d_K, name=name)


# -- subalgebras ------------------------------------------------------------------

def subalgebra_restriction_check(A: IteratedAlgebra) -> bool:
    """it_mul on K + fK + ... + f^(m-1)K equals (K/Fix(tau), tau, d)."""
    if A.m == 1:
        return True
    if not A.d_in_F:
        return False
    C = CyclicAlgebra(A.K, A.tau, A.d_scalar)
    kbasis = A.K.basis()
    elems = []
    for i in range(A.m):
        for b in kbasis:
            parts = [A.D.zero()] * A.m
            parts[i] = A.D.scalar(b)
            elems.append((ItElement(A, tuple(parts)), C.e_power(i) * b))
    for x, cx in elems:
        for y, cy in elems:
            prod = x * y
            if not all(p.is_scalar() for p in prod.parts):
                return False
            if tuple(p.coeffs[0] for p in prod.parts) != (cx * cy).coeffs:
                return False
    return True


def even_subalgebra_closed(A: IteratedAlgebra, samples: int = 50, seed: int = 0) -> bool:
    """For even m: D + f^(m/2) D is closed under multiplication (random samples)."""
    if A.m % 2:
        raise AlgebraError("m must be even")
    s = A.m // 2
    rng = random.Random(seed)

    def sample():
        parts = [A.D.zero()] * A.m
        parts[0] = A.D.random_element(rng, 2)
        parts[s] = A.D.random_element(rng, 2)
        return ItElement(A, tuple(parts))

    for _ in range(samples):
        p = sample() * sample()
        if any(not q.is_zero() for k, q in enumerate(p.parts) if k not in (0, s)):
            return False
    return True


# -- certification ----------------------------------------------------------------

@dataclass(frozen=True)
class CriterionOutcome:
    name: str
    kind: str                  # precondition | structural | sufficient | falsifier
    holds: bool
    hypotheses: dict = field(default_factory=dict)
    detail: str = ""


@dataclass(frozen=True)
class ItWitness:
    """Zero divisors x y = 0 in the iterated algebra, with their origin."""
    x: ItElement
    y: ItElement
    source: str
    factor: FactorWitness | None = None
    z: AlgElement | None = None

    def verify(self) -> bool:
        return bool(self.x) and bool(self.y) and (self.x * self.y).is_zero()


@dataclass(frozen=True)
class DivisionVerdict:
    status: str                # Division | NotDivision | Unknown
    chain: tuple[CriterionOutcome, ...]
    witness: ItWitness | None = None
    assumptions: tuple[str, ...] = ()

    @property
    def certificate(self) -> str | None:
        if self.status == "Division":
            return next(c.name for c in self.chain if c.holds and c.kind != "precondition")
        return None


def _dimension_ok(A: IteratedAlgebra) -> bool:
    return len(A.f0_basis()) * A.n * A.m == A.K.degree


def root_of_unity_gate(A: IteratedAlgebra, height: int = 2) -> bool:
    """F_0 contains a primitive m-th root of unity (trivially true for m in {2, 3})."""
    m = A.m
    if m in (1, 2, 3):
        return True
    basis = A.f0_basis()
    if len(basis) == 1:
        return m <= 2
    one = A.K.one()
    for vec in vectors_by_height(len(basis), height):
        z = sum((b * q for b, q in zip(basis, vec)), A.K.zero())
        if z ** m == one and all(z ** k != one for k in range(1, m) if m % k == 0):
            return True
    return False


def _common_hypotheses(A: IteratedAlgebra) -> dict:
    return {"D division (asserted)": A.D.division_asserted, "d in F": A.d_in_F}


def hyp_biquaternion(A: IteratedAlgebra) -> dict:
    h = _common_hypotheses(A)
    h["n = 2"] = A.n == 2
    h["m = 2"] = A.m == 2
    h["[K:F_0] = nm"] = _dimension_ok(A)
    h["d not in F_0"] = A.d_in_F and not A.in_F0(A.d_scalar)
    return h


def _quadratic_class(A: IteratedAlgebra) -> Fraction | None:
    """beta^2 for some beta in F with tau(beta) = -beta, when F_0 = Q; else None."""
    if len(A.f0_basis()) != 1 or A.m != 2:
        return None
    tau = A.tau
    for g in fixed_field_basis(A.K, [A.D.sigma]):
        beta = g - tau(g)
        if beta:
            sq = beta * beta
            if not sq.is_rational():
                raise InternalInvariantError("beta^2 is not rational")
            return sq.coeffs[0]
    return None


def _is_rational_square(q: Fraction) -> bool:
    import math
    if q <= 0:
        return False
    a, b = q.numerator, q.denominator
    return math.isqrt(a) ** 2 == a and math.isqrt(b) ** 2 == b


def hyp_3xquat_i(A: IteratedAlgebra) -> dict:
    h = _common_hypotheses(A)
    h["n = 3"] = A.n == 3
    h["m = 2"] = A.m == 2
    h["[K:F_0] = nm"] = _dimension_ok(A)
    ok = A.d_in_F and A.m == 2
    h["d not in F_0"] = ok and not A.in_F0(A.d_scalar)
    if ok:
        d = A.d_scalar
        d0 = (d + A.tau(d)) / 2
        sqrt_b_d1 = (d - A.tau(d)) / 2
        h["3 d0^2 + b d1^2 != 0"] = not (d0 * d0 * 3 + sqrt_b_d1 * sqrt_b_d1).is_zero()
    else:
        h["3 d0^2 + b d1^2 != 0"] = False
    return h


def hyp_3xquat_ii(A: IteratedAlgebra) -> dict:
    h = _common_hypotheses(A)
    h["n = 3"] = A.n == 3
    h["m = 2"] = A.m == 2
    h["[K:F_0] = nm"] = _dimension_ok(A)
    h["F_0 = Q"] = len(A.f0_basis()) == 1
    h["d not in F_0"] = A.d_in_F and A.m == 2 and not A.in_F0(A.d_scalar)
    b = _quadratic_class(A) if h["F_0 = Q"] else None
    h["b > 0 or -b/3 not a rational square"] = (
        b is not None and (b > 0 or not _is_rational_square(-b / 3)))
    return h


def _prime_gate(A: IteratedAlgebra) -> dict:
    return {"m prime": is_prime(A.m),
            "m in {2,3} or primitive m-th root of unity in F_0": root_of_unity_gate(A)}


def hyp_tau_power(A: IteratedAlgebra) -> dict:
    h = _common_hypotheses(A)
    h.update(_prime_gate(A))
    if A.d_in_F:
        dn = A.d_scalar ** A.n
        h["tau(d^n) != d^n"] = A.tau(dn) != dn
    else:
        h["tau(d^n) != d^n"] = False
    return h


def hyp_outside_F0(A: IteratedAlgebra) -> dict:
    h = _common_hypotheses(A)
    h.update(_prime_gate(A))
    h["d not in F_0"] = A.d_in_F and not A.in_F0(A.d_scalar)
    h["d^n not in F_0"] = A.d_in_F and not A.in_F0(A.d_scalar ** A.n)
    return h


STRUCTURAL = (("biquaternion", hyp_biquaternion),
              ("3xquat(ii)", hyp_3xquat_ii),
              ("3xquat(i)", hyp_3xquat_i))
SUFFICIENT = (("tau(d^n)!=d^n", hyp_tau_power),
              ("d in F minus F_0 with d^n not in F_0", hyp_outside_F0))
CRITERIA = dict(STRUCTURAL + SUFFICIENT)


def recheck_certificate(A: IteratedAlgebra, name: str) -> tuple[bool, dict]:
    """Recompute the hypotheses of a named positive criterion from scratch."""
    if name not in CRITERIA:
        raise KeyError(f"unknown criterion {name!r}")
    hyp = CRITERIA[name](A)
    return all(hyp.values()), hyp


def witness_from_factor(A: IteratedAlgebra, wit: FactorWitness, source: str) -> ItWitness:
    """f = q g in D[t; tau~^-1] gives q o g = 0 in S_f, hence zero divisors of A."""
    x = from_petit(wit.left, A)
    y = from_petit(wit.right, A)
    z = None
    if wit.right.degree == 1:
        # right factor t - w;  d = z tau~(z) ... tau~^(m-1)(z) with z = tau~(w)
        z = A.tau_tilde(-wit.right.coeffs[0], 1)
    out = ItWitness(x, y, source, factor=wit, z=z)
    if not out.verify():
        raise InternalInvariantError("factor does not yield zero divisors")
    return out


def norm_product(z: AlgElement, A: IteratedAlgebra) -> AlgElement:
    """z tau~(z) ... tau~^(m-1)(z)."""
    out = z
    for k in range(1, A.m):
        out = out * A.tau_tilde(z, k)
    return out


def division_certify(A: IteratedAlgebra, budget: int = 1, *,
                     search_cap: int = 20_000) -> DivisionVerdict:
    """Structural criteria, then sufficient conditions, then bounded falsifiers."""
    chain: list[CriterionOutcome] = []
    assumptions = ("D division (asserted)",) if A.D.division_asserted else ()
    pre = {"sigma and tau commute": aut_commute_check(A.D.sigma, A.tau),
           "c in F_0": A.in_F0(A.D.c),
           "d nonzero": not A.d.is_zero(),
           "d in F": A.d_in_F}
    chain.append(CriterionOutcome("setup", "precondition", all(pre.values()), pre))

    if A.m == 1:
        probe = cyclic_division_probe(A.D, budget, max_candidates=search_cap)
        if isinstance(probe, ZeroDivisorWitness):
            chain.append(CriterionOutcome("D norm search", "falsifier", True,
                                          detail=probe.note))
            w = ItWitness(A.element([probe.x]), A.element([probe.y]), "D norm search")
            return DivisionVerdict("NotDivision", tuple(chain), w, assumptions)
        ok = A.D.division_asserted
        chain.append(CriterionOutcome("m = 1 (algebra equals D)", "structural", ok,
                                      {"D division (asserted)": ok}))
        return DivisionVerdict("Division" if ok else "Unknown", tuple(chain), None, assumptions)

    for kind, table in (("structural", STRUCTURAL), ("sufficient", SUFFICIENT)):
        for name, fn in table:
            hyp = fn(A)
            holds = all(hyp.values())
            chain.append(CriterionOutcome(name, kind, holds, hyp))
            if holds:
                return DivisionVerdict("Division", tuple(chain), None, assumptions)

    # falsifiers
    if not A.D.division_asserted:
        probe = cyclic_division_probe(A.D, budget, max_candidates=search_cap)
        found = isinstance(probe, ZeroDivisorWitness)
        chain.append(CriterionOutcome("D norm search", "falsifier", found,
                                      detail=getattr(probe, "note", "")))
        if found:
            w = ItWitness(A.element([probe.x] + [0] * (A.m - 1)),
                          A.element([probe.y] + [0] * (A.m - 1)), "D norm search")
            return DivisionVerdict("NotDivision", tuple(chain), w, assumptions)

    R, f = petit_ring(A)
    wit, searched = linear_factor_search(f, budget, max_candidates=search_cap)
    chain.append(CriterionOutcome(
        "d = z tau~(z) ... tau~^(m-1)(z) search", "falsifier", wit is not None,
        detail=f"{searched} candidates, height <= {budget}"))
    if wit is not None:
        w = witness_from_factor(A, wit, "linear factor of t^m - d")
        if norm_product(w.z, A) != A.d:
            raise InternalInvariantError("linear factor does not match the norm product")
        return DivisionVerdict("NotDivision", tuple(chain), w, assumptions)
    if A.m == 4:
        wit, searched = quadratic_factor_search(f, budget, max_candidates=search_cap)
        chain.append(CriterionOutcome("quadratic right factor search", "falsifier",
                                      wit is not None,
                                      detail=f"{searched} candidates, height <= {budget}"))
        if wit is not None:
            w = witness_from_factor(A, wit, "quadratic factor of t^4 - d")
            return DivisionVerdict("NotDivision", tuple(chain), w, assumptions)
    return DivisionVerdict("Unknown", tuple(chain), None, assumptions)
