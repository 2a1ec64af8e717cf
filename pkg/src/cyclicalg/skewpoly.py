"""Twisted polynomial rings D[t; sigma] and Petit algebras S_f.

Coefficients are written on the left, ``g = a_0 + a_1 t + ... + a_k t^k``,
and ``t a = sigma(a) t``.  D is either a number field (sigma a field
automorphism) or an associative cyclic algebra, in which case sigma acts on
it coefficient-wise (the map written tau-tilde elsewhere).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Sequence, Union

from .algebra import AlgElement, CyclicAlgebra, InternalInvariantError, is_prime
from .numberfield import FieldAutomorphism, FieldTower, aut_commute_check
from .search import random_vector, vectors_by_height

Domain = Union[FieldTower, CyclicAlgebra]
NEG_INF = -math.inf


class SkewPolyError(ValueError):
    pass


class SkewRing:
    """D[t; sigma] for a field or associative cyclic algebra D."""

    def __init__(self, domain: Domain, sigma: FieldAutomorphism, *, check: bool = True,
                 name: str | None = None):
        self.domain = domain
        self.sigma = sigma
        self.name = name
        self.is_algebra = isinstance(domain, CyclicAlgebra)
        K = domain.K if self.is_algebra else domain
        if sigma.tower != K:
            raise SkewPolyError("sigma does not act on the coefficient domain")
        self.order = sigma.exact_order
        self._pows = [sigma.power(k) for k in range(self.order)]
        if self.is_algebra:
            D = domain
            if not D.associative:
                raise SkewPolyError("coefficient algebra must be associative")
            if check:
                if not aut_commute_check(D.sigma, sigma):
                    raise SkewPolyError("twist does not commute with the algebra's sigma")
                if sigma(D.c) != D.c:
                    raise SkewPolyError("twist does not fix the structure constant c")
                self._check_multiplicative()

    def _check_multiplicative(self, samples: int = 10):
        rng = random.Random(0)
        D = self.domain
        for _ in range(samples):
            x, y = D.random_element(rng, 2), D.random_element(rng, 2)
            if self.apply(x * y) != self.apply(x) * self.apply(y):
                raise SkewPolyError("twist is not multiplicative on the coefficient algebra")

    def __repr__(self):
        return f"SkewRing({self.domain!r}, {self.sigma!r})"

    def __eq__(self, other):
        return (isinstance(other, SkewRing) and self.domain == other.domain
                and self.sigma == other.sigma)

    def __hash__(self):
        return hash((self.domain, self.sigma))

    # -- coefficient domain helpers ---------------------------------------------

    def apply(self, a, k: int = 1):
        """sigma^k(a); negative k allowed."""
        phi = self._pows[k % self.order]
        if self.is_algebra:
            return AlgElement(a.algebra, tuple(phi(c) for c in a.coeffs))
        return phi(a)

    def coerce(self, a):
        if self.is_algebra:
            return self.domain(a)
        return self.domain(a)

    def zero_d(self):
        return self.domain.zero()

    def one_d(self):
        return self.domain.one()

    @property
    def dim_q(self) -> int:
        return self.domain.dim_q if self.is_algebra else self.domain.degree

    def from_vector(self, vec):
        if self.is_algebra:
            return self.domain.from_vector(vec)
        return self.domain.element(vec)

    def random_coefficient(self, rng: random.Random, h: int = 3):
        return self.from_vector(random_vector(rng, self.dim_q, h))

    # -- polynomials ------------------------------------------------------------

    def poly(self, coeffs: Sequence) -> SkewPoly:
        return SkewPoly(self, tuple(self.coerce(c) for c in coeffs))

    def t(self) -> SkewPoly:
        return SkewPoly(self, (self.zero_d(), self.one_d()))

    def constant(self, a) -> SkewPoly:
        return SkewPoly(self, (self.coerce(a),))

    def zero(self) -> SkewPoly:
        return SkewPoly(self, ())

    def one(self) -> SkewPoly:
        return self.constant(1)

    def t_power_minus(self, m: int, d) -> SkewPoly:
        """t^m - d."""
        d = self.coerce(d)
        z = self.zero_d()
        return SkewPoly(self, (-d,) + (z,) * (m - 1) + (self.one_d(),))

    def random_poly(self, rng: random.Random, degree: int, h: int = 3, monic=False) -> SkewPoly:
        cs = [self.random_coefficient(rng, h) for _ in range(degree + 1)]
        if monic:
            cs[-1] = self.one_d()
        while cs and cs[-1].is_zero():
            cs[-1] = self.random_coefficient(rng, h)
        return SkewPoly(self, tuple(cs))


def _trim(cs: list) -> tuple:
    while cs and cs[-1].is_zero():
        cs.pop()
    return tuple(cs)


@dataclass(frozen=True, eq=False)
class SkewPoly:
    ring: SkewRing
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(list(self.coeffs)))

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    @property
    def lc(self):
        if not self.coeffs:
            raise SkewPolyError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == self.ring.one_d()

    def coefficient(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.ring.zero_d()

    def _check(self, other: SkewPoly):
        if other.ring is not self.ring and other.ring != self.ring:
            raise SkewPolyError("polynomials from different rings")

    def __add__(self, other: SkewPoly) -> SkewPoly:
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return SkewPoly(self.ring, tuple(self.coefficient(i) + other.coefficient(i)
                                         for i in range(n)))

    def __sub__(self, other: SkewPoly) -> SkewPoly:
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return SkewPoly(self.ring, tuple(self.coefficient(i) - other.coefficient(i)
                                         for i in range(n)))

    def __neg__(self):
        return SkewPoly(self.ring, tuple(-c for c in self.coeffs))

    def __mul__(self, other: SkewPoly) -> SkewPoly:
        return sp_mul(self, other)

    def __eq__(self, other):
        return (isinstance(other, SkewPoly) and self.ring == other.ring
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"SkewPoly({[str(c) for c in self.coeffs]})"


def sp_mul(g: SkewPoly, h: SkewPoly) -> SkewPoly:
    """(a t^i)(b t^j) = a sigma^i(b) t^(i+j)."""
    g._check(h)
    R = g.ring
    if not g.coeffs or not h.coeffs:
        return R.zero()
    out = [R.zero_d()] * (len(g.coeffs) + len(h.coeffs) - 1)
    for i, a in enumerate(g.coeffs):
        if a.is_zero():
            continue
        for j, b in enumerate(h.coeffs):
            if b.is_zero():
                continue
            out[i + j] = out[i + j] + a * R.apply(b, i)
    return SkewPoly(R, tuple(out))


def _inv(a):
    return a.inverse()


def sp_divmod_right(g: SkewPoly, f: SkewPoly) -> tuple[SkewPoly, SkewPoly]:
    """Unique (q, r) with g = q f + r and deg r < deg f."""
    g._check(f)
    R = g.ring
    if f.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    m = f.degree
    monic = f.is_monic()
    r = list(g.coeffs)
    q = [R.zero_d()] * max(len(r) - m, 0)
    lc_inv = {}
    while len(r) - 1 >= m:
        k = len(r) - 1 - m
        if monic:
            c = r[-1]
        else:
            if k not in lc_inv:
                lc_inv[k] = _inv(R.apply(f.lc, k))
            c = r[-1] * lc_inv[k]
        q[k] = c
        for i, fi in enumerate(f.coeffs[:-1]):
            if not fi.is_zero():
                r[i + k] = r[i + k] - c * R.apply(fi, k)
        r.pop()
        while r and r[-1].is_zero():
            r.pop()
    return SkewPoly(R, tuple(q)), SkewPoly(R, tuple(r))


def sp_divmod_left(g: SkewPoly, f: SkewPoly) -> tuple[SkewPoly, SkewPoly]:
    """Unique (q, r) with g = f q + r and deg r < deg f."""
    g._check(f)
    R = g.ring
    if f.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    m = f.degree
    monic = f.is_monic()
    lc_inv = None if monic else _inv(f.lc)
    r = list(g.coeffs)
    q = [R.zero_d()] * max(len(r) - m, 0)
    while len(r) - 1 >= m:
        k = len(r) - 1 - m
        # f (c t^k) has leading coefficient lc(f) sigma^m(c)
        lead = r[-1] if monic else lc_inv * r[-1]
        c = R.apply(lead, -m)
        q[k] = c
        for i, fi in enumerate(f.coeffs[:-1]):
            if not fi.is_zero():
                r[i + k] = r[i + k] - fi * R.apply(c, i)
        r.pop()
        while r and r[-1].is_zero():
            r.pop()
    return SkewPoly(R, tuple(q)), SkewPoly(R, tuple(r))


def mod_right(g: SkewPoly, f: SkewPoly) -> SkewPoly:
    return sp_divmod_right(g, f)[1]


def petit_mul(g: SkewPoly, h: SkewPoly, f: SkewPoly) -> SkewPoly:
    """g o h = g h mod_r f in S_f."""
    if not f.is_monic():
        raise SkewPolyError("petit_mul requires a monic f")
    m = f.degree
    if g.degree >= m or h.degree >= m:
        raise SkewPolyError(f"operands must have degree < {m}")
    return mod_right(sp_mul(g, h), f)


def right_nucleus_member(g: SkewPoly, f: SkewPoly) -> bool:
    """g lies in {g : f g in R f}."""
    if not f.is_monic():
        raise SkewPolyError("right_nucleus_member requires a monic f")
    if g.degree >= f.degree:
        raise SkewPolyError("g must have degree < deg f")
    return mod_right(sp_mul(f, g), f).is_zero()


# -- factor searches and irreducibility ----------------------------------------

def _binomial_constant(f: SkewPoly):
    """Return d when f = t^m - d, else raise."""
    if not f.is_monic() or f.degree < 1:
        raise SkewPolyError("expected a monic polynomial t^m - d")
    for c in f.coeffs[1:-1]:
        if not c.is_zero():
            raise SkewPolyError("expected a polynomial of the shape t^m - d")
    return -f.coeffs[0]


@dataclass(frozen=True)
class FactorWitness:
    left: SkewPoly
    right: SkewPoly

    def verify(self, f: SkewPoly) -> bool:
        return (0 < self.left.degree < f.degree and 0 < self.right.degree < f.degree
                and sp_mul(self.left, self.right) == f)


def linear_factor_search(f: SkewPoly, budget: int = 1, *, max_candidates: int = 100_000):
    """First z (height order) with t - z dividing f on the right, as a FactorWitness."""
    _binomial_constant(f)
    R = f.ring
    searched = 0
    for vec in vectors_by_height(R.dim_q, budget, skip_zero=False):
        if searched >= max_candidates:
            break
        searched += 1
        z = R.from_vector(vec)
        h = R.poly([-z, R.one_d()])
        q, r = sp_divmod_right(f, h)
        if r.is_zero():
            return FactorWitness(q, h), searched
    return None, searched


def quadratic_factor_search(f: SkewPoly, budget: int = 1, *, max_candidates: int = 100_000):
    """Search g = t^2 - z1 t - z0 right-dividing f = t^4 - d."""
    _binomial_constant(f)
    if f.degree != 4:
        raise SkewPolyError("quadratic_factor_search expects deg f = 4")
    R = f.ring
    n = R.dim_q
    searched = 0
    for vec in vectors_by_height(2 * n, budget, skip_zero=False):
        if searched >= max_candidates:
            break
        searched += 1
        z0, z1 = R.from_vector(vec[:n]), R.from_vector(vec[n:])
        g = R.poly([-z0, -z1, R.one_d()])
        q, r = sp_divmod_right(f, g)
        if r.is_zero():
            return FactorWitness(q, g), searched
    return None, searched


def quartic_quadratic_remainder(f: SkewPoly, z0, z1) -> tuple:
    """Closed-form right remainder of t^4 - d by t^2 - z1 t - z0, as (r0, r1).

    r1 = s2(z1) s(z1) z1 + s2(z0) z1 + s2(z1) s(z0)
    r0 = s2(z1) s(z1) z0 + s2(z0) z0 - d
    """
    d = _binomial_constant(f)
    R = f.ring
    s = lambda a, k=1: R.apply(a, k)
    r1 = s(z1, 2) * s(z1) * z1 + s(z0, 2) * z1 + s(z1, 2) * s(z0)
    r0 = s(z1, 2) * s(z1) * z0 + s(z0, 2) * z0 - d
    return r0, r1


@dataclass(frozen=True)
class SufficientCondition:
    """A named sufficient criterion with its machine-checked hypotheses."""
    name: str
    hypotheses: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return bool(self.hypotheses) and all(self.hypotheses.values())


@dataclass(frozen=True)
class IrreducibilityVerdict:
    status: str                      # Irreducible | Reducible | Unknown
    certificate: str
    witness: FactorWitness | None = None
    hypotheses: dict = field(default_factory=dict)
    searched: int = 0


def tau_power_criterion(f: SkewPoly, *, root_of_unity: bool = False) -> SufficientCondition:
    """Hypotheses for 'tau(d^n) != d^n' on f = t^m - d over a cyclic algebra."""
    R = f.ring
    d = _binomial_constant(f)
    m = f.degree
    hyp = {}
    hyp["coefficient domain is an associative cyclic algebra"] = R.is_algebra
    if not R.is_algebra:
        return SufficientCondition("tau(d^n)!=d^n", hyp)
    D = R.domain
    hyp["D division (asserted)"] = D.division_asserted
    hyp["twist has order m"] = R.order == m
    hyp["m prime"] = is_prime(m)
    hyp["m in {2,3} or primitive m-th root of unity"] = m in (2, 3) or root_of_unity
    hyp["d in F"] = d.is_central_scalar() and not d.is_zero()
    if hyp["d in F"]:
        dn = d.coeffs[0] ** D.n
        hyp["tau(d^n) != d^n"] = R.sigma(dn) != dn
    else:
        hyp["tau(d^n) != d^n"] = False
    return SufficientCondition("tau(d^n)!=d^n", hyp)


def irreducibility_status(f: SkewPoly, *, budget: int = 1, root_of_unity: bool = False,
                          certificates: Sequence[SufficientCondition] = (),
                          exhaustive: bool = False,
                          max_candidates: int = 100_000) -> IrreducibilityVerdict:
    """Verdict for f = t^m - d.

    Irreducible is returned only from a sufficient condition whose
    hypotheses all hold, or from a complete small-degree criterion when the
    caller certifies that the search was exhaustive.
    """
    _binomial_constant(f)
    m = f.degree
    if m not in (1, 2, 3, 4) and not (is_prime(m) and root_of_unity):
        raise SkewPolyError(
            f"degree {m} unsupported without a primitive {m}-th root of unity")
    if m == 1:
        return IrreducibilityVerdict("Irreducible", "Degree1")
    conds = list(certificates) + [tau_power_criterion(f, root_of_unity=root_of_unity)]
    for cond in conds:
        if cond.holds:
            return IrreducibilityVerdict("Irreducible", f"SufficientCondition({cond.name})",
                                         hypotheses=dict(cond.hypotheses))
    wit, searched = linear_factor_search(f, budget, max_candidates=max_candidates)
    if wit is None and m == 4:
        wit, s2 = quadratic_factor_search(f, budget, max_candidates=max_candidates)
        searched += s2
    if wit is not None:
        if not wit.verify(f):
            raise InternalInvariantError("factor witness does not reconstruct f")
        return IrreducibilityVerdict("Reducible", "FactorWitness", witness=wit,
                                     searched=searched)
    if exhaustive:
        name = {2: "Degree2Criterion", 3: "Degree3Criterion",
                4: "Degree4Criterion"}.get(m, "NoLinearFactor+RootOfUnity")
        return IrreducibilityVerdict("Irreducible", name,
                                     hypotheses={"caller-certified exhaustive search": True},
                                     searched=searched)
    return IrreducibilityVerdict("Unknown", f"SearchExhausted({budget})", searched=searched)
