"""Exact arithmetic in towers of number fields over Q.

A tower is built one generator at a time, each generator given by a monic
minimal polynomial with coefficients in the tower below.  Elements are dense
coefficient vectors over the multi-power basis, the lowest generator's
exponent varying fastest::

    index(e_1, ..., e_k) = e_1 + d_1 * (e_2 + d_2 * (e_3 + ...))

Internally an element is a tuple of integer numerators over one positive
common denominator, normalized so that the gcd of everything is 1.
"""

from __future__ import annotations

import ast
import itertools
import math
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .interval import ComplexBall, ZERO, digits_to_bits


class FieldError(ValueError):
    """Base class for tower configuration and arithmetic errors."""


class TowerMismatch(FieldError):
    pass


class ReducibleMinimalPolynomial(FieldError):
    """A supplied minimal polynomial has a nontrivial factor over its base."""


class ElementParseError(FieldError):
    pass


def as_rational(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, bool):
        raise TypeError("bool is not a rational")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v.strip())
    raise TypeError(f"cannot interpret {v!r} as an exact rational")


def _normalize(nums: Sequence[int], d: int) -> tuple[tuple[int, ...], int]:
    if d < 0:
        nums = [-v for v in nums]
        d = -d
    g = math.gcd(d, *nums)
    if g != 1:
        return tuple(v // g for v in nums), d // g
    return tuple(nums), d


class FieldTower:
    """A tower Q(g_1)(g_2)...(g_k) of simple algebraic extensions.

    Build with :meth:`rationals` and :meth:`extend`.  ``root`` pins the
    complex root of each minimal polynomial used by :func:`embed_complex`.
    """

    def __init__(self, base: FieldTower | None = None, gen: str | None = None,
                 minpoly: Sequence | None = None, root=None):
        self.base = base
        self.gen = gen
        if base is None:
            self.gen_degree = 1
            self.minpoly: tuple[FieldElement, ...] = ()
            self.names: tuple[str, ...] = ()
            self.level_degrees: tuple[int, ...] = ()
            self.degree = 1
            self.root = None
            self.key: tuple = ()
        else:
            if not gen or not gen.isidentifier():
                raise FieldError(f"invalid generator name {gen!r}")
            if gen in base.names:
                raise FieldError(f"generator name {gen!r} already used in tower")
            coeffs = tuple(base(c) for c in minpoly)
            if len(coeffs) < 3:
                raise FieldError(f"minimal polynomial of {gen} must have degree >= 2")
            if coeffs[-1] != 1:
                raise FieldError(f"minimal polynomial of {gen} must be monic")
            if coeffs[0].is_zero():
                raise ReducibleMinimalPolynomial(
                    f"minimal polynomial of {gen} has constant term 0")
            self.minpoly = coeffs
            self.gen_degree = len(coeffs) - 1
            self.names = base.names + (gen,)
            self.level_degrees = base.level_degrees + (self.gen_degree,)
            self.degree = base.degree * self.gen_degree
            self.root = None if root is None else (as_rational(root[0]), as_rational(root[1]))
            self.key = base.key + ((gen, tuple((c._n, c._d) for c in coeffs)),)
        self._hash = hash(self.key)
        self._exponents = list(self._make_exponents())
        self._table, self._tden = self._make_table()
        self._one = FieldElement._raw(self, (1,) + (0,) * (self.degree - 1), 1)
        self._balls: dict[int, list[ComplexBall]] = {}
        self._coerce_cache: dict[tuple, list] = {}

    # -- construction ----------------------------------------------------

    @classmethod
    def rationals(cls) -> FieldTower:
        return cls()

    def extend(self, gen: str, minpoly: Sequence, root=None) -> FieldTower:
        """New tower with one more generator; ``minpoly`` ascending, monic."""
        return FieldTower(self, gen, minpoly, root)

    @classmethod
    def from_levels(cls, levels: Iterable[tuple]) -> FieldTower:
        t = cls()
        for lev in levels:
            t = t.extend(*lev)
        return t

    def levels(self) -> list[tuple[str, tuple, tuple | None]]:
        """(name, minpoly coefficient strings, root) for each level, bottom up."""
        out = []
        t = self
        while t.base is not None:
            out.append((t.gen, tuple(str(c) for c in t.minpoly), t.root))
            t = t.base
        return out[::-1]

    def prefix(self, k: int) -> FieldTower:
        """The subtower generated by the first ``k`` generators."""
        t = self
        while len(t.names) > k:
            t = t.base
        return t

    def __eq__(self, other):
        return self is other or (isinstance(other, FieldTower) and self.key == other.key)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if not self.names:
            return "FieldTower(Q)"
        return f"FieldTower(Q({', '.join(self.names)}), degree={self.degree})"

    def _make_exponents(self):
        ranges = [range(d) for d in self.level_degrees]
        # product() varies the last factor fastest; reverse to make g_1 fastest
        for combo in itertools.product(*reversed(ranges)):
            yield tuple(reversed(combo))

    def _make_table(self):
        N = self.degree
        if self.base is None:
            return [[((0, 1),)]], 1
        B = self.base
        nb, d = B.degree, self.gen_degree
        mp = self.minpoly
        zero_b = B.zero()
        # g^q reduced, as lists of d base elements, q = 0 .. 2d-2
        powers = [[B.one()] + [zero_b] * (d - 1)]
        for _ in range(2 * d - 2):
            v = powers[-1]
            top = v[-1]
            new = [zero_b] + v[:-1]
            if not top.is_zero():
                new = [new[k] - top * mp[k] for k in range(d)]
            powers.append(new)
        bbasis = [B.basis_element(a) for a in range(nb)]
        rows: list[list[list[Fraction]]] = []
        for i in range(N):
            a, p = i % nb, i // nb
            row = []
            for j in range(N):
                a2, p2 = j % nb, j // nb
                ab = bbasis[a] * bbasis[a2]
                vec = [ZERO] * N
                for k, ck in enumerate(powers[p + p2]):
                    if ck.is_zero():
                        continue
                    for b, q in enumerate((ab * ck).coeffs):
                        if q:
                            vec[b + nb * k] += q
                row.append(vec)
            rows.append(row)
        den = 1
        for row in rows:
            for vec in row:
                for q in vec:
                    den = den * q.denominator // math.gcd(den, q.denominator)
        table = [[tuple((k, int(q * den)) for k, q in enumerate(vec) if q)
                  for vec in row] for row in rows]
        return table, den

    # -- elements --------------------------------------------------------

    def element(self, coeffs: Sequence) -> FieldElement:
        qs = [as_rational(c) for c in coeffs]
        if len(qs) != self.degree:
            raise FieldError(f"expected {self.degree} coefficients, got {len(qs)}")
        den = 1
        for q in qs:
            den = den * q.denominator // math.gcd(den, q.denominator)
        n, d = _normalize([q.numerator * (den // q.denominator) for q in qs], den)
        return FieldElement._raw(self, n, d)

    def scalar(self, q) -> FieldElement:
        q = as_rational(q)
        return FieldElement._raw(self, (q.numerator,) + (0,) * (self.degree - 1),
                                 q.denominator)

    def zero(self) -> FieldElement:
        return FieldElement._raw(self, (0,) * self.degree, 1)

    def one(self) -> FieldElement:
        return self._one

    def basis_element(self, i: int) -> FieldElement:
        n = [0] * self.degree
        n[i] = 1
        return FieldElement._raw(self, tuple(n), 1)

    def basis(self) -> list[FieldElement]:
        return [self.basis_element(i) for i in range(self.degree)]

    def generator(self, name: str) -> FieldElement:
        try:
            k = self.names.index(name)
        except ValueError:
            raise FieldError(f"no generator {name!r} in {self!r}") from None
        exps = [0] * len(self.names)
        exps[k] = 1
        return self.basis_element(self.index_of(exps))

    def generators(self) -> dict[str, FieldElement]:
        return {name: self.generator(name) for name in self.names}

    def index_of(self, exps: Sequence[int]) -> int:
        idx, stride = 0, 1
        for e, d in zip(exps, self.level_degrees):
            idx += e * stride
            stride *= d
        return idx

    def exponents(self, i: int) -> tuple[int, ...]:
        return self._exponents[i]

    def __call__(self, value) -> FieldElement:
        """Coerce ints, rationals, strings and subtower elements."""
        if isinstance(value, FieldElement):
            if value.tower is self:
                return value
            return self.coerce(value)
        if isinstance(value, str):
            return self.parse(value)
        return self.scalar(value)

    def coerce(self, x: FieldElement) -> FieldElement:
        """Map ``x`` from another tower whose generators appear here by name."""
        src = x.tower
        if src == self:
            return FieldElement._raw(self, x._n, x._d)
        k = len(src.names)
        if src.names == self.names[:k] and src == self.prefix(k):
            pad = (0,) * (self.degree - src.degree)
            return FieldElement._raw(self, x._n + pad, x._d)
        images = self._coerce_cache.get(src.key)
        if images is None:
            missing = [n for n in src.names if n not in self.names]
            if missing:
                raise TowerMismatch(f"generators {missing} not present in {self!r}")
            gens = {n: self.generator(n) for n in src.names}
            # the relations of src must hold here
            t = src
            while t.base is not None:
                g = gens[t.gen]
                val = self.zero()
                for c in reversed(t.minpoly):
                    val = val * g + self.coerce(c)
                if not val.is_zero():
                    raise TowerMismatch(
                        f"relation for {t.gen} does not hold in {self!r}")
                t = t.base
            images = []
            for i in range(src.degree):
                v = self.one()
                for name, e in zip(src.names, src.exponents(i)):
                    if e:
                        v = v * gens[name] ** e
                images.append(v)
            self._coerce_cache[src.key] = images
        out = self.zero()
        for c, img in zip(x.coeffs, images):
            if c:
                out = out + img * c
        return out

    def parse(self, text: str) -> FieldElement:
        """Parse a polynomial expression in the generator names.

        Accepts integers, ``+ - * /``, and ``**`` or ``^`` with integer
        exponents, e.g. ``"(1+s)/2"`` or ``"3/2 - i*s^2"``.
        """
        src = text.replace("^", "**")
        try:
            tree = ast.parse(src, mode="eval")
        except SyntaxError as exc:
            raise ElementParseError(f"cannot parse element {text!r}: {exc.msg}") from None
        gens = self.generators()

        def ev(node):
            if isinstance(node, ast.Expression):
                return ev(node.body)
            if isinstance(node, ast.Constant) and isinstance(node.value, int) \
                    and not isinstance(node.value, bool):
                return self.scalar(node.value)
            if isinstance(node, ast.Name):
                if node.id not in gens:
                    raise ElementParseError(f"unknown generator {node.id!r} in {text!r}")
                return gens[node.id]
            if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
                v = ev(node.operand)
                return -v if isinstance(node.op, ast.USub) else v
            if isinstance(node, ast.BinOp):
                if isinstance(node.op, ast.Pow):
                    e = node.right
                    sign = 1
                    if isinstance(e, ast.UnaryOp) and isinstance(e.op, ast.USub):
                        sign, e = -1, e.operand
                    if not (isinstance(e, ast.Constant) and isinstance(e.value, int)):
                        raise ElementParseError(f"non-integer exponent in {text!r}")
                    return ev(node.left) ** (sign * e.value)
                a, b = ev(node.left), ev(node.right)
                if isinstance(node.op, ast.Add):
                    return a + b
                if isinstance(node.op, ast.Sub):
                    return a - b
                if isinstance(node.op, ast.Mult):
                    return a * b
                if isinstance(node.op, ast.Div):
                    return a / b
            raise ElementParseError(f"unsupported syntax in element {text!r}")

        return ev(tree)

    # -- complex embedding -------------------------------------------------

    def basis_balls(self, prec: int) -> list[ComplexBall]:
        """Enclosures of every basis monomial under the pinned embedding."""
        balls = self._balls.get(prec)
        if balls is not None:
            return balls
        if self.base is None:
            balls = [ComplexBall.exact(1)]
        else:
            if self.root is None:
                raise FieldError(f"no complex root pinned for generator {self.gen}")
            g = _refine_root(self, prec)
            base_balls = self.base.basis_balls(prec)
            gpows = [ComplexBall.exact(1)]
            for _ in range(self.gen_degree - 1):
                gpows.append(gpows[-1].mul(g, prec))
            balls = [bb.mul(gp, prec) for gp in gpows for bb in base_balls]
        self._balls[prec] = balls
        return balls


def _horner(coeffs: Sequence[ComplexBall], z: ComplexBall, prec: int) -> ComplexBall:
    acc = ComplexBall.exact(0)
    for c in reversed(coeffs):
        acc = acc.mul(z, prec) + c
    return acc


def _refine_root(tower: FieldTower, prec: int) -> ComplexBall:
    """Rigorous ball around the pinned root of the top minimal polynomial.

    Newton-refines the pinned approximation, then encloses a true root with
    the bound  |z0 - root| <= deg * |p(z0)| / |p'(z0)|.
    """
    import numpy as np

    work = prec + 32
    d = tower.gen_degree
    coeffs = [embed_complex_bits(c, work) for c in tower.minpoly]
    dcoeffs = [coeffs[k].scale(Fraction(k)) for k in range(1, d + 1)]
    z = ComplexBall(tower.root[0], tower.root[1]).rounded(work)
    centers = [ComplexBall(c.re, c.im) for c in coeffs]
    dcenters = [ComplexBall(c.re, c.im) for c in dcoeffs]
    step_tol = Fraction(1, 1 << (work - 4))
    for _ in range(4 * work.bit_length() + 60):
        pz = _horner(centers, z, work)
        dz = _horner(dcenters, z, work)
        if dz.abs2_center() == 0:
            raise FieldError(f"derivative vanishes at pinned root of {tower.gen}")
        step = pz.div(dz, work)
        z = ComplexBall(z.re - step.re, z.im - step.im).rounded(work)
        if step.abs2_center() <= step_tol * step_tol:
            break
    pz = _horner(coeffs, z, work)
    dz = _horner(dcoeffs, z, work)
    lower = dz.abs_lower(work)
    if lower == 0:
        raise FieldError(f"cannot certify root of {tower.gen}: derivative ball contains 0")
    rad = Fraction(d) * pz.abs_upper(work) / lower
    ball = ComplexBall(z.re, z.im, rad).rounded(prec)
    # isolation: the enclosing disk must single out the root nearest the pin
    approx = np.roots([complex(float(c.re), float(c.im)) for c in reversed(coeffs)])
    zc = complex(float(z.re), float(z.im))
    dists = sorted(abs(r - zc) for r in approx)
    pin = complex(float(tower.root[0]), float(tower.root[1]))
    if len(dists) > 1:
        sep = dists[1]
        if float(ball.rad) * 4 >= sep:
            raise FieldError(f"root enclosure for {tower.gen} does not isolate a root")
        if abs(pin - zc) * 2 >= sep:
            raise FieldError(f"pinned root for {tower.gen} is ambiguous")
    return ball


class FieldElement:
    """Immutable element of a :class:`FieldTower`."""

    __slots__ = ("tower", "_n", "_d", "_h")

    def __init__(self, tower: FieldTower, coeffs: Sequence):
        e = tower.element(coeffs)
        self.tower, self._n, self._d, self._h = tower, e._n, e._d, None

    @classmethod
    def _raw(cls, tower, n, d):
        self = object.__new__(cls)
        self.tower = tower
        self._n = n
        self._d = d
        self._h = None
        return self

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        d = self._d
        return tuple(Fraction(v, d) for v in self._n)

    def is_zero(self) -> bool:
        return not any(self._n)

    def __bool__(self):
        return not self.is_zero()

    def is_rational(self) -> bool:
        return not any(self._n[1:])

    def height(self) -> int:
        """max(|numerator|, denominator) over the rational coordinates."""
        return max(max(abs(q.numerator), q.denominator) if q else 0 for q in self.coeffs)

    def _coerce(self, other) -> FieldElement:
        if isinstance(other, FieldElement):
            if other.tower is self.tower or other.tower == self.tower:
                return other
            raise TowerMismatch(f"{self.tower!r} vs {other.tower!r}")
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.tower.scalar(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self._d == o._d:
            n, d = _normalize([a + b for a, b in zip(self._n, o._n)], self._d)
        else:
            x, y = self._d, o._d
            n, d = _normalize([a * y + b * x for a, b in zip(self._n, o._n)], x * y)
        return FieldElement._raw(self.tower, n, d)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement._raw(self.tower, tuple(-a for a in self._n), self._d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self._d == o._d:
            n, d = _normalize([a - b for a, b in zip(self._n, o._n)], self._d)
        else:
            x, y = self._d, o._d
            n, d = _normalize([a * y - b * x for a, b in zip(self._n, o._n)], x * y)
        return FieldElement._raw(self.tower, n, d)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            q = Fraction(other)
            n, d = _normalize([a * q.numerator for a in self._n], self._d * q.denominator)
            return FieldElement._raw(self.tower, n, d)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        tower = self.tower
        N = tower.degree
        if N == 1:
            n, d = _normalize([self._n[0] * o._n[0]], self._d * o._d)
            return FieldElement._raw(tower, n, d)
        out = [0] * N
        table = tower._table
        yn = o._n
        for i, xi in enumerate(self._n):
            if xi:
                row = table[i]
                for j, yj in enumerate(yn):
                    if yj:
                        p = xi * yj
                        for k, c in row[j]:
                            out[k] += c * p
        n, d = _normalize(out, self._d * o._d * tower._tden)
        return FieldElement._raw(tower, n, d)

    __rmul__ = __mul__

    def inverse(self) -> FieldElement:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        tower = self.tower
        if tower.base is None:
            return FieldElement._raw(tower, (self._d if self._n[0] > 0 else -self._d,),
                                     abs(self._n[0]))
        return _tower_inverse(self)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        result = self.tower.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return (self._d == other._d and self._n == other._n
                    and (self.tower is other.tower or self.tower == other.tower))
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            q = Fraction(other)
            return (self._d == q.denominator and self._n[0] == q.numerator
                    and not any(self._n[1:]))
        return NotImplemented

    def __hash__(self):
        if self._h is None:
            if self.is_rational():
                self._h = hash(Fraction(self._n[0], self._d))
            else:
                self._h = hash((self.tower._hash, self._n, self._d))
        return self._h

    def __reduce__(self):
        return (_rebuild_element, (self.tower, self._n, self._d))

    def to_string(self) -> str:
        """Canonical form: ascending basis order, ``p/q`` coefficients."""
        tower = self.tower
        terms = []
        for i, q in enumerate(self.coeffs):
            if not q:
                continue
            mono = "*".join(
                name if e == 1 else f"{name}^{e}"
                for name, e in zip(tower.names, tower.exponents(i)) if e)
            mag = abs(q)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            terms.append(("-" if q < 0 else "+", body))
        if not terms:
            return "0"
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    __str__ = to_string

    def __repr__(self):
        return f"FieldElement({self.to_string()!r})"


def _rebuild_element(tower, n, d):
    return FieldElement._raw(tower, n, d)


# -- inverse via extended gcd, recursive down the tower -------------------

def _poly_trim(p: list) -> list:
    while p and p[-1].is_zero():
        p.pop()
    return p


def _poly_divmod(a: list, b: list) -> tuple[list, list]:
    a = list(a)
    lc_inv = b[-1].inverse()
    zero = b[-1].tower.zero()
    q = [zero] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        c = a[-1] * lc_inv
        q[shift] = c
        for k, bk in enumerate(b):
            if not bk.is_zero():
                a[k + shift] = a[k + shift] - c * bk
        a.pop()
        _poly_trim(a)
    return _poly_trim(q), a


def _poly_mul(a: list, b: list) -> list:
    if not a or not b:
        return []
    zero = a[0].tower.zero()
    out = [zero] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai.is_zero():
            continue
        for j, bj in enumerate(b):
            if not bj.is_zero():
                out[i + j] = out[i + j] + ai * bj
    return _poly_trim(out)


def _poly_sub(a: list, b: list) -> list:
    n = max(len(a), len(b))
    zero = (a or b)[0].tower.zero()
    a = list(a) + [zero] * (n - len(a))
    b = list(b) + [zero] * (n - len(b))
    return _poly_trim([x - y for x, y in zip(a, b)])


def _tower_inverse(x: FieldElement) -> FieldElement:
    tower = x.tower
    B = tower.base
    nb, d = B.degree, tower.gen_degree
    blocks = [FieldElement._raw(B, x._n[k * nb:(k + 1) * nb], x._d) for k in range(d)]
    blocks = [FieldElement._raw(B, *_normalize(b._n, b._d)) for b in blocks]
    r0, r1 = list(tower.minpoly), _poly_trim(blocks)
    s0, s1 = [], [B.one()]
    while r1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
    if len(r0) != 1:
        raise ReducibleMinimalPolynomial(
            f"minimal polynomial of {tower.gen} is reducible over its base "
            f"(gcd of degree {len(r0) - 1} found while inverting)")
    c = r0[0].inverse()
    s0 = [v * c for v in s0] + [B.zero()] * (d - len(s0))
    out = [Fraction(0)] * tower.degree
    for k, blk in enumerate(s0[:d]):
        for a, q in enumerate(blk.coeffs):
            out[a + nb * k] = q
    return tower.element(out)


# -- automorphisms ------------------------------------------------------

class FieldAutomorphism:
    """Ring automorphism given by the images of the tower generators.

    Validity is checked on construction: every generator image must satisfy
    the (mapped) minimal polynomial, and ``order`` iterations must return each
    generator.
    """

    def __init__(self, tower: FieldTower, images: Mapping[str, object],
                 order: int | None = None, name: str | None = None,
                 check: bool = True):
        self.tower = tower
        self.name = name
        unknown = set(images) - set(tower.names)
        if unknown:
            raise FieldError(f"images given for unknown generators {sorted(unknown)}")
        self.images = {n: tower(images[n]) if n in images else tower.generator(n)
                       for n in tower.names}
        self._matrix = self._build_matrix()
        self._powers: dict[int, FieldAutomorphism] = {}
        if check:
            self._check_ring_map()
        exact = self._compute_order()
        if order is None:
            order = exact
        elif check and order % exact != 0:
            raise FieldError(
                f"automorphism {name or ''} does not have order dividing {order} "
                f"(exact order {exact})")
        self.order = order
        self.exact_order = exact

    def _build_matrix(self):
        tower = self.tower
        gens = [self.images[n] for n in tower.names]
        cols = []
        for i in range(tower.degree):
            v = tower.one()
            for g, e in zip(gens, tower.exponents(i)):
                if e:
                    v = v * g ** e
            cols.append(v)
        den = 1
        for c in cols:
            den = den * c._d // math.gcd(den, c._d)
        return ([tuple((k, v * (den // c._d)) for k, v in enumerate(c._n) if v)
                 for c in cols], den)

    def _check_ring_map(self):
        tower = self.tower
        t = tower
        while t.base is not None:
            img = self.images[t.gen]
            val = tower.zero()
            for c in reversed(t.minpoly):
                val = val * img + self(tower.coerce(c))
            if not val.is_zero():
                raise FieldError(
                    f"image of {t.gen} does not satisfy its minimal polynomial "
                    f"under {self.name or 'the automorphism'}")
            t = t.base
        # injectivity: the image matrix must have full rank
        from .linalg import rank_q
        rows = [list(self(b).coeffs) for b in tower.basis()]
        if rank_q(rows) != tower.degree:
            raise FieldError("generator images do not define an automorphism")

    def _compute_order(self) -> int:
        gens = self.tower.generators()
        cur = dict(gens)
        for k in range(1, self.tower.degree + 1):
            cur = {n: self(v) for n, v in cur.items()}
            if all(cur[n] == gens[n] for n in gens):
                return k
        raise FieldError("automorphism does not have finite order dividing the degree")

    def __call__(self, x: FieldElement) -> FieldElement:
        if x.tower is not self.tower and x.tower != self.tower:
            raise TowerMismatch(f"{x.tower!r} vs {self.tower!r}")
        cols, den = self._matrix
        out = [0] * self.tower.degree
        for xb, col in zip(x._n, cols):
            if xb:
                for k, v in col:
                    out[k] += xb * v
        n, d = _normalize(out, x._d * den)
        return FieldElement._raw(self.tower, n, d)

    def compose(self, other: FieldAutomorphism) -> FieldAutomorphism:
        """self o other."""
        imgs = {n: self(other.images[n]) for n in self.tower.names}
        return FieldAutomorphism(self.tower, imgs, check=False)

    def power(self, k: int) -> FieldAutomorphism:
        k %= self.exact_order
        cached = self._powers.get(k)
        if cached is not None:
            return cached
        if k == 0:
            p = FieldAutomorphism.identity(self.tower)
        elif k == 1:
            p = self
        else:
            p = self.compose(self.power(k - 1))
        self._powers[k] = p
        return p

    def inverse(self) -> FieldAutomorphism:
        inv = self.power(self.exact_order - 1)
        if inv is self:
            return self
        return FieldAutomorphism(self.tower, inv.images, order=self.order,
                                 name=f"{self.name}^-1" if self.name else None,
                                 check=False)

    def is_identity(self) -> bool:
        return all(self.images[n] == self.tower.generator(n) for n in self.tower.names)

    def __eq__(self, other):
        return (isinstance(other, FieldAutomorphism) and self.tower == other.tower
                and all(self.images[n] == other.images[n] for n in self.tower.names))

    def __hash__(self):
        return hash((self.tower, tuple(self.images[n] for n in self.tower.names)))

    def __repr__(self):
        imgs = ", ".join(f"{n}->{v}" for n, v in self.images.items())
        return f"FieldAutomorphism({self.name or ''}: {imgs}; order {self.order})"

    @classmethod
    def identity(cls, tower: FieldTower) -> FieldAutomorphism:
        return cls(tower, {}, check=False)

    def matrix_q(self) -> list[list[Fraction]]:
        """Rows are the images of the basis elements."""
        return [list(self(b).coeffs) for b in self.tower.basis()]


def aut_apply(phi: FieldAutomorphism, x: FieldElement) -> FieldElement:
    return phi(x)


def aut_commute_check(phi: FieldAutomorphism, psi: FieldAutomorphism) -> bool:
    if phi.tower != psi.tower:
        raise TowerMismatch("automorphisms live on different towers")
    return all(phi(psi(g)) == psi(phi(g)) for g in phi.tower.generators().values())


def relative_norm(x: FieldElement, phi: FieldAutomorphism, k: int | None = None) -> FieldElement:
    """x * phi(x) * ... * phi^(k-1)(x)."""
    if k is None:
        k = phi.exact_order
    if k != phi.exact_order:
        raise FieldError(f"norm length {k} differs from the order {phi.exact_order}")
    out = x
    y = x
    for _ in range(k - 1):
        y = phi(y)
        out = out * y
    return out


def is_fixed_by(x: FieldElement, phi: FieldAutomorphism) -> bool:
    return phi(x) == x


def fixed_field_basis(tower: FieldTower, auts: Sequence[FieldAutomorphism]) -> list[FieldElement]:
    """Q-basis of the subfield fixed by every automorphism in ``auts``."""
    from .linalg import nullspace_q
    rows = []
    N = tower.degree
    # x is fixed iff (M - I)^T x = 0 where M has rows phi(b_i)
    for phi in auts:
        M = phi.matrix_q()
        for k in range(N):
            rows.append([M[i][k] - (1 if i == k else 0) for i in range(N)])
    if not rows:
        return tower.basis()
    return [tower.element(v) for v in nullspace_q(rows, N)]


def embed_complex_bits(x: FieldElement, prec: int) -> ComplexBall:
    balls = x.tower.basis_balls(prec)
    acc = ComplexBall.exact(0)
    for q, b in zip(x.coeffs, balls):
        if q:
            acc = acc + b.scale(q)
    return acc.rounded(prec)


def embed_complex(x: FieldElement, precision: int = 30) -> ComplexBall:
    """Rigorous enclosure of x under the pinned embedding, ``precision`` digits."""
    if x.is_zero():
        return ComplexBall.exact(0)
    return embed_complex_bits(x, digits_to_bits(precision))


def nf_arith(op: str, x: FieldElement, y: FieldElement) -> FieldElement:
    if x.tower != y.tower:
        raise TowerMismatch(f"{x.tower!r} vs {y.tower!r}")
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise ValueError(f"unknown operation {op!r}")
