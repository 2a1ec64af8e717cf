"""Deterministic enumeration of rational coordinate vectors by height.

The height of p/q (in lowest terms) is max(|p|, q).  Vectors are visited in
strata of increasing maximal height; inside a stratum the order is
lexicographic with the first coordinate varying fastest.
"""

from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction
from typing import Iterator


def rationals_of_height(h: int) -> list[Fraction]:
    if h == 0:
        return [Fraction(0)]
    vals = set()
    for q in range(1, h + 1):
        for p in range(1, h + 1):
            if max(p, q) == h and math.gcd(p, q) == 1:
                vals.add(Fraction(p, q))
    pos = sorted(vals)
    out = []
    for v in pos:
        out.append(v)
        out.append(-v)
    return out


def rationals_up_to(h: int) -> list[Fraction]:
    out = []
    for k in range(h + 1):
        out.extend(rationals_of_height(k))
    return out


def height(q: Fraction) -> int:
    if not q:
        return 0
    return max(abs(q.numerator), q.denominator)


def vectors_by_height(length: int, max_height: int, *,
                      skip_zero: bool = True) -> Iterator[tuple[Fraction, ...]]:
    if not skip_zero:
        yield (Fraction(0),) * length
    for h in range(1, max_height + 1):
        vals = rationals_up_to(h)
        for combo in itertools.product(vals, repeat=length):
            vec = combo[::-1]
            if max(height(v) for v in vec) == h:
                yield vec


def count_vectors(length: int, max_height: int) -> int:
    return len(rationals_up_to(max_height)) ** length - 1


def random_rational(rng: random.Random, h: int = 3) -> Fraction:
    return Fraction(rng.randint(-h, h), rng.randint(1, h))


def random_vector(rng: random.Random, length: int, h: int = 3) -> list[Fraction]:
    return [random_rational(rng, h) for _ in range(length)]
