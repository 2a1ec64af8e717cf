"""Space-time block codebooks from left-multiplication matrices.

A layout sends each information symbol (an element of K drawn from a finite
set) to one K-coordinate of an iterated-algebra element, scaled by a fixed
multiplier.  The codeword is the matrix of left multiplication by that
element.
"""

from __future__ import annotations

import csv
import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import linalg
from .algebra import AlgebraError, CyclicAlgebra, InternalInvariantError
from .interval import RealInterval, digits_to_bits, format_decimal
from .iterated import (DivisionVerdict, ItElement, IteratedAlgebra, division_certify,
                       it_lambda, tensor_construct)
from .numberfield import (FieldAutomorphism, FieldElement, FieldTower, embed_complex_bits,
                          is_fixed_by)

DEFAULT_ENUMERATION_CAP = 10 ** 7
SQRT_M7_ROOT = (0, "2.6457513110645906")


class EnumerationCapExceeded(RuntimeError):
    def __init__(self, size: int, cap: int):
        super().__init__(f"codebook of size {size} exceeds the enumeration cap {cap}")
        self.size = size
        self.cap = cap


class LayoutError(ValueError):
    pass


def complexity_exponent(m: int) -> Fraction:
    """Exponent 2 m^2 - 3m/2 of the worst-case decoding complexity O(M^e)."""
    if m < 1:
        raise ValueError("m must be positive")
    return Fraction(2 * m * m) - Fraction(3 * m, 2)


@dataclass(frozen=True)
class LayoutSlot:
    part: int          # power of f
    coeff: int         # power of e inside the D-part
    multiplier: FieldElement


@dataclass(frozen=True)
class Layout:
    slots: tuple[LayoutSlot, ...]

    def __len__(self):
        return len(self.slots)

    def element(self, A: IteratedAlgebra, symbols: Sequence[FieldElement]) -> ItElement:
        if len(symbols) != len(self.slots):
            raise LayoutError(f"layout has {len(self.slots)} slots, got {len(symbols)} symbols")
        K = A.K
        coeffs = [[K.zero()] * A.n for _ in range(A.m)]
        for s, slot in zip(symbols, self.slots):
            if s:
                coeffs[slot.part][slot.coeff] = coeffs[slot.part][slot.coeff] + s * slot.multiplier
        return A.element([A.D.element(c) for c in coeffs])

    @classmethod
    def standard(cls, A: IteratedAlgebra, multipliers: Sequence[FieldElement]) -> Layout:
        """One slot per (part, coeff, multiplier), part slowest."""
        return cls(tuple(LayoutSlot(i, j, A.K(b)) for i in range(A.m) for j in range(A.n)
                         for b in multipliers))


@dataclass(frozen=True)
class ConstellationSpec:
    values: tuple[FieldElement, ...]
    symbols: int
    include_zero: bool = False
    differences: bool = False

    def __post_init__(self):
        if not self.values:
            raise ValueError("constellation must be nonempty")
        if len(set(self.values)) != len(self.values):
            raise ValueError("constellation values must be distinct")

    def alphabet(self) -> tuple[FieldElement, ...]:
        if not self.differences:
            return self.values
        seen = []
        for a in self.values:
            for b in self.values:
                v = a - b
                if v not in seen:
                    seen.append(v)
        return tuple(seen)

    @property
    def size(self) -> int:
        return len(self.alphabet()) ** self.symbols


@dataclass(frozen=True)
class Codeword:
    symbols: tuple[FieldElement, ...]
    matrix: tuple[tuple[FieldElement, ...], ...]
    det_exact: FieldElement
    det_abs2: RealInterval


def abs2_interval(x: FieldElement, digits: int) -> RealInterval:
    if x.is_zero():
        return RealInterval(Fraction(0), Fraction(0))
    return embed_complex_bits(x, digits_to_bits(digits)).abs2(digits_to_bits(digits))


def encode(A: IteratedAlgebra, symbols: Sequence, layout: Layout, *,
           precision: int = 30) -> Codeword:
    syms = tuple(A.K(s) for s in symbols)
    x = layout.element(A, syms)
    M = it_lambda(x)
    det = linalg.det_bareiss(M)
    return Codeword(syms, tuple(tuple(r) for r in M), det, abs2_interval(det, precision))


@dataclass
class CodebookReport:
    size: int
    nonzero: int
    fully_diverse: bool
    diversity_witness: tuple[FieldElement, ...] | None
    min_det_abs2: RealInterval | None
    argmin: tuple[FieldElement, ...] | None
    min_det_exact: FieldElement | None
    tie_set: list[tuple[FieldElement, ...]]
    det_in_F: bool
    rate: int
    complexity_exponent: Fraction
    precision_used: int
    distinct_dets: int
    verdict: DivisionVerdict | None = None
    notes: list[str] = field(default_factory=list)


def _symbol_vectors(alphabet: Sequence[FieldElement], k: int) -> Iterable[tuple]:
    # first symbol varies fastest
    for combo in itertools.product(range(len(alphabet)), repeat=k):
        yield tuple(alphabet[i] for i in reversed(combo))


def _dets_for_chunk(args) -> list[FieldElement]:
    A, layout, alphabet, k, start, stop = args
    out = []
    for syms in itertools.islice(_symbol_vectors(alphabet, k), start, stop):
        x = layout.element(A, syms)
        out.append(linalg.det_bareiss(it_lambda(x)) if x else A.K.zero())
    return out


def _all_dets(A, layout, alphabet, k, size, workers) -> list[FieldElement]:
    if workers <= 1:
        return _dets_for_chunk((A, layout, alphabet, k, 0, size))
    nchunks = max(workers * 4, 1)
    step = math.ceil(size / nchunks)
    jobs = [(A, layout, alphabet, k, a, min(a + step, size)) for a in range(0, size, step)]
    dets: list[FieldElement] = []
    with ProcessPoolExecutor(max_workers=workers) as ex:
        for part in ex.map(_dets_for_chunk, jobs):
            dets.extend(part)
    return dets


def _minimum(values: list[FieldElement], digits: int, ceiling: int):
    """Smallest |x|^2 over distinct nonzero values: (enclosure, contender indices, digits).

    Contenders are values whose interval reaches below the best upper bound;
    precision doubles until one remains or the ceiling is hit (a tie set).
    """
    idx = list(range(len(values)))
    while True:
        ivs = {i: abs2_interval(values[i], digits) for i in idx}
        best_hi = min(iv.hi for iv in ivs.values())
        idx = [i for i in idx if ivs[i].lo <= best_hi]
        if len(idx) == 1 or digits >= ceiling:
            return RealInterval(min(ivs[i].lo for i in idx), best_hi), idx, digits
        digits = min(digits * 2, ceiling)


def enumerate_and_report(A: IteratedAlgebra, spec: ConstellationSpec, layout: Layout, *,
                         workers: int = 1, csv_path: str | None = None,
                         cap: int = DEFAULT_ENUMERATION_CAP, precision: int = 30,
                         precision_ceiling: int = 240,
                         verdict: DivisionVerdict | None = None) -> CodebookReport:
    """Enumerate every symbol vector in a fixed order and summarize the determinants."""
    if spec.symbols != len(layout):
        raise LayoutError(f"constellation has {spec.symbols} symbols, layout {len(layout)} slots")
    alphabet = tuple(A.K(v) for v in spec.alphabet())
    k = spec.symbols
    size = len(alphabet) ** k
    if size > cap:
        raise EnumerationCapExceeded(size, cap)
    dets = _all_dets(A, layout, alphabet, k, size, workers)
    sigma = A.D.sigma

    fully_diverse = True
    witness = None
    det_in_F = True
    nonzero = 0
    first_index: dict[FieldElement, int] = {}
    order: list[FieldElement] = []
    rows = []
    for idx, (syms, det) in enumerate(zip(_symbol_vectors(alphabet, k), dets)):
        is_zero_vec = all(s.is_zero() for s in syms)
        if csv_path is not None and (spec.include_zero or not is_zero_vec):
            rows.append((syms, det))
        if is_zero_vec:
            continue
        nonzero += 1
        if not is_fixed_by(det, sigma):
            det_in_F = False
        if det.is_zero():
            if fully_diverse:
                witness = syms
            fully_diverse = False
            continue
        if det not in first_index:
            first_index[det] = idx
            order.append(det)

    min_iv = argmin = min_exact = None
    tie: list[tuple] = []
    used = precision
    if order:
        min_iv, winners, used = _minimum(order, precision, precision_ceiling)
        win_dets = [order[i] for i in winners]
        win_idx = sorted(first_index[d] for d in win_dets)
        vecs = list(_symbol_vectors(alphabet, k))
        argmin = vecs[win_idx[0]]
        min_exact = dets[win_idx[0]]
        if len(win_idx) > 1:
            tie = [vecs[i] for i in win_idx]
    elif spec.include_zero and size == 1:
        min_iv = RealInterval(Fraction(0), Fraction(0))

    if csv_path is not None:
        with open(csv_path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["symbols", "det_exact", "det_abs2_mid"])
            for syms, det in rows:
                w.writerow([";".join(s.to_string() for s in syms), det.to_string(),
                            format_decimal(abs2_interval(det, precision).mid, precision)])

    notes = []
    if verdict is not None and verdict.status == "Division" and not fully_diverse:
        raise InternalInvariantError("Division verdict but a zero determinant was found")
    return CodebookReport(size=size, nonzero=nonzero, fully_diverse=fully_diverse,
                          diversity_witness=witness, min_det_abs2=min_iv, argmin=argmin,
                          min_det_exact=min_exact, tie_set=tie, det_in_F=det_in_F,
                          rate=A.m, complexity_exponent=complexity_exponent(A.m),
                          precision_used=used, distinct_dets=len(order), verdict=verdict,
                          notes=notes)


# -- the Silver-based 4x2 family ---------------------------------------------------

def silver_towers():
    Q = FieldTower.rationals()
    L = Q.extend("i", [1, 0, 1], (0, 1))
    F = Q.extend("s", [7, 0, 1], SQRT_M7_ROOT)
    sigma = FieldAutomorphism(L, {"i": "-i"}, name="sigma")
    tau = FieldAutomorphism(F, {"s": "-s"}, name="tau")
    return L, sigma, F, tau


def silver_layout(A: IteratedAlgebra) -> Layout:
    """Eight symbols onto x0, x1, y0, y1 through the integral basis 1, (1+s)/2."""
    omega = A.K("(1 + s)/2")
    return Layout.standard(A, [A.K.one(), omega])


def silver_tensor_family(d="(1 + s)/2", *, certify: bool = True):
    """(-1,-1)_Q tensor (Q(s)/Q, tau, d), s^2 = -7, with its 8-symbol layout."""
    L, sigma, F, tau = silver_towers()
    d_F = F(d)
    if d_F.is_rational():
        raise AlgebraError("d must lie outside Q")
    D0 = CyclicAlgebra(L, sigma, -1, division_asserted=True, name="(-1,-1)")
    A = tensor_construct(D0, tau, d_F, name=f"silver(d={d_F})")
    verdict = division_certify(A) if certify else None
    return A, silver_layout(A), verdict
