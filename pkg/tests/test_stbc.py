from __future__ import annotations

import csv
from fractions import Fraction

import pytest

from cyclicalg.algebra import AlgebraError, InternalInvariantError
from cyclicalg.iterated import DivisionVerdict, it_lambda
from cyclicalg.stbc import (ConstellationSpec, EnumerationCapExceeded, Layout, LayoutError,
                            LayoutSlot, _minimum, complexity_exponent, encode,
                            enumerate_and_report, silver_tensor_family)

from conftest import silver


def two_slot(A):
    one = A.K.one()
    return Layout((LayoutSlot(0, 0, one), LayoutSlot(1, 0, one)))


def test_complexity_exponent():
    assert [complexity_exponent(m) for m in (1, 2, 3)] == [Fraction(1, 2), 5, Fraction(27, 2)]
    with pytest.raises(ValueError):
        complexity_exponent(0)


def test_encode_zero_and_one():
    A, layout, _ = silver_tensor_family(certify=False)
    zero = encode(A, [0] * 8, layout)
    assert zero.det_exact == 0 and zero.det_abs2.hi == 0
    one = encode(A, [1] + [0] * 7, layout)
    assert all(one.matrix[r][c] == (1 if r == c else 0) for r in range(4) for c in range(4))
    assert one.det_exact == 1
    with pytest.raises(LayoutError):
        encode(A, [1, 0], layout)


def test_encode_is_linear(rng):
    A, layout, _ = silver_tensor_family(certify=False)
    K = A.K
    vals = [K("0"), K("1"), K("i"), K("-1"), K("1 + i")]
    for _ in range(10):
        a = [rng.choice(vals) for _ in range(8)]
        b = [rng.choice(vals) for _ in range(8)]
        s = encode(A, [x + y for x, y in zip(a, b)], layout).matrix
        ma, mb = encode(A, a, layout).matrix, encode(A, b, layout).matrix
        assert all(s[r][c] == ma[r][c] + mb[r][c] for r in range(4) for c in range(4))


def test_silver_matrix_shape(rng):
    A = silver("(1 + s)/2")
    K = A.K
    sigma, tau, d = A.D.sigma, A.tau, A.d_scalar
    for _ in range(10):
        x0, x1, y0, y1 = (K.element([rng.randint(-3, 3) for _ in range(4)]) for _ in range(4))
        X = it_lambda(A.element([A.D.element([x0, x1]), A.D.element([y0, y1])]))
        ts = lambda v: tau(sigma(v))  # noqa: E731
        expected = [
            [x0, -sigma(x1), d * tau(y0), -d * ts(y1)],
            [x1, sigma(x0), d * tau(y1), d * ts(y0)],
            [y0, -sigma(y1), tau(x0), -ts(x1)],
            [y1, sigma(y0), tau(x1), ts(x0)],
        ]
        assert X == expected


def test_silver_layout_uses_integral_basis():
    A, layout, verdict = silver_tensor_family()
    assert verdict.status == "Division"
    assert len(layout) == 8
    assert {s.multiplier for s in layout.slots} == {A.K.one(), A.K("(1 + s)/2")}
    with pytest.raises(AlgebraError):
        silver_tensor_family("3")


def test_split_codebook_witness():
    A = silver("1")
    spec = ConstellationSpec((A.K(0), A.K(1)), 2, differences=True)
    assert spec.alphabet() == (A.K(0), A.K(-1), A.K(1))
    rep = enumerate_and_report(A, spec, two_slot(A))
    assert not rep.fully_diverse
    assert rep.diversity_witness == (A.K(-1), A.K(-1))
    assert rep.size == 9 and rep.nonzero == 8
    with pytest.raises(InternalInvariantError):
        enumerate_and_report(A, spec, two_slot(A), verdict=DivisionVerdict("Division", ()))


def test_small_silver_codebook():
    A = silver("(1 + s)/2")
    K = A.K
    spec = ConstellationSpec((K(0), K(1), K("i")), 2)
    rep = enumerate_and_report(A, spec, two_slot(A))
    assert rep.fully_diverse and rep.det_in_F
    assert rep.min_det_abs2.lo >= 1
    cw = encode(A, rep.argmin, two_slot(A))
    assert cw.det_exact == rep.min_det_exact
    assert cw.det_abs2.lo <= rep.min_det_abs2.hi and rep.min_det_abs2.lo <= cw.det_abs2.hi
    assert rep.rate == 2 and rep.complexity_exponent == 5


def test_cap_and_spec_errors():
    A = silver()
    spec = ConstellationSpec((A.K(0), A.K(1)), 2)
    with pytest.raises(EnumerationCapExceeded):
        enumerate_and_report(A, spec, two_slot(A), cap=3)
    with pytest.raises(LayoutError):
        enumerate_and_report(A, ConstellationSpec((A.K(1),), 3), two_slot(A))
    with pytest.raises(ValueError):
        ConstellationSpec((), 1)
    with pytest.raises(ValueError):
        ConstellationSpec((A.K(1), A.K(1)), 1)


def test_single_codeword_and_zero_only():
    A = silver()
    rep = enumerate_and_report(A, ConstellationSpec((A.K(1),), 2), two_slot(A))
    assert rep.size == 1 and rep.distinct_dets == 1
    rep = enumerate_and_report(A, ConstellationSpec((A.K(0),), 2, include_zero=True), two_slot(A))
    assert rep.nonzero == 0 and rep.min_det_exact is None
    assert rep.min_det_abs2.hi == 0


def test_workers_and_csv(tmp_path):
    A = silver("(1 + s)/2")
    spec = ConstellationSpec((A.K(0), A.K(1), A.K("i")), 3)
    layout = Layout(two_slot(A).slots + (LayoutSlot(0, 1, A.K.one()),))
    path = tmp_path / "cb.csv"
    r1 = enumerate_and_report(A, spec, layout, workers=1, csv_path=str(path))
    r2 = enumerate_and_report(A, spec, layout, workers=2)
    assert r1 == r2
    with open(path) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["symbols", "det_exact", "det_abs2_mid"] and len(rows) == 27


def test_minimum_reports_exact_ties():
    Fs = silver().K
    s = Fs("s")
    iv, winners, digits = _minimum([s, -s, s + 3], 10, 40)
    assert winners == [0, 1] and digits == 40
    assert iv.lo <= 7 <= iv.hi
    iv, winners, digits = _minimum([s + 3, Fs(2)], 10, 40)
    assert winners == [1] and digits == 10
