"""Exact linear algebra over Q and over commutative field-element types.

The generic routines only need ``+ - * /`` and truthiness for zero tests, so
they work for both :class:`fractions.Fraction` and ``FieldElement``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def _echelon_q(rows: Sequence[Sequence[Fraction]], ncols: int):
    m = [list(map(Fraction, r)) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank_q(rows: Sequence[Sequence[Fraction]]) -> int:
    if not rows:
        return 0
    return len(_echelon_q(rows, len(rows[0]))[1])


def nullspace_q(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of {x : rows . x = 0}."""
    red, pivots = _echelon_q(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def det_bareiss(matrix: Sequence[Sequence]):
    """Fraction-free (Bareiss) determinant with row pivoting."""
    n = len(matrix)
    if n == 0:
        raise ValueError("empty matrix")
    m = [list(row) for row in matrix]
    sign = 1
    prev = None
    for k in range(n - 1):
        if not m[k][k]:
            swap = next((i for i in range(k + 1, n) if m[i][k]), None)
            if swap is None:
                return m[k][k] * 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pivot = m[k][k]
        inv_prev = None if prev is None else 1 / prev
        for i in range(k + 1, n):
            mik = m[i][k]
            row_i, row_k = m[i], m[k]
            for j in range(k + 1, n):
                v = pivot * row_i[j] - mik * row_k[j] if mik else pivot * row_i[j]
                row_i[j] = v if inv_prev is None else v * inv_prev
        prev = pivot
    d = m[n - 1][n - 1]
    return d if sign == 1 else -d


def det_cofactor(matrix: Sequence[Sequence]):
    """Laplace expansion along the first row; intended for n <= 6."""
    n = len(matrix)
    if n == 1:
        return matrix[0][0]
    if n == 2:
        return matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0]
    total = None
    for j in range(n):
        a = matrix[0][j]
        if not a:
            continue
        minor = [row[:j] + row[j + 1:] for row in matrix[1:]]
        term = a * det_cofactor([list(r) for r in minor])
        if j % 2:
            term = -term
        total = term if total is None else total + term
    if total is None:
        return matrix[0][0] * 0
    return total


def solve(matrix: Sequence[Sequence], rhs: Sequence):
    """Solve ``matrix . x = rhs`` by Gaussian elimination; None if singular."""
    n = len(matrix)
    m = [list(row) + [b] for row, b in zip(matrix, rhs)]
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c]), None)
        if piv is None:
            return None
        m[c], m[piv] = m[piv], m[c]
        inv = 1 / m[c][c]
        m[c] = [v * inv for v in m[c]]
        for i in range(n):
            if i != c and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return [m[i][n] for i in range(n)]


def rank(rows: Sequence[Sequence]) -> int:
    """Rank over the field the entries live in."""
    m = [list(r) for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(r + 1, len(m)):
            if m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]):
    n, k, p = len(a), len(b), len(b[0])
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            acc = None
            for t in range(k):
                if a[i][t] and b[t][j]:
                    v = a[i][t] * b[t][j]
                    acc = v if acc is None else acc + v
            row.append(acc if acc is not None else a[i][0] * 0)
        out.append(row)
    return out


def mat_vec(a: Sequence[Sequence], v: Sequence):
    out = []
    for row in a:
        acc = None
        for x, y in zip(row, v):
            if x and y:
                t = x * y
                acc = t if acc is None else acc + t
        out.append(acc if acc is not None else row[0] * 0)
    return out
