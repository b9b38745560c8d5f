"""Fraction-free exact linear algebra over Z, Q and Q[z]."""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from .poly import Poly


def _integer_rows(rows: Sequence[Sequence]) -> list:
    out = []
    for row in rows:
        row = [Fraction(x) for x in row]
        den = math.lcm(*(x.denominator for x in row)) if row else 1
        out.append([int(x * den) for x in row])
    return out


def _bareiss(M: list, zero, exact_div, full_det: bool):
    """In-place Bareiss elimination: returns (rank, det-or-None, pivot columns)."""
    nrows = len(M)
    ncols = len(M[0]) if nrows else 0
    prev = None
    sign = 1
    r = 0
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if M[i][c] != zero), None)
        if piv is None:
            if full_det:
                return 0, zero, pivots
            continue
        if piv != r:
            M[r], M[piv] = M[piv], M[r]
            sign = -sign
        p = M[r][c]
        for i in range(r + 1, nrows):
            a = M[i][c]
            row_i, row_r = M[i], M[r]
            for j in range(c + 1, ncols):
                v = row_i[j] * p - a * row_r[j]
                row_i[j] = v if prev is None else exact_div(v, prev)
            row_i[c] = zero
        prev = p
        pivots.append(c)
        r += 1
    det = None
    if full_det:
        det = M[-1][-1] if nrows else None
        if sign < 0:
            det = -det
    return r, det, pivots


def det_int(matrix: Sequence[Sequence[int]]) -> int:
    n = len(matrix)
    if n == 0:
        return 1
    if any(len(row) != n for row in matrix):
        raise ValueError("determinant of a non-square matrix")
    M = [list(map(int, row)) for row in matrix]
    _, det, _ = _bareiss(M, 0, lambda a, b: a // b, True)
    return det


def det_rational(matrix: Sequence[Sequence]) -> Fraction:
    rows = [[Fraction(x) for x in row] for row in matrix]
    scale = Fraction(1)
    int_rows = []
    for row in rows:
        den = math.lcm(*(x.denominator for x in row)) if row else 1
        scale /= den
        int_rows.append([int(x * den) for x in row])
    return det_int(int_rows) * scale


def rank_rational(matrix: Sequence[Sequence]) -> int:
    if not matrix or not matrix[0]:
        return 0
    M = _integer_rows(matrix)
    rank, _, _ = _bareiss(M, 0, lambda a, b: a // b, False)
    return rank


def det_poly(matrix: Sequence[Sequence[Poly]]) -> Poly:
    n = len(matrix)
    if n == 0:
        return Poly.one()
    M = [list(row) for row in matrix]
    _, det, _ = _bareiss(M, Poly.zero(), lambda a, b: a.exact_div(b), True)
    return det


class EchelonBasis:
    """Incrementally maintained row-echelon basis over Q."""

    def __init__(self, dim: int):
        self.dim = dim
        self.rows = []  # (pivot column, normalized row)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, vec) -> list:
        v = [Fraction(x) for x in vec]
        if len(v) != self.dim:
            raise ValueError("vector of wrong dimension")
        for col, row in self.rows:
            c = v[col]
            if c:
                for j in range(col, self.dim):
                    if row[j]:
                        v[j] -= c * row[j]
        return v

    def add(self, vec) -> bool:
        """Insert ``vec``; return True if it increased the rank."""
        v = self.reduce(vec)
        col = next((j for j, x in enumerate(v) if x), None)
        if col is None:
            return False
        p = v[col]
        self.rows.append((col, [x / p for x in v]))
        return True
