"""Differential systems over Q(z): the N = 1 matrix A, the adjoint iteration and M(z)."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import math

from .construction import Construction
from .errors import PoleAtPoint
from .exactalg import Poly, RatFunc, det_poly, rank_rational
from .exactalg.poly import poly_gcd


def _lcm_poly(a: Poly, b: Poly) -> Poly:
    return (a * b).exact_div(poly_gcd(a, b)).monic()


@dataclass(frozen=True)
class RatFuncMatrix:
    """A q x q (or q x K) matrix of rational functions, row-major."""

    entries: tuple

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "RatFuncMatrix":
        cols = rows if cols is None else cols
        return cls(tuple(tuple(RatFunc.zero() for _ in range(cols)) for _ in range(rows)))

    @classmethod
    def from_rows(cls, rows) -> "RatFuncMatrix":
        return cls(tuple(tuple(_as_ratfunc(x) for x in row) for row in rows))

    @property
    def q(self) -> int:
        return len(self.entries)

    @property
    def ncols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def transpose(self) -> "RatFuncMatrix":
        return RatFuncMatrix(tuple(zip(*self.entries)))

    def column(self, j: int) -> tuple:
        return tuple(row[j] for row in self.entries)

    def nonzero_count(self) -> int:
        return sum(1 for row in self.entries for x in row if not x.is_zero())

    def trace(self) -> RatFunc:
        total = RatFunc.zero()
        for i in range(self.q):
            total = total + self.entries[i][i]
        return total

    def pole_denominator(self) -> Poly:
        """Monic lcm of all entry denominators (the tracked pole set)."""
        den = Poly.one()
        for row in self.entries:
            for x in row:
                den = _lcm_poly(den, x.den)
        return den

    def to_json(self) -> dict:
        return {"rows": [[x.to_json() for x in row] for row in self.entries]}


@dataclass(frozen=True)
class RemainderVector:
    entries: tuple

    @classmethod
    def of(cls, items) -> "RemainderVector":
        return cls(tuple(_as_ratfunc(x) for x in items))

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i: int) -> RatFunc:
        return self.entries[i]

    def is_zero(self) -> bool:
        return all(x.is_zero() for x in self.entries)


def _as_ratfunc(x) -> RatFunc:
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, Poly):
        return RatFunc.from_poly(x)
    return RatFunc(Poly.const(x))


def build_A_br(a: int) -> RatFuncMatrix:
    """The (a+2) x (a+2) system: A[1][a+1] = 1/(z-1), A[1][a+2] = 1/(z(1-z)), A[i][i-1] = -1/z."""
    if a < 2:
        raise ValueError("build_A_br needs a >= 2")
    q = a + 2
    rows = [[RatFunc.zero() for _ in range(q)] for _ in range(q)]
    z = Poly.x()
    rows[0][a] = RatFunc(Poly.one(), z - 1)
    rows[0][a + 1] = RatFunc(Poly.one(), z * (Poly.one() - z))
    for i in range(1, a):
        rows[i][i - 1] = RatFunc(Poly.const(-1), z)
    return RatFuncMatrix(tuple(tuple(r) for r in rows))


def adjoint_step(A: RatFuncMatrix, v: RemainderVector) -> RemainderVector:
    """(d/dz + tA) v: component j is v_j' + sum_i A[i][j] v_i."""
    q = A.q
    if len(v) != q:
        raise ValueError(f"vector of length {len(v)} for a {q} x {q} system")
    out = []
    for j in range(q):
        acc = v[j].derivative()
        for i in range(q):
            aij = A.entries[i][j]
            if not aij.is_zero() and not v[i].is_zero():
                acc = acc + aij * v[i]
        out.append(acc)
    return RemainderVector(tuple(out))


def apply_adjoint(A: RatFuncMatrix, v: RemainderVector, k: int) -> RemainderVector:
    if k < 1:
        raise ValueError("k must be positive")
    for _ in range(k - 1):
        v = adjoint_step(A, v)
    return v


def adjoint_iterates(A: RatFuncMatrix, v: RemainderVector, kmax: int) -> list:
    """[v_1, ..., v_kmax] with v_1 = v and v_k = (d/dz + tA) v_{k-1}."""
    out = [v]
    for _ in range(kmax - 1):
        out.append(adjoint_step(A, out[-1]))
    return out


def construction_vector(c: Construction) -> RemainderVector:
    """t(P_1, ..., P_a, U, V)."""
    return RemainderVector.of(list(c.P) + [c.U, c.V])


def build_M(A: RatFuncMatrix, v: RemainderVector) -> RatFuncMatrix:
    """q x q matrix whose k-th column is apply_adjoint(A, v, k)."""
    cols = adjoint_iterates(A, v, A.q)
    return RatFuncMatrix(tuple(tuple(cols[k][i] for k in range(A.q)) for i in range(A.q)))


def det_M(M: RatFuncMatrix) -> RatFunc:
    """Exact determinant: clear each column's denominators, then fraction-free elimination."""
    q = M.q
    cols = []
    scale = Poly.one()
    for k in range(q):
        col = M.column(k)
        L = Poly.one()
        for x in col:
            L = _lcm_poly(L, x.den)
        cols.append([x.num * L.exact_div(x.den) for x in col])
        scale = scale * L
    rows = [[cols[k][i] for k in range(q)] for i in range(q)]
    return RatFunc(det_poly(rows), scale)


def det_M_nonzero(M: RatFuncMatrix) -> bool:
    return not det_M(M).is_zero()


def poles_within(f: RatFunc, allowed) -> bool:
    """True if every root of f's denominator lies in ``allowed`` (rational points)."""
    den = f.den
    for x in allowed:
        lin = Poly([-Fraction(x), 1])
        while den.degree > 0:
            quo, rem = den.divmod(lin)
            if not rem.is_zero():
                break
            den = quo
    return den.degree == 0


def evaluation_matrix(A: RatFuncMatrix, v: RemainderVector, point, kmax: int) -> list:
    """[P_{k,i}(point)], rows i = 1..q, columns k = 1..kmax."""
    point = Fraction(point)
    cols = adjoint_iterates(A, v, kmax)
    out = [[None] * kmax for _ in range(A.q)]
    for k, col in enumerate(cols):
        for i, f in enumerate(col):
            if f.has_pole_at(point):
                raise PoleAtPoint(f"P_{{{k + 1},{i + 1}}} has a pole at z = {point}")
            out[i][k] = f(point)
    return out


def rank_at_point(A: RatFuncMatrix, v: RemainderVector, point, kmax: int) -> int:
    if kmax < 1:
        raise ValueError("kmax must be positive")
    return rank_rational(evaluation_matrix(A, v, point, kmax))


def rank_profile(A: RatFuncMatrix, v: RemainderVector, point, kmax: int) -> list:
    """Ranks of the prefixes k = 1..K for K = 1..kmax."""
    E = evaluation_matrix(A, v, point, kmax)
    return [rank_rational([row[:K] for row in E]) for K in range(1, kmax + 1)]


def smallest_prefix(profile: list, target: int) -> int | None:
    """Smallest K whose prefix reaches ``target``, or None."""
    return next((K for K, r in enumerate(profile, start=1) if r >= target), None)
