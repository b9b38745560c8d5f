"""Derivative recurrences for P_{k,j}, U_k, V_k and the integer table s_{k,i}.

Everything is kept in the normalized form z^(k-1) * object, where the
recurrences read

    P~_{k,j} = z P~'_{k-1,j} - (k-2) P~_{k-1,j} - P~_{k-1,j+1}     (P~_{k-1,a+1} = 0)
    U~_k     = z U~'_{k-1}  - (k-2) U~_{k-1}  - z Q_{k-1}
    V~_k     = z V~'_{k-1}  - (k-2) V~_{k-1}  + Q_{k-1}

with Q_{k-1} = P~_{k-1,1} / (1 - z), an exact polynomial division for k <= d0 - 1.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction

from .construction import Construction
from .errors import DivisionFailure, IntegralityFailure
from .exactalg import Poly, RatFunc, lcm_upto, pochhammer

ONE_MINUS_Z = Poly([1, -1])


@dataclass(frozen=True)
class DerivedForms:
    construction: Construction
    K: int
    tildeP: tuple  # tildeP[k-1][j-1]
    tildeU: tuple  # tildeU[k-1]
    tildeV: tuple

    def P(self, k: int, j: int) -> Poly:
        return self.tildeP[k - 1][j - 1]

    def U(self, k: int) -> Poly:
        return self.tildeU[k - 1]

    def V(self, k: int) -> Poly:
        return self.tildeV[k - 1]


def default_K(c: Construction) -> int:
    return min(c.d0 - 1, c.params.a + c.params.N + 32)


def _step(p: Poly, k: int) -> Poly:
    # z p' - (k-2) p, coefficientwise (e - (k-2)) c_e
    s = k - 2
    return Poly(((e - s) * x for e, x in enumerate(p.coeffs)))


def derive(c: Construction, K: int | None = None, *, enforce_range: bool = True) -> DerivedForms:
    if K is None:
        K = default_K(c)
    if K < 1:
        raise ValueError("K must be at least 1")
    if enforce_range and K > c.d0 - 1:
        raise ValueError(f"K = {K} exceeds d0 - 1 = {c.d0 - 1}")
    a = c.params.a
    tP = [tuple(c.P)]
    tU = [c.U]
    tV = [c.V]
    z = Poly.x()
    for k in range(2, K + 1):
        prev = tP[-1]
        row = []
        for j in range(a):
            nxt = _step(prev[j], k)
            if j + 1 < a:
                nxt = nxt - prev[j + 1]
            row.append(nxt)
        try:
            Q = prev[0].exact_div(ONE_MINUS_Z)
        except DivisionFailure as exc:
            raise DivisionFailure(
                f"(1 - z) does not divide P~_{{{k - 1},1}} (k = {k}, d0 = {c.d0}); "
                "P_{k,1}(1) != 0 contradicts regularity at z = 1") from exc
        tU.append(_step(tU[-1], k) - z * Q)
        tV.append(_step(tV[-1], k) + Q)
        tP.append(tuple(row))
    return DerivedForms(c, K, tuple(tP), tuple(tU), tuple(tV))


@dataclass(frozen=True)
class RationalForms:
    """The same recurrences with Q = P~_{k-1,1} / (1 - z) kept as a rational function.

    Agrees with :func:`derive` wherever the latter is defined and continues
    past k = d0 - 1, where U~_k and V~_k acquire a pole at z = 1.
    """

    construction: Construction
    K: int
    tildeP: tuple
    tildeU: tuple
    tildeV: tuple

    def P(self, k: int, j: int) -> RatFunc:
        return self.tildeP[k - 1][j - 1]

    def U(self, k: int) -> RatFunc:
        return self.tildeU[k - 1]

    def V(self, k: int) -> RatFunc:
        return self.tildeV[k - 1]


def _step_rat(f: RatFunc, k: int) -> RatFunc:
    z = RatFunc.x()
    return z * f.derivative() - f * (k - 2)


def derive_rational(c: Construction, K: int) -> RationalForms:
    a = c.params.a
    z = RatFunc.x()
    omz = RatFunc.from_poly(ONE_MINUS_Z)
    tP = [tuple(RatFunc.from_poly(p) for p in c.P)]
    tU = [RatFunc.from_poly(c.U)]
    tV = [RatFunc.from_poly(c.V)]
    for k in range(2, K + 1):
        prev = tP[-1]
        row = []
        for j in range(a):
            nxt = _step_rat(prev[j], k)
            if j + 1 < a:
                nxt = nxt - prev[j + 1]
            row.append(nxt)
        Q = prev[0] / omz
        tU.append(_step_rat(tU[-1], k) - z * Q)
        tV.append(_step_rat(tV[-1], k) + Q)
        tP.append(tuple(row))
    return RationalForms(c, K, tuple(tP), tuple(tU), tuple(tV))


def residue_split(forms: DerivedForms, k: int):
    """Parts U_{k,lambda}, V_{k,lambda} (lambda = 0..N-1) of U~_k, V~_k.

    Part lambda collects the exponents congruent to lambda mod N, shifted so
    that z^lambda * part(z) recovers them; each part lies in Q[z^N].
    """
    if not 1 <= k <= forms.K:
        raise ValueError(f"k = {k} outside 1..{forms.K}")
    N = forms.construction.params.N
    return split_by_residue(forms.U(k), N), split_by_residue(forms.V(k), N)


def split_by_residue(p: Poly, N: int) -> tuple:
    parts = []
    for lam in range(N):
        parts.append(Poly.from_dict({e - lam: x for e, x in enumerate(p.coeffs)
                                     if x and e % N == lam}))
    return tuple(parts)


def eval_in_zN(p: Poly, N: int, zN: int) -> Fraction:
    """p(z0) for p in Q[z^N], given z0^N = zN in {+1, -1}."""
    total = Fraction(0)
    for e, x in enumerate(p.coeffs):
        if not x:
            continue
        if e % N:
            raise ValueError(f"exponent {e} is not a multiple of N = {N}")
        total += x if (zN == 1 or (e // N) % 2 == 0) else -x
    return total


def delta_n(params) -> int:
    """(N d_n)^a N^(a n / N)."""
    return (params.N * lcm_upto(params.n)) ** params.a * params.N ** (params.a * params.m)


@dataclass(frozen=True)
class LinearFormTable:
    delta_n: int
    s: tuple  # s[k-1][i-1], i = 1..a+N
    d_0: int
    a: int
    N: int
    i0: int

    @property
    def K(self) -> int:
        return len(self.s)

    def entry(self, k: int, i: int) -> int:
        return self.s[k - 1][i - 1]

    def column_vector(self, k: int, start: int | None = None) -> tuple:
        """(s_{k,i})_{i >= start}; start defaults to i0."""
        start = self.i0 if start is None else start
        return self.s[k - 1][start - 1:]

    def max_abs(self, rows=None) -> int:
        rows = range(1, self.K + 1) if rows is None else rows
        return max((abs(v) for k in rows for v in self.s[k - 1]), default=0)

    def to_json(self) -> dict:
        return {
            "delta_n": str(self.delta_n),
            "d_0": self.d_0,
            "a": self.a,
            "N": self.N,
            "i0": self.i0,
            "rows": [{"k": k, "entries": [{"i": i, "value": str(v)}
                                          for i, v in enumerate(row, start=1)]}
                     for k, row in enumerate(self.s, start=1)],
        }

    @classmethod
    def from_json(cls, data) -> "LinearFormTable":
        rows = sorted(data["rows"], key=lambda r: r["k"])
        s = tuple(tuple(int(e["value"]) for e in sorted(r["entries"], key=lambda e: e["i"]))
                  for r in rows)
        return cls(int(data["delta_n"]), s, data["d_0"], data["a"], data["N"], data["i0"])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k"] + [f"s_{i}" for i in range(1, self.a + self.N + 1)])
        for k, row in enumerate(self.s, start=1):
            w.writerow([k] + [str(v) for v in row])
        return buf.getvalue()


def rational_s_row(forms: DerivedForms, k: int, literal: bool = False) -> list:
    """s_{k,1..a+N} / delta_n as exact rationals.

    The a + 1 + lambda entries pair U_{k,lambda} with V_{k,N-lambda}.  For
    lambda >= 1 the V part picks up a factor z0^-N = z0^N when it is moved
    from the (omega^l z0)^-lambda weight onto f(N - lambda) z0^(N-lambda);
    ``literal=True`` drops that factor (it only matters when z0^N = -1).
    """
    prm = forms.construction.params
    a, N, sigma = prm.a, prm.N, prm.z0_power_N
    row = [eval_in_zN(forms.P(k, j), N, sigma) for j in range(1, a + 1)]
    U_parts, V_parts = residue_split(forms, k)
    sgn = (-1) ** prm.p
    for lam in range(N):
        u = eval_in_zN(U_parts[lam], N, sigma)
        if lam == 0:
            v = eval_in_zN(V_parts[0], N, sigma)
        else:
            v = eval_in_zN(V_parts[N - lam], N, sigma)
            if not literal:
                v *= sigma
        row.append(u + sgn * v)
    return row


def s_table(forms: DerivedForms, literal: bool = False) -> LinearFormTable:
    prm = forms.construction.params
    dn = delta_n(prm)
    rows = []
    for k in range(1, forms.K + 1):
        out = []
        for i, x in enumerate(rational_s_row(forms, k, literal), start=1):
            v = x * dn
            if v.denominator != 1:
                raise IntegralityFailure(
                    f"s_{{{k},{i}}} = {v} is not an integer for {prm.key()}")
            out.append(v.numerator)
        rows.append(tuple(out))
    return LinearFormTable(dn, tuple(rows), forms.construction.d0, prm.a, prm.N, prm.i0)


def heights_within_bound(forms: DerivedForms) -> bool:
    """H(P~_{k,j}) <= (n+1)_{k-1} H_1 with H_1 the height of P_1..P_a, U, V."""
    c = forms.construction
    H1 = max(p.height() for p in c.polys())
    n = c.params.n
    for k in range(1, forms.K + 1):
        bound = pochhammer(Fraction(n + 1), k - 1) * H1
        if any(forms.P(k, j).height() > bound for j in range(1, c.params.a + 1)):
            return False
    return True


def p_k1_vanishes_at_one(forms: DerivedForms) -> bool:
    return all(forms.P(k, 1)(Fraction(1)) == 0 for k in range(1, forms.K + 1))

