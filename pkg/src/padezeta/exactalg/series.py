"""Truncated Laurent series with exact rational coefficients."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .poly import Poly
from .ratfunc import RatFunc

_ZERO = Fraction(0)


@dataclass(frozen=True)
class Series:
    """sum_i coeffs[i] x^(start+i) + O(x^(start+len(coeffs)))."""

    start: int
    coeffs: tuple

    @property
    def order(self) -> int:
        """Absolute precision: the exponent of the O() term."""
        return self.start + len(self.coeffs)

    def __getitem__(self, e: int) -> Fraction:
        if e >= self.order:
            raise IndexError(f"coefficient x^{e} beyond series precision {self.order}")
        i = e - self.start
        return self.coeffs[i] if i >= 0 else _ZERO

    @classmethod
    def from_terms(cls, terms: dict, order: int, start: int | None = None) -> "Series":
        if start is None:
            start = min([0] + [e for e in terms if terms[e]])
        return cls(start, tuple(Fraction(terms.get(e, 0)) for e in range(start, order)))

    @classmethod
    def from_poly(cls, p: Poly, order: int) -> "Series":
        return cls(0, tuple(p[e] for e in range(order)))

    def valuation(self):
        for i, c in enumerate(self.coeffs):
            if c:
                return self.start + i
        return None

    def __add__(self, other: "Series") -> "Series":
        lo = min(self.start, other.start)
        hi = min(self.order, other.order)
        return Series(lo, tuple(self[e] + other[e] for e in range(lo, hi)))

    def __neg__(self):
        return Series(self.start, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "Series":
        c = Fraction(c)
        return Series(self.start, tuple(c * x for x in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        lo = self.start + other.start
        hi = min(self.order + other.start, other.order + self.start)
        out = [_ZERO] * max(hi - lo, 0)
        a, b = self.coeffs, other.coeffs
        for i, x in enumerate(a):
            if not x:
                continue
            for j in range(min(len(b), len(out) - i)):
                if b[j]:
                    out[i + j] += x * b[j]
        return Series(lo, tuple(out))

    __rmul__ = __mul__

    def truncate(self, order: int) -> "Series":
        return Series(self.start, self.coeffs[: max(order - self.start, 0)])

    def agrees_with(self, other: "Series") -> bool:
        lo = min(self.start, other.start)
        hi = min(self.order, other.order)
        return all(self[e] == other[e] for e in range(lo, hi))


def _power_series_quotient(num: Poly, den: Poly, length: int) -> list:
    d0 = den[0]
    out = []
    dc = den.coeffs
    for i in range(length):
        acc = num[i]
        for j in range(1, min(i, len(dc) - 1) + 1):
            if dc[j]:
                acc -= dc[j] * out[i - j]
        out.append(acc / d0)
    return out


def series_at(f: RatFunc | Poly, center, terms: int) -> Series:
    """Exact expansion of ``f`` at 0, 1 or infinity.

    The local variable is z, z - 1, or 1/z respectively.  ``terms``
    coefficients are returned starting from min(0, valuation), so a pole
    contributes its whole principal part.
    """
    if isinstance(f, Poly):
        f = RatFunc.from_poly(f)
    if terms < 0:
        raise ValueError("terms must be nonnegative")
    num, den = f.num, f.den
    if center == 1:
        num, den = num.taylor_shift(1), den.taylor_shift(1)
    elif center in ("inf", "infinity", float("inf")):
        dn, dd = max(num.degree, 0), den.degree
        rn, rd = num.reverse(dn) if not num.is_zero() else num, den.reverse(dd)
        if dd >= dn:
            num, den = rn * Poly.monomial(dd - dn), rd
        else:
            num, den = rn, rd * Poly.monomial(dn - dd)
    elif center != 0:
        raise ValueError(f"unsupported expansion center {center!r}")

    if num.is_zero():
        return Series(0, (_ZERO,) * terms)
    u, v = num.valuation(), den.valuation()
    num = Poly(num.coeffs[u:])
    den = Poly(den.coeffs[v:])
    ordv = u - v
    start = min(0, ordv)
    lead = ordv - start
    body = _power_series_quotient(num, den, max(terms - lead, 0))
    coeffs = ([_ZERO] * lead + body)[:terms]
    return Series(start, tuple(coeffs))
