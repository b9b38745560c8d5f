"""Rational functions over Q with canonical (monic, coprime) form."""
from __future__ import annotations

from fractions import Fraction

from ..errors import PoleAtPoint
from .poly import Poly, poly_gcd
from .rational import as_rat


class RatFunc:
    """num/den with den monic and gcd(num, den) = 1; equality is structural."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, *, reduced: bool = False):
        num = num if isinstance(num, Poly) else Poly.const(num)
        den = Poly.one() if den is None else (den if isinstance(den, Poly) else Poly.const(den))
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            num, den = Poly.zero(), Poly.one()
        elif not reduced and den.degree > 0:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num, den = num.exact_div(g), den.exact_div(g)
        lc = den.lc
        if lc != 1:
            num, den = num.scale(1 / lc), den.scale(1 / lc)
        self.num = num
        self.den = den

    @classmethod
    def from_poly(cls, p: Poly) -> "RatFunc":
        return cls(p, Poly.one(), reduced=True)

    @classmethod
    def zero(cls):
        return cls(Poly.zero())

    @classmethod
    def one(cls):
        return cls(Poly.one())

    @classmethod
    def x(cls):
        return cls(Poly.x())

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_poly(self) -> bool:
        return self.den.degree == 0

    @property
    def degree(self) -> int:
        """deg num - deg den; the zero function reports a very negative value."""
        if self.is_zero():
            return -(10**9)
        return self.num.degree - self.den.degree

    @staticmethod
    def _coerce(other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, Poly):
            return RatFunc.from_poly(other)
        if isinstance(other, (int, Fraction)):
            return RatFunc(Poly.const(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        g = poly_gcd(self.den, other.den)
        if g.degree == 0:
            return RatFunc(self.num * other.den + other.num * self.den,
                           self.den * other.den, reduced=True)
        d1 = self.den.exact_div(g)
        d2 = other.den.exact_div(g)
        return RatFunc(self.num * d2 + other.num * d1, d1 * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, reduced=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return RatFunc.zero()
        g1 = poly_gcd(self.num, other.den)
        g2 = poly_gcd(other.num, self.den)
        return RatFunc(self.num.exact_div(g1) * other.num.exact_div(g2),
                       self.den.exact_div(g2) * other.den.exact_div(g1), reduced=True)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.is_zero():
            raise ZeroDivisionError("inverse of the zero rational function")
        return RatFunc(self.den, self.num, reduced=True)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return RatFunc(self.num ** k, self.den ** k, reduced=True)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash(("RatFunc", self.num, self.den))

    def derivative(self) -> "RatFunc":
        return RatFunc(self.num.derivative() * self.den - self.num * self.den.derivative(),
                       self.den * self.den)

    def __call__(self, x):
        x = as_rat(x) if isinstance(x, int) else x
        d = self.den(x)
        if d == 0:
            raise PoleAtPoint(f"pole at {x}")
        return self.num(x) / d

    def has_pole_at(self, x) -> bool:
        return self.den(as_rat(x)) == 0

    def compose_linear(self, c0, c1) -> "RatFunc":
        """f(c0 + c1 t)."""
        lin = Poly([c0, c1])
        return RatFunc(self.num.compose(lin), self.den.compose(lin), reduced=True)

    def __repr__(self):
        return f"RatFunc({self.num!r} / {self.den!r})"

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, data) -> "RatFunc":
        return cls(Poly.from_json(data["num"]), Poly.from_json(data["den"]), reduced=True)
