"""Exact scalars of the form sum_e c_e * exp(2 i pi e / M) with rational c_e."""
from __future__ import annotations

import math
from fractions import Fraction

from .rational import rat_from_json, rat_to_json


class Cyclotomic:
    """Sparse element of Q(zeta_M).

    Equality compares representations after lifting to a common order; it
    does not reduce modulo the cyclotomic polynomial, because the values
    handled here are monomials (roots of unity or zero).
    """

    __slots__ = ("order", "terms")

    def __init__(self, order: int, terms=()):
        if order < 1:
            raise ValueError("cyclotomic order must be positive")
        acc = {}
        for e, c in terms:
            c = Fraction(c)
            if c:
                k = e % order
                acc[k] = acc.get(k, Fraction(0)) + c
        self.order = order
        self.terms = tuple(sorted((e, c) for e, c in acc.items() if c))

    @classmethod
    def rational(cls, c) -> "Cyclotomic":
        return cls(1, [(0, c)])

    @classmethod
    def root(cls, e: int, M: int, c=1) -> "Cyclotomic":
        return cls(M, [(e, c)])

    @classmethod
    def zero(cls) -> "Cyclotomic":
        return cls(1)

    def is_zero(self) -> bool:
        return not self.terms

    def lift(self, M: int) -> "Cyclotomic":
        if M % self.order:
            raise ValueError(f"cannot lift order {self.order} to {M}")
        k = M // self.order
        return Cyclotomic(M, [(e * k, c) for e, c in self.terms])

    def _common(self, other):
        M = math.lcm(self.order, other.order)
        return self.lift(M), other.lift(M), M

    def __add__(self, other):
        a, b, M = self._common(_coerce(other))
        return Cyclotomic(M, a.terms + b.terms)

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.order, [(e, -c) for e, c in self.terms])

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __mul__(self, other):
        a, b, M = self._common(_coerce(other))
        return Cyclotomic(M, [(e1 + e2, c1 * c2) for e1, c1 in a.terms for e2, c2 in b.terms])

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Cyclotomic.rational(other)
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        a, b, _ = self._common(other)
        return a.terms == b.terms

    def __hash__(self):
        # hash on the minimal order representation of monomials
        return hash(tuple((Fraction(e, self.order), c) for e, c in self.terms))

    def to_complex(self, ctx):
        """Numeric value in an mpmath context."""
        total = ctx.mpc(0)
        for e, c in self.terms:
            total += (ctx.mpf(c.numerator) / c.denominator) * ctx.expjpi(ctx.mpf(2 * e) / self.order)
        return total

    def __repr__(self):
        if not self.terms:
            return "Cyclotomic(0)"
        return "Cyclotomic(" + " + ".join(f"{c}*zeta{self.order}^{e}" for e, c in self.terms) + ")"

    def to_json(self) -> dict:
        return {"order": self.order, "terms": [[e, rat_to_json(c)] for e, c in self.terms]}

    @classmethod
    def from_json(cls, data) -> "Cyclotomic":
        return cls(data["order"], [(e, rat_from_json(c)) for e, c in data["terms"]])


def _coerce(x) -> Cyclotomic:
    if isinstance(x, Cyclotomic):
        return x
    if isinstance(x, (int, Fraction)):
        return Cyclotomic.rational(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to Cyclotomic")
