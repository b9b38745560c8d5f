"""Dense univariate polynomials and Laurent polynomials over Q."""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from ..errors import DivisionFailure
from .rational import as_rat, rat_from_json, rat_to_json

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _strip(coeffs: list) -> tuple:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


class Poly:
    """Immutable dense polynomial, coefficients in ascending degree.

    The zero polynomial has an empty coefficient tuple and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        self.coeffs = _strip([as_rat(c) for c in coeffs])

    @classmethod
    def _raw(cls, coeffs: tuple) -> "Poly":
        # trusted constructor: coeffs already Fractions and stripped
        p = object.__new__(cls)
        p.coeffs = coeffs
        return p

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls) -> "Poly":
        return cls._raw(())

    @classmethod
    def one(cls) -> "Poly":
        return cls._raw((_ONE,))

    @classmethod
    def const(cls, c) -> "Poly":
        return cls([c])

    @classmethod
    def monomial(cls, e: int, c=1) -> "Poly":
        if e < 0:
            raise ValueError("negative exponent in a polynomial")
        return cls([0] * e + [c])

    @classmethod
    def x(cls) -> "Poly":
        return cls._raw((_ZERO, _ONE))

    @classmethod
    def from_dict(cls, terms: dict) -> "Poly":
        if not terms:
            return cls.zero()
        out = [_ZERO] * (max(terms) + 1)
        for e, c in terms.items():
            out[e] += as_rat(c)
        return cls(out)

    # -- basic queries -------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else _ZERO

    def __getitem__(self, e: int) -> Fraction:
        if 0 <= e < len(self.coeffs):
            return self.coeffs[e]
        return _ZERO

    def support(self) -> list:
        return [e for e, c in enumerate(self.coeffs) if c]

    def valuation(self) -> int:
        """Exponent of the lowest nonzero term (-1 for the zero polynomial)."""
        for e, c in enumerate(self.coeffs):
            if c:
                return e
        return -1

    def height(self) -> Fraction:
        return max((abs(c) for c in self.coeffs), default=_ZERO)

    # -- arithmetic ----------------------------------------------------
    @staticmethod
    def _coerce(other) -> "Poly":
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly._raw(_strip(out))

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(tuple(-c for c in self.coeffs))

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

    def scale(self, c) -> "Poly":
        c = as_rat(c)
        if c == 0:
            return Poly.zero()
        return Poly._raw(tuple(x * c for x in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly.zero()
        out = [_ZERO] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
        return Poly._raw(_strip(out))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result, base = Poly.one(), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(("Poly", self.coeffs))

    def __bool__(self):
        return bool(self.coeffs)

    def __call__(self, x):
        """Horner evaluation; ``x`` may be any ring element (Fraction, mpf, Poly...)."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_mp(self, x, ctx):
        """Horner evaluation in an mpmath context (coefficients rounded once)."""
        acc = ctx.zero
        for c in reversed(self.coeffs):
            acc = acc * x + ctx.mpf(c.numerator) / c.denominator
        return acc

    def derivative(self) -> "Poly":
        return Poly._raw(_strip([e * c for e, c in enumerate(self.coeffs)][1:]))

    def euler_theta(self) -> "Poly":
        """z * d/dz, i.e. coefficient e is multiplied by e."""
        return Poly._raw(_strip([e * c for e, c in enumerate(self.coeffs)]))

    def divmod(self, other: "Poly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        if len(rem) - 1 < db:
            return Poly.zero(), self
        lead = other.coeffs[-1]
        quot = [_ZERO] * (len(rem) - db)
        bc = other.coeffs
        for i in range(len(rem) - 1, db - 1, -1):
            c = rem[i]
            if not c:
                continue
            q = c / lead
            quot[i - db] = q
            base = i - db
            for j in range(db + 1):
                if bc[j]:
                    rem[base + j] -= q * bc[j]
        return Poly._raw(_strip(quot)), Poly._raw(_strip(rem[:db] if db else []))

    def __floordiv__(self, other):
        return self.divmod(self._coerce(other))[0]

    def __mod__(self, other):
        return self.divmod(self._coerce(other))[1]

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise DivisionFailure(f"{other!r} does not divide {self!r}")
        return q

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self.scale(1 / self.lc)

    def compose(self, inner: "Poly") -> "Poly":
        return self(inner) if self.coeffs else Poly.zero()

    def taylor_shift(self, c) -> "Poly":
        """p(x + c) via synthetic division (no Poly composition)."""
        c = as_rat(c)
        a = list(self.coeffs)
        n = len(a)
        for i in range(n):
            for j in range(n - 2, i - 1, -1):
                a[j] += c * a[j + 1]
        return Poly._raw(_strip(a))

    def scale_var(self, c) -> "Poly":
        """p(c x)."""
        c = as_rat(c)
        out, pw = [], _ONE
        for x in self.coeffs:
            out.append(x * pw)
            pw *= c
        return Poly._raw(_strip(out))

    def reverse(self, d: int | None = None) -> "Poly":
        """x^d p(1/x) with d defaulting to the degree."""
        if d is None:
            d = self.degree
        if d < self.degree:
            raise ValueError("reversal degree below polynomial degree")
        out = [_ZERO] * (d + 1)
        for e, c in enumerate(self.coeffs):
            out[d - e] = c
        return Poly._raw(_strip(out))

    def truncate(self, n: int) -> "Poly":
        return Poly._raw(_strip(list(self.coeffs[:n])))

    def __repr__(self):
        if not self.coeffs:
            return "Poly(0)"
        terms = []
        for e, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if e == 0 else f"{c}*z^{e}")
        return "Poly(" + " + ".join(terms) + ")"

    def to_json(self) -> list:
        return [rat_to_json(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence) -> "Poly":
        return cls(rat_from_json(c) for c in data)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd (zero if both are zero)."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


class LaurentPoly:
    """Element of Q[z, 1/z] stored as z^valuation * body with body(0) != 0."""

    __slots__ = ("valuation", "body")

    def __init__(self, valuation: int, body: Poly):
        if body.is_zero():
            valuation = 0
        else:
            v = body.valuation()
            if v:
                body = Poly._raw(body.coeffs[v:])
                valuation += v
        self.valuation = valuation
        self.body = body

    @classmethod
    def from_dict(cls, terms: dict) -> "LaurentPoly":
        terms = {e: c for e, c in terms.items() if c}
        if not terms:
            return cls(0, Poly.zero())
        lo = min(terms)
        return cls(lo, Poly.from_dict({e - lo: c for e, c in terms.items()}))

    @classmethod
    def from_poly(cls, p: Poly) -> "LaurentPoly":
        return cls(0, p)

    def is_zero(self) -> bool:
        return self.body.is_zero()

    def terms(self) -> dict:
        return {self.valuation + e: c for e, c in enumerate(self.body.coeffs) if c}

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        t = self.terms()
        for e, c in other.terms().items():
            t[e] = t.get(e, 0) + c
        return LaurentPoly.from_dict(t)

    def __neg__(self):
        return LaurentPoly(self.valuation, -self.body)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return LaurentPoly(self.valuation, self.body.scale(other))
        return LaurentPoly(self.valuation + other.valuation, self.body * other.body)

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by z^k."""
        return LaurentPoly(self.valuation + k, self.body)

    def to_poly(self) -> Poly:
        if self.is_zero():
            return Poly.zero()
        if self.valuation < 0:
            raise ValueError("Laurent polynomial has negative powers")
        return Poly._raw((_ZERO,) * self.valuation + self.body.coeffs)

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.valuation == other.valuation and self.body == other.body

    def __hash__(self):
        return hash(("LaurentPoly", self.valuation, self.body))

    def __repr__(self):
        return f"LaurentPoly(z^{self.valuation} * {self.body!r})"
