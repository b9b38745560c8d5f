"""Partial-fraction forms with poles on the grid t = -N*h, h = 0..H.

A form stands for ``const + sum_{j,h} coeffs[j, h] / (t + N h)^j``.
Products are computed purely by rewriting, using

    1/((t+Nh)(t+Nh')^l) = 1/(N^l (h'-h)^l (t+Nh))
                          - sum_{i=1}^{l} 1/(N^(l+1-i) (h'-h)^(l+1-i) (t+Nh')^i)

so no polynomial arithmetic is involved.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .poly import Poly
from .ratfunc import RatFunc
from .rational import rat_from_json, rat_to_json

_ZERO = Fraction(0)


@dataclass(frozen=True)
class PartialFractionForm:
    modulus_step: int
    max_order: int
    max_shift: int
    coeffs: dict = field(default_factory=dict)
    const: Fraction = _ZERO

    def __post_init__(self):
        clean = {k: Fraction(v) for k, v in self.coeffs.items() if v}
        for (j, h) in clean:
            if not (1 <= j <= self.max_order and 0 <= h <= self.max_shift):
                raise ValueError(f"term (j={j}, h={h}) outside the declared grid")
        object.__setattr__(self, "coeffs", clean)
        object.__setattr__(self, "const", Fraction(self.const))

    @classmethod
    def unit(cls, N: int, max_shift: int = 0) -> "PartialFractionForm":
        return cls(N, 1, max_shift, {}, Fraction(1))

    @classmethod
    def simple_pole(cls, N: int, h: int, order: int = 1, c=1, max_shift=None):
        if max_shift is None:
            max_shift = h
        return cls(N, order, max_shift, {(order, h): Fraction(c)})

    def __getitem__(self, key) -> Fraction:
        return self.coeffs.get(key, _ZERO)

    def __eq__(self, other):
        if not isinstance(other, PartialFractionForm):
            return NotImplemented
        return (self.modulus_step == other.modulus_step and self.coeffs == other.coeffs
                and self.const == other.const)

    def __hash__(self):
        return hash((self.modulus_step, self.const, frozenset(self.coeffs.items())))

    def orders_by_shift(self) -> dict:
        out = {}
        for (j, h) in self.coeffs:
            out[h] = max(out.get(h, 0), j)
        return out

    def to_ratfunc(self) -> RatFunc:
        """Reassemble over the common denominator prod (t + N h)^(max order at h)."""
        N = self.modulus_step
        orders = self.orders_by_shift()
        lin = {h: Poly([N * h, 1]) for h in orders}
        den = Poly.one()
        for h, e in orders.items():
            den = den * lin[h] ** e
        num = den.scale(self.const)
        for (j, h), c in self.coeffs.items():
            cof = Poly.one()
            for h2, e in orders.items():
                cof = cof * lin[h2] ** (e - j if h2 == h else e)
            num = num + cof.scale(c)
        return RatFunc(num, den)

    def evaluate(self, t) -> Fraction:
        t = Fraction(t)
        N = self.modulus_step
        total = self.const
        for (j, h), c in self.coeffs.items():
            total += c / (t + N * h) ** j
        return total

    def to_json(self) -> dict:
        return {
            "N": self.modulus_step,
            "max_order": self.max_order,
            "max_shift": self.max_shift,
            "const": rat_to_json(self.const),
            "coeffs": [[j, h, rat_to_json(c)] for (j, h), c in sorted(self.coeffs.items())],
        }

    @classmethod
    def from_json(cls, data) -> "PartialFractionForm":
        return cls(data["N"], data["max_order"], data["max_shift"],
                   {(j, h): rat_from_json(c) for j, h, c in data["coeffs"]},
                   rat_from_json(data["const"]))


@lru_cache(maxsize=None)
def _pair_expansion(j: int, l: int, d: Fraction):
    """Expand 1/(x^j (x+d)^l), d != 0.

    Returns (A, B) with A[i] the coefficient of x^-i and B[i] that of
    (x+d)^-i, both indexed from 0 (entry 0 unused).
    """
    A = [_ZERO] * (j + 1)
    B = [_ZERO] * (l + 1)
    if j == 0:
        B[l] = Fraction(1)
        return tuple(A), tuple(B)
    if l == 0:
        A[j] = Fraction(1)
        return tuple(A), tuple(B)
    # x^-(j-1) * [d^-l x^-1 - sum_i d^-(l+1-i) (x+d)^-i]
    A[j] += 1 / d ** l
    for i in range(1, l + 1):
        sub_a, sub_b = _pair_expansion(j - 1, i, d)
        w = 1 / d ** (l + 1 - i)
        for s, c in enumerate(sub_a):
            if c:
                A[s] -= w * c
        for s, c in enumerate(sub_b):
            if c:
                B[s] -= w * c
    return tuple(A), tuple(B)


def pf_multiply(f: PartialFractionForm, g: PartialFractionForm) -> PartialFractionForm:
    if f.modulus_step != g.modulus_step:
        raise ValueError("partial-fraction forms on different pole grids")
    N = f.modulus_step
    acc: dict = {}

    def add(key, c):
        acc[key] = acc.get(key, _ZERO) + c

    const = f.const * g.const
    if g.const:
        for k, c in f.coeffs.items():
            add(k, c * g.const)
    if f.const:
        for k, c in g.coeffs.items():
            add(k, c * f.const)
    for (j1, h1), c1 in f.coeffs.items():
        for (j2, h2), c2 in g.coeffs.items():
            c = c1 * c2
            if h1 == h2:
                add((j1 + j2, h1), c)
                continue
            A, B = _pair_expansion(j1, j2, Fraction(N * (h2 - h1)))
            for i, x in enumerate(A):
                if x:
                    add((i, h1), c * x)
            for i, x in enumerate(B):
                if x:
                    add((i, h2), c * x)
    return PartialFractionForm(N, f.max_order + g.max_order,
                               max(f.max_shift, g.max_shift), acc, const)


def pf_power(f: PartialFractionForm, k: int) -> PartialFractionForm:
    out = PartialFractionForm.unit(f.modulus_step, f.max_shift)
    for _ in range(k):
        out = pf_multiply(out, f)
    return out


@dataclass(frozen=True)
class BaseExpansions:
    F0: PartialFractionForm
    G: dict  # i -> form, 1 <= i <= rN
    H: dict  # i -> form, N <= i <= (r+1)N - 1


def pf_base_expansions(params) -> BaseExpansions:
    """Closed-form expansions of the elementary factors of F.

    With m = n/N and D(t) = prod_{h=0}^{m} (t + N h):
      F0  = m! / D,
      G_i = (t - i m)_m / D,        1 <= i <= rN,
      H_i = (t + 1 + i m)_m / D,    N <= i <= (r+1)N - 1.
    """
    N, r, m = params.N, params.r, params.n // params.N
    scale = Fraction(1, N ** m)

    def form(coef):
        return PartialFractionForm(N, 1, m, {(1, h): coef(h) for h in range(m + 1)})

    F0 = form(lambda h: (-1) ** h * scale * comb(m, h))
    G = {i: form(lambda h, i=i: (-1) ** (h + m) * scale * comb(m, h) * comb(N * h + i * m, m))
         for i in range(1, r * N + 1)}
    H = {i: form(lambda h, i=i: (-1) ** h * scale * comb(m, h) * comb(-N * h + (i + 1) * m, m))
         for i in range(N, (r + 1) * N)}
    return BaseExpansions(F0, G, H)


def base_ratfuncs(params):
    """The same elementary factors as exact rational functions (for checks)."""
    N, r, m = params.N, params.r, params.n // params.N
    t = Poly.x()
    D = Poly.one()
    for h in range(m + 1):
        D = D * (t + N * h)

    def rising(x, k):
        out = Poly.one()
        for s in range(k):
            out = out * (x + s)
        return out

    F0 = RatFunc(Poly.const(factorial(m)), D)
    G = {i: RatFunc(rising(t - i * m, m), D) for i in range(1, r * N + 1)}
    H = {i: RatFunc(rising(t + 1 + i * m, m), D) for i in range(N, (r + 1) * N)}
    return F0, G, H
