"""Scalar helpers over :class:`fractions.Fraction` (our BigRat)."""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

BigRat = Fraction


def as_rat(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def rat_to_json(x) -> dict:
    x = as_rat(x)
    return {"num": str(x.numerator), "den": str(x.denominator)}


def rat_from_json(obj) -> Fraction:
    return Fraction(int(obj["num"]), int(obj["den"]))


def is_integral(x) -> bool:
    return as_rat(x).denominator == 1


def pochhammer(x, k: int):
    """Rising factorial x(x+1)...(x+k-1).

    Works for any ring element supporting ``+ int`` and ``*`` (Fractions,
    ints, :class:`Poly`).  The empty product is ``1`` in the type of ``x``.
    """
    if k < 0:
        raise ValueError("pochhammer needs k >= 0")
    one = getattr(type(x), "one", None)
    result = one() if callable(one) else 1
    for i in range(k):
        result = result * (x + i)
    return result


@lru_cache(maxsize=None)
def lcm_upto(n: int) -> int:
    """lcm(1, 2, ..., n)."""
    if n < 1:
        raise ValueError("lcm_upto needs n >= 1")
    return math.lcm(*range(1, n + 1))
