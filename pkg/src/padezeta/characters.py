"""Dirichlet characters as exact exponent tables, and the reductions to the f-weighted setting."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .construction import ProblemParams, Z0Kind
from .errors import PreconditionViolated
from .exactalg import Cyclotomic
from .numerics import GUARD_BITS, MPComplex, hurwitz_zeta, make_context

NON_UNIT = -1


@dataclass(frozen=True)
class DirichletCharacter:
    """chi(r) = exp(2 i pi e_r / order) for units r, 0 otherwise (e_r = NON_UNIT).

    ``order`` is always the exact order of chi, so equal characters have
    equal representations.
    """

    modulus: int
    order: int
    exponents: tuple

    def __post_init__(self):
        if len(self.exponents) != self.modulus:
            raise ValueError("exponent table must have one entry per residue")

    def exponent(self, r: int) -> int:
        return self.exponents[r % self.modulus]

    def is_unit(self, r: int) -> bool:
        return self.exponent(r) != NON_UNIT

    def value(self, r: int) -> Cyclotomic:
        e = self.exponent(r)
        if e == NON_UNIT:
            return Cyclotomic.zero()
        return Cyclotomic.root(e, self.order)

    __call__ = value

    def is_principal(self) -> bool:
        return self.order == 1

    def parity(self) -> int:
        """0 for even characters, 1 for odd ones."""
        e = self.exponent(-1)
        return 0 if e == 0 else 1

    def to_json(self) -> dict:
        return {"modulus": self.modulus, "order": self.order, "exponents": list(self.exponents)}

    @classmethod
    def from_json(cls, data) -> "DirichletCharacter":
        return cls(data["modulus"], data["order"], tuple(data["exponents"]))


def _normalized(modulus: int, L: int, table) -> DirichletCharacter:
    # shrink the root-of-unity order to the exact order of chi
    g = L
    for e in table:
        if e != NON_UNIT:
            g = math.gcd(g, e)
    order = L // g
    exps = tuple(NON_UNIT if e == NON_UNIT else (e // g) % order for e in table)
    return DirichletCharacter(modulus, order, exps)


def _factor(d: int) -> list:
    out = []
    p = 2
    while p * p <= d:
        if d % p == 0:
            e = 0
            while d % p == 0:
                d //= p
                e += 1
            out.append((p, e))
        p += 1
    if d > 1:
        out.append((d, 1))
    return out


def _primitive_root(q: int, phi: int) -> int:
    primes = [p for p, _ in _factor(phi)]
    for g in range(2, q):
        if math.gcd(g, q) == 1 and all(pow(g, phi // p, q) != 1 for p in primes):
            return g
    raise ArithmeticError(f"no primitive root mod {q}")


@lru_cache(maxsize=None)
def unit_group(d: int):
    """Cyclic decomposition of (Z/d)^*: list of (generator mod d, order) plus discrete logs.

    Returns (gens, dlog) where dlog[r] is the exponent vector of unit r.
    """
    comps = []  # (q, [(gen mod q, order)])
    for p, e in _factor(d):
        q = p ** e
        if p == 2:
            if e == 1:
                comps.append((q, []))
            elif e == 2:
                comps.append((q, [(3, 2)]))
            else:
                comps.append((q, [(q - 1, 2), (5, 2 ** (e - 2))]))
        else:
            phi = q - q // p
            comps.append((q, [(_primitive_root(q, phi), phi)]))
    gens = []
    for q, local in comps:
        for g, order in local:
            # lift g mod q to d with all other components equal to 1 (CRT)
            rest = d // q
            lifted = g
            if rest > 1:
                lifted = (g * rest * pow(rest, -1, q) + q * pow(q, -1, rest)) % d
            gens.append((lifted % d if d > 1 else 0, order))
    dlog = {}
    vecs = [((1 % d) if d > 1 else 0, ())]
    for g, order in gens:
        nxt = []
        for base, vec in vecs:
            x = base
            for i in range(order):
                nxt.append((x, vec + (i,)))
                x = x * g % d
        vecs = nxt
    for r, vec in vecs:
        dlog[r] = vec
    return tuple(gens), dlog


def enumerate_characters(d: int) -> list:
    """All phi(d) characters mod d, ordered by their exponent vectors on the generators."""
    if d < 1:
        raise ValueError("modulus must be positive")
    gens, dlog = unit_group(d)
    orders = [o for _, o in gens]
    L = math.lcm(*orders) if orders else 1
    out = []

    def rec(idx, choice):
        if idx == len(orders):
            table = []
            for r in range(d):
                vec = dlog.get(r % d if d > 1 else 0)
                if vec is None or (d > 1 and math.gcd(r, d) != 1):
                    table.append(NON_UNIT)
                    continue
                table.append(sum(c * v * (L // o) for c, v, o in zip(choice, vec, orders)) % L)
            out.append(_normalized(d, L, table))
            return
        for c in range(orders[idx]):
            rec(idx + 1, choice + (c,))

    rec(0, ())
    return out


def principal_character(d: int) -> DirichletCharacter:
    return enumerate_characters(d)[0]


def _induced_trivially_mod(chi: DirichletCharacter, f: int) -> bool:
    # chi(r) = 1 for every unit r = 1 mod f
    return all(chi.exponent(r) == 0 for r in range(1, chi.modulus, f)
               if math.gcd(r, chi.modulus) == 1)


def conductor(chi: DirichletCharacter) -> int:
    """Smallest divisor e of the modulus such that chi is induced by a character mod e."""
    d = chi.modulus
    for f in range(1, d + 1):
        if d % f == 0 and _induced_trivially_mod(chi, f):
            return f
    return d


def is_primitive(chi: DirichletCharacter) -> bool:
    return conductor(chi) == chi.modulus


def primitive_part(chi: DirichletCharacter) -> DirichletCharacter:
    """The character chi' mod conductor(chi) inducing chi."""
    d, e = chi.modulus, conductor(chi)
    table = [NON_UNIT] * e
    for r in range(e):
        if math.gcd(r, e) != 1 and e > 1:
            continue
        # any lift of r that is a unit mod d
        lift = next(x for x in range(r, r + d * e + 1, e) if math.gcd(x, d) == 1)
        table[r] = chi.exponent(lift)
    if e == 1:
        table = [0]
    return _normalized(e, chi.order, table)


def halfperiod_antisymmetry(chi: DirichletCharacter) -> bool:
    """chi(n + e/2) = -chi(n) for all n, for primitive chi mod e with 4 | e."""
    e = chi.modulus
    if e % 4:
        raise PreconditionViolated(f"modulus {e} is not a multiple of 4")
    if not is_primitive(chi):
        raise PreconditionViolated(f"character mod {e} is not primitive")
    half = e // 2
    m = chi.order
    for r in range(e):
        x, y = chi.exponent(r), chi.exponent(r + half)
        if (x == NON_UNIT) != (y == NON_UNIT):
            return False
        # -1 = zeta_m^(m/2) needs m even
        if x != NON_UNIT and (m % 2 or (y - x) % m != m // 2):
            return False
    return True


@dataclass(frozen=True)
class Reduction:
    """N, z0 and f(1..N) produced from a character; combine with (a, r, n, p)."""

    N: int
    z0_kind: Z0Kind
    f_values: tuple

    def params(self, a: int, r: int, n: int, p: int = 1) -> ProblemParams:
        return ProblemParams(a, r, self.N, n, p, self.z0_kind, self.f_values)


def theorem3_reduction(chi: DirichletCharacter) -> Reduction:
    """z0 = 1, f = chi, period N = modulus."""
    N = chi.modulus
    return Reduction(N, Z0Kind.ONE, tuple(chi.value(r) for r in range(1, N + 1)))


def theorem4_reduction(chi: DirichletCharacter) -> Reduction:
    """N = e/2, z0 = exp(i pi / N), f(r) = chi(r) z0^-r (period N by antisymmetry)."""
    e = chi.modulus
    if not halfperiod_antisymmetry(chi):
        raise PreconditionViolated("half-period antisymmetry fails")
    N = e // 2
    f = tuple(chi.value(r) * Cyclotomic.root(-r, 2 * N) for r in range(1, N + 1))
    # period N: f(r + N) = chi(r + N) z0^(-r-N) = (-chi(r)) (-z0^-r)
    for r in range(1, N + 1):
        assert chi.value(r + N) * Cyclotomic.root(-(r + N), 2 * N) == f[r - 1]
    return Reduction(N, Z0Kind.HALF_ROOT, f)


def l_value(chi: DirichletCharacter, s: int, prec_bits: int) -> MPComplex:
    """L(chi, s) = d^-s sum_{r=1}^{d} chi(r) zeta(s, r/d)."""
    if s < 2:
        raise ValueError("l_value needs s >= 2")
    d = chi.modulus
    ctx = make_context(prec_bits + GUARD_BITS)
    acc = ctx.mpc(0)
    err = ctx.mpf(0)
    scale = ctx.mpf(d) ** (-s)
    for r in range(1, d + 1):
        if not chi.is_unit(r):
            continue
        hz = hurwitz_zeta(s, Fraction(r, d), prec_bits + 8)
        v = chi.value(r).to_complex(ctx)
        acc += v * hz.value
        err += hz.error_bound
    return MPComplex(acc * scale, prec_bits, err * scale)


def euler_factor(chi_prime: DirichletCharacter, d: int, s: int, prec_bits: int):
    """prod over primes p | d, p not dividing the conductor, of (1 - chi'(p) p^-s)."""
    ctx = make_context(prec_bits + GUARD_BITS)
    out = ctx.mpc(1)
    for p, _ in _factor(d):
        if chi_prime.modulus % p == 0:
            continue
        out *= 1 - chi_prime.value(p).to_complex(ctx) * ctx.mpf(p) ** (-s)
    return out
