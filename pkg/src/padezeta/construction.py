"""The rational function F, its partial fractions, and the polynomials P_j, U, V.

For parameters (a, r, N, n) with 1 <= r < a/(2N) and N | n, put m = n/N and

    F(t) = m!^(a-2rN) (t - rn)_{rn} (t + n + 1)_{rn} / prod_{h=0}^{m} (t + N h)^a
         = sum_{j=1}^{a} sum_{h=0}^{m} p_{j,h} / (t + N h)^j .

Then S0(z) = sum_{t>n} F(-t) z^t = U(z) + sum_j P_j(z) (-1)^j Li_j(z) and
Sinf(z) = sum_{t>=1} F(t) z^-t = V(z) + sum_j P_j(z) Li_j(1/z), with
P_j(z) = sum_h p_{j,h} z^(N h).
"""
from __future__ import annotations

import enum
import hashlib
import json
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .errors import InvalidParameters
from .exactalg import (
    Cyclotomic,
    PartialFractionForm,
    Poly,
    RatFunc,
    Series,
    pf_base_expansions,
    pf_multiply,
    pf_power,
)


class Z0Kind(str, enum.Enum):
    ONE = "one"
    HALF_ROOT = "half_root"  # z0 = exp(i pi / N)


class D0BelowClaim(UserWarning):
    """d0 came out smaller than n + a (possible for N >= 2)."""


def _default_f(N):
    return tuple(Cyclotomic.rational(1) for _ in range(N))


@dataclass(frozen=True)
class ProblemParams:
    a: int
    r: int
    N: int
    n: int
    p: int = 1
    z0_kind: Z0Kind = Z0Kind.ONE
    f_values: tuple = None  # f(1), ..., f(N); f has period N

    def __post_init__(self):
        object.__setattr__(self, "z0_kind", Z0Kind(self.z0_kind))
        fv = self.f_values
        if fv is None:
            fv = _default_f(self.N) if isinstance(self.N, int) and self.N >= 1 else ()
        fv = tuple(v if isinstance(v, Cyclotomic) else Cyclotomic.rational(v) for v in fv)
        object.__setattr__(self, "f_values", fv)
        self.validate()

    def validate(self):
        a, r, N, n, p = self.a, self.r, self.N, self.n, self.p
        if not all(isinstance(v, int) for v in (a, r, N, n, p)):
            raise InvalidParameters("a, r, N, n, p must be integers")
        if a < 2:
            raise InvalidParameters(f"a = {a} must be at least 2")
        if r < 1 or N < 1 or n < 1:
            raise InvalidParameters("r, N, n must be positive")
        if p not in (0, 1):
            raise InvalidParameters(f"p = {p} must be 0 or 1")
        if n % N:
            raise InvalidParameters(f"N = {N} does not divide n = {n}")
        if not 2 * r * N < a:
            raise InvalidParameters(f"r = {r} violates r < a/(2N) = {a}/{2 * N}")
        if len(self.f_values) != N:
            raise InvalidParameters(f"expected {N} values f(1..N), got {len(self.f_values)}")

    @property
    def m(self) -> int:
        return self.n // self.N

    @property
    def i0(self) -> int:
        return 2 if self.z0_kind is Z0Kind.ONE else 1

    @property
    def d0(self) -> int:
        return self.a * (self.m + 1) - 2 * self.r * self.n

    @property
    def z0_power_N(self) -> int:
        """z0^N, which is +1 or -1."""
        return 1 if self.z0_kind is Z0Kind.ONE else -1

    def f(self, k: int) -> Cyclotomic:
        """f(k) for any integer k (period N)."""
        return self.f_values[(k - 1) % self.N]

    def key(self) -> dict:
        return {"a": self.a, "r": self.r, "N": self.N, "n": self.n, "p": self.p,
                "z0_kind": self.z0_kind.value,
                "f_values": [v.to_json() for v in self.f_values]}

    def f_hash(self) -> str:
        blob = json.dumps([v.to_json() for v in self.f_values], sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    def to_json(self) -> dict:
        return self.key()

    @classmethod
    def from_json(cls, data) -> "ProblemParams":
        return cls(data["a"], data["r"], data["N"], data["n"], data["p"], Z0Kind(data["z0_kind"]),
                   tuple(Cyclotomic.from_json(v) for v in data["f_values"]))


# -- F ----------------------------------------------------------------------

def build_F(params: ProblemParams) -> RatFunc:
    a, r, N, n, m = params.a, params.r, params.N, params.n, params.m
    if a - 2 * r * N <= 0:
        raise InvalidParameters("a - 2rN must be positive")
    t = Poly.x()
    num = Poly.const(Fraction(factorial(m)) ** (a - 2 * r * N))
    for s in range(r * n):
        num = num * (t + (s - r * n)) * (t + (n + 1 + s))
    den = Poly.one()
    for h in range(m + 1):
        den = den * (t + N * h) ** a
    # numerator roots 1..rn and -(n+1)..-(n+rn) avoid the poles 0, -N, ..., -n
    return RatFunc(num, den, reduced=True)


def evaluate_F(params: ProblemParams, t: int) -> Fraction:
    """F(t) straight from the product formula (t must not be a pole)."""
    a, r, N, n, m = params.a, params.r, params.N, params.n, params.m
    num = Fraction(factorial(m)) ** (a - 2 * r * N)
    for s in range(r * n):
        num *= (t + s - r * n) * (t + n + 1 + s)
        if not num:
            return Fraction(0)
    den = 1
    for h in range(m + 1):
        den *= (t + N * h) ** a
    if den == 0:
        raise ZeroDivisionError(f"F has a pole at t = {t}")
    return num / den


def expand_F(params: ProblemParams) -> PartialFractionForm:
    """p_{j,h} by multiplying the elementary expansions F0^(a-2rN) G_1..G_rN H_N..H_(r+1)N-1."""
    base = pf_base_expansions(params)
    form = pf_power(base.F0, params.a - 2 * params.r * params.N)
    for i in sorted(base.G):
        form = pf_multiply(form, base.G[i])
    for i in sorted(base.H):
        form = pf_multiply(form, base.H[i])
    if form.const:
        raise AssertionError("F should be a proper rational function")
    return PartialFractionForm(params.N, params.a, params.m, form.coeffs)


def expand_F_oracle(F: RatFunc, params) -> PartialFractionForm:
    """p_{j,h} = (d/dt)^(a-j) [F(t) (t+Nh)^a] / (a-j)!  at t = -Nh."""
    a, N, m = params.a, params.N, params.m
    coeffs = {}
    for h in range(m + 1):
        g = F * RatFunc.from_poly(Poly([N * h, 1]) ** a)
        at = Fraction(-N * h)
        deriv = g
        for k in range(a):  # k-th derivative gives j = a - k
            j = a - k
            coeffs[(j, h)] = deriv(at) / factorial(k)
            if k + 1 < a:
                deriv = deriv.derivative()
    return PartialFractionForm(N, a, m, coeffs)


def build_polys(params: ProblemParams, pjh: PartialFractionForm):
    a, N, n, m = params.a, params.N, params.n, params.m
    P = tuple(Poly.from_dict({N * h: pjh[(j, h)] for h in range(m + 1)}) for j in range(1, a + 1))
    U_terms, V_terms = {}, {}
    for t in range(1, n + 1):
        acc = Fraction(0)
        for h in range((t - 1) // N + 1):
            base = N * h - t  # F(-t) = sum p_{j,h} / (N h - t)^j fixes the sign
            for j in range(1, a + 1):
                c = pjh[(j, h)]
                if c:
                    acc += c / base ** j
        U_terms[t] = -acc
    for t in range(0, n):
        acc = Fraction(0)
        for h in range(-(-(t + 1) // N), m + 1):
            base = N * h - t
            for j in range(1, a + 1):
                c = pjh[(j, h)]
                if c:
                    acc += c / base ** j
        V_terms[t] = -acc
    return P, Poly.from_dict(U_terms), Poly.from_dict(V_terms)


@dataclass(frozen=True)
class Construction:
    params: ProblemParams
    F: RatFunc
    pjh: PartialFractionForm
    P: tuple
    U: Poly
    V: Poly
    d0: int
    flags: tuple = field(default=())

    @property
    def a(self):
        return self.params.a

    def polys(self):
        """(P_1, ..., P_a, U, V)."""
        return self.P + (self.U, self.V)

    def to_json(self) -> dict:
        return {
            "params": self.params.to_json(),
            "d0": self.d0,
            "flags": list(self.flags),
            "F": self.F.to_json(),
            "pjh": self.pjh.to_json(),
            "P": [p.to_json() for p in self.P],
            "U": self.U.to_json(),
            "V": self.V.to_json(),
        }

    @classmethod
    def from_json(cls, data) -> "Construction":
        return cls(ProblemParams.from_json(data["params"]), RatFunc.from_json(data["F"]),
                   PartialFractionForm.from_json(data["pjh"]),
                   tuple(Poly.from_json(p) for p in data["P"]),
                   Poly.from_json(data["U"]), Poly.from_json(data["V"]), data["d0"],
                   tuple(data["flags"]))


def build(params: ProblemParams) -> Construction:
    F = build_F(params)
    d0 = params.d0
    if -F.degree != d0:
        raise AssertionError(f"d0 = {d0} but deg F = {F.degree}")
    flags = []
    if d0 < params.n + params.a:
        flags.append("d0_below_n_plus_a")
        warnings.warn(f"d0 = {d0} < n + a = {params.n + params.a} for {params.key()}",
                      D0BelowClaim, stacklevel=2)
    pjh = expand_F(params)
    P, U, V = build_polys(params, pjh)
    return Construction(params, F, pjh, P, U, V, d0, tuple(flags))


# -- coefficient access and checks -------------------------------------------

def s0_coefficient(c: Construction, t: int) -> Fraction:
    if t < c.params.n + 1:
        raise ValueError(f"S0 has no coefficient at t = {t} <= n")
    return evaluate_F(c.params, -t)


def sinf_coefficient(c: Construction, t: int) -> Fraction:
    if t < 1:
        raise ValueError(f"Sinf has no coefficient at t = {t} < 1")
    return evaluate_F(c.params, t)


def _log1p_series(order: int) -> Series:
    return Series(0, tuple([Fraction(0)] + [Fraction((-1) ** (k + 1), k) for k in range(1, order)]))


def pade_at_one_series(c: Construction, order: int) -> Series:
    """sum_j P_j(z) (-1)^(j-1) log(z)^(j-1) / (j-1)! expanded in u = z - 1."""
    lg = _log1p_series(order)
    total = Series(0, (Fraction(0),) * order)
    power = Series(0, (Fraction(1),) + (Fraction(0),) * (order - 1))  # log^0
    for j, Pj in enumerate(c.P, start=1):
        if j > 1:
            power = (power * lg).truncate(order)
        coef = Fraction((-1) ** (j - 1), factorial(j - 1))
        total = total + (Series.from_poly(Pj.taylor_shift(1), order) * power).truncate(order).scale(coef)
    return total


def verify_pade_at_one(c: Construction, depth: int, cap: int = 64) -> bool:
    if depth > c.d0 - 1:
        raise ValueError(f"depth {depth} exceeds d0 - 1 = {c.d0 - 1}")
    depth = min(depth, cap)
    if depth <= 0:
        return True
    s = pade_at_one_series(c, depth)
    return all(x == 0 for x in s.coeffs[:depth])


def polylog_series(j: int, order: int) -> Series:
    return Series(0, tuple([Fraction(0)] + [Fraction(1, t ** j) for t in range(1, order)]))


def s0_formal_series(c: Construction, order: int) -> Series:
    """U + sum_j P_j (-1)^j Li_j as an exact power series mod z^order."""
    total = Series.from_poly(c.U, order)
    for j, Pj in enumerate(c.P, start=1):
        term = (Series.from_poly(Pj, order) * polylog_series(j, order)).truncate(order)
        total = total + term.scale((-1) ** j)
    return total


def check_s0_identity(c: Construction, order: int) -> bool:
    lhs = s0_formal_series(c, order)
    n = c.params.n
    return all(lhs[t] == (s0_coefficient(c, t) if t > n else 0) for t in range(order))


def sinf_formal_terms(c: Construction, depth: int) -> dict:
    """Coefficients of V(z) + sum_j P_j(z) Li_j(1/z) for exponents n .. -depth."""
    out = {e: Fraction(0) for e in range(-depth, c.params.n + 1)}
    for e, v in enumerate(c.V.coeffs):
        out[e] += v
    for j, Pj in enumerate(c.P, start=1):
        for e, pc in enumerate(Pj.coeffs):
            if not pc:
                continue
            for s in range(1, e + depth + 1):
                out[e - s] += pc / Fraction(s) ** j
    return out


def check_sinf_identity(c: Construction, depth: int) -> bool:
    terms = sinf_formal_terms(c, depth)
    for e, v in terms.items():
        expected = sinf_coefficient(c, -e) if e < 0 else 0
        if v != expected:
            return False
    return True


def vanishing_orders_ok(c: Construction) -> bool:
    """S0 coefficients vanish for t in (n, (r+1)n], F(t) = 0 for t in [1, rn]."""
    n, r = c.params.n, c.params.r
    return (all(s0_coefficient(c, t) == 0 for t in range(n + 1, (r + 1) * n + 1))
            and all(sinf_coefficient(c, t) == 0 for t in range(1, r * n + 1)))


def order_condition_count(params: ProblemParams) -> dict:
    """Unknowns versus linear conditions of the simultaneous Padé problem."""
    a, N, n, r, d0 = params.a, params.N, params.n, params.r, params.d0
    unknowns = (n + 1) * (a + 2 * N)
    equations = 2 * N * ((r + 1) * n + 1) + N * (d0 - 1)
    return {"unknowns": unknowns, "equations": equations,
            "difference": unknowns - equations, "expected_difference": N - a * (N - 1)}

