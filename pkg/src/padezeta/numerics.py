"""Multiprecision evaluation of xi_j, mu_l, the series S0^(k-1), Sinf^(k-1) and Lambda_k.

All functions take an explicit precision in bits and build a private
mpmath context, so there is no shared rounding state.  Error bounds are
carried alongside values; they are budgets (first omitted Euler-Maclaurin
term, geometric tail estimates), not interval enclosures.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath
from mpmath.ctx_mp import MPContext

from .construction import Construction, ProblemParams, Z0Kind
from .errors import DivergentXi1, PrecisionNotReached
from .exactalg import Cyclotomic, Poly, RatFunc, pochhammer
from .exactalg.series import series_at

GUARD_BITS = 32


def make_context(prec_bits: int) -> MPContext:
    ctx = MPContext()
    ctx.prec = prec_bits
    return ctx


def _mpf(ctx, x):
    if isinstance(x, Fraction):
        return ctx.mpf(x.numerator) / x.denominator
    return ctx.mpf(x)


@dataclass(frozen=True)
class MPComplex:
    """A multiprecision complex value with its working precision and an error budget."""

    value: mpmath.mpc
    precision_bits: int
    error_bound: mpmath.mpf

    @property
    def real(self):
        return self.value.real

    @property
    def imag(self):
        return self.value.imag

    def __abs__(self):
        return abs(self.value)

    def _combine(self, other, value, err):
        return MPComplex(value, min(self.precision_bits, other.precision_bits), err)

    def __add__(self, other: "MPComplex") -> "MPComplex":
        return self._combine(other, self.value + other.value, self.error_bound + other.error_bound)

    def __sub__(self, other: "MPComplex") -> "MPComplex":
        return self._combine(other, self.value - other.value, self.error_bound + other.error_bound)

    def __mul__(self, other: "MPComplex") -> "MPComplex":
        err = (abs(self.value) * other.error_bound + abs(other.value) * self.error_bound
               + self.error_bound * other.error_bound)
        return self._combine(other, self.value * other.value, err)

    def scale(self, c) -> "MPComplex":
        return MPComplex(self.value * c, self.precision_bits, self.error_bound * abs(c))

    def to_json(self) -> dict:
        digits = max(int(self.precision_bits * math.log10(2)), 5)
        return {
            "re": mpmath.nstr(self.value.real, digits, min_fixed=-1, max_fixed=1),
            "im": mpmath.nstr(self.value.imag, digits, min_fixed=-1, max_fixed=1),
            "precision_bits": self.precision_bits,
            "error_bound": mpmath.nstr(self.error_bound, 5, min_fixed=-1, max_fixed=1),
        }


def _wrap(ctx, value, prec_bits, err) -> MPComplex:
    return MPComplex(ctx.mpc(value), prec_bits, ctx.mpf(err))


# -- special functions ---------------------------------------------------------

def hurwitz_zeta(s: int, x, prec_bits: int) -> MPComplex:
    """zeta(s, x) = sum_{k>=0} (x+k)^-s for integer s >= 2 and rational x > 0.

    Euler-Maclaurin after shifting x past a threshold; the remainder is at
    most the first omitted correction term, which is driven below
    2^-(prec_bits+8) relative to min(1, |zeta(s, x)|).
    """
    if s < 2:
        raise ValueError("hurwitz_zeta needs s >= 2")
    x = Fraction(x)
    if x <= 0:
        raise ValueError("hurwitz_zeta needs x > 0")
    ctx = make_context(prec_bits + GUARD_BITS)
    # relative budget: zeta(s, x) can be far below 1 for large x
    lead = _mpf(ctx, x) ** (1 - s) / (s - 1) + _mpf(ctx, x) ** (-s)
    target = ctx.ldexp(min(ctx.mpf(1), lead), -(prec_bits + 8))
    threshold = prec_bits // 3 + s + 8
    shift = max(0, math.ceil(threshold - x))
    while True:
        xm = _mpf(ctx, x + shift)
        head = ctx.fsum((_mpf(ctx, x) + k) ** (-s) for k in range(shift))
        tail = xm ** (1 - s) / (s - 1) + xm ** (-s) / 2
        rising = ctx.mpf(s)  # (s)_{2j-1}
        power = xm ** (-s - 1)
        j = 1
        prev = None
        while True:
            term = ctx.bernoulli(2 * j) / ctx.factorial(2 * j) * rising * power
            if abs(term) < target:
                return _wrap(ctx, head + tail, prec_bits, abs(term) + target)
            if prev is not None and abs(term) > abs(prev):
                break  # asymptotic series turned around; shift further
            tail += term
            prev = term
            rising *= (s + 2 * j - 1) * (s + 2 * j)
            power /= xm * xm
            j += 1
        shift = 2 * shift + threshold


def digamma(x, prec_bits: int) -> MPComplex:
    """psi(x) for rational x > 0 by recurrence and the asymptotic expansion."""
    x = Fraction(x)
    if x <= 0:
        raise ValueError("digamma needs x > 0")
    ctx = make_context(prec_bits + GUARD_BITS)
    target = ctx.ldexp(1, -(prec_bits + 8))
    threshold = prec_bits // 3 + 8
    shift = max(0, math.ceil(threshold - x))
    while True:
        y = _mpf(ctx, x + shift)
        head = -ctx.fsum(1 / (_mpf(ctx, x) + k) for k in range(shift))
        val = ctx.log(y) - 1 / (2 * y)
        power = 1 / (y * y)
        prev = None
        j = 1
        while True:
            term = ctx.bernoulli(2 * j) / (2 * j) * power
            if abs(term) < target:
                return _wrap(ctx, head + val, prec_bits, abs(term) + target)
            if prev is not None and abs(term) > abs(prev):
                break
            val -= term
            prev = term
            power /= y * y
            j += 1
        shift = 2 * shift + threshold


# -- roots of unity and the xi / mu data ---------------------------------------

@dataclass(frozen=True)
class UnitRoot:
    """exp(2 i pi k / M), kept exact."""

    k: int
    M: int

    def __post_init__(self):
        g = math.gcd(self.k % self.M, self.M)
        object.__setattr__(self, "k", (self.k % self.M) // g)
        object.__setattr__(self, "M", self.M // g)

    @property
    def order(self) -> int:
        return self.M

    def __mul__(self, other: "UnitRoot") -> "UnitRoot":
        M = math.lcm(self.M, other.M)
        return UnitRoot(self.k * (M // self.M) + other.k * (M // other.M), M)

    def __pow__(self, e: int) -> "UnitRoot":
        return UnitRoot(self.k * e, self.M)

    def inverse(self) -> "UnitRoot":
        return UnitRoot(-self.k, self.M)

    def value(self, ctx):
        if self.k == 0:
            return ctx.mpc(1)
        return ctx.expjpi(ctx.mpf(2 * self.k) / self.M)


def z0_root(params: ProblemParams) -> UnitRoot:
    return UnitRoot(0, 1) if params.z0_kind is Z0Kind.ONE else UnitRoot(1, 2 * params.N)


def omega(params: ProblemParams) -> UnitRoot:
    return UnitRoot(1, params.N)


@dataclass(frozen=True)
class XiVector:
    xi: tuple  # xi[j-1], j = 1..a; xi[0] may be None when it is not needed
    xi_prime: tuple  # xi_prime[i-1], i = 1..a+N
    i0: int


def _periodic_coefficients(params: ProblemParams):
    """c_r = f(r) z0^r over one full period P of n -> f(n) z0^n."""
    P = params.N if params.z0_kind is Z0Kind.ONE else 2 * params.N
    z0 = z0_root(params)
    coeffs = []
    for r in range(1, P + 1):
        zr = z0 ** r
        coeffs.append(params.f(r) * Cyclotomic.root(zr.k, zr.M))
    return P, coeffs


def xi_values(params: ProblemParams, prec_bits: int) -> XiVector:
    a, N, p = params.a, params.N, params.p
    ctx = make_context(prec_bits + GUARD_BITS)
    P, cs = _periodic_coefficients(params)
    cvals = [c.to_complex(ctx) for c in cs]
    xi = []
    for j in range(1, a + 1):
        if j == 1:
            if params.z0_kind is Z0Kind.ONE:
                xi.append(_wrap(ctx, 0, prec_bits, 0))
                continue
            total = ctx.fsum(cvals)
            needed = (1 - p) % 2 == 0  # xi_1 enters only when p is odd
            if abs(total) > ctx.ldexp(1, -(prec_bits // 2)):
                if needed:
                    raise DivergentXi1(f"sum of period coefficients is {total}, xi_1 diverges")
                xi.append(None)
                continue
            acc = ctx.mpc(0)
            err = ctx.mpf(0)
            for r, c in enumerate(cvals, start=1):
                if c == 0:
                    continue
                d = digamma(Fraction(r, P), prec_bits + 8)
                acc += c * d.value
                err += abs(c) * d.error_bound
            xi.append(_wrap(ctx, -acc / P, prec_bits, err / P))
            continue
        acc = ctx.mpc(0)
        err = ctx.mpf(0)
        for r, c in enumerate(cvals, start=1):
            if c == 0:
                continue
            hz = hurwitz_zeta(j, Fraction(r, P), prec_bits + 8)
            w = c * ctx.mpf(P) ** (-j)
            acc += w * hz.value
            err += abs(w) * hz.error_bound
        xi.append(_wrap(ctx, acc, prec_bits, err))
    sign = 2 * (-1) ** p
    xi_prime = []
    for j in range(1, a + 1):
        if j % 2 == p % 2:
            x = xi[j - 1]
            xi_prime.append(x.scale(sign) if x is not None else None)
        else:
            xi_prime.append(_wrap(ctx, 0, prec_bits, 0))
    z0 = z0_root(params)
    for lam in range(N):
        zl = z0 ** lam
        v = (params.f(lam) * Cyclotomic.root(zl.k, zl.M)).to_complex(ctx)
        xi_prime.append(_wrap(ctx, v, prec_bits, ctx.ldexp(abs(v) + 1, -(prec_bits + GUARD_BITS))))
    return XiVector(tuple(xi), tuple(xi_prime), params.i0)


def mu_weights(params: ProblemParams, prec_bits: int) -> list:
    """mu_l = (1/N) sum_{lambda=1}^{N} f(lambda) omega^(-l lambda), l = 1..N."""
    N = params.N
    ctx = make_context(prec_bits + GUARD_BITS)
    out = []
    for ell in range(1, N + 1):
        total = Cyclotomic.zero()
        for lam in range(1, N + 1):
            total = total + params.f(lam) * Cyclotomic.root(-ell * lam, N)
        v = total.to_complex(ctx) / N
        out.append(_wrap(ctx, v, prec_bits, ctx.ldexp(abs(v) + 1, -(prec_bits + GUARD_BITS))))
    return out


# -- series at points of the unit circle -----------------------------------------

def _log2_upper(x: Fraction) -> float:
    """A float >= log2(x) for x > 0 (exact integer bit lengths, padded)."""
    x = Fraction(x)
    return x.numerator.bit_length() - x.denominator.bit_length() + 1.0


def _sum_rational_tail(G: RatFunc, pole_radius, ctx, target, max_terms: int = 4096):
    """sum_{m>=0} G(m) for deg G <= -2 with every pole of G in |m| <= pole_radius.

    Exact partial sum up to M0, then the expansion G(m) = sum_d e_d m^-d
    (valid for |m| > pole_radius) summed against zeta(d, M0).  The dropped
    coefficients obey the Cauchy estimate |e_d| <= B rho^d with
    B = max_{|m| = rho} |G(m)|, rho = 2R + 1, and zeta(d, M0) <= 2 M0^(1-d),
    so the truncation error is at most 2 M0 B q^(D+1) / (1 - q), q = rho / M0.
    """
    if G.degree > -2:
        raise ValueError("summand must decay at least like m^-2")
    R = Fraction(pole_radius)
    rho = 2 * R + 1
    M0 = max(32, math.ceil(32 * rho))
    q = rho / M0
    # B <= sum |num_i| rho^i / (rho - R)^deg(den): den is monic with roots in |m| <= R
    num_bound = sum(abs(x) * rho ** i for i, x in enumerate(G.num.coeffs))
    log2_B = _log2_upper(num_bound) - G.den.degree * math.log2(rho - R)
    log2_target = float(ctx.log(target, 2))
    # need log2(2 M0 B) + (D+1) log2 q - log2(1-q) <= log2_target
    log2_q = math.log2(q)
    slack = 1 + math.log2(M0) + log2_B - math.log2(1 - q) - log2_target
    D = max(-G.degree, math.ceil(slack / -log2_q))
    if D > max_terms:
        raise PrecisionNotReached(f"expansion needs {D} terms (cap {max_terms})")
    head = ctx.mpf(0)
    for m in range(M0):
        v = G(Fraction(m))
        head += ctx.mpf(v.numerator) / v.denominator
    head_err = ctx.ldexp(abs(head) + 1, -ctx.prec + 8)
    ser = series_at(G, "inf", D + 1)
    tail = ctx.mpf(0)
    tail_err = ctx.mpf(0)
    for d in range(-G.degree, D + 1):
        e = ser[d]
        if not e:
            continue
        hz = hurwitz_zeta(d, M0, ctx.prec)
        ef = ctx.mpf(e.numerator) / e.denominator
        tail += ef * hz.value.real
        tail_err += abs(ef) * hz.error_bound
    trunc = ctx.mpf(2 * M0) * ctx.mpf(2) ** log2_B * _mpf(ctx, q) ** (D + 1) / (1 - _mpf(ctx, q))
    return head + tail, head_err + tail_err + trunc


def coefficient_majorant(c: Construction) -> Fraction:
    """A_n with |A_d| <= (2n)^d A_n for the expansion F(t) = sum_{d >= d0} A_d t^-d.

    A_d = sum_{j,h} (-N h)^(d-j) C(d-1, j-1) p_{j,h}; with N h <= n and
    C(d-1, j-1) <= 2^(d-1), each term is at most |p_{j,h}| n^-j (2n)^d.
    """
    n = c.params.n
    return sum((abs(v) * Fraction(1, n ** j) for (j, h), v in c.pjh.coeffs.items()), Fraction(0))


def tail_majorant(c: Construction, which: str, k: int, T: int, rho) -> Fraction:
    """Upper bound for sum_{t > T} |g(t)| rho^t, g the S0 / Sinf summand, rho < 1, T >= 2n + k.

    Uses |F(+-t)| <= (2n+1) A_n (2n/t)^d0 for |t| >= 2n+1 and the Pochhammer
    factor bounded by (2t)^(k-1); the sum over t > T is compared with
    T^(k-1-d0) rho^(T+1) / (1 - rho) (the exponent k-1-d0 is negative).
    """
    n, d0 = c.params.n, c.d0
    if T < 2 * n + k:
        raise ValueError("tail majorant needs T >= 2n + k")
    rho = Fraction(rho)
    if not 0 <= rho < 1:
        raise ValueError("tail majorant needs 0 <= rho < 1")
    A = coefficient_majorant(c)
    C = (2 * n + 1) * A * Fraction(2 * n) ** d0 * 2 ** (k - 1)
    return C * Fraction(T) ** (k - 1 - d0) * rho ** (T + 1) / (1 - rho)


def _series_sum_on_circle(g: RatFunc, start: int, u: UnitRoot, pole_shift, ctx, target):
    """sum_{t>=start} g(t) u^t, split into residue classes of t modulo ord(u).

    ``pole_shift(c)`` returns the pole radius of g(start + c + P m) in m.
    """
    P = u.order
    total = ctx.mpc(0)
    err = ctx.mpf(0)
    for c in range(P):
        G = g.compose_linear(start + c, P)
        val, e = _sum_rational_tail(G, pole_shift(c, P), ctx, target / P)
        total += (u ** (start + c)).value(ctx) * val
        err += e
    return total, err


def _summand(c: Construction, which: str, k: int) -> RatFunc:
    t = Poly.x()
    if which == "S0":
        # F(-t) (t - k + 2)_{k-1}
        return c.F.compose_linear(0, -1) * RatFunc.from_poly(pochhammer(t + (2 - k), k - 1))
    if which == "Sinf":
        sign = (-1) ** (k - 1)
        return c.F * RatFunc.from_poly(pochhammer(t, k - 1).scale(sign))
    raise ValueError(f"unknown series {which!r}")


def eval_S_deriv(c: Construction, which: str, k: int, z, prec_bits: int,
                 term_cap: int = 200_000) -> MPComplex:
    """S0^(k-1)(z) or Sinf^(k-1)(z) by direct summation of the defining series.

    ``z`` is a :class:`UnitRoot` (|z| = 1, needs k <= d0 - 1) or a complex
    number with |z| < 1 (S0) or |z| > 1 (Sinf).
    """
    if not 1 <= k <= c.d0 - 1:
        raise ValueError(f"k = {k} outside 1..d0-1 = {c.d0 - 1}")
    n, N = c.params.n, c.params.N
    ctx = make_context(prec_bits + GUARD_BITS)
    target = ctx.ldexp(1, -(prec_bits + 8))
    g = _summand(c, which, k)
    if which == "S0":
        start = n + 1
        # poles of F(-t) at t = N h in [0, n]
        def radius(cls, P):
            return Fraction(start + cls, P)
    else:
        start = 1
        # poles of F(t) at t = -N h in [-n, 0]
        def radius(cls, P):
            return Fraction(start + cls + n, P)

    if isinstance(z, UnitRoot):
        w = z if which == "S0" else z.inverse()
        total, err = _series_sum_on_circle(g, start, w, radius, ctx, target)
        pref = (z ** (1 - k)).value(ctx)
        return _wrap(ctx, pref * total, prec_bits, err)

    zc = ctx.mpc(_mpf(ctx, z)) if isinstance(z, (int, Fraction)) else ctx.mpc(z)
    w = zc if which == "S0" else 1 / zc
    if abs(w) >= 1:
        raise ValueError("numeric z must lie strictly inside the domain of convergence")
    # rational upper bound on |w| for the majorant
    rho = Fraction(int(ctx.ceil(abs(w) * 2 ** 40)), 2 ** 40)
    if rho >= 1:
        raise PrecisionNotReached("|z| too close to 1 for direct summation")
    target_q = Fraction(1, 2 ** (prec_bits + 8))
    total = ctx.mpc(0)
    wt = w ** start
    T0 = 2 * n + k
    for idx in range(term_cap):
        t = start + idx
        v = g(Fraction(t))
        total += (ctx.mpf(v.numerator) / v.denominator) * wt
        wt *= w
        if t >= T0 and idx % 16 == 15:
            bound = tail_majorant(c, which, k, t, rho)
            if bound < target_q:
                err = _mpf(ctx, bound) + ctx.ldexp(abs(total) + 1, -(prec_bits + 16))
                return _wrap(ctx, zc ** (1 - k) * total, prec_bits, err * abs(zc ** (1 - k)))
    raise PrecisionNotReached(f"tail majorant above target after {term_cap} terms")


@dataclass(frozen=True)
class LambdaPair:
    direct: MPComplex
    via_table: MPComplex
    delta_n: int

    def scaled_discrepancy(self):
        """|delta_n * direct - sum s xi'|."""
        ctx = make_context(self.direct.precision_bits + self.delta_n.bit_length() + GUARD_BITS)
        d = ctx.mpc(self.direct.value) - ctx.mpc(self.via_table.value)
        return abs(d) * self.delta_n


def lambda_direct(c: Construction, k: int, prec_bits: int, mu=None) -> MPComplex:
    prm = c.params
    N = prm.N
    ctx = make_context(prec_bits + GUARD_BITS)
    mu = mu_weights(prm, prec_bits) if mu is None else mu
    z0, om = z0_root(prm), omega(prm)
    total = _wrap(ctx, 0, prec_bits, 0)
    sign = (-1) ** prm.p
    for ell in range(1, N + 1):
        u = (om ** ell) * z0
        s0 = eval_S_deriv(c, "S0", k, u, prec_bits + 8)
        si = eval_S_deriv(c, "Sinf", k, u.inverse(), prec_bits + 8)
        part = (s0.scale((u ** (k - 1)).value(ctx))
                + si.scale(sign * (u ** (1 - k)).value(ctx)))
        total = total + mu[ell - 1] * part
    return total


def linear_form_value(table, xi: XiVector, k: int, prec_bits: int) -> MPComplex:
    """sum_{i >= i0} s_{k,i} xi'_i (exact integers times multiprecision values)."""
    bits = prec_bits + table.max_abs([k]).bit_length() + GUARD_BITS
    ctx = make_context(bits)
    total = _wrap(ctx, 0, bits, 0)
    for i in range(table.i0, table.a + table.N + 1):
        s = table.entry(k, i)
        if not s:
            continue
        x = xi.xi_prime[i - 1]
        if x is None:
            raise DivergentXi1(f"xi'_{i} undefined but s_{{{k},{i}}} = {s}")
        total = total + x.scale(ctx.mpf(s))
    return MPComplex(total.value, prec_bits, total.error_bound)


def lambda_k(c: Construction, forms, table, k: int, prec_bits: int, xi: XiVector | None = None,
             mu=None) -> LambdaPair:
    if not 1 <= k <= c.d0 - 1:
        raise ValueError(f"k = {k} outside 1..d0-1")
    if xi is None:
        xi = xi_values(c.params, prec_bits + 16 + table.max_abs([k]).bit_length())
    direct = lambda_direct(c, k, prec_bits, mu)
    form = linear_form_value(table, xi, k, prec_bits)
    ctx = make_context(prec_bits + table.delta_n.bit_length() + GUARD_BITS)
    via = form.scale(1 / ctx.mpf(table.delta_n))
    return LambdaPair(direct, via, table.delta_n)


def identity_holds(pair: LambdaPair, tol_bits: int = 64) -> bool:
    """|delta_n Lambda_k - sum s xi'| < 2^-tol_bits max(1, |delta_n Lambda_k|)."""
    ctx = make_context(pair.direct.precision_bits + GUARD_BITS)
    scaled = abs(ctx.mpc(pair.direct.value)) * pair.delta_n
    bound = ctx.ldexp(max(ctx.mpf(1), scaled), -tol_bits)
    return pair.scaled_discrepancy() < bound


def combined_values(values: Sequence[MPComplex]):
    return [v.value for v in values]
