"""Independent reference computations used only by the tests."""
from fractions import Fraction

import mpmath
import sympy


def cvz_alternating(term, n_terms, prec_bits):
    """Cohen-Rodriguez Villegas-Zagier acceleration of sum_{k>=0} (-1)^k term(k).

    Error is about 5.8^-n_terms relative to the sum.
    """
    ctx = mpmath.MPContext()
    ctx.prec = prec_bits + 20
    d = (3 + ctx.sqrt(8)) ** n_terms
    d = (d + 1 / d) / 2
    b = ctx.mpf(-1)
    c = -d
    s = ctx.mpf(0)
    for k in range(n_terms):
        c = b - c
        s += c * term(ctx, k)
        b = b * (k + n_terms) * (k - n_terms) / ((k + ctx.mpf(1) / 2) * (k + 1))
    return s / d


def catalan_cvz(prec_bits):
    n = int(prec_bits / 2.5) + 10
    return cvz_alternating(lambda ctx, k: 1 / ctx.mpf(2 * k + 1) ** 2, n, prec_bits)


def sympy_poly(p, var):
    return sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(p.coeffs)]
                      or [0], var)


def from_sympy_poly(sp):
    from padezeta.exactalg import Poly
    coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(sp.all_coeffs())]
    return Poly(coeffs)


def sympy_ratfunc(f, var):
    return sympy_poly(f.num, var).as_expr() / sympy_poly(f.den, var).as_expr()


def sympy_partial_fractions(F, N, a, m):
    """p_{j,h} read off sympy Laurent expansions at each pole t = -Nh, keyed (j, h)."""
    t, u = sympy.symbols("t u")
    expr = sympy.cancel(sympy_ratfunc(F, t))
    out = {}
    for h in range(m + 1):
        local = sympy.series(expr.subs(t, u - N * h), u, 0, 0).removeO()
        for j in range(1, a + 1):
            c = sympy.Rational(sympy.expand(local).coeff(u, -j))
            if c:
                out[(j, h)] = Fraction(int(c.p), int(c.q))
    return out
