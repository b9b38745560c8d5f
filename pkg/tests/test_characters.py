import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from padezeta.characters import (DirichletCharacter, NON_UNIT, conductor, enumerate_characters,
                                 euler_factor, halfperiod_antisymmetry, is_primitive, l_value,
                                 primitive_part, principal_character, theorem3_reduction,
                                 theorem4_reduction)
from padezeta.construction import Z0Kind
from padezeta.errors import PreconditionViolated
from padezeta.exactalg import Cyclotomic
from padezeta.numerics import xi_values
from oracles import catalan_cvz

PREC = 160


def ctx_():
    ctx = mpmath.MPContext()
    ctx.prec = PREC + 30
    return ctx


def tight(x, y, ctx, bits=PREC - 10):
    return abs(ctx.mpc(x) - ctx.mpc(y)) < ctx.ldexp(1, -bits)


def phi(d):
    return sum(1 for r in range(1, d + 1) if math.gcd(r, d) == 1)


@given(st.integers(1, 40))
def test_character_count_and_multiplicativity(d):
    chars = enumerate_characters(d)
    assert len(chars) == phi(d)
    assert len(set(chars)) == len(chars)
    assert chars[0].is_principal()
    for chi in chars:
        m = chi.order
        for x in range(d):
            for y in range(d):
                ex, ey, exy = chi.exponent(x), chi.exponent(y), chi.exponent(x * y)
                if NON_UNIT in (ex, ey):
                    assert exy == NON_UNIT
                else:
                    assert exy == (ex + ey) % m


@given(st.integers(2, 30))
def test_orthogonality(d):
    ctx = ctx_()
    chars = enumerate_characters(d)
    for chi in chars:
        total = sum((chi.value(r).to_complex(ctx) for r in range(d)), ctx.mpc(0))
        expected = phi(d) if chi.is_principal() else 0
        assert abs(total - expected) < ctx.mpf(2) ** -100


def test_known_conductors():
    assert [conductor(c) for c in enumerate_characters(8)] == [1, 8, 4, 8]
    assert [conductor(c) for c in enumerate_characters(12)] == [1, 3, 4, 12]
    chi4 = enumerate_characters(4)[1]
    assert chi4.exponents == (NON_UNIT, 0, NON_UNIT, 1) and chi4.order == 2
    assert chi4.parity() == 1 and principal_character(4).parity() == 0


@given(st.integers(1, 48))
def test_primitive_part_idempotent(d):
    for chi in enumerate_characters(d):
        pp = primitive_part(chi)
        assert pp.modulus == conductor(chi)
        assert is_primitive(pp)
        assert primitive_part(pp) == pp
        # pp induces chi on units
        for r in range(d):
            if chi.is_unit(r):
                assert Fraction(pp.exponent(r), pp.order) == Fraction(chi.exponent(r), chi.order)


@pytest.mark.parametrize("e", [4, 8, 12, 16, 20, 24])
def test_halfperiod_antisymmetry(e):
    prims = [c for c in enumerate_characters(e) if is_primitive(c)]
    assert prims
    assert all(halfperiod_antisymmetry(c) for c in prims)


def test_antisymmetry_preconditions():
    with pytest.raises(PreconditionViolated):
        halfperiod_antisymmetry(enumerate_characters(6)[1])
    with pytest.raises(PreconditionViolated):
        halfperiod_antisymmetry(principal_character(8))


def test_character_json():
    chi = enumerate_characters(15)[3]
    assert DirichletCharacter.from_json(chi.to_json()) == chi


@pytest.mark.parametrize("d, idx, s", [(3, 1, 2), (5, 2, 3), (7, 1, 2), (12, 3, 3)])
def test_l_value_against_mpmath(d, idx, s):
    ctx = ctx_()
    chi = enumerate_characters(d)[idx]
    ref = ctx.dirichlet(s, [chi.value(r).to_complex(ctx) for r in range(d)])
    got = l_value(chi, s, PREC)
    assert tight(got.value, ref, ctx)
    assert got.error_bound < ctx.ldexp(1, -PREC + 4)


def test_catalan():
    ctx = ctx_()
    G = catalan_cvz(PREC + 20)
    assert tight(l_value(enumerate_characters(4)[1], 2, PREC).value, G, ctx)
    assert tight(G, ctx.catalan, ctx)


@pytest.mark.parametrize("d", [8, 12, 24, 15])
def test_euler_factor_relation(d):
    ctx = ctx_()
    for chi in enumerate_characters(d):
        pp = primitive_part(chi)
        lhs = l_value(chi, 3, PREC).value
        rhs = l_value(pp, 3, PREC).value * euler_factor(pp, d, 3, PREC)
        assert tight(lhs, rhs, ctx)


def test_reductions():
    chi = enumerate_characters(4)[1]
    red = theorem4_reduction(chi)
    assert red.N == 2 and red.z0_kind is Z0Kind.HALF_ROOT
    # f(r) = chi(r) exp(-i pi r / 2): f(1) = -i, f(2) = 0
    assert red.f_values == (Cyclotomic.root(3, 4), Cyclotomic.zero())
    prm = red.params(5, 1, 2, 0)
    ctx = ctx_()
    xi = xi_values(prm, PREC)
    assert tight(xi.xi[2].value, l_value(chi, 3, PREC).value, ctx)
    red3 = theorem3_reduction(enumerate_characters(5)[1])
    assert red3.N == 5 and red3.z0_kind is Z0Kind.ONE
    with pytest.raises(PreconditionViolated):
        theorem4_reduction(principal_character(4))


@pytest.mark.parametrize("e, idx", [(8, 1), (12, 3)])
def test_theorem4_reduction_xi_is_L(e, idx):
    chi = enumerate_characters(e)[idx]
    assert is_primitive(chi)
    red = theorem4_reduction(chi)
    a = 4 * red.N + 1
    xi = xi_values(red.params(a, 1, red.N, 1 - chi.parity()), PREC)
    ctx = ctx_()
    for j in (2, 3):
        assert tight(xi.xi[j - 1].value, l_value(chi, j, PREC).value, ctx)
