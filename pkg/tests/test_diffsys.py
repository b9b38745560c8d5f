from fractions import Fraction

import mpmath
import pytest

from padezeta.construction import ProblemParams, build
from padezeta.derivation import derive
from padezeta.diffsys import (RatFuncMatrix, RemainderVector, adjoint_iterates, apply_adjoint,
                              build_A_br, build_M, construction_vector, det_M, det_M_nonzero,
                              evaluation_matrix, poles_within, rank_at_point, rank_profile,
                              smallest_prefix)
from padezeta.errors import PoleAtPoint
from padezeta.exactalg import Poly, RatFunc
from padezeta.numerics import eval_S_deriv


def test_A_br_shape():
    A = build_A_br(2)
    assert A.q == 4
    # row 1 carries two entries, rows 2..a one subdiagonal -1/z each
    assert A.nonzero_count() == 3
    assert build_A_br(5).nonzero_count() == 6
    assert A.trace().is_zero()
    col = A.column(2)
    assert col[0] == RatFunc(Poly.one(), Poly([-1, 1]))
    assert all(x.is_zero() for x in col[1:])
    with pytest.raises(ValueError):
        build_A_br(1)


@pytest.mark.parametrize("a", [2, 3, 4])
def test_polylog_solutions_satisfy_system(a):
    ctx = mpmath.MPContext()
    ctx.prec = 120
    A = build_A_br(a)
    z0 = Fraction(1, 3)

    def Y0(z):
        return [(-1) ** j * ctx.polylog(j, z) for j in range(1, a + 1)] + [1, 0]

    def Yinf(z):
        return [ctx.polylog(j, 1 / z) for j in range(1, a + 1)] + [0, 1]

    for Y, z in ((Y0, z0), (Yinf, 1 / z0)):
        zz = ctx.mpf(z.numerator) / z.denominator
        deriv = [ctx.diff(lambda x, i=i: Y(x)[i], zz) for i in range(a + 2)]
        vals = Y(zz)
        for i in range(a + 2):
            rhs = sum((ctx.mpf(A[i, j](Fraction(z)).numerator) / A[i, j](Fraction(z)).denominator)
                      * vals[j] for j in range(a + 2) if not A[i, j].is_zero())
            assert abs(deriv[i] - rhs) < ctx.mpf(10) ** -25


def test_apply_adjoint_examples():
    zero = RatFuncMatrix.zeros(1)
    v = RemainderVector.of([Poly([0, 0, 1])])
    assert apply_adjoint(zero, v, 1) == v
    assert apply_adjoint(zero, v, 3)[0] == RatFunc(Poly.const(2))
    with pytest.raises(ValueError):
        apply_adjoint(build_A_br(2), v, 2)


def test_M_examples():
    zero = RatFuncMatrix.zeros(1)
    M = build_M(zero, RemainderVector.of([Poly.x()]))
    assert det_M(M) == RatFunc.x() and det_M_nonzero(M)
    A = build_A_br(3)
    assert not det_M_nonzero(build_M(A, RemainderVector.of([0] * 5)))


@pytest.mark.parametrize("n", [4, 6])
def test_adjoint_matches_derivation(n):
    c = build(ProblemParams(3, 1, 1, n))
    K = min(8, c.d0 - 1)
    forms = derive(c, K)
    its = adjoint_iterates(build_A_br(3), construction_vector(c), K)
    z = RatFunc.x()
    for k in range(1, K + 1):
        scale = z ** (k - 1)
        got = [x * scale for x in its[k - 1]]
        want = [RatFunc.from_poly(forms.P(k, j)) for j in (1, 2, 3)]
        want += [RatFunc.from_poly(forms.U(k)), RatFunc.from_poly(forms.V(k))]
        assert got == want


def test_remainder_derivatives_numerically():
    # S0^(k-1)(z) = P_{k,a+1}(z) + sum_i P_{k,i}(z) (-1)^i Li_i(z) at z = 1/3
    c = build(ProblemParams(3, 1, 1, 4))
    ctx = mpmath.MPContext()
    ctx.prec = 150
    z = Fraction(1, 3)
    its = adjoint_iterates(build_A_br(3), construction_vector(c), 4)
    zz = ctx.mpf(1) / 3
    for k in (1, 2, 4):
        v = its[k - 1]
        q = lambda f: ctx.mpf(f(z).numerator) / f(z).denominator
        rhs = q(v[3]) + sum(q(v[i - 1]) * (-1) ** i * ctx.polylog(i, zz) for i in (1, 2, 3))
        lhs = eval_S_deriv(c, "S0", k, z, 140).value
        assert abs(ctx.mpc(lhs) - rhs) < ctx.mpf(2) ** -120


def test_det_and_rank_at_one():
    c = build(ProblemParams(3, 1, 1, 4))
    A, v = build_A_br(3), construction_vector(c)
    M = build_M(A, v)
    d = det_M(M)
    assert not d.is_zero()
    assert poles_within(d, [0, 1])
    assert not poles_within(RatFunc(Poly.one(), Poly([2, 1])), [0, 1])
    E = evaluation_matrix(A, v, 1, c.d0 - 1)
    assert all(x == 0 for x in E[0])
    assert rank_at_point(A, v, 1, c.d0 - 1) == 4
    prof = rank_profile(A, v, 1, c.d0 - 1)
    assert prof == sorted(prof) and prof[-1] == 4
    assert smallest_prefix(prof, 4) == prof.index(4) + 1
    assert smallest_prefix(prof, 5) is None
    assert rank_at_point(A, v, Fraction(1, 2), 1) >= 1


def test_pole_detection():
    c = build(ProblemParams(3, 1, 1, 2))
    A, v = build_A_br(3), construction_vector(c)
    with pytest.raises(PoleAtPoint):
        rank_at_point(A, v, 0, 3)
    with pytest.raises(PoleAtPoint):
        rank_at_point(A, v, 1, c.d0 + 1)
