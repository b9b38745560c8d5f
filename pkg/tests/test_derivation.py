from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from padezeta.characters import enumerate_characters, theorem4_reduction
from padezeta.construction import ProblemParams, build
from padezeta.derivation import (LinearFormTable, delta_n, derive, derive_rational, eval_in_zN,
                                 heights_within_bound, p_k1_vanishes_at_one, rational_s_row,
                                 residue_split, s_table, split_by_residue)
from padezeta.exactalg import Poly, RatFunc, lcm_upto

CATALAN = theorem4_reduction(enumerate_characters(4)[1])


def test_split_by_residue_example():
    even, odd = split_by_residue(Poly([1, 1, 1]), 2)
    assert even == Poly([1, 0, 1]) and odd == Poly([1])
    z = Poly.x()
    assert even + z * odd.compose(Poly([0, 1])) == Poly([1, 1, 1])


@given(st.lists(st.integers(-9, 9), max_size=10), st.integers(1, 4))
def test_split_reassembles(coeffs, N):
    p = Poly(coeffs)
    parts = split_by_residue(p, N)
    total = Poly.zero()
    for lam, part in enumerate(parts):
        total = total + Poly.from_dict({lam: 1}) * part
        assert all(e % N == 0 for e, x in enumerate(part.coeffs) if x)
    assert total == p


def test_eval_in_zN():
    p = Poly([1, 0, 3, 0, 5])
    assert eval_in_zN(p, 2, 1) == 9
    assert eval_in_zN(p, 2, -1) == 3
    with pytest.raises(ValueError):
        eval_in_zN(Poly([0, 1]), 2, 1)


def test_delta_n_values():
    assert delta_n(ProblemParams(3, 1, 1, 4)) == 1728
    prm = ProblemParams(5, 1, 2, 4)
    assert delta_n(prm) == (2 * lcm_upto(4)) ** 5 * 2 ** 10


def test_first_forms_are_the_construction():
    c = build(ProblemParams(3, 1, 1, 3))
    f = derive(c, 2)
    assert f.P(1, 1) == c.P[0] and f.U(1) == c.U and f.V(1) == c.V


@pytest.mark.parametrize("key", [(3, 1, 1, 2), (3, 1, 1, 5), (5, 1, 2, 4), (5, 2, 1, 4)])
def test_regular_and_integral(key):
    c = build(ProblemParams(*key))
    forms = derive(c, c.d0 - 1)
    assert p_k1_vanishes_at_one(forms)
    assert heights_within_bound(forms)
    table = s_table(forms)
    assert all(isinstance(v, int) for row in table.s for v in row)


def test_range_enforced():
    c = build(ProblemParams(3, 1, 1, 2))
    with pytest.raises(ValueError):
        derive(c, c.d0)
    with pytest.raises(ValueError):
        derive(c, 0)


def test_rational_continuation_agrees():
    c = build(ProblemParams(3, 1, 1, 4))
    poly = derive(c, c.d0 - 1)
    rat = derive_rational(c, c.d0 + 1)
    for k in range(1, c.d0):
        assert rat.U(k) == RatFunc.from_poly(poly.U(k))
        assert rat.V(k) == RatFunc.from_poly(poly.V(k))
        assert all(rat.P(k, j) == RatFunc.from_poly(poly.P(k, j)) for j in (1, 2, 3))
    # past d0 - 1 the U, V iterates pick up a pole at 1
    assert rat.U(c.d0 + 1).has_pole_at(1) or rat.V(c.d0 + 1).has_pole_at(1)


def test_literal_sign_only_matters_for_negative_zN():
    c = build(ProblemParams(3, 1, 1, 4))
    f = derive(c, 3)
    assert [rational_s_row(f, k) for k in (1, 2, 3)] == \
        [rational_s_row(f, k, literal=True) for k in (1, 2, 3)]
    cc = build(CATALAN.params(5, 1, 4, 0))
    fc = derive(cc, 3)
    assert any(rational_s_row(fc, k) != rational_s_row(fc, k, literal=True) for k in (1, 2, 3))


def test_table_serialization():
    t = s_table(derive(build(ProblemParams(3, 1, 1, 3)), 4))
    assert LinearFormTable.from_json(t.to_json()) == t
    csv_lines = t.to_csv().splitlines()
    assert csv_lines[0] == "k,s_1,s_2,s_3,s_4"
    assert len(csv_lines) == 5
    assert t.column_vector(2) == t.s[1][1:]
    assert t.max_abs() == max(abs(v) for row in t.s for v in row)


def test_residue_split_bounds():
    f = derive(build(ProblemParams(5, 1, 2, 4)), 2)
    U_parts, V_parts = residue_split(f, 2)
    assert len(U_parts) == len(V_parts) == 2
    with pytest.raises(ValueError):
        residue_split(f, 3)
