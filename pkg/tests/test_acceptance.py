"""Acceptance criteria 1-11, one PASS/FAIL line each.

Run under pytest (lines appear in the terminal summary) or directly with
``python3 tests/test_acceptance.py``.
"""
import json
import os
import subprocess
import sys
import tempfile
import time
import warnings
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from padezeta.characters import (conductor, enumerate_characters, euler_factor,
                                 halfperiod_antisymmetry, is_primitive, l_value, primitive_part,
                                 theorem4_reduction)
from padezeta.construction import (D0BelowClaim, ProblemParams, build, expand_F,
                                   expand_F_oracle, build_F, s0_coefficient, evaluate_F,
                                   verify_pade_at_one)
from padezeta.criterion import (alpha_beta, measure_rates, select_invertible_columns,
                                selected_matrix)
from padezeta.derivation import derive, derive_rational, s_table
from padezeta.diffsys import (adjoint_iterates, build_A_br, build_M, construction_vector,
                              det_M_nonzero, evaluation_matrix, rank_at_point)
from padezeta.exactalg import RatFunc, det_int
from padezeta.numerics import identity_holds, lambda_k, make_context, xi_values
from oracles import catalan_cvz

RESULTS = {}

GRID = [(3, 1, 1, n) for n in range(1, 11)] + [(5, 1, 1, 8), (5, 2, 1, 8), (5, 1, 2, 8)]


def catalan_params(n):
    return theorem4_reduction(enumerate_characters(4)[1]).params(5, 1, n, 0)


def _build(key_or_params):
    prm = key_or_params if isinstance(key_or_params, ProblemParams) else ProblemParams(*key_or_params)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", D0BelowClaim)
        return build(prm)


# -- criteria ------------------------------------------------------------------

def crit1():
    count = 0
    for key in GRID:
        c = _build(key)
        K = min(c.d0 - 1, 12)
        table = s_table(derive(c, K))  # raises IntegralityFailure on a non-integer
        for row in table.s:
            assert all(isinstance(v, int) for v in row), key
            count += len(row)
    return f"{count} coefficients s_k,i exact integers over {len(GRID)} parameter sets"


def crit2():
    for key in [(3, 1, 1, 1), (3, 1, 1, 2), (4, 1, 1, 2)]:
        prm = ProblemParams(*key)
        assert expand_F(prm) == expand_F_oracle(build_F(prm), prm), key
    return "expand_F == expand_F_oracle on (3,1,1,1), (3,1,1,2), (4,1,1,2)"


def crit3():
    for key in GRID:
        c = _build(key)
        a, r, N, n = key
        assert all(s0_coefficient(c, t) == 0 for t in range(n + 1, (r + 1) * n + 1)), key
        assert all(evaluate_F(c.params, t) == 0 for t in range(1, r * n + 1)), key
        assert verify_pade_at_one(c, min(c.d0 - 1, 20)), key
    return "S0 gap, F zeros at 1..rn and Pade conditions at 1 hold on the grid"


def crit4():
    for key in GRID:
        c = _build(key)
        forms = derive(c, c.d0 - 1)  # raises DivisionFailure if (1 - z) fails to divide
        assert all(forms.P(k, 1)(Fraction(1)) == 0 for k in range(1, c.d0)), key
    return "derive reaches k = d0-1 with P_k,1(1) = 0 on the grid"


def crit5():
    z = RatFunc.x()
    for n in (4, 6):
        c = _build((3, 1, 1, n))
        K = 8
        rat = derive_rational(c, K)
        its = adjoint_iterates(build_A_br(3), construction_vector(c), K)
        for k in range(1, K + 1):
            got = [x * z ** (k - 1) for x in its[k - 1]]
            want = [rat.P(k, j) for j in (1, 2, 3)] + [rat.U(k), rat.V(k)]
            assert got == want, (n, k)
            if k <= c.d0 - 1:
                poly = derive(c, k)
                assert want[3] == RatFunc.from_poly(poly.U(k)), (n, k)
    return "tilde forms equal z^(k-1) (d/dz + tA)^(k-1) v for k <= 8 at n = 4, 6"


def crit6():
    c = _build((3, 1, 1, 4))
    A, v = build_A_br(3), construction_vector(c)
    assert det_M_nonzero(build_M(A, v))
    E = evaluation_matrix(A, v, 1, c.d0 - 1)
    assert all(x == 0 for x in E[0])
    rank = rank_at_point(A, v, 1, c.d0 - 1)
    assert rank == 4, rank
    return "det M != 0; rank at z = 1 is 4 = a+1 with zero first row"


def crit7():
    worst = float("-inf")
    count = 0
    cases = [(ProblemParams(3, 1, 1, n), range(1, 6)) for n in (4, 8)]
    cases += [(catalan_params(n), range(1, 4)) for n in (4, 8)]
    for prm, ks in cases:
        c = _build(prm)
        table = s_table(derive(c, max(ks)))
        for k in ks:
            pair = lambda_k(c, None, table, k, 256)
            assert identity_holds(pair, 64), (prm.key(), k)
            count += 1
            ctx = make_context(300)
            d = pair.scaled_discrepancy()
            if d:
                worst = max(worst, float(ctx.log(d, 2)))
    return f"delta_n Lambda_k = sum s xi' on {count} cases, worst log2 discrepancy {worst:.1f}"


def crit8():
    out = []
    for label, prm in (("(3,1,1,8)", ProblemParams(3, 1, 1, 8)), ("Catalan n=8", catalan_params(8))):
        c = _build(prm)
        table = s_table(derive(c, c.d0 - 1))
        kept = select_invertible_columns(table)
        assert len(kept) == prm.a + prm.N + 1 - prm.i0
        assert max(kept) <= c.d0 - 1
        assert det_int(selected_matrix(table, kept)) != 0
        out.append(f"{label} keeps {kept}")
    return "; ".join(out) + "; determinants nonzero"


def crit9():
    est = measure_rates([20, 30, 40], 3, 1, 1)
    la = float(make_context(64).log(est.alpha.value.real))
    lb = float(make_context(64).log(est.beta.value.real))
    s = [round(x, 3) for x in est.measured_s_slope]
    lam = [round(x, 3) for x in est.measured_lambda_slope]
    assert all(x <= lb + 0.5 for x in est.measured_s_slope), (s, lb)
    assert all(x <= la + 0.5 for x in est.measured_lambda_slope), (lam, la)
    return f"s slopes {s} <= {lb + 0.5:.3f}; lambda slopes {lam} <= {la + 0.5:.3f}"


def crit10():
    prec = 256
    ctx = make_context(prec)
    tol = ctx.ldexp(1, -64)
    chars12 = enumerate_characters(12)
    conds = [conductor(c) for c in chars12]
    for c in chars12:
        pp = primitive_part(c)
        assert primitive_part(pp) == pp and conductor(pp) == pp.modulus
    for e in (4, 8, 12):
        for c in enumerate_characters(e):
            if is_primitive(c):
                assert halfperiod_antisymmetry(c), (e, c)
    for d in (12, 24):
        for c in enumerate_characters(d):
            pp = primitive_part(c)
            lhs = l_value(c, 3, prec).value
            rhs = l_value(pp, 3, prec).value * euler_factor(pp, d, 3, prec)
            assert abs(lhs - rhs) < tol * max(1, abs(rhs))
    G = catalan_cvz(prec)
    L = l_value(enumerate_characters(4)[1], 2, prec).value
    assert abs(L - G) < tol
    return f"conductors mod 12 {conds}; antisymmetry; Euler factors; L(chi_4, 2) = Catalan"


def crit11():
    env = {k: v for k, v in os.environ.items() if k != "PADEZETA_CACHE"}
    outs = []
    for _ in range(2):
        with tempfile.TemporaryDirectory() as tmp:
            proc = subprocess.run(
                [sys.executable, "-m", "padezeta.cli", "verify", "--a", "3", "--r", "1",
                 "--N", "1", "--n", "4", "--cache-dir", tmp],
                capture_output=True, env=env, check=False)
            assert proc.returncode == 0, proc.stderr.decode()
            outs.append(proc.stdout)
    assert outs[0] == outs[1]
    json.loads(outs[0])
    return f"two cold verify runs give identical {len(outs[0])}-byte JSON"


CRITERIA = {i: globals()[f"crit{i}"] for i in range(1, 12)}


def run_criterion(i):
    t0 = time.perf_counter()
    try:
        detail = CRITERIA[i]()
    except Exception as exc:  # noqa: BLE001 - report any failure as FAIL
        line = f"FAIL criterion {i}: {type(exc).__name__}: {exc}"
        RESULTS[i] = line
        print(line)
        raise
    line = f"PASS criterion {i}: {detail} ({time.perf_counter() - t0:.1f} s)"
    RESULTS[i] = line
    print(line)
    return line


@pytest.mark.parametrize("i", range(1, 12))
def test_acceptance(i):
    run_criterion(i)


if __name__ == "__main__":
    failed = 0
    for i in CRITERIA:
        try:
            run_criterion(i)
        except Exception:  # noqa: BLE001
            failed += 1
    sys.exit(1 if failed else 0)
