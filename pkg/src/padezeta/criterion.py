"""Column selection, Siegel's criterion and growth-rate measurements."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .construction import ProblemParams, Z0Kind, build
from .derivation import LinearFormTable, derive, s_table
from .errors import HypothesisViolated, RankDeficient
from .exactalg import EchelonBasis, det_int
from .numerics import GUARD_BITS, MPComplex, linear_form_value, make_context, xi_values

ASYMPTOTIC = "ASYMPTOTIC"
STATED_FOR_REAL = "STATED_FOR_REAL"


def log_alpha_beta(a: int, r: int, N: int, prec_bits: int = 128):
    """(log alpha, log beta) as mpf values in a private context."""
    ctx = make_context(prec_bits + GUARD_BITS)
    log = ctx.log
    la = (a + ctx.mpf(2 * a) / N * log(2) - 2 * r * log(2) + (2 * r + 2) * log(N + 1)
          + (ctx.mpf(-a) / N + 4 * r + 2) * log(r))
    lb = ctx.mpf(a) / N * (log(2) + N) + (2 * r + 2) * log(r * N + 1)
    return la, lb


def alpha_beta(a: int, r: int, N: int, prec_bits: int = 128):
    """alpha = e^a 4^(a/N - r) (N+1)^(2r+2) r^(-a/N + 4r + 2), beta = (2 e^N)^(a/N) (rN+1)^(2r+2)."""
    ctx = make_context(prec_bits + GUARD_BITS)
    la, lb = log_alpha_beta(a, r, N, prec_bits)
    eps = ctx.ldexp(1, -prec_bits)
    alpha, beta = ctx.exp(la), ctx.exp(lb)
    return (MPComplex(ctx.mpc(alpha), prec_bits, alpha * eps),
            MPComplex(ctx.mpc(beta), prec_bits, beta * eps))


def ball_rivoal_tau(a: int, r: int, N: int, prec_bits: int = 128):
    """tau = -log alpha / log beta (so that Q_n^-tau = alpha^n for Q_n = beta^n)."""
    la, lb = log_alpha_beta(a, r, N, prec_bits)
    return -la / lb


def predicted_rate(a: int, N: int) -> float:
    """Leading term (log a) / (N + log 2) of the dimension lower bound."""
    return math.log(a) / (N + math.log(2))


# -- invertible columns --------------------------------------------------------

def select_invertible_columns(table: LinearFormTable, i0: int | None = None) -> list:
    """Greedy exact scan over k = 1..K keeping rows of the table that raise the rank.

    Vectors are (s_{k,i})_{i0 <= i <= a+N}; succeeds at rank a + N + 1 - i0.
    """
    i0 = table.i0 if i0 is None else i0
    dim = table.a + table.N + 1 - i0
    basis = EchelonBasis(dim)
    kept = []
    for k in range(1, table.K + 1):
        if basis.add(table.column_vector(k, i0)):
            kept.append(k)
            if basis.rank == dim:
                return kept
    raise RankDeficient(f"rank {basis.rank} of {dim} after K = {table.K} rows",
                        basis.rank, dim)


def selected_matrix(table: LinearFormTable, kept: Sequence[int], i0: int | None = None) -> list:
    """Square integer matrix [s_{k_j, i}], rows i = i0..a+N, columns j."""
    i0 = table.i0 if i0 is None else i0
    return [[table.entry(k, i) for k in kept] for i in range(i0, table.a + table.N + 1)]


# -- Siegel's criterion ----------------------------------------------------------

@dataclass(frozen=True)
class SiegelInstance:
    n: int
    matrix: tuple  # square, integer
    log_Qn: float
    residual: float  # max_j |sum_i l_{i,j} theta_i|
    determinant: int = 0


@dataclass(frozen=True)
class SiegelCertificate:
    instances: tuple
    tau: float
    dimension_bound: int
    flags: tuple = field(default=(ASYMPTOTIC,))

    def to_json(self) -> dict:
        return {
            "instances": [{"n": i.n, "determinant": str(i.determinant),
                           "log_Qn": repr(i.log_Qn), "residual_bound": repr(i.residual),
                           "size": len(i.matrix)} for i in self.instances],
            "tau": repr(self.tau),
            "dimension_bound": self.dimension_bound,
            "flags": list(self.flags),
        }


def siegel_bound(instances: Sequence[SiegelInstance], tau: float, epsilon: float = 0.5,
                 real_data: bool = True) -> SiegelCertificate:
    """Check both growth hypotheses with slack epsilon; emit dim >= tau + 1.

    ||L^(n)|| <= Q_n^(1+eps) and max_j |L_j^(n)(theta)| <= Q_n^(-tau+eps).
    Every matrix is re-checked for a nonzero exact determinant.  For tau <= 0
    the reported bound is the trivial 1 (theta not all zero).
    """
    if not instances:
        raise ValueError("no instances")
    failures = []
    checked = []
    prev_log = -math.inf
    for inst in instances:
        size = len(inst.matrix)
        if any(len(row) != size for row in inst.matrix):
            failures.append((inst.n, "matrix is not square"))
            continue
        det = det_int(inst.matrix)
        if det == 0:
            failures.append((inst.n, "zero determinant"))
            continue
        if inst.log_Qn <= prev_log:
            failures.append((inst.n, "Q_n not increasing"))
        prev_log = inst.log_Qn
        height = max(abs(x) for row in inst.matrix for x in row)
        if height and math.log(height) > (1 + epsilon) * inst.log_Qn:
            failures.append((inst.n, f"entries: log {math.log(height):.4f} > "
                                     f"{(1 + epsilon) * inst.log_Qn:.4f}"))
        if inst.residual > 0 and math.log(inst.residual) > (-tau + epsilon) * inst.log_Qn:
            failures.append((inst.n, f"residual: log {math.log(inst.residual):.4f} > "
                                     f"{(-tau + epsilon) * inst.log_Qn:.4f}"))
        checked.append(SiegelInstance(inst.n, tuple(map(tuple, inst.matrix)), inst.log_Qn,
                                      inst.residual, det))
    if failures:
        raise HypothesisViolated(f"{len(failures)} hypothesis failure(s)", failures)
    bound = max(math.ceil(tau) + 1, 1)
    flags = (ASYMPTOTIC,) if real_data else (ASYMPTOTIC, STATED_FOR_REAL)
    return SiegelCertificate(tuple(checked), float(tau), bound, flags)


# -- growth rates -------------------------------------------------------------------

@dataclass(frozen=True)
class RateSample:
    n: int
    s_slope: float  # (1/n) log max |s_{k,i}| over the measured rows
    lambda_slope: float  # (1/n) log |delta_n Lambda_k|
    rows: int  # number of table rows used


@dataclass(frozen=True)
class RateEstimate:
    alpha: MPComplex
    beta: MPComplex
    samples: tuple
    k: int

    @property
    def measured_s_slope(self) -> list:
        return [s.s_slope for s in self.samples]

    @property
    def measured_lambda_slope(self) -> list:
        return [s.lambda_slope for s in self.samples]

    def within(self, slack: float = 0.5) -> bool:
        la = math.log(float(self.alpha.value.real))
        lb = math.log(float(self.beta.value.real))
        return all(s.s_slope <= lb + slack and s.lambda_slope <= la + slack for s in self.samples)

    def to_json(self) -> dict:
        return {
            "alpha": self.alpha.to_json(),
            "beta": self.beta.to_json(),
            "k": self.k,
            "samples": [{"n": s.n, "rows": s.rows, "s_slope": repr(s.s_slope),
                         "lambda_slope": repr(s.lambda_slope)} for s in self.samples],
        }


def _log_abs(ctx, x) -> float:
    x = abs(x)
    if x == 0:
        return -math.inf
    return float(ctx.log(x))


def default_rate_rows(params: ProblemParams) -> int:
    """Rows measured for the s-slope: the a + N + 1 - i0 needed for selection, plus one."""
    return params.a + params.N + 2 - params.i0


def measure_rates(grid: Sequence[int], a: int, r: int, N: int, p: int = 1,
                  z0_kind: Z0Kind = Z0Kind.ONE, f_values=None, k: int = 1,
                  rows: int | None = None, prec_bits: int = 256) -> RateEstimate:
    """Run construction and derivation per n; record both slopes.

    delta_n Lambda_k is taken as sum_i s_{k,i} xi'_i (the table route).
    """
    if not grid:
        raise ValueError("empty grid")
    samples = []
    for n in grid:
        prm = ProblemParams(a, r, N, n, p, z0_kind, f_values)
        c = build(prm)
        K = rows if rows is not None else default_rate_rows(prm)
        K = max(min(K, c.d0 - 1), k)
        table = s_table(derive(c, K))
        # xi' must absorb the cancellation against entries of size max|s_{k,i}|
        extra = table.max_abs([k]).bit_length()
        xi = xi_values(prm, prec_bits + extra)
        form = linear_form_value(table, xi, k, prec_bits + extra)
        ctx = make_context(prec_bits + GUARD_BITS)
        s_max = table.max_abs()
        samples.append(RateSample(n, math.log(s_max) / n if s_max else -math.inf,
                                  _log_abs(ctx, form.value) / n, K))
    alpha, beta = alpha_beta(a, r, N)
    return RateEstimate(alpha, beta, tuple(samples), k)
