"""Command-line entry point: ``padezeta <command> [options]``.

Exit codes: 0 success, 1 verification failure, 2 invalid parameters.
Errors are written to stderr as one JSON object.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
import warnings
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .characters import (conductor, enumerate_characters, is_primitive, l_value, primitive_part,
                         theorem3_reduction, theorem4_reduction)
from .construction import (Construction, D0BelowClaim, ProblemParams, Z0Kind, build,
                           check_s0_identity, check_sinf_identity, vanishing_orders_ok,
                           verify_pade_at_one)
from .criterion import (SiegelInstance, alpha_beta, ball_rivoal_tau, log_alpha_beta,
                        select_invertible_columns, selected_matrix, siegel_bound)
from .derivation import default_K, derive, heights_within_bound, p_k1_vanishes_at_one, s_table
from .errors import InvalidParameters, PadeZetaError, PreconditionViolated
from .exactalg import det_int

COMMANDS = ("construct", "derive", "verify", "lambda", "rank", "select", "bound", "lvalue",
            "characters", "report")
CACHE_ENV = "PADEZETA_CACHE"


class VerificationFailed(Exception):
    def __init__(self, report: dict):
        super().__init__("verification failed")
        self.report = report


@dataclass(frozen=True)
class RunConfig:
    command: str
    params: ProblemParams | None
    kmax: int | None
    prec_bits: int
    cache_dir: Path | None
    out_path: Path | None
    format: str
    extra: dict


# -- cache ---------------------------------------------------------------------

def cache_path(cache_dir: Path, params: ProblemParams) -> Path:
    name = (f"construction-a{params.a}-r{params.r}-N{params.N}-n{params.n}-p{params.p}-"
            f"{params.z0_kind.value}-{params.f_hash()}.json")
    return cache_dir / name


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_construction(params: ProblemParams, cache_dir: Path | None) -> Construction:
    if cache_dir is None:
        return build(params)
    path = cache_path(cache_dir, params)
    if path.exists():
        c = Construction.from_json(json.loads(path.read_text(encoding="utf-8")))
        if c.params == params:
            return c
    c = build(params)
    _atomic_write(path, dumps(c.to_json()))
    return c


# -- output ----------------------------------------------------------------------

def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _emit(cfg: RunConfig, payload, csv_text: str | None = None) -> None:
    if cfg.format == "csv":
        if csv_text is None:
            raise InvalidParameters(f"command {cfg.command!r} has no CSV output")
        text = csv_text
    else:
        text = dumps(payload)
    if cfg.out_path is None:
        sys.stdout.write(text)
    else:
        _atomic_write(cfg.out_path, text)


# -- commands -----------------------------------------------------------------------

def _need_params(cfg: RunConfig) -> ProblemParams:
    if cfg.params is None:
        raise InvalidParameters("this command needs --a, --r, --N, --n")
    return cfg.params


def _kmax(cfg: RunConfig, c: Construction) -> int:
    K = default_K(c) if cfg.kmax is None else cfg.kmax
    if K < 1 or K > c.d0 - 1:
        raise InvalidParameters(f"kmax = {K} outside 1..d0-1 = {c.d0 - 1}")
    return K


def cmd_construct(cfg: RunConfig):
    c = load_construction(_need_params(cfg), cfg.cache_dir)
    _emit(cfg, c.to_json())


def cmd_derive(cfg: RunConfig):
    c = load_construction(_need_params(cfg), cfg.cache_dir)
    table = s_table(derive(c, _kmax(cfg, c)))
    _emit(cfg, {"params": c.params.to_json(), "table": table.to_json()}, table.to_csv())


def verify_suites(c: Construction, K: int) -> dict:
    """Exact invariant checks; each entry is True/False."""
    from .diffsys import (build_A_br, build_M, construction_vector, det_M, poles_within,
                          rank_at_point)
    prm = c.params
    forms = derive(c, K)
    out = {
        "s0_identity": check_s0_identity(c, 3 * (prm.r + 1) * prm.n),
        "sinf_identity": check_sinf_identity(c, 3 * (prm.r + 1) * prm.n),
        "vanishing_orders": vanishing_orders_ok(c),
        "pade_at_one": verify_pade_at_one(c, min(c.d0 - 1, 20)),
        "regularity_at_one": p_k1_vanishes_at_one(forms),
        "height_bound": heights_within_bound(forms),
    }
    try:
        s_table(forms)
        out["integrality"] = True
    except PadeZetaError:
        out["integrality"] = False
    if prm.N == 1 and prm.z0_kind is Z0Kind.ONE:
        A = build_A_br(prm.a)
        v = construction_vector(c)
        d = det_M(build_M(A, v))
        out["det_M_nonzero"] = not d.is_zero()
        out["det_M_poles_at_0_1"] = poles_within(d, [0, 1])
        out["rank_at_one"] = rank_at_point(A, v, 1, c.d0 - 1) == prm.a + 1
    return out


def cmd_verify(cfg: RunConfig):
    c = load_construction(_need_params(cfg), cfg.cache_dir)
    suites = verify_suites(c, _kmax(cfg, c))
    report = {"params": c.params.to_json(), "d0": c.d0, "flags": list(c.flags),
              "suites": {k: ("pass" if v else "fail") for k, v in suites.items()},
              "ok": all(suites.values())}
    _emit(cfg, report)
    if not report["ok"]:
        raise VerificationFailed(report)


def cmd_lambda(cfg: RunConfig):
    from .numerics import identity_holds, lambda_k
    c = load_construction(_need_params(cfg), cfg.cache_dir)
    K = _kmax(cfg, c)
    forms = derive(c, K)
    table = s_table(forms)
    ks = cfg.extra.get("k") or list(range(1, K + 1))
    rows = []
    ok = True
    for k in ks:
        if not 1 <= k <= K:
            raise InvalidParameters(f"k = {k} outside 1..{K}")
        pair = lambda_k(c, forms, table, k, cfg.prec_bits)
        holds = identity_holds(pair)
        ok &= holds
        rows.append({"k": k, "direct": pair.direct.to_json(), "via_table": pair.via_table.to_json(),
                     "identity_holds": holds})
    _emit(cfg, {"params": c.params.to_json(), "delta_n": str(table.delta_n), "lambda": rows,
                "ok": ok})
    if not ok:
        raise VerificationFailed({"lambda": rows})


def cmd_rank(cfg: RunConfig):
    from .diffsys import build_A_br, construction_vector, rank_profile, smallest_prefix
    prm = _need_params(cfg)
    if prm.N != 1:
        raise InvalidParameters("rank is available for N = 1 (the exact system A)")
    c = load_construction(prm, cfg.cache_dir)
    point = 1 if prm.z0_kind is Z0Kind.ONE else -1
    K = c.d0 - 1 if cfg.kmax is None else cfg.kmax
    profile = rank_profile(build_A_br(prm.a), construction_vector(c), point, K)
    target = prm.a + 1
    _emit(cfg, {"params": prm.to_json(), "point": str(point), "kmax": K, "rank": profile[-1],
                "profile": profile, "target": target,
                "smallest_prefix": smallest_prefix(profile, target)})


def cmd_select(cfg: RunConfig):
    c = load_construction(_need_params(cfg), cfg.cache_dir)
    table = s_table(derive(c, _kmax(cfg, c)))
    kept = select_invertible_columns(table)
    det = det_int(selected_matrix(table, kept))
    _emit(cfg, {"params": c.params.to_json(), "i0": table.i0, "kept": kept,
                "max_index": max(kept), "determinant": str(det), "d0": c.d0})
    if det == 0:
        raise VerificationFailed({"determinant": "0"})


def cmd_bound(cfg: RunConfig):
    from .numerics import linear_form_value, xi_values
    base = _need_params(cfg)
    grid = cfg.extra.get("grid") or [base.n]
    la, lb = log_alpha_beta(base.a, base.r, base.N)
    tau = cfg.extra.get("tau")
    tau = float(ball_rivoal_tau(base.a, base.r, base.N)) if tau is None else tau
    instances = []
    for n in grid:
        prm = ProblemParams(base.a, base.r, base.N, n, base.p, base.z0_kind, base.f_values)
        c = load_construction(prm, cfg.cache_dir)
        table = s_table(derive(c, _kmax(cfg, c)))
        kept = select_invertible_columns(table)
        extra = table.max_abs(kept).bit_length()
        xi = xi_values(prm, cfg.prec_bits + extra)
        residual = max(float(abs(linear_form_value(table, xi, k, cfg.prec_bits + extra).value))
                       for k in kept)
        instances.append(SiegelInstance(n, tuple(map(tuple, selected_matrix(table, kept))),
                                        float(n * lb), residual))
    real = base.z0_kind is Z0Kind.ONE and all(v.to_json()["order"] <= 2 for v in base.f_values)
    cert = siegel_bound(instances, tau, cfg.extra.get("epsilon", 0.5), real_data=real)
    out = cert.to_json()
    a_, b_ = alpha_beta(base.a, base.r, base.N)
    out.update({"alpha": a_.to_json(), "beta": b_.to_json(), "log_alpha": str(la),
                "log_beta": str(lb)})
    _emit(cfg, out)


def _character(cfg: RunConfig):
    d = cfg.extra.get("modulus")
    idx = cfg.extra.get("index")
    if d is None or idx is None:
        raise InvalidParameters("needs --modulus and --index")
    chars = enumerate_characters(d)
    if not 0 <= idx < len(chars):
        raise InvalidParameters(f"index {idx} outside 0..{len(chars) - 1}")
    return chars[idx]


def cmd_lvalue(cfg: RunConfig):
    chi = _character(cfg)
    s = cfg.extra.get("s") or 2
    if s < 2:
        raise InvalidParameters("s must be >= 2")
    _emit(cfg, {"character": chi.to_json(), "s": s,
                "value": l_value(chi, s, cfg.prec_bits).to_json()})


def cmd_characters(cfg: RunConfig):
    d = cfg.extra.get("modulus")
    if d is None or d < 1:
        raise InvalidParameters("needs --modulus >= 1")
    rows = []
    for i, chi in enumerate(enumerate_characters(d)):
        rows.append({"index": i, "character": chi.to_json(), "conductor": conductor(chi),
                     "primitive": is_primitive(chi), "parity": chi.parity(),
                     "primitive_part": primitive_part(chi).to_json()})
    _emit(cfg, {"modulus": d, "characters": rows})


def cmd_report(cfg: RunConfig):
    c = load_construction(_need_params(cfg), cfg.cache_dir)
    K = _kmax(cfg, c)
    table = s_table(derive(c, K))
    out = {"params": c.params.to_json(), "d0": c.d0, "flags": list(c.flags), "K": K,
           "table": table.to_json()}
    try:
        kept = select_invertible_columns(table)
        out["selection"] = {"kept": kept,
                            "determinant": str(det_int(selected_matrix(table, kept)))}
    except PadeZetaError as exc:
        out["selection"] = {"error": type(exc).__name__, "message": str(exc)}
    a_, b_ = alpha_beta(c.params.a, c.params.r, c.params.N)
    out["alpha"], out["beta"] = a_.to_json(), b_.to_json()
    out["tau"] = str(ball_rivoal_tau(c.params.a, c.params.r, c.params.N))
    _emit(cfg, out, table.to_csv())


HANDLERS = {
    "construct": cmd_construct, "derive": cmd_derive, "verify": cmd_verify,
    "lambda": cmd_lambda, "rank": cmd_rank, "select": cmd_select, "bound": cmd_bound,
    "lvalue": cmd_lvalue, "characters": cmd_characters, "report": cmd_report,
}


# -- argument parsing -------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InvalidParameters(message)


def _int_list(text: str) -> list:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {text}") from exc


def make_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="padezeta", description="Pade-type linear forms in zeta and L-values.")
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("command", choices=COMMANDS)
    g = p.add_argument_group("parameters")
    g.add_argument("--a", type=int)
    g.add_argument("--r", type=int)
    g.add_argument("--N", type=int)
    g.add_argument("--n", type=int)
    g.add_argument("--p", type=int, default=1)
    g.add_argument("--z0", choices=[k.value for k in Z0Kind], default=Z0Kind.ONE.value)
    ch = p.add_argument_group("characters")
    ch.add_argument("--modulus", type=int, help="character modulus")
    ch.add_argument("--index", type=int, help="position in the enumeration order")
    ch.add_argument("--reduction", choices=["theorem3", "theorem4"],
                    help="take N, z0 and f from this reduction of the chosen character")
    ch.add_argument("--s", type=int, help="argument of L(chi, s)")
    o = p.add_argument_group("options")
    o.add_argument("--kmax", type=int)
    o.add_argument("--k", type=_int_list, help="comma-separated k values (lambda)")
    o.add_argument("--grid", type=_int_list, help="comma-separated n values (bound)")
    o.add_argument("--tau", type=float)
    o.add_argument("--epsilon", type=float, default=0.5)
    o.add_argument("--prec", type=int, default=256, help="working precision in bits (>= 64)")
    o.add_argument("--cache-dir", type=Path)
    o.add_argument("--out", type=Path)
    o.add_argument("--format", choices=["json", "csv"], default="json")
    return p


def config_from_args(argv) -> RunConfig:
    ns = make_parser().parse_args(argv)
    if ns.prec < 64:
        raise InvalidParameters("--prec must be at least 64")
    extra = {"modulus": ns.modulus, "index": ns.index, "s": ns.s, "k": ns.k, "grid": ns.grid,
             "tau": ns.tau, "epsilon": ns.epsilon}
    params = None
    if ns.n is None and ns.grid:
        ns.n = ns.grid[0]  # a grid fixes the base instance
    core = (ns.a, ns.r, ns.n)
    if ns.reduction:
        if None in core:
            raise InvalidParameters("a reduction needs --a, --r, --n")
        chi = _character(RunConfig(ns.command, None, None, ns.prec, None, None, "json", extra))
        red = theorem3_reduction(chi) if ns.reduction == "theorem3" else theorem4_reduction(chi)
        if ns.N is not None and ns.N != red.N:
            raise InvalidParameters(f"--N {ns.N} disagrees with the reduction (N = {red.N})")
        params = red.params(ns.a, ns.r, ns.n, ns.p)
    elif any(x is not None for x in core + (ns.N,)):
        if None in core + (ns.N,):
            raise InvalidParameters("--a, --r, --N, --n must be given together")
        params = ProblemParams(ns.a, ns.r, ns.N, ns.n, ns.p, Z0Kind(ns.z0))
    env = os.environ.get(CACHE_ENV)
    cache_dir = Path(env) if env else ns.cache_dir
    return RunConfig(ns.command, params, ns.kmax, ns.prec, cache_dir, ns.out, ns.format, extra)


def _fail(code: int, exc: BaseException, **more) -> int:
    err = {"error": type(exc).__name__, "message": str(exc)}
    err.update(more)
    sys.stderr.write(json.dumps(err, sort_keys=True) + "\n")
    return code


def run(cfg: RunConfig) -> int:
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", D0BelowClaim)
            HANDLERS[cfg.command](cfg)
    except VerificationFailed as exc:
        return _fail(1, exc, report=exc.report)
    except (InvalidParameters, PreconditionViolated) as exc:
        return _fail(2, exc)
    except PadeZetaError as exc:
        return _fail(1, exc)
    return 0


def main(argv=None) -> int:
    try:
        cfg = config_from_args(sys.argv[1:] if argv is None else argv)
    except (InvalidParameters, PreconditionViolated) as exc:
        return _fail(2, exc)
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
