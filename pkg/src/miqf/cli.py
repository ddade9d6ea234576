"""Command-line interface.

Exit codes: 0 success, 1 a check failed or the library rejected the input
(the result object is still printed), 2 malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Sequence

from . import serialize as ser
from .correspondence import (
    TripleE,
    ValidationReport,
    VarietyB,
    associated_hermitian,
    b_to_e,
    check_polarization,
    conj_embedding,
    e_to_b,
    h_from_omega,
    lattice_injectivity_rank,
    normalize_triple,
    omega_from_hermitian,
    validate_triple,
    variety_build,
)
from .errors import BadShape, MIQFError
from .exterior import exterior_variety
from .linalg import hermitian_signature_exact, sign_matrix
from .siegel import gu_act, siegel_contains, siegel_sample


@dataclass(frozen=True)
class CliConfig:
    tolerance: float = 1e-9
    seed: int = 0
    output_format: str = "json"

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")


class _Failure(Exception):
    """Result computed but a check failed: print it and exit 1."""

    def __init__(self, payload):
        self.payload = payload


def _load(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ser.ParseError("file", f"{path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ser.ParseError("file", f"{path}: invalid JSON ({exc.msg})") from None


# -- reports ------------------------------------------------------------------


def verify_triple(E: TripleE, tol: float) -> ValidationReport:
    rep = validate_triple(E, tol)
    try:
        N = normalize_triple(E, tol)
    except MIQFError as exc:
        rep.add("in_domain", False, error=type(exc).__name__)
        rep.add("riemann_positive", False, error=type(exc).__name__)
        return rep
    member, piv = siegel_contains(N.z, tol)
    rep.add("in_domain", member, min_pivot=piv)
    if not member:
        rep.add("riemann_positive", False, error="NotInDomain")
        return rep
    pol = check_polarization(conj_embedding(N, tol), omega_from_hermitian(N.gram), tol)
    rep.add("riemann_positive", pol.positive, min_pivot=pol.min_pivot, lattice_cond=pol.lattice_cond)
    rep.checks["surjective"].detail["lattice_real_rank"] = lattice_injectivity_rank(E)
    return rep


def verify_variety(V: VarietyB, tol: float) -> ValidationReport:
    rep = ValidationReport()
    member, piv = siegel_contains(V.z.z, tol)
    rep.add("in_domain", member, min_pivot=piv)
    rep.add("t_skew_hermitian", V.T.H == -V.T)
    sig = hermitian_signature_exact(associated_hermitian(V.T))
    rep.add("t_signature", tuple(sig) == (V.n, V.m, 0), found=list(sig))
    rep.add("omega_alternating", V.omega.is_alternating())
    rep.add("omega_nondegenerate", V.omega.det() != 0, det=V.omega.det())
    try:
        ok = h_from_omega(V.omega) == sign_matrix(V.n, V.m, V.ctx)
        rep.add("h_recovered", ok)
    except MIQFError as exc:
        rep.add("h_recovered", False, error=type(exc).__name__)
    pol = check_polarization(V.period_matrix(), V.omega, tol)
    rep.add("riemann_positive", pol.positive, min_pivot=pol.min_pivot, lattice_cond=pol.lattice_cond)
    for name, check in validate_triple(b_to_e(V), tol).checks.items():
        rep.checks[name] = check
    return rep


# -- subcommands --------------------------------------------------------------


def _siegel_check(args, cfg):
    p = ser.siegel_from_json(_load(args.file))
    member, piv = siegel_contains(p.z, cfg.tolerance)
    out = {"member": member, "min_pivot": piv}
    if not member:
        raise _Failure(out)
    return out


def _siegel_sample(args, cfg):
    seed = cfg.seed if args.sample_seed is None else args.sample_seed
    return ser.siegel_to_json(siegel_sample(args.n, args.m, seed))


def _variety_build(args, cfg):
    p = ser.siegel_from_json(_load(args.z))
    if p.n != args.n or p.n + p.m != args.r:
        raise ser.ParseError("z", f"shape ({p.n}, {p.m}) does not match --n {args.n} --r {args.r}")
    return ser.variety_to_json(variety_build(args.delta, args.n, args.r, p.z, cfg.tolerance))


def _map_b2e(args, cfg):
    return ser.triple_to_json(b_to_e(ser.variety_from_json(_load(args.file), cfg.tolerance)))


def _map_e2b(args, cfg):
    return ser.variety_to_json(e_to_b(ser.triple_from_json(_load(args.file)), cfg.tolerance))


def _verify(args, cfg):
    obj = _load(args.file)
    if isinstance(obj, dict) and "gram" in obj:
        rep = verify_triple(ser.triple_from_json(obj), cfg.tolerance)
        out = {"kind": "triple", **rep.as_dict()}
    else:
        ctx_obj = obj if isinstance(obj, dict) else {}
        z = ser.cmatrix_from_json(ser._get(ctx_obj, "z"), "z")
        n, r = ser._int(ctx_obj, "n"), ser._int(ctx_obj, "r")
        if not 1 <= n < r or z.shape != (n, r - n):
            raise ser.ParseError("z", f"shape {z.shape} does not match n={n}, r={r}")
        try:
            V = ser.variety_from_json(obj, cfg.tolerance)
        except MIQFError as exc:
            member, piv = siegel_contains(z, cfg.tolerance)
            raise _Failure(
                {
                    "kind": "variety",
                    "ok": False,
                    "checks": {"in_domain": {"pass": member, "min_pivot": piv, "error": type(exc).__name__}},
                }
            ) from None
        out = {"kind": "variety", **verify_variety(V, cfg.tolerance).as_dict()}
    if not out["ok"]:
        raise _Failure(out)
    return out


def _ext_power(args, cfg):
    E = ser.triple_from_json(_load(args.file))
    X = exterior_variety(E, args.k, cfg.tolerance)
    out = {"n": X.n, "r": X.r, "triple": ser.triple_to_json(X), "z": None}
    if X.n < X.r:
        out["z"] = ser.cmatrix_to_json(e_to_b(X, cfg.tolerance).z.z)
    return out


def _gu_act(args, cfg):
    g = ser.gu_from_json(_load(args.gamma))
    p = ser.siegel_from_json(_load(args.z))
    out = gu_act(g, p, cfg.tolerance)
    return {**ser.siegel_to_json(out), "multiplier": g.multiplier}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="miqf",
        description="Abelian varieties with multiplication by an imaginary quadratic field.",
    )
    parser.add_argument("--tol", type=float, default=1e-9, help="numerical tolerance (default 1e-9)")
    parser.add_argument("--seed", type=int, default=0, help="default random seed")
    parser.add_argument("--format", choices=("json", "text"), default="json", dest="output_format")
    sub = parser.add_subparsers(dest="group", required=True)

    siegel = sub.add_parser("siegel", help="Siegel domain points").add_subparsers(dest="cmd", required=True)
    p = siegel.add_parser("check", help="test membership of a point")
    p.add_argument("file")
    p.set_defaults(func=_siegel_check)
    p = siegel.add_parser("sample", help="draw a deterministic random point")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--seed", type=int, default=None, dest="sample_seed")
    p.set_defaults(func=_siegel_sample)

    variety = sub.add_parser("variety", help="type (B) data").add_subparsers(dest="cmd", required=True)
    p = variety.add_parser("build", help="build a variety from a Siegel point")
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--z", required=True, help="Siegel point file")
    p.set_defaults(func=_variety_build)

    mapping = sub.add_parser("map", help="the correspondence").add_subparsers(dest="cmd", required=True)
    p = mapping.add_parser("b2e", help="variety -> triple")
    p.add_argument("file")
    p.set_defaults(func=_map_b2e)
    p = mapping.add_parser("e2b", help="triple -> variety")
    p.add_argument("file")
    p.set_defaults(func=_map_e2b)

    p = sub.add_parser("verify", help="check every condition on a triple or variety file")
    p.add_argument("file")
    p.set_defaults(func=_verify)

    ext = sub.add_parser("ext", help="exterior powers").add_subparsers(dest="cmd", required=True)
    p = ext.add_parser("power", help="k-th exterior power of a triple")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("file")
    p.set_defaults(func=_ext_power)

    gu = sub.add_parser("gu", help="unitary similitudes").add_subparsers(dest="cmd", required=True)
    p = gu.add_parser("act", help="act on a Siegel point")
    p.add_argument("gamma")
    p.add_argument("z")
    p.set_defaults(func=_gu_act)
    return parser


def _text(obj, prefix: str = "") -> list[str]:
    if isinstance(obj, dict):
        lines = []
        for k, v in obj.items():
            lines += _text(v, f"{prefix}{k}." if isinstance(v, (dict, list)) else f"{prefix}{k}")
        return lines
    if isinstance(obj, list):
        return [f"{prefix.rstrip('.')}: {json.dumps(obj)}"]
    return [f"{prefix}: {json.dumps(obj)}"]


def _emit(payload, cfg: CliConfig, out):
    if cfg.output_format == "text":
        out.write("\n".join(_text(json.loads(ser.dumps(payload)))) + "\n")
    else:
        out.write(ser.dumps(payload))


def main(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        cfg = CliConfig(args.tol, args.seed, args.output_format)
    except ValueError as exc:
        stderr.write(f"error: field 'tol': {exc}\n")
        return 2
    try:
        payload = args.func(args, cfg)
    except _Failure as f:
        _emit(f.payload, cfg, stdout)
        return 1
    except (ser.ParseError, BadShape) as exc:
        stderr.write(f"error: {exc}\n")
        return 2
    except MIQFError as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)}, cfg, stdout)
        stderr.write(f"{type(exc).__name__}: {exc}\n")
        return 1
    _emit(payload, cfg, stdout)
    return 0


def _entry():  # console script
    sys.exit(main())

