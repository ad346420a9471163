"""``hermiq`` command line: tables, point evaluation, identity suites, Gram
matrices, generating-function checks and witness reports.

Exit status is 0 when every check passes, 1 when a mathematical check fails and
2 for usage errors.
"""
from __future__ import annotations

import argparse
import os
import sys
from typing import Sequence

import numpy as np

from . import genfun, hermite, identities, quadrature
from .quaternion import Quaternion, as_array, to_slice
from .reports import dumps, rel_err

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
DEFAULT_SEED = 0
EVAL_TOL = 1e-9

ROUTES = {
    "explicit": hermite.evaluate,
    "laguerre": hermite.eval_laguerre_form,
    "realhermite": hermite.eval_real_hermite_form,
}
GENFUN_TOL = {"realhermite": genfun.TOL_REAL_HERMITE, "bilinear": genfun.TOL_REAL_HERMITE}
ORTHO_TOL = {"slice": quadrature.TOL_EXACT, "polar": quadrature.TOL_MIXED}


class UsageError(Exception):
    pass


def _quaternion(text: str) -> Quaternion:
    try:
        parts = [float(p) for p in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a quaternion: {text!r}") from None
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("a quaternion needs four comma-separated components")
    return Quaternion(*parts)


def _vector3(text: str) -> tuple[float, float, float]:
    try:
        parts = tuple(float(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a vector: {text!r}") from None
    if len(parts) != 3 or not any(parts):
        raise argparse.ArgumentTypeError("a slice direction needs three components, not all zero")
    return parts


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def _positive(text: str) -> int:
    v = _nonneg(text)
    if v == 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hermiq", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("table", help="list H_{m,n} for m <= M, n <= N")
    t.add_argument("--max-m", type=_nonneg, required=True)
    t.add_argument("--max-n", type=_nonneg, required=True)
    t.add_argument("--format", choices=["json", "text"], default="json")

    e = sub.add_parser("eval", help="evaluate H_{m,n} at a quaternion by every route")
    e.add_argument("--m", type=_nonneg, required=True)
    e.add_argument("--n", type=_nonneg, required=True)
    e.add_argument("--q", type=_quaternion, required=True, help="x0,x1,x2,x3")
    e.add_argument("--via", choices=sorted(ROUTES), default="explicit")

    c = sub.add_parser("check", help="run an identity suite")
    c.add_argument("--suite", choices=sorted(identities.SUITES), required=True)
    c.add_argument("--max", type=_nonneg, default=4)
    c.add_argument("--seed", type=int, default=DEFAULT_SEED)

    o = sub.add_parser("ortho", help="Gram matrix of H_{m,n} as CSV")
    o.add_argument("--measure", choices=["slice", "polar", "lebesgue"], required=True)
    o.add_argument("--max", type=_nonneg, default=4)
    o.add_argument("--nodes", type=_positive, default=None)
    o.add_argument("--unit", type=_vector3, default=(1.0, 0.0, 0.0), help="slice direction (slice measure only)")

    g = sub.add_parser("genfun", help="verify a generating function")
    g.add_argument(
        "--which",
        choices=["diagonal", "slice", "xu", "ubaru", "star", "realhermite", "bilinear", "ga", "heat"],
        required=True,
    )
    g.add_argument("--order", type=_nonneg, default=None, help="truncation order (default: from tail bound)")
    g.add_argument("--lam", type=float, default=0.5)
    g.add_argument("--q", type=_quaternion, default=Quaternion(1, 0, 1, 0))
    g.add_argument("--u", type=_quaternion, default=None)
    g.add_argument("--v", type=_quaternion, default=None)
    g.add_argument("--x", type=float, default=0.4)
    g.add_argument("--t", type=float, default=0.4)
    g.add_argument("--a", type=float, default=0.7)
    g.add_argument("--m", type=_nonneg, default=2)
    g.add_argument("--side", choices=["right", "left"], default="right")

    w = sub.add_parser("witness", help="discrepancy reports")
    grp = w.add_mutually_exclusive_group(required=True)
    grp.add_argument("--lebesgue", action="store_true", help="<q, qbar> under Lebesgue measure")
    grp.add_argument("--runge", action="store_true", help="Runge addition formula off a common slice")
    w.add_argument("--seed", type=int, default=DEFAULT_SEED)
    return p


# -- commands -------------------------------------------------------------------

def cmd_table(args, out) -> int:
    polys = [
        (m, n, hermite.hermite_explicit(m, n)) for m in range(args.max_m + 1) for n in range(args.max_n + 1)
    ]
    if args.format == "text":
        for m, n, p in polys:
            out.write(f"H[{m},{n}] = {p!r}\n")
    else:
        out.write(dumps([{"m": m, "n": n, "terms": _terms(p)} for m, n, p in polys]) + "\n")
    return EXIT_OK


def _terms(p):
    # [power of q, power of qbar, numerator, denominator]
    return [[m, n, c.numerator, c.denominator] for (m, n), c in sorted(p, key=lambda t: (-t[0][0], -t[0][1]))]


def cmd_eval(args, out) -> int:
    values = {name: ROUTES[name](args.m, args.n, args.q) for name in sorted(ROUTES)}
    primary = values[args.via]
    disc = {name: rel_err(as_array(v), as_array(primary)) for name, v in values.items()}
    worst = max(disc.values())
    out.write(
        dumps(
            {
                "m": args.m,
                "n": args.n,
                "q": args.q,
                "via": args.via,
                "value": primary,
                "routes": values,
                "discrepancy": disc,
                "status": "pass" if worst <= EVAL_TOL else "fail",
            }
        )
        + "\n"
    )
    return EXIT_OK if worst <= EVAL_TOL else EXIT_FAIL


def cmd_check(args, out) -> int:
    reports = identities.run_suite(args.suite, args.max, seed=args.seed)
    failed = sum(not r.ok for r in reports)
    out.write(
        dumps(
            {
                "suite": args.suite,
                "max": args.max,
                "seed": args.seed,
                "checks": len(reports),
                "failed": failed,
                "reports": reports,
            }
        )
        + "\n"
    )
    return EXIT_FAIL if failed else EXIT_OK


def cmd_ortho(args, out) -> int:
    field = {"slice": "slice_nodes", "polar": "radial_nodes", "lebesgue": "lebesgue_nodes"}[args.measure]
    scheme = quadrature.DEFAULT_SCHEME
    if args.nodes is not None:
        scheme = quadrature.QuadratureScheme(**{field: args.nodes})
    report = quadrature.gram(args.measure, args.max, scheme, unit=args.unit)
    out.write(report.to_csv())
    tol = ORTHO_TOL.get(args.measure)
    if tol is not None and not report.max_rel_err <= tol:
        return EXIT_FAIL
    return EXIT_OK


def _genfun_result(args) -> dict:
    N, q, which = args.order, args.q, args.which
    if which == "diagonal":
        return genfun.gen_diagonal(args.lam, q, N)
    if which == "heat":
        res = genfun.heat_gaussian_check(args.lam, q, N)
        return {"N": res["N"], "lhs": res["lhs"], "rhs": res["rhs"], "rel_err": res["rel_err"]}
    if which == "slice":
        unit = to_slice(q).unit
        u = args.u if args.u is not None else Quaternion.from_slice(0.3, 0.2, unit)
        v = args.v if args.v is not None else Quaternion.from_slice(0.0, -0.1, unit)
        return {"u": u, "v": v, "rel_err": genfun.gen_exponential_slice(u, v, q, N)}
    u = args.u if args.u is not None else Quaternion(0, 1, 0, 0)
    if which == "xu":
        return {"x": args.x, "u": u, "rel_err": genfun.gen_x_u(args.x, u, q, N)}
    if which == "ubaru":
        err, imag = genfun.gen_ubar_u(u, q, N)
        return {"u": u, "rel_err": err, "lhs_imag": imag}
    if which == "star":
        w = args.v if args.v is not None else u
        return {"side": args.side, "m": args.m, "arg": w, "rel_err": genfun.gen_closed_star(args.side, args.m, q, w, N)}
    if which == "realhermite":
        return {"x": args.x, "m": args.m, "rel_err": genfun.gen_real_hermite(args.x, q, args.m, N)}
    if which == "bilinear":
        return {"t": args.t, "x": args.x, "rel_err": genfun.gen_bilinear(args.t, args.x, q, N)}
    if which == "ga":
        return {"a": args.a, "rel_err": genfun.g_a_check(args.a, q, N)}
    raise UsageError(f"unknown generating function {which!r}")


def cmd_genfun(args, out) -> int:
    try:
        res = _genfun_result(args)
    except ValueError as exc:  # domain errors (lambda range, slice membership) are usage errors
        raise UsageError(str(exc)) from exc
    tol = GENFUN_TOL.get(args.which, genfun.TOL)
    errs = [res["rel_err"]] + ([res["scaled_rel_err"]] if "scaled_rel_err" in res else [])
    ok = all(e <= tol for e in errs)
    report = {"which": args.which, "q": args.q, "order": args.order, **res, "tol": tol, "status": "pass" if ok else "fail"}
    out.write(dumps(report) + "\n")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_witness(args, out) -> int:
    if args.lebesgue:
        res = quadrature.lebesgue_witness()
        ok = res["lebesgue_rel_err"] <= quadrature.TOL_MIXED
    else:
        res = identities.runge_failure_witness(seed=args.seed)
        # the formula must hold on a common slice and fail at the generic pair
        ok = res["slice_ok"] and res["witness"]["discrepancy_norm"] > quadrature.TOL_EXACT
    res = {**res, "status": "pass" if ok else "fail"}
    out.write(dumps(res) + "\n")
    return EXIT_OK if ok else EXIT_FAIL


COMMANDS = {
    "table": cmd_table,
    "eval": cmd_eval,
    "check": cmd_check,
    "ortho": cmd_ortho,
    "genfun": cmd_genfun,
    "witness": cmd_witness,
}


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    threads = os.environ.get("HERMIQ_THREADS")
    if threads is not None and not (threads.isdigit() and int(threads) > 0):
        err.write(f"hermiq: error: HERMIQ_THREADS must be a positive integer, got {threads!r}\n")
        return EXIT_USAGE
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors this way
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        with np.errstate(over="ignore"):
            return COMMANDS[args.command](args, out)
    except UsageError as exc:
        err.write(f"hermiq: error: {exc}\n")
        return EXIT_USAGE


def main(argv: Sequence[str] | None = None) -> int:
    return run(argv)
