"""Command-line front end.

Exit codes: 0 all checks pass, 1 counterexample found, 2 insufficient
precision, 3 invalid parameters.
"""
from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from .hypergeom import (
    HGParams, a_table, fn_dwork, fn_hat, fn_log, series_G_hat,
)
from .padic_core import PadicError, PrecisionError, parse_rational, valuation
from .verify import CHECKS, Fault, run_check

EXIT_PASS, EXIT_FAIL, EXIT_PRECISION, EXIT_INVALID = 0, 1, 2, 3

# checks that never read the Frobenius constant
C_FREE_CHECKS = {"dwork", "factor", "reflect", "transform-dwork", "blal"}

_C_SUGAR = re.compile(r"^\s*1\s*([+-])\s*(\d*)\s*\*?\s*p\s*$")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parse_c(text: str, p: int) -> Fraction:
    """Frobenius constant: a rational, or ``1+k*p`` / ``1-p`` sugar."""
    m = _C_SUGAR.match(text)
    if m:
        k = int(m.group(2)) if m.group(2) else 1
        return Fraction(1 + k * p if m.group(1) == "+" else 1 - k * p)
    return parse_rational(text)


def _split(text: str) -> list[str]:
    """Comma list with optional integer ranges ``lo..hi``."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        m = re.match(r"^(-?\d+)\.\.(-?\d+)$", part)
        if m:
            out.extend(str(i) for i in range(int(m.group(1)), int(m.group(2)) + 1))
        else:
            out.append(part)
    return out


def _parse_fault(text: str) -> Fault:
    idx, _, mult = text.partition(":")
    return Fault(int(idx), int(mult) if mult else 1)


def _add_param_flags(sp, grid=False):
    kind = str if grid else None
    sp.add_argument("--p", type=kind or int, required=not grid, default="" if grid else None)
    sp.add_argument("--a", type=str, default="1")
    sp.add_argument("--s", type=kind or int, default="1" if grid else 1)
    sp.add_argument("--c", type=str, default="1")
    sp.add_argument("--n", type=kind or int, default="1" if grid else 1)
    sp.add_argument("--deg", type=int, default=None, help="series length M (default 2p^n + 2p)")
    sp.add_argument("--prec", type=int, default=None, help="working precision N_w")
    sp.add_argument("--out", type=str, default=None)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="padichg", description="p-adic hypergeometric functions and congruence checks")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("coeffs", help="dump A_k and B_k as CSV")
    _add_param_flags(sp)

    sp = sub.add_parser("fn", help="compute F_dw, F_log or F_hat as a truncated series")
    sp.add_argument("kind", choices=["dwork", "log", "hat"])
    _add_param_flags(sp)

    sp = sub.add_parser("verify", help="run one checker")
    sp.add_argument("check", choices=sorted(CHECKS))
    _add_param_flags(sp)
    _add_check_flags(sp)
    sp.add_argument("--fault", type=str, default=None, help="INDEX[:MULTIPLE] fault injection")
    sp.add_argument("--format", choices=["json", "text"], default="json")

    sp = sub.add_parser("scan", help="run checkers over a parameter grid, writing JSONL")
    sp.add_argument("--check", action="append", required=True,
                    help="checker name; repeat or comma-separate for several")
    _add_param_flags(sp, grid=True)
    sp.add_argument("--l", type=str, default="0", help="blal: target branches")
    sp.add_argument("--d", type=str, default="1", help="blal: unit multipliers")
    _add_check_flags(sp)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--control", action="store_true",
                    help="append a fault-injected copy of the first grid point")
    sp.add_argument("--no-timing", action="store_true", help="omit elapsed_ms from reports")
    return ap


def _add_check_flags(sp):
    sp.add_argument("--m", type=int, default=None, help="lipschitz: modulus exponent (default n)")
    sp.add_argument("--count", type=int, default=100, help="lipschitz: random pairs")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--m-max", type=int, default=30, help="sm: largest m")
    if "--l" not in sp._option_string_actions:
        sp.add_argument("--l", type=int, default=0, help="blal: target branch")
        sp.add_argument("--d", type=int, default=1, help="blal: unit multiplier")


def _params(p, a, s, c_text, n, M, N_w, check=None) -> HGParams:
    c = Fraction(1) if check in C_FREE_CHECKS else parse_c(c_text, p)
    if check == "blal":
        a = Fraction(1)
    return HGParams(p, parse_rational(a) if isinstance(a, str) else a, s, c, n, M, N_w)


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def cmd_coeffs(args) -> int:
    params = _params(args.p, args.a, args.s, args.c, args.n, args.deg, args.prec)
    A = a_table(params.a, params.s, params.M)
    B = series_G_hat(params)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "A_k", "v_p", "B_k", "prec"])
    for k in range(params.M):
        w.writerow([k, str(A[k]), valuation(A[k], params.p), B.residues[k], B.precisions[k]])
    _write(buf.getvalue(), args.out)
    return EXIT_PASS


def cmd_fn(args) -> int:
    params = _params(args.p, args.a, args.s, args.c, args.n, args.deg, args.prec)
    series = {"dwork": fn_dwork, "log": fn_log, "hat": fn_hat}[args.kind](params)
    payload = {"function": args.kind, "params": params.to_json(), "series": series.to_json()}
    _write(json.dumps(payload) + "\n", args.out)
    return EXIT_PASS


def _options(args, **over) -> dict:
    opts = {"m": args.m, "count": args.count, "seed": args.seed, "m_max": args.m_max,
            "l": args.l, "d": args.d}
    opts.update(over)
    return opts


def _format_text(rep: dict) -> str:
    status = "PASS" if rep["pass"] else "FAIL"
    tag = " (conjectural)" if rep["conjectural"] else ""
    params = " ".join(f"{k}={v}" for k, v in rep["params"].items())
    line = f"{status}{tag} {rep['check']} {params} mod {rep['modulus']}"
    if rep["first_failure"]:
        line += f" first_failure={rep['first_failure']}"
    return line + "\n"


def cmd_verify(args) -> int:
    params = _params(args.p, args.a, args.s, args.c, args.n, args.deg, args.prec, args.check)
    fault = _parse_fault(args.fault) if args.fault else None
    report = run_check(args.check, params, fault=fault, **_options(args))
    payload = report.to_json()
    text = json.dumps(payload) + "\n" if args.format == "json" else _format_text(payload)
    _write(text, args.out)
    return EXIT_PASS if report.passed else EXIT_FAIL


def expand_grid(args) -> list[tuple]:
    """Grid points as picklable tuples; invalid combinations are skipped with a note."""
    checks = [c for item in args.check for c in _split(item)]
    for c in checks:
        if c not in CHECKS:
            raise UsageError(f"unknown check {c!r}")
    ps = [int(x) for x in _split(args.p)]
    axes = itertools.product(checks, ps, _split(args.a), [int(x) for x in _split(args.s)],
                             _split(args.c), [int(x) for x in _split(args.n)])
    extra = [(int(l), int(d)) for l in _split(args.l) for d in _split(args.d)]
    points = []
    seen = set()
    for check, p, a, s, c, n in axes:
        for l, d in (extra if check == "blal" else [(0, 1)]):
            try:
                params = _params(p, a, s, c, n, args.deg, args.prec, check)
            except (PadicError, ValueError) as exc:
                print(f"skipping {check} p={p} a={a} s={s} c={c} n={n}: {exc}", file=sys.stderr)
                continue
            opts = _options(args, l=l, d=d)
            key = (check, params, tuple(sorted(opts.items())))
            if key in seen:
                continue
            seen.add(key)
            points.append((check, params, None, opts))
    if args.control and points:
        check, params, _, opts = points[0]
        points.append((check, params, Fault(1 if check != "log" else 0), opts))
    return points


def _run_point(point) -> dict:
    check, params, fault, opts = point
    try:
        rep = run_check(check, params, fault=fault, **opts).to_json()
    except PadicError as exc:
        rep = {"check": check, "params": params.to_json(), "error": str(exc),
               "error_kind": "precision" if isinstance(exc, PrecisionError) else "invalid"}
    if fault is not None:
        rep["fault"] = {"index": fault.index, "multiple": fault.multiple}
    return rep


def scan_grid(points: list[tuple], out, jobs: int = 1, timing: bool = True) -> dict:
    """Run every grid point, writing one JSON line each in submission order."""
    counts = {"pass": 0, "fail": 0, "conjectural_pass": 0, "conjectural_fail": 0, "error": 0}
    if jobs > 1 and len(points) > 1:
        pool = ProcessPoolExecutor(max_workers=jobs)
        results = pool.map(_run_point, points, chunksize=1)
    else:
        pool = None
        results = map(_run_point, points)
    try:
        for rep in results:
            if "error" in rep:
                counts["error"] += 1
            else:
                key = ("conjectural_" if rep["conjectural"] else "") + ("pass" if rep["pass"] else "fail")
                counts[key] += 1
                if not timing:
                    rep.pop("elapsed_ms", None)
            out.write(json.dumps(rep) + "\n")
            out.flush()
    finally:
        if pool is not None:
            pool.shutdown()
    out.write(json.dumps({"summary": counts}) + "\n")
    out.flush()
    return counts


def cmd_scan(args) -> int:
    points = expand_grid(args)
    try:
        out = open(args.out, "w") if args.out else sys.stdout
    except OSError as exc:
        raise UsageError(f"cannot write {args.out}: {exc}") from exc
    try:
        counts = scan_grid(points, out, args.jobs, timing=not args.no_timing)
    finally:
        if args.out:
            out.close()
    if counts["fail"] or counts["conjectural_fail"]:
        return EXIT_FAIL
    if counts["error"]:
        return EXIT_PRECISION
    return EXIT_PASS


COMMANDS = {"coeffs": cmd_coeffs, "fn": cmd_fn, "verify": cmd_verify, "scan": cmd_scan}


def run_command(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except PrecisionError as exc:
        print(f"insufficient precision: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except (UsageError, PadicError, ValueError, KeyError) as exc:
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return EXIT_INVALID


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
