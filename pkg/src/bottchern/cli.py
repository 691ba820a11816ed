"""Command line front end.

Subcommands::

    verify  --suite S [--seed N] [--tol T] [--report PATH]
    compute --cube PATH --target {W|TW} [--nodes-radial R] [--nodes-angular A] [--cutoff U] [--tol T]
    wform   --n N [--format text|json]

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 scale or
validation error (including unreadable cube files).
"""

import argparse
import json
import sys
import time

from . import bott_chern as bc
from . import cubes
from . import fiber_forms as ff
from .errors import BottChernError, ScopeError
from .quadrature import QuadratureScheme, default_scheme
from .suites import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INVALID = 0, 1, 2, 3


def _parser():
    p = argparse.ArgumentParser(prog="bottchern", description="Higher Bott-Chern forms of metrized exact cubes.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("--suite", required=True, help=f"one of: all, {', '.join(SUITES)}")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--tol", type=float, default=None, help="override every numeric tolerance")
    v.add_argument("--report", default=None, help="write the JSON report here")

    c = sub.add_parser("compute", help="Bott-Chern value of a cube given as JSON")
    c.add_argument("--cube", required=True)
    c.add_argument("--target", choices=("W", "TW"), default="W")
    c.add_argument("--nodes-radial", type=int, default=None)
    c.add_argument("--nodes-angular", type=int, default=None)
    c.add_argument("--cutoff", type=float, default=None)
    c.add_argument("--tol", type=float, default=1e-9, help="tolerance of the exactness check")

    w = sub.add_parser("wform", help="print W_n and the kernel I'(W_n)")
    w.add_argument("--n", type=int, required=True)
    w.add_argument("--format", choices=("text", "json"), default="text")
    return p


def cmd_verify(args, out=None):
    out = out or sys.stdout
    if args.suite != "all" and args.suite not in SUITES:
        print(f"error: unknown suite {args.suite!r}; choose from all, {', '.join(SUITES)}", file=sys.stderr)
        return EXIT_USAGE
    start = time.perf_counter()
    results = run_suite(args.suite, args.seed, args.tol)
    ok = True
    for name, cases in results.items():
        for case in cases:
            ok &= case.status == "pass"
            print(f"[{case.status.upper()}] {name}: {case.name}: value={case.value} "
                  f"tol={case.tolerance:g} ({case.runtime:.2f}s)" + (f"  {case.note}" if case.note else ""), file=out)
    report = {
        "suite": args.suite,
        "seed": args.seed,
        "tol": args.tol,
        "status": "pass" if ok else "fail",
        "runtime": time.perf_counter() - start,
        "suites": {name: [c.to_json() for c in cases] for name, cases in results.items()},
    }
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2, ensure_ascii=False)
    return EXIT_OK if ok else EXIT_FAIL


def _load_cube(path, tol):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise BottChernError(f"malformed JSON in {path}: {exc.msg} at line {exc.lineno}, column {exc.colno}") from None
    F = cubes.cube_from_json(data)
    F.validate(tol)
    return F


def _scheme(args, n):
    if n == 0:
        return None
    base = default_scheme(n)
    return QuadratureScheme(args.nodes_radial or base.radial, args.nodes_angular or base.angular,
                            args.cutoff or base.cutoff, base.rule)


def cmd_compute(args, out=None):
    out = out or sys.stdout
    try:
        F = _load_cube(args.cube, args.tol)
    except OSError as exc:
        print(f"error: cannot read {args.cube}: {exc.strerror}", file=sys.stderr)
        return EXIT_INVALID
    except BottChernError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    try:
        if F.n > bc.MAX_N:
            raise ScopeError(f"cube dimension {F.n} exceeds the supported bound {bc.MAX_N}")
        scheme = _scheme(args, F.n)
        result = bc.bott_chern(F, args.target, scheme)
    except (ScopeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    payload = result.to_json()
    payload["emi"] = cubes.is_emi(F)
    print(json.dumps(payload, indent=2, ensure_ascii=False), file=out)
    return EXIT_OK


def cmd_wform(args, parser, out=None):
    out = out or sys.stdout
    if not 1 <= args.n <= ff.MAX_N:
        parser.error(f"--n must be between 1 and {ff.MAX_N}")
    ip = ff.i_prime(args.n)
    W = ff.w_form(args.n)
    if args.format == "json":
        print(json.dumps({"n": args.n, "i_prime": ip.form.to_json(), "sigma": ip.sigma,
                          "w": {"r": W.r.to_json(), "f": W.f.to_json(), "w": W.w.to_json()}}, indent=2), file=out)
    else:
        print(ip.form.to_text(), file=out)
        print(f"# sigma = {ip.sigma:+d}", file=out)
        print(f"# W.r = {W.r.to_text()}", file=out)
        print(f"# W.f = {W.f.to_text()}", file=out)
        print(f"# W.w = {W.w.to_text()}", file=out)
    return EXIT_OK


def main(argv=None):
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command == "verify":
        return cmd_verify(args)
    if args.command == "compute":
        return cmd_compute(args)
    try:
        return cmd_wform(args, parser)
    except SystemExit as exc:
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
