"""Command line interface: ``qcalc list | run | sweep | table``."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import List, Optional

from .errors import ConstraintViolated, EmptyDomain, QCalcError, UnknownIdentity
from .harness.registry import Backend, all_identities, get_identity
from .harness.sweep import reports_to_csv, sweep
from .harness.verify import ERROR, FAIL, IdentityCase, verify
from .qcore import fraction_str
from .qfunc import PhiSpec, phi_coefficients

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_EVAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _parse_assignments(items: Optional[List[str]]) -> dict:
    out = {}
    for item in items or []:
        name, sep, value = item.partition("=")
        if not sep or not name:
            raise UsageError(f"expected name=p/q, got {item!r}")
        try:
            out[name.strip()] = Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"{value!r} is not a rational number") from None
    return out


def _add_case_options(p: argparse.ArgumentParser):
    p.add_argument("--id", required=True, dest="identity")
    p.add_argument("--backend", choices=[b.value for b in Backend])
    p.add_argument("--order", type=int)
    p.add_argument("--digits", type=int, default=50)
    p.add_argument("--k", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--out", help="write the JSON report here instead of stdout")


def _exit_code(outcomes) -> int:
    if ERROR in outcomes:
        return EXIT_EVAL
    if FAIL in outcomes:
        return EXIT_FAIL
    return EXIT_OK


def _emit(text: str, path: Optional[str]):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def cmd_list(args) -> int:
    for ident in all_identities():
        backends = ",".join(b.value for b in ident.backends)
        print(f"{ident.id:22s} [{backends}]  {'; '.join(ident.anchors)}")
    return EXIT_OK


def cmd_run(args) -> int:
    identity = get_identity(args.identity)
    backend = Backend(args.backend) if args.backend else identity.backends[0]
    case = IdentityCase(args.identity, _parse_assignments(args.param), backend=backend,
                        k=args.k, m=args.m, n=args.n, order=args.order, digits=args.digits)
    # parameters fixed by an equality constraint may be omitted on the command line
    missing = {p.name for p in identity.params(case)} - set(case.binding)
    if missing:
        case = case.with_binding(identity.derive(dict(case.binding), case))
    report = verify(case)
    _emit(report.to_json(), args.out)
    return _exit_code([report.outcome])


def cmd_sweep(args) -> int:
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    reports = sweep(args.identity, args.trials, args.seed, domain=_parse_assignments(args.domain),
                    backend=args.backend, workers=args.workers, k=args.k, m=args.m, n=args.n,
                    order=args.order, digits=args.digits)
    text = json.dumps([r.to_dict() for r in reports], indent=2, sort_keys=True)
    _emit(text, args.out)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            fh.write(reports_to_csv(reports))
    return _exit_code([r.outcome for r in reports])


def cmd_table(args) -> int:
    params = _parse_assignments(args.params)
    q = params.pop("q", None)
    if q is None:
        raise UsageError("table needs q=p/q among --params")
    alpha = params.pop("alpha", Fraction(0))
    beta = params.pop("beta", Fraction(0))
    if args.poly == "rs":
        alpha = beta = Fraction(0)
    elif args.poly == "hahn":
        beta = Fraction(0)
    elif args.poly == "ultra":
        beta = alpha
    if params:
        raise UsageError(f"unused parameters {sorted(params)}")
    if args.n < 0:
        raise UsageError("--n must be non-negative")
    print(f"# {args.poly} alpha={fraction_str(alpha)} beta={fraction_str(beta)} q={fraction_str(q)}")
    print("# n k coefficient of x^k y^(n-k)")
    for n in range(args.n + 1):
        for k, c in enumerate(phi_coefficients(PhiSpec(n, alpha, beta), q)):
            print(f"{n} {k} {fraction_str(c)}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qcalc", description="verify q-series identities")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("list", help="list registered identities").set_defaults(func=cmd_list)

    run = sub.add_parser("run", help="verify one parameter binding")
    _add_case_options(run)
    run.add_argument("--param", action="append", metavar="NAME=P/Q")
    run.set_defaults(func=cmd_run)

    sw = sub.add_parser("sweep", help="verify seeded random bindings")
    _add_case_options(sw)
    sw.add_argument("--trials", type=int, default=10)
    sw.add_argument("--seed", type=int, default=0)
    sw.add_argument("--domain", action="append", metavar="NAME=BOUND",
                    help="override a parameter's modulus bound")
    sw.add_argument("--workers", type=int, default=1)
    sw.add_argument("--csv", help="also write a one-row-per-trial CSV summary")
    sw.set_defaults(func=cmd_sweep)

    tb = sub.add_parser("table", help="print Phi-polynomial coefficient tables")
    tb.add_argument("--poly", choices=["phi", "rs", "hahn", "ultra"], default="phi")
    tb.add_argument("--n", type=int, required=True)
    tb.add_argument("--params", nargs="*", metavar="NAME=P/Q", default=[])
    tb.set_defaults(func=cmd_table)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, UnknownIdentity, ConstraintViolated, EmptyDomain) as exc:
        print(f"qcalc: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except QCalcError as exc:
        print(f"qcalc: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_EVAL


if __name__ == "__main__":
    sys.exit(main())
