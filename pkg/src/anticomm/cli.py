"""Command-line entry point.

Results go to stdout, diagnostics (errors, timings) to stderr.  Exit codes:
0 success, 1 other library error, 2 parse error, 3 invalid witness /
identity failure / proven counterexample, 4 randomized budget exhausted.
"""

from __future__ import annotations

import argparse
import sys

from .classify import DEFAULT_SAMPLES, classify
from .errors import AnticommError, BudgetExhausted, InvalidWitness, ParseError
from .field import field_from_token
from .matrix import format_matrix, parse_matrix
from .search import (
    char2_counterexample_scan,
    finite_field_conjecture_scan,
    identity_regression_suite,
    sign_survey,
)
from .witness import (
    DEFAULT_BUDGET,
    DEFAULT_ENTRY_BOUND,
    assemble_witness,
    format_witness,
    parse_witness,
    step3_matrix,
    verify_witness,
)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_PARSE = 2
EXIT_INVALID = 3
EXIT_BUDGET = 4


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


def _field_arg(token):
    return None if token is None else field_from_token(token)


def _load_matrix(args):
    return parse_matrix(_read(args.matrix), _field_arg(args.field))


def cmd_classify(args, out):
    A = _load_matrix(args)
    result = classify(A, seed=args.seed, samples=args.samples)
    for name, sc in result.items():
        out.write(f"question={name} {sc.line()}\n")
    for name, sc in result.items():
        for X, v in sc.witnesses:
            out.write(f"witness question={name} value={A.field.render(v)}\n")
            out.write(format_matrix(X))
    return EXIT_OK


def cmd_witness(args, out):
    if args.matrix is None:
        if args.q is None:
            raise ParseError("witness needs a matrix file or --q (with optional --p)")
        A = step3_matrix(args.p or 0, args.q, _field_arg(args.field) or field_from_token("Q"))
    else:
        A = _load_matrix(args)
    w = assemble_witness(A, seed=args.seed, entry_bound=args.bound, budget=args.budget)
    out.write(f"path={w.provenance}\n")
    out.write(format_witness(w))
    return EXIT_OK


def cmd_verify(args, out):
    A = _load_matrix(args)
    w = parse_witness(_read(args.witness), _field_arg(args.field))
    cert = verify_witness(A, w)
    out.write(f"status=valid certificate={A.field.render(cert)}\n")
    return EXIT_OK


def cmd_scan_ff(args, out):
    report = finite_field_conjecture_scan(args.p, args.n, seed=args.seed, budget=args.budget,
                                          workers=args.workers)
    out.write(report.text())
    print(f"elapsed={report.elapsed:.3f}s", file=sys.stderr)
    return EXIT_INVALID if report.counterexamples else EXIT_OK


def cmd_scan_char2(args, out):
    report = char2_counterexample_scan(args.n, args.p, workers=args.workers)
    out.write(report.text())
    print(f"elapsed={report.elapsed:.3f}s", file=sys.stderr)
    return EXIT_INVALID if report.witnesses_found else EXIT_OK


def cmd_survey(args, out):
    A = _load_matrix(args)
    out.write(sign_survey(A, args.samples, args.bound, seed=args.seed).text())
    return EXIT_OK


def cmd_identities(args, out):
    results = identity_regression_suite()
    for r in results:
        out.write(r.line() + "\n")
    return EXIT_OK if all(r.passed for r in results) else EXIT_INVALID


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="anticomm", description="Exact experiments on det(AX + XA).")
    sub = parser.add_subparsers(dest="verb", required=True)

    def with_field(p):
        p.add_argument("--field", help="reinterpret input entries over Q or GF(<prime>)")

    p = sub.add_parser("classify", help="sign class of X -> det(AX + XA)")
    p.add_argument("matrix")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    with_field(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("witness", help="B similar to A with A + B invertible")
    p.add_argument("matrix", nargs="?")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--bound", type=int, default=DEFAULT_ENTRY_BOUND)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--p", type=int, help="zero-block size when building diag(0_p, J_q)")
    p.add_argument("--q", type=int, help="Jordan block size when no matrix file is given")
    with_field(p)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("verify", help="re-check a serialized witness")
    p.add_argument("matrix")
    p.add_argument("witness", help="witness file, '-' for stdin")
    with_field(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("scan-ff", help="finite-field conjecture scan")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--budget", type=int, default=20_000)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_scan_ff)

    p = sub.add_parser("scan-char2", help="exhaustive char-2 obstruction check")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_scan_char2)

    p = sub.add_parser("survey", help="seeded sign survey of det(AX + XA)")
    p.add_argument("matrix")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--bound", type=int, default=5)
    with_field(p)
    p.set_defaults(func=cmd_survey)

    p = sub.add_parser("identities", help="regression suite of closed-form identities")
    p.set_defaults(func=cmd_identities)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InvalidWitness as exc:
        print(f"invalid witness: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except BudgetExhausted as exc:
        print(f"budget exhausted after {exc.attempts} attempts: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except AnticommError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
