"""Command-line entry point: ``qvieta {verify,quasidet,ribbon,membership}``.

Exit codes: 0 success, 1 a check failed (or a quasideterminant is undefined),
2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import freealg
from .campaign import ALL_CHECKS, CampaignConfig, run_campaign
from .ncring import format_rat
from .quasidet import BlockMatrix, quasidet

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _checks(text: str) -> tuple[str, ...]:
    names = tuple(s.strip() for s in text.split(",") if s.strip())
    unknown = [s for s in names if s not in ALL_CHECKS]
    if unknown or not names:
        raise argparse.ArgumentTypeError(
            f"unknown check(s) {unknown}; choose from {','.join(ALL_CHECKS)}")
    return names


def _composition(text: str) -> tuple[int, ...]:
    try:
        parts = tuple(int(s) for s in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"composition must be comma-separated integers: {text!r}")
    if not parts or any(p < 1 for p in parts):
        raise argparse.ArgumentTypeError("composition parts must be positive")
    return parts


def _seed(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qvieta", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="run a seeded verification campaign")
    v.add_argument("--n", type=int, default=3, help="number of roots")
    v.add_argument("--dim", type=int, default=2, help="matrix dimension")
    v.add_argument("--trials", type=int, default=25)
    v.add_argument("--seed", type=_seed, default=1)
    v.add_argument("--bound", type=int, default=10, help="entries drawn from [-bound, bound]")
    v.add_argument("--checks", type=_checks, default=ALL_CHECKS,
                   help="comma list from: " + ",".join(ALL_CHECKS))
    v.add_argument("--report", help="write the JSON-lines report to this path")
    v.add_argument("--json", action="store_true", help="print the JSON-lines report to stdout")
    v.add_argument("--timings", action="store_true", help="include per-check timings in the report")
    v.add_argument("--jobs", type=int, default=1, help="worker processes")

    q = sub.add_parser("quasidet", help="evaluate |A|_pq of a block matrix JSON file")
    q.add_argument("input", help="block matrix JSON file ('-' for stdin)")
    q.add_argument("--p", type=int, default=1, help="row label")
    q.add_argument("--q", type=int, default=1, help="column label")
    q.add_argument("--json", action="store_true")

    r = sub.add_parser("ribbon", help="print the ribbon Schur function R_J")
    r.add_argument("--J", type=_composition, required=True, help="composition, e.g. 2,1")
    r.add_argument("--n", type=int, required=True, help="alphabet size")

    m = sub.add_parser("membership", help="decide membership in the algebra of Lambda_k")
    m.add_argument("--poly", required=True, help='e.g. "y1.y1 + y1.y2 + y2.y2"')
    m.add_argument("--n", type=int, required=True, help="alphabet size")
    m.add_argument("--json", action="store_true")
    return parser


def cmd_verify(args) -> int:
    try:
        config = CampaignConfig(args.n, args.dim, args.trials, args.seed, args.bound, args.checks)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report = run_campaign(config, jobs=max(1, args.jobs))
    body = report.to_jsonl(include_timings=args.timings)
    if args.report:
        try:
            with open(args.report, "w") as fh:
                fh.write(body)
        except OSError as exc:
            print(f"error: cannot write report: {exc}", file=sys.stderr)
            return EXIT_USAGE
    if args.json:
        sys.stdout.write(body)
    else:
        print(report.human_summary())
    return EXIT_OK if report.passed else EXIT_FAIL


def _load_block(path: str) -> BlockMatrix:
    text = sys.stdin.read() if path == "-" else open(path).read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    try:
        return BlockMatrix.from_json(data)
    except (ValueError, TypeError, KeyError) as exc:
        raise ValueError(f"{path}: {exc}") from None


def cmd_quasidet(args) -> int:
    try:
        a = _load_block(args.input)
        result = quasidet(a, args.p, args.q)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if not result.defined:
        if args.json:
            print(json.dumps({"defined": False, "failure_site": result.failure_site.to_json()}))
        else:
            print(f"undefined: {result.failure_site}")
        return EXIT_FAIL
    value = result.value
    if args.json:
        print(json.dumps({"defined": True, "value": value.to_json()}))
    elif value.dim == 1:
        print(format_rat(value.rows[0][0]))
    else:
        for row in value.rows:
            print(" ".join(format_rat(e) for e in row))
    return EXIT_OK


def cmd_ribbon(args) -> int:
    if args.n < 1:
        print("error: --n must be positive", file=sys.stderr)
        return EXIT_USAGE
    print(freealg.ribbon(args.J, args.n))
    return EXIT_OK


def cmd_membership(args) -> int:
    try:
        p = freealg.parse_poly(args.poly, args.n)
        result = freealg.symm_membership(p)
    except freealg.DegreeBoundExceeded as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.json:
        print(json.dumps({"member": result.member,
                          "certificate": result.certificate_text() or None}))
    elif result.member:
        print("member")
        print(result.certificate_text())
    else:
        print("non-member")
    return EXIT_OK


COMMANDS = {"verify": cmd_verify, "quasidet": cmd_quasidet,
            "ribbon": cmd_ribbon, "membership": cmd_membership}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return COMMANDS[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
