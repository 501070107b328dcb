"""
coxfix
======
Entry point: run a verification suite on a Coxeter group and print/write the report.

  coxfix verify <suite> --group <name|file> [--perm=3,2,1]... [--theta id|perm] [-L 8]
                [--max-interval 5] [--extended] [-o report.tsv]
  coxfix catalog

Exit codes: 0 all checks pass, 1 some check failed, 2 configuration or resource error.
"""

import argparse
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from catalog import catalog_table
from coxeter import DEFAULT_MAX_NODES
from errors import CoxfixError
from suites import Report, SuiteConfig, run_suite, suite_names
from topology import DEFAULT_MAX_FACES

logger = logging.getLogger("coxfix")

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def print_results(report: Report) -> None:
    """Summary block and one line per check."""
    print("\n" + "=" * 60)
    print(f"COXFIX: {report.suite.upper()} ON {report.config.group}")
    print("=" * 60)
    for line in report.lines():
        print(f"  {line}")
    counts = report.counts
    print(f"\n  Checks: {counts['PASS']} passed, {counts['FAIL']} failed")
    if report.elapsed is not None:
        print(f"  Wall-clock: {report.elapsed:.2f}s")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coxfix", description="Machine checks for Coxeter group combinatorics")
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="Run a verification suite")
    verify.add_argument("suite", help=f"One of: {', '.join(suite_names())}")
    verify.add_argument("--group", required=True, help="Catalog name (A3, B3, I2(5), affA2, ...) or matrix file")
    verify.add_argument("--perm", action="append", default=[], help="Diagram automorphism, e.g. --perm=3,2,1")
    verify.add_argument("--theta", default="id", help="'id', 'perm' (first --perm) or a perm spec")
    verify.add_argument("-L", type=int, default=8, help="Ball radius")
    verify.add_argument("--max-interval", type=int, default=5, help="Interval length cap")
    verify.add_argument("--max-faces", type=int, default=DEFAULT_MAX_FACES, help="Order complex face cap")
    verify.add_argument("--max-nodes", type=int, default=DEFAULT_MAX_NODES, help="Element intern cap")
    verify.add_argument("--extended", action="store_true", help="Allow large groups (E6 fold)")
    verify.add_argument("--seed", type=int, default=0, help="Random seed for sampling")
    verify.add_argument("--samples", type=int, default=200, help="Sampled intervals for large groups")
    verify.add_argument("--pairs", type=int, default=10_000, help="Random Bruhat pairs for deodhar-oracle")
    verify.add_argument("-o", "--output", default=None, help="TSV report path")

    sub.add_parser("catalog", help="List built-in Coxeter types and their generator numbering")
    return parser


def run_verify(args: argparse.Namespace) -> int:
    try:
        config = SuiteConfig(
            suite=args.suite,
            group=args.group,
            perms=args.perm,
            theta=args.theta,
            L=args.L,
            max_interval=args.max_interval,
            max_faces=args.max_faces,
            max_nodes=args.max_nodes,
            extended=args.extended,
            seed=args.seed,
            samples=args.samples,
            pairs=args.pairs,
            output=args.output,
        )
        report = run_suite(args.suite, config)
    except ValidationError as exc:
        print(f"coxfix: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CoxfixError as exc:
        print(f"coxfix: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if config.output:
        report.write(config.output)
        print_results(report)
        print(f"\nReport written to {config.output}")
    else:
        sys.stdout.write(report.to_tsv())
    return EXIT_OK if report.passed else EXIT_FAIL


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    if args.command == "catalog":
        print(catalog_table().to_string(index=False))
        return EXIT_OK
    return run_verify(args)


if __name__ == "__main__":
    sys.exit(main())
