#!/usr/bin/env python3
"""
Command Line Interface Parser for LP-type runs
Four commands: solve, gen, verify and bench
"""

import argparse
import os
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from ..models.coord_sim import PartitionScheme
from ..solvers.meta_solver import Mode
from .bench_runner import FAMILIES, family_errors
from .config_manager import Model, TraceFormat

# gen options forwarded to the family builders
FAMILY_OPTIONS = ('n', 'd', 'box', 'margin', 'bits', 'istar', 'rounds', 'N',
                  'sets', 'sites', 'count', 'M')

# solve options mapped onto RunConfig keys
RUN_OPTIONS = ('model', 'mode', 'r', 'delta', 'k', 'scheme', 'net_scale',
               'max_iterations', 'memory_cap', 'trace_format', 'seed')


class CLIParser:
    """CLI parser for the LP-type solver toolkit."""

    @staticmethod
    def create_parser() -> argparse.ArgumentParser:
        """Create the main argument parser.

        Returns:
            argparse.ArgumentParser: Configured argument parser
        """
        parser = argparse.ArgumentParser(
            prog='lpn',
            description="LP-type meta-algorithm: solve, generate, verify and benchmark",
            formatter_class=argparse.RawDescriptionHelpFormatter,
            epilog="""
Examples:
  # Solve an instance in memory
  lpn solve vee.json --model ram

  # Two-pass streaming with r = 4
  lpn solve lp1000.json --model stream --r 4 --seed 7 --out trace.csv

  # Coordinator with 8 sites
  lpn solve inst.json --model coord --k 8

  # Generate a recursive two-curve instance
  lpn gen --family tci-rec --rounds 2 --N 4 --seed 3 --out tci.json

  # Check invariants and the brute-force oracle
  lpn verify tci.json

  # Run an acceptance suite
  lpn bench example_bench.yaml --out bench.csv
  lpn bench example_bench.yaml --slow --out full.csv
            """
        )
        parser.add_argument('-v', '--verbose', action='store_true',
                            help='Debug logging for every component')
        parser.add_argument('-q', '--quiet', action='store_true',
                            help='Only warnings and errors')

        sub = parser.add_subparsers(dest='command')

        solve = sub.add_parser('solve', help='Run the meta-algorithm on an instance file')
        solve.add_argument('instance', help='Instance file (JSON)')
        solve.add_argument('--model', choices=[m.value for m in Model], default=None,
                           help='Execution model (default: ram)')
        solve.add_argument('--mode', choices=[m.value for m in Mode], default=None,
                           help='Las-Vegas or Monte-Carlo (default: las-vegas)')
        solve.add_argument('--r', type=int, default=None,
                           help='Trade-off parameter; weight base n^(1/r) (default: ceil(ln n))')
        solve.add_argument('--delta', default=None,
                           help='MPC memory exponent, e.g. 1/2 (mpc only)')
        solve.add_argument('--k', type=int, default=None,
                           help='Number of sites (coord only, default: 2)')
        solve.add_argument('--scheme', choices=[s.value for s in PartitionScheme], default=None,
                           help='Partition of elements over sites (coord only)')
        solve.add_argument('--fused', action='store_true',
                           help='One pass per iteration (stream only)')
        solve.add_argument('--seed', type=int, default=None,
                           help='Random seed (default: $LPTYPE_SEED or 0)')
        solve.add_argument('--net-scale', default=None,
                           help='Multiplier on the net size, e.g. 1/4 (default: 1)')
        solve.add_argument('--max-iterations', type=int, default=None,
                           help='Stop with an error after this many iterations')
        solve.add_argument('--memory-cap', type=int, default=None,
                           help='Per-machine element cap (mpc only)')
        solve.add_argument('--oracle', action='store_true',
                           help='Compare the value with the brute-force oracle')
        solve.add_argument('--timing', action='store_true',
                           help='Record wall time and peak memory in the trace')
        solve.add_argument('--out', '-o', default=None,
                           help='Trace file (.csv or .json)')
        solve.add_argument('--trace-format', choices=[f.value for f in TraceFormat], default=None,
                           help='Trace format (default: from the extension)')
        solve.add_argument('-c', '--config', default=None,
                           help='Run configuration (JSON or YAML); CLI options override it')

        gen = sub.add_parser('gen', help='Generate an instance file')
        gen.add_argument('--family', required=True, choices=list(FAMILIES),
                         help='Instance family')
        gen.add_argument('--n', type=int, default=None, help='Number of elements or points')
        gen.add_argument('--d', type=int, default=None, help='Dimension, or universe size for disj-lp')
        gen.add_argument('--box', default=None, help='LP box half-width (lp)')
        gen.add_argument('--margin', default=None, help='Functional margin (svm)')
        gen.add_argument('--bits', default=None, help='Comma-separated bits (tci-base)')
        gen.add_argument('--istar', type=int, default=None, help='Pointer index (tci-base)')
        gen.add_argument('--rounds', '--r', dest='rounds', type=int, default=None,
                         help='Recursion depth (tci-rec)')
        gen.add_argument('--N', type=int, default=None, help='Blocks per level (tci-rec)')
        gen.add_argument('--sets', default=None,
                         help="Site bit vectors, e.g. '1,0,1;0,1,0' (disj-lp)")
        gen.add_argument('--sites', type=int, default=None, help='Random sites (disj-lp)')
        gen.add_argument('--count', type=int, default=None, help='Sub-instances (direct-sum)')
        gen.add_argument('--M', type=int, default=None, help='Digit radix (direct-sum)')
        gen.add_argument('--seed', type=int, default=None,
                         help='Random seed (default: $LPTYPE_SEED or 0)')
        gen.add_argument('--out', '-o', default=None,
                         help='Instance file (default: standard output)')

        verify = sub.add_parser('verify', help='Run invariant and oracle checks on an instance')
        verify.add_argument('instance', help='Instance file (JSON)')
        verify.add_argument('--no-lp-bridge', action='store_true',
                            help='Skip solving the LP built from a two-curve instance')
        verify.add_argument('--oracle-limit', type=int, default=None,
                            help='Largest number of candidate supports the oracle enumerates')

        bench = sub.add_parser('bench', help='Run an acceptance suite')
        bench.add_argument('suite', help='Suite file (YAML or JSON)')
        bench.add_argument('--out', '-o', default=None,
                           help='Trace file (.csv or .json)')
        bench.add_argument('--slow', action='store_true',
                           help='Also run cells marked slow: true')

        return parser

    @staticmethod
    def parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
        """Parse command line arguments.

        Returns:
            argparse.Namespace: Parsed command line arguments
        """
        return CLIParser.create_parser().parse_args(argv)

    @staticmethod
    def family_params(args: argparse.Namespace) -> Dict[str, Any]:
        """gen options that were given, keyed as the family builders expect."""
        return {k: getattr(args, k) for k in FAMILY_OPTIONS if getattr(args, k, None) is not None}

    @staticmethod
    def run_overrides(args: argparse.Namespace) -> Dict[str, Any]:
        """solve options that were given, keyed as RunConfig expects."""
        out = {k: getattr(args, k) for k in RUN_OPTIONS if getattr(args, k, None) is not None}
        if args.fused:
            out['fused'] = True
        if args.oracle:
            out['oracle'] = True
        if args.timing:
            out['record_timing'] = True
        if args.out is not None:
            out['output'] = args.out
        return out

    @staticmethod
    def validate_args(args: argparse.Namespace) -> Tuple[bool, List[str]]:
        """Validate parsed arguments.

        Model-specific options are checked again once merged into the run
        configuration.

        Args:
            args: Parsed command line arguments

        Returns:
            Tuple[bool, List[str]]: (is_valid, list_of_error_messages)
        """
        errors = []

        if args.verbose and args.quiet:
            errors.append("--verbose and --quiet are mutually exclusive")

        if args.command is None:
            errors.append("A command is required: solve, gen, verify or bench")
            return False, errors

        if args.command == 'solve':
            if not os.path.exists(args.instance):
                errors.append(f"Instance file not found: {args.instance}")
            for name in ('delta', 'net_scale'):
                value = getattr(args, name)
                if value is not None:
                    try:
                        Fraction(value)
                    except (ValueError, ZeroDivisionError):
                        errors.append(f"--{name.replace('_', '-')} must be a rational such as 1/2")
            if args.out is not None and args.trace_format is None:
                ext = os.path.splitext(args.out)[1].lower()
                if ext not in ('.csv', '.json'):
                    errors.append("--out must end in .csv or .json, or pass --trace-format")

        elif args.command == 'gen':
            errors.extend(family_errors(args.family, CLIParser.family_params(args)))

        elif args.command == 'verify':
            if not os.path.exists(args.instance):
                errors.append(f"Instance file not found: {args.instance}")
            if args.oracle_limit is not None and args.oracle_limit < 1:
                errors.append("--oracle-limit must be positive")

        elif args.command == 'bench':
            if not os.path.exists(args.suite):
                errors.append(f"Suite file not found: {args.suite}")
            if args.out is not None and os.path.splitext(args.out)[1].lower() not in ('.csv', '.json'):
                errors.append("--out must end in .csv or .json")

        return len(errors) == 0, errors
