#!/usr/bin/env python3
"""
Application Controller for LP-type runs
Orchestrates the solve, gen, verify and bench commands
"""

import logging
import sys
from argparse import Namespace
from typing import Optional, Sequence

from ..generators.reductions import tci_to_lp
from ..generators.tci import TciInstance
from ..solvers.lptype import Ordering, order_compare
from ..utils.errors import EXIT_ERROR, EXIT_OK, EXIT_VERIFICATION_FAILURE, LpTypeError, MonteCarloFail
from ..utils.logging_utils import set_package_level, setup_all_logging
from ..verification.invariants import ground_truth_errors, verify_problem, verify_tci
from ..verification.oracle import brute_solve, within_limit
from .bench_runner import BenchRunner, build_instance, run_fields, run_model
from .cli_parser import CLIParser
from .config_manager import ConfigManager, RunConfig, default_seed
from .file_manager import InstanceFileManager
from .output_manager import OutputManager

logger = logging.getLogger(__name__)


class AppController:
    """Main application controller for the lpn command."""

    def __init__(self) -> None:
        """Initialize the application controller."""
        setup_all_logging()
        self.args: Optional[Namespace] = None
        self.config_manager: Optional[ConfigManager] = None
        self.output_manager = OutputManager()

    def run(self, argv: Optional[Sequence[str]] = None) -> int:
        """Main entry point for the application.

        Args:
            argv: Optional argument list. If None, reads the command line.

        Returns:
            int: Process exit code
        """
        args = CLIParser.parse_args(argv)
        self.args = args

        is_valid, errors = CLIParser.validate_args(args)
        if not is_valid:
            print("❌ Command line argument errors:")
            for error in errors:
                print(f"  - {error}")
            return EXIT_ERROR

        if args.verbose:
            set_package_level(logging.DEBUG)
        elif args.quiet:
            set_package_level(logging.WARNING)

        handlers = {
            'solve': self.run_solve,
            'gen': self.run_gen,
            'verify': self.run_verify,
            'bench': self.run_bench,
        }
        try:
            return handlers[args.command](args)
        except LpTypeError as e:
            print(f"❌ {e}")
            print(f"error: {e.code_name}", file=sys.stderr)
            return e.exit_code
        except FileNotFoundError as e:
            print(f"❌ {e}")
            return EXIT_ERROR
        except ValueError as e:
            print(f"❌ Invalid input: {e}")
            return EXIT_ERROR

    def _load_run_config(self, args: Namespace) -> Optional[RunConfig]:
        """File configuration (if any) with CLI options on top."""
        self.config_manager = ConfigManager()
        if args.config:
            try:
                self.config_manager.load(args.config)
            except FileNotFoundError as e:
                print(f"❌ {e}")
                return None
            except ValueError as e:
                print(f"❌ Invalid config file: {e}")
                return None
        config = self.config_manager.config
        config.from_dict(CLIParser.run_overrides(args))
        is_valid, errors = config.get_validation_summary()
        if not is_valid:
            print("❌ Command line argument errors:")
            for error in errors:
                print(f"  - {error}")
            return None
        return config

    def run_solve(self, args: Namespace) -> int:
        """Handle the solve command.

        Prints the solution value (and the two-curve answer for TCI files)
        and writes one trace row when an output file is set.
        """
        config = self._load_run_config(args)
        if config is None:
            return EXIT_ERROR

        loaded = InstanceFileManager.load(args.instance)
        tci = loaded if isinstance(loaded, TciInstance) else None
        inst, rule = tci_to_lp(tci) if tci is not None else (loaded, None)
        n = len(inst.elements)
        fields = dict(run_fields(config, n), family=inst.meta.get('family', inst.kind.value), d=inst.d)

        try:
            result = run_model(inst, config)
        except MonteCarloFail as e:
            if config.output:
                OutputManager.write_trace([OutputManager.trace_row(e.trace, **fields)],
                                          config.output, config.trace_format)
            raise

        print(result.value)
        matches = None
        if tci is not None:
            answer = rule(result.value)
            print(f"answer {answer}")
            matches = answer == tci.answer
        if config.oracle:
            if within_limit(inst):
                expected = brute_solve(inst)
                matches = (matches is not False) and order_compare(result.value, expected) is Ordering.EQ
            else:
                logger.warning("oracle skipped: too many candidate supports")

        if config.output:
            timing = {}
            if result.timing is not None:
                timing = {'wall_time_s': result.timing.wall_time_s,
                          'peak_rss_mb': result.timing.peak_rss_mb}
            row = OutputManager.trace_row(result.trace, **fields, value=str(result.value),
                                          matches_oracle=matches,
                                          invariants_ok=not ground_truth_errors(inst, result.value),
                                          **timing)
            OutputManager.write_trace([row], config.output, config.trace_format)
            logger.info("trace written to %s", config.output)

        if matches is False:
            print("error: verification-failure", file=sys.stderr)
            return EXIT_VERIFICATION_FAILURE
        return EXIT_OK

    def run_gen(self, args: Namespace) -> int:
        """Handle the gen command."""
        seed = args.seed if args.seed is not None else default_seed()
        inst = build_instance(args.family, CLIParser.family_params(args), seed)
        if args.out:
            InstanceFileManager.save(inst, args.out)
            print(f"✅ Wrote {args.family} instance to {args.out}")
        else:
            sys.stdout.write(InstanceFileManager.dumps(inst))
        return EXIT_OK

    def run_verify(self, args: Namespace) -> int:
        """Handle the verify command; exit 0 only when every check passes."""
        inst = InstanceFileManager.load(args.instance)
        if isinstance(inst, TciInstance):
            report = verify_tci(inst, with_lp=not args.no_lp_bridge)
        else:
            report = verify_problem(inst, args.oracle_limit)

        if report.ok:
            print(f"✅ {report.subject}: {len(report.passed)} checks passed")
            for skipped in report.skipped:
                print(f"⚠️  skipped {skipped}")
            return EXIT_OK
        print(f"❌ {report.subject}: {len(report.errors)} checks failed")
        for error in report.errors:
            print(f"  - {error}")
        print("error: verification-failure", file=sys.stderr)
        return EXIT_VERIFICATION_FAILURE

    def run_bench(self, args: Namespace) -> int:
        """Handle the bench command."""
        runner = BenchRunner.from_path(args.suite, getattr(args, 'slow', False))
        errors = runner.validate()
        if errors:
            print("❌ Invalid bench suite:")
            for error in errors:
                print(f"  - {error}")
            return EXIT_ERROR

        frame = runner.run()
        if args.out:
            OutputManager.write_trace(runner.rows, args.out)
            print(f"✅ Wrote {len(frame)} rows to {args.out}")
        else:
            sys.stdout.write(frame.to_csv(index=False))

        print("📊 Summary:")
        for key, value in OutputManager.summarize(frame).items():
            print(f"  {key}: {value}")
        problems = OutputManager.resource_errors(frame)
        if problems:
            print("⚠️  Resource bounds violated:")
            for problem in problems:
                print(f"  - {problem}")
            print("error: verification-failure", file=sys.stderr)
            return EXIT_VERIFICATION_FAILURE
        return EXIT_OK
