#!/usr/bin/env python3
"""
Main entry point for the lptype_nets package.
This allows the package to be run as: python -m lptype_nets
"""

import sys

from lptype_nets.core.app_controller import AppController


def show_help():
    """Show help information."""
    print("""
🧮 LP-type Meta-Algorithm (lpn)

USAGE:
    lpn <command> [options]

COMMANDS:
    solve INSTANCE   Run the meta-algorithm (ram, stream, coord or mpc)
    gen              Generate an instance file
    verify INSTANCE  Invariant suite and brute-force oracle comparison
    bench SUITE      Run an acceptance suite and write the trace

EXAMPLES:
    lpn solve vee.json --model ram                        # In memory
    lpn solve lp.json --model stream --r 4 --seed 7       # Two-pass streaming
    lpn solve lp.json --model stream --fused              # One pass per iteration
    lpn solve lp.json --model coord --k 8 --scheme contiguous
    lpn solve lp.json --model mpc --delta 1/3 --out trace.csv
    lpn gen --family tci-rec --rounds 2 --N 4 --out tci.json
    lpn gen --family disj-lp --sets '1,0,1;0,1,0'
    lpn verify tci.json
    lpn bench example_bench.yaml --out bench.csv

OPTIONS (solve):
    --model             ram, stream, coord or mpc (default: ram)
    --mode              las-vegas or monte-carlo (default: las-vegas)
    --r                 Trade-off parameter (default: ceil(ln n); derived from delta for mpc)
    --delta             MPC memory exponent, e.g. 1/2
    --k, --scheme       Sites and element partition (coord)
    --fused             One pass per iteration (stream)
    --seed              Random seed (default: $LPTYPE_SEED or 0)
    --net-scale         Multiplier on the net size
    --oracle            Compare with the brute-force oracle
    --timing            Record wall time and peak memory
    --out, -o           Trace file (.csv or .json)
    --config, -c        Run configuration (JSON or YAML); CLI overrides file

EXIT CODES:
    0 success, 1 error, 2 infeasible, 3 unbounded,
    4 monte-carlo fail, 5 verification failure

For detailed help:
    lpn --help
    lpn <command> --help
""")


def main():
    """Main entry point for the application."""
    try:
        # Check for help
        if len(sys.argv) > 1 and sys.argv[1] in ['help', '--help', '-h']:
            show_help()
            return 0

        controller = AppController()
        return controller.run()

    except KeyboardInterrupt:
        print("\n⚠️  Operation cancelled by user")
        return 1
    except Exception as e:
        print(f"❌ Application error: {e}")
        import traceback
        traceback.print_exc()
        return 1


if __name__ == "__main__":
    sys.exit(main())
