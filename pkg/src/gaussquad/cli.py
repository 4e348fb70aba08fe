"""Command-line convergence study.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

import argparse
import sys

from .functions import PUBLIC_IDS, IntegrandError
from .oracle import OracleError
from .study import fit_slope, plot_svg, records_to_csv, run_convergence_study, write_csv

EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _u64(text):
    v = int(text)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def build_parser():
    p = argparse.ArgumentParser(
        prog="gaussquad",
        description="Randomized truncated trapezoidal rule: convergence study over n = 2^k.")
    # "zero" is accepted for plumbing checks but not advertised
    p.add_argument("--function", default="f1p1", choices=PUBLIC_IDS + ("zero",),
                   metavar="{" + "|".join(PUBLIC_IDS) + "}")
    p.add_argument("--cutoff", default="alpha-free", choices=("alpha", "alpha-free"))
    p.add_argument("--alpha", type=int, default=None)
    p.add_argument("--epsilon", type=float, default=0.51)
    p.add_argument("--n-min-pow", type=int, default=6)
    p.add_argument("--n-max-pow", type=int, default=14)
    p.add_argument("--replicates", type=int, default=50)
    p.add_argument("--seed", type=_u64, default=0)
    p.add_argument("--output", default=None, help="CSV path (default: stdout)")
    p.add_argument("--plot", default=None, help="optional SVG path")
    p.add_argument("--fit", action="store_true", help="print slope=<value> to stdout")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        records = run_convergence_study(
            args.function, args.cutoff, args.alpha, args.epsilon,
            args.n_min_pow, args.n_max_pow, args.replicates, args.seed)
    except (ValueError, KeyError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (OracleError, IntegrandError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL

    if args.output:
        write_csv(records, args.output)
    else:
        sys.stdout.write(records_to_csv(records))
    if args.plot:
        plot_svg(records, args.plot)
    if args.fit:
        try:
            fit = fit_slope(records)
        except ValueError as exc:
            print(f"numerical failure: {exc}", file=sys.stderr)
            return EXIT_NUMERICAL
        print(f"slope={fit.slope:.6f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
