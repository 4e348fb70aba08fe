"""Smooth integrands f2 (compact bump) and f3 (tanh^2) with the alpha-free cut-off."""

import argparse
from pathlib import Path

from gaussquad.study import InsufficientPointsError, fit_slope, plot_svg, run_convergence_study, write_csv


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", type=Path, default=Path("results/figure2"))
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--n-max-pow", type=int, default=14)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    for fid in ("f2", "f3"):
        recs = run_convergence_study(fid, n_max_pow=args.n_max_pow, seed=args.seed)
        write_csv(recs, args.out / f"{fid}.csv")
        plot_svg(recs, args.out / f"{fid}.svg")
        try:
            fit = fit_slope(recs)
            slope = f"{fit.slope:.2f} over n={fit.n_range[0]}..{fit.n_range[1]}"
        except InsufficientPointsError:
            slope = "n/a (too few points above the 2^-90 floor)"
        print(f"{fid}: slope {slope}")
        for r in recs:
            print(f"  n={r.n:6d}  mse={r.mse_estimate:.3e}  sq.err={r.squared_error:.3e}")


if __name__ == "__main__":
    main()
