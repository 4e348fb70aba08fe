"""Convergence studies over n = 2^k, CSV records and log-log slope fits."""

import csv
import io
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields
from typing import Optional

import numpy as np

from . import functions
from .estimator import DEFAULT_REPLICATES, replicate
from .rules import CutoffStrategy, RuleConfig

CSV_HEADER = ("seed", "function_id", "cutoff_mode", "alpha", "epsilon", "n", "T", "r",
              "mean_estimate", "mse_estimate", "reference", "squared_error",
              "evaluations_total")
MSE_FLOOR = 2.0 ** -90
THREADS_ENV = "GAUSSQUAD_THREADS"


def _fmt(x):
    return format(x, ".17g")


@dataclass(frozen=True)
class ExperimentRecord:
    seed: int
    function_id: str
    cutoff_mode: str
    alpha: Optional[int]
    epsilon: float
    n: int
    T: float
    r: int
    mean_estimate: float
    mse_estimate: float
    reference: float
    squared_error: float
    evaluations_total: int

    def to_row(self):
        row = []
        for f in fields(self):
            v = getattr(self, f.name)
            if v is None:
                row.append("")
            elif isinstance(v, float):
                row.append(_fmt(v))
            else:
                row.append(str(v))
        return row

    @classmethod
    def from_row(cls, row):
        conv = {"seed": int, "n": int, "r": int, "evaluations_total": int,
                "function_id": str, "cutoff_mode": str,
                "alpha": lambda s: int(s) if s else None}
        return cls(**{k: conv.get(k, float)(row[k]) for k in CSV_HEADER})


def thread_count():
    """Worker cap from ``GAUSSQUAD_THREADS`` (default: CPU count)."""
    raw = os.environ.get(THREADS_ENV, "")
    if raw.strip():
        k = int(raw)
        if k < 1:
            raise ValueError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
        return k
    return os.cpu_count() or 1


def _one_n(f, strategy, k, r, seed):
    n = 2 ** k
    cfg = RuleConfig(n, strategy)
    est = replicate(f, cfg, r, seed=seed, base_id=k << 32)
    ref = f.reference_integral
    return ExperimentRecord(
        seed=seed, function_id=f.id, cutoff_mode=strategy.cli_name, alpha=strategy.alpha,
        epsilon=strategy.epsilon, n=n, T=cfg.T, r=r, mean_estimate=est.mean,
        mse_estimate=est.mse_estimate, reference=ref,
        squared_error=(est.mean - ref) ** 2, evaluations_total=est.evaluations_total)


def run_convergence_study(function_id, cutoff_mode="alpha-free", alpha=None, epsilon=0.51,
                          n_min_pow=6, n_max_pow=14, r=DEFAULT_REPLICATES, seed=0,
                          threads=None):
    """One record per n = 2^k, k = n_min_pow..n_max_pow, in ascending n.

    Every n uses stream ids ``(k << 32) + i`` for replicate ``i``, so the
    output depends only on the arguments, never on ``threads``.
    """
    f = functions.get(function_id)
    strategy = CutoffStrategy(cutoff_mode, alpha, epsilon)
    if 2 ** n_min_pow < 4:
        raise ValueError(f"smallest n must be at least 4, got 2**{n_min_pow}")
    if n_max_pow < n_min_pow:
        raise ValueError("n_max_pow must be >= n_min_pow")
    if not (0 <= seed < 2 ** 64):
        raise ValueError("seed must be an unsigned 64-bit integer")
    ks = range(n_min_pow, n_max_pow + 1)
    threads = thread_count() if threads is None else threads
    if threads <= 1:
        return [_one_n(f, strategy, k, r, seed) for k in ks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        # map preserves input order
        return list(pool.map(lambda k: _one_n(f, strategy, k, r, seed), ks))


def records_to_csv(records):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for rec in records:
        w.writerow(rec.to_row())
    return buf.getvalue()


def write_csv(records, path):
    with open(path, "w", newline="") as fh:
        fh.write(records_to_csv(records))


def read_csv(path):
    with open(path, newline="") as fh:
        return [ExperimentRecord.from_row(row) for row in csv.DictReader(fh)]


class InsufficientPointsError(ValueError):
    pass


@dataclass(frozen=True)
class SlopeFit:
    slope: float
    intercept: float
    n_range: tuple
    points_used: int
    points_excluded: int = 0


def fit_loglog(log2_n, log2_mse):
    """Ordinary least squares line through (log2 n, log2 mse)."""
    x = np.asarray(log2_n, dtype=float)
    y = np.asarray(log2_mse, dtype=float)
    xm, ym = x.mean(), y.mean()
    slope = float(((x - xm) * (y - ym)).sum() / ((x - xm) ** 2).sum())
    return slope, float(ym - slope * xm)


def fit_slope(records, floor=MSE_FLOOR, min_points=3, column="mse_estimate"):
    """Least-squares slope of log2(mse) against log2(n).

    Rows with ``mse <= 0`` or below ``floor`` are dropped and counted in
    ``points_excluded``.
    """
    ns = np.array([rec.n for rec in records], dtype=float)
    mse = np.array([getattr(rec, column) for rec in records], dtype=float)
    ok = (mse > 0.0) & (mse >= floor)
    used = int(ok.sum())
    if used < min_points:
        raise InsufficientPointsError(
            f"need at least {min_points} points with {column} above {floor:.3g}, have {used}")
    slope, intercept = fit_loglog(np.log2(ns[ok]), np.log2(mse[ok]))
    return SlopeFit(slope, intercept, (int(ns[ok].min()), int(ns[ok].max())), used,
                    len(records) - used)


def plot_svg(records, path, column="mse_estimate"):
    """log2-log2 line chart of ``column`` against n, written as SVG."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    matplotlib.rcParams["svg.hashsalt"] = "gaussquad"
    ns = np.array([rec.n for rec in records], dtype=float)
    vals = np.array([getattr(rec, column) for rec in records], dtype=float)
    keep = vals > 0
    fig, ax = plt.subplots(figsize=(5, 4))
    label = f"{records[0].function_id} ({records[0].cutoff_mode})" if records else ""
    ax.plot(np.log2(ns[keep]), np.log2(vals[keep]), "o-", label=label)
    ax.set_xlabel("log2 n")
    ax.set_ylabel(f"log2 {column}")
    ax.grid(True, alpha=0.3)
    if label:
        ax.legend()
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
