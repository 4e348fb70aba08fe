"""Replicated estimation and the sample-variance MSE estimator."""

import math
from dataclasses import dataclass

import numpy as np

from .rng import RngStream
from .rules import draw_realization, evaluate_realization

DEFAULT_REPLICATES = 50


@dataclass(frozen=True)
class ReplicatedEstimate:
    replicate_values: tuple
    mean: float
    mse_estimate: float
    r: int
    evaluations_total: int

    @classmethod
    def from_values(cls, values, evaluations_total=0):
        """Mean and ``sum (v - mean)^2 / (r (r - 1))`` via Welford's update."""
        values = tuple(float(v) for v in values)
        r = len(values)
        if r < 2:
            raise ValueError(f"need at least 2 replicates, got {r}")
        mean = 0.0
        m2 = 0.0
        for k, v in enumerate(values, start=1):
            d = v - mean
            mean += d / k
            m2 += d * (v - mean)
        return cls(values, mean, max(m2, 0.0) / (r * (r - 1)), r, int(evaluations_total))

    @property
    def standard_error(self):
        return math.sqrt(self.mse_estimate)


def replicate(f, config, r=DEFAULT_REPLICATES, stream=None, *, seed=0, base_id=0):
    """Average ``r`` independent realizations of the randomized rule.

    Replicate ``i`` runs on ``RngStream(seed, base_id + i)``. When ``stream``
    is given, its seed and stream id replace ``seed`` and ``base_id``.
    """
    if r < 2:
        raise ValueError(f"replicate needs r >= 2, got {r}")
    if stream is not None:
        seed, base_id = stream.seed, stream.stream_id
    values = []
    evals = 0
    for i in range(r):
        real = draw_realization(config, RngStream(seed, base_id + i))
        values.append(evaluate_realization(f, real))
        evals += real.node_count
    return ReplicatedEstimate.from_values(values, evals)


@dataclass(frozen=True)
class UnbiasednessCheck:
    """Nested Monte Carlo comparison of the MSE estimator with the true MSE.

    Iterating yields ``(mean_mse_estimate, empirical_mse)``.
    """

    mean_mse_estimate: float
    empirical_mse: float
    mean_mse_estimate_se: float
    empirical_mse_se: float
    difference_se: float
    outer: int

    def __iter__(self):
        return iter((self.mean_mse_estimate, self.empirical_mse))

    @property
    def z_score(self):
        d = self.mean_mse_estimate - self.empirical_mse
        if self.difference_se == 0.0:
            return 0.0 if d == 0.0 else math.inf
        return d / self.difference_se


def mse_estimator_unbiasedness_check(f, config, r, outer, stream, reference=None):
    """Run ``outer`` independent replicated estimates and compare the average
    MSE estimate with the observed mean squared error of the means.

    ``reference`` defaults to ``f.reference_integral``. The standard error of
    the difference uses the paired per-run differences, since both columns
    come from the same runs.
    """
    if outer < 100:
        raise ValueError(f"outer must be at least 100, got {outer}")
    if reference is None:
        reference = f.reference_integral
    est = np.empty(outer)
    sq = np.empty(outer)
    for k in range(outer):
        # runs occupy disjoint blocks of r stream ids
        res = replicate(f, config, r, seed=stream.seed, base_id=stream.stream_id + k * r)
        est[k] = res.mse_estimate
        sq[k] = (res.mean - reference) ** 2
    root = math.sqrt(outer)
    return UnbiasednessCheck(
        mean_mse_estimate=float(est.mean()),
        empirical_mse=float(sq.mean()),
        mean_mse_estimate_se=float(est.std(ddof=1) / root),
        empirical_mse_se=float(sq.std(ddof=1) / root),
        difference_se=float((est - sq).std(ddof=1) / root),
        outer=outer,
    )
