"""Truncated trapezoidal rules for the Gaussian integral.

The randomized rule draws a node count ``m_star`` uniformly from
``{floor(n/2), ..., n-2}`` and a shift ``delta`` uniform on (0, 1), places
``m_star`` equispaced shifted nodes in ``(-T, T)`` and adds one truncated
normal node in each tail. Its value is an unbiased estimate of
``int f rho`` using at most ``n`` evaluations.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .functions import IntegrandError
from .rng import truncated_normal_tail, uniform_int, uniform_open
from .special import gaussian_cdf, gaussian_pdf, upper_tail_mass

SMOOTHNESS_AWARE = "smoothness_aware"
SMOOTHNESS_FREE = "smoothness_free"
# CLI spellings
CUTOFF_MODES = {"alpha": SMOOTHNESS_AWARE, "alpha-free": SMOOTHNESS_FREE}


@dataclass(frozen=True)
class CutoffStrategy:
    """How the cut-off T grows with n.

    ``smoothness_aware`` uses the integrand's Sobolev order ``alpha``;
    ``smoothness_free`` replaces it with max(ln ln n, 0).
    """

    mode: str = SMOOTHNESS_FREE
    alpha: Optional[int] = None
    epsilon: float = 0.51

    def __post_init__(self):
        mode = CUTOFF_MODES.get(self.mode, self.mode)
        object.__setattr__(self, "mode", mode)
        if mode not in (SMOOTHNESS_AWARE, SMOOTHNESS_FREE):
            raise ValueError(f"unknown cut-off mode {self.mode!r}")
        if not (0.5 < self.epsilon < 1.0):
            raise ValueError(f"epsilon must lie strictly in (1/2, 1), got {self.epsilon}")
        if mode == SMOOTHNESS_AWARE:
            if self.alpha is None or int(self.alpha) != self.alpha or self.alpha < 1:
                raise ValueError("smoothness-aware cut-off needs an integer alpha >= 1")
        elif self.alpha is not None and self.alpha < 1:
            raise ValueError("alpha must be >= 1 when given")

    @property
    def cli_name(self):
        return "alpha" if self.mode == SMOOTHNESS_AWARE else "alpha-free"


def cutoff_T(strategy, n):
    """T = sqrt((2 a + 1) / (1 - eps) * ln n) with a = alpha or max(ln ln n, 0)."""
    if n < 4:
        raise ValueError(f"cut-off needs n >= 4, got {n}")
    if strategy.mode == SMOOTHNESS_AWARE:
        a = float(strategy.alpha)
    else:
        a = max(math.log(math.log(n)), 0.0)
    return math.sqrt((2.0 * a + 1.0) / (1.0 - strategy.epsilon) * math.log(n))


@dataclass(frozen=True)
class RuleConfig:
    n: int
    cutoff: CutoffStrategy = CutoffStrategy()

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 4:
            raise ValueError(f"the randomized rule needs an integer budget n >= 4, got {self.n}")

    @property
    def T(self):
        return cutoff_T(self.cutoff, self.n)


def m_star_range(n):
    return range(n // 2, n - 1)


def deterministic_rule(f, n, T):
    """Unshifted truncated trapezoidal sum (2T/n) sum_j f(x_j) rho(x_j), x_j = T(2j/n - 1)."""
    if n < 1 or not T > 0:
        raise ValueError("deterministic_rule needs n >= 1 and T > 0")
    x = T * (2.0 * np.arange(n) / n - 1.0)
    y = _checked(f, x) * gaussian_pdf(x)
    return (2.0 * T / n) * math.fsum(y.tolist())


@dataclass(frozen=True)
class RuleRealization:
    """One drawn deterministic rule. Weights are derived from the nodes."""

    m_star: int
    delta: float
    T: float
    left_node: float
    right_node: float

    @property
    def interior_nodes(self):
        j = np.arange(self.m_star)
        return self.T * (2.0 * (j + self.delta) / self.m_star - 1.0)

    @property
    def interior_weights(self):
        return (2.0 * self.T / self.m_star) * gaussian_pdf(self.interior_nodes)

    @property
    def left_weight(self):
        return gaussian_cdf(-self.T)

    @property
    def right_weight(self):
        return upper_tail_mass(self.T)

    @property
    def node_count(self):
        return self.m_star + 2


def draw_realization(config, stream):
    """Draw ``m_star`` and ``delta`` from ``stream``; each tail node from its own child stream.

    Tail nodes never touch the parent stream after ``m_star`` is drawn, so
    they are independent of it by construction.
    """
    n = config.n
    m_star = uniform_int(stream, n // 2, n - 2)
    delta = uniform_open(stream)
    T = config.T
    left = truncated_normal_tail(stream.spawn(), T, "left")
    right = truncated_normal_tail(stream.spawn(), T, "right")
    return RuleRealization(m_star, delta, T, left, right)


def _checked(f, x):
    y = np.asarray(f(x), dtype=float)
    if not np.all(np.isfinite(y)):
        bad = x[~np.isfinite(y)] if y.shape == np.shape(x) else x
        raise IntegrandError(f"integrand returned a non-finite value near x={np.ravel(bad)[0]!r}")
    return y


def evaluate_realization(f, real):
    """Apply a drawn rule to ``f``: interior sum plus the two weighted tail values.

    ``f`` is called once on the interior node array and once on the two
    tail nodes, so it sees exactly ``m_star + 2`` points.
    """
    x = real.interior_nodes
    y = _checked(f, x) * gaussian_pdf(x)
    interior = (2.0 * real.T / real.m_star) * math.fsum(y.tolist())
    tails = _checked(f, np.array([real.left_node, real.right_node]))
    return interior + real.left_weight * float(tails[0]) + real.right_weight * float(tails[1])
