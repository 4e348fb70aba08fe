"""Integrands with known Gaussian integrals.

Holds the experiment functions (half-line powers, the smooth bump, tanh^2),
the compactly supported bumps used for the lower-bound construction, and the
constant S(alpha, tau) that controls their Sobolev norm.
"""

import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Callable, Optional

import numpy as np
from numpy.polynomial import Polynomial

from .oracle import integrate, integrate_gaussian
from .special import INV_SQRT_2PI

CLOSED_FORM = "closed_form"
ORACLE = "oracle"
REFERENCE_TOL = 1e-13


class IntegrandError(ArithmeticError):
    """An integrand returned NaN or an infinity."""


@dataclass(frozen=True)
class TestFunction:
    """Vectorized integrand plus metadata.

    ``smoothness`` is the largest Sobolev order known to hold (None for C^inf).
    ``breakpoints`` lists points where ``f`` has a kink; the oracle uses them
    as panel edges.
    """

    __test__ = False  # keep pytest from collecting this class

    id: str
    func: Callable
    smoothness: Optional[int] = None
    reference_integral: Optional[float] = None
    reference_source: Optional[str] = None
    breakpoints: tuple = ()

    def __call__(self, x):
        return self.func(np.asarray(x, dtype=float))


def f1(p, x):
    """Half-line power max(x, 0)**p for p in {1, 2, 3}."""
    if p not in (1, 2, 3):
        raise ValueError(f"f1 is defined for p in {{1, 2, 3}}, got {p}")
    x = np.asarray(x, dtype=float)
    out = np.maximum(x, 0.0) ** p
    return float(out) if out.ndim == 0 else out


_F2_EDGE = 1.0 - 1e-12


def f2(x):
    """Smooth bump exp(-1/(1-x^2)) on (-1, 1), zero elsewhere."""
    x = np.asarray(x, dtype=float)
    inside = np.abs(x) < _F2_EDGE
    xi = np.where(inside, x, 0.0)
    out = np.where(inside, np.exp(-1.0 / (1.0 - xi * xi)), 0.0)
    return float(out) if out.ndim == 0 else out


def f3(x):
    """tanh(x)**2."""
    x = np.asarray(x, dtype=float)
    out = np.tanh(x) ** 2
    return float(out) if out.ndim == 0 else out


_HALF_MOMENTS = {1: INV_SQRT_2PI, 2: 0.5, 3: 2.0 * INV_SQRT_2PI}


def half_moment(p):
    """E[max(X, 0)**p] for p in {1, 2, 3}: 1/sqrt(2 pi), 1/2, 2/sqrt(2 pi)."""
    return _HALF_MOMENTS[p]


def _f1_entry(p):
    return TestFunction(
        id=f"f1p{p}",
        func=lambda x, p=p: np.maximum(x, 0.0) ** p,
        smoothness=p,
        reference_integral=half_moment(p),
        reference_source=CLOSED_FORM,
        breakpoints=(0.0,),
    )


@lru_cache(maxsize=None)
def _f2_reference():
    # f2 vanishes outside (-1, 1)
    g = lambda x: f2(x) * INV_SQRT_2PI * np.exp(-0.5 * x * x)
    return integrate(g, -1.0, 1.0, tol=REFERENCE_TOL).value


@lru_cache(maxsize=None)
def _f3_reference():
    return integrate_gaussian(f3, tol=REFERENCE_TOL).value


@lru_cache(maxsize=None)
def registry():
    """Immutable map from function id to :class:`TestFunction`.

    The ids ``f1p1 f1p2 f1p3 f2 f3`` are the public experiment set; ``zero``
    is an extra identically-zero integrand for plumbing checks.
    """
    entries = [_f1_entry(p) for p in (1, 2, 3)]
    entries.append(TestFunction("f2", f2, None, _f2_reference(), ORACLE))
    entries.append(TestFunction("f3", f3, None, _f3_reference(), ORACLE))
    entries.append(TestFunction("zero", np.zeros_like, None, 0.0, CLOSED_FORM))
    return {e.id: e for e in entries}


PUBLIC_IDS = ("f1p1", "f1p2", "f1p3", "f2", "f3")


def get(function_id):
    try:
        return registry()[function_id]
    except KeyError:
        raise KeyError(f"unknown function id {function_id!r}; "
                       f"choose from {', '.join(PUBLIC_IDS)}") from None


def polynomial_function(coeffs, id=None):
    """TestFunction for sum_k coeffs[k] x**k with its exact Gaussian integral."""
    poly = Polynomial(coeffs)
    # E[X^k] = (k-1)!! for even k, 0 for odd k
    moments = [0.0 if k % 2 else float(np.prod(np.arange(k - 1, 0, -2))) for k in range(len(coeffs))]
    ref = math.fsum(c * m for c, m in zip(coeffs, moments))
    return TestFunction(id or f"poly{tuple(coeffs)}", poly, None, ref, CLOSED_FORM)


# -- lower-bound construction ---------------------------------------------

def s_constant(alpha, tau):
    """The constant S(alpha, tau) as the exact double sum (integer arithmetic).

    The double sum factorizes into the square of
    sum_l (-1)^l C(alpha, l) (alpha+l)! / (alpha+l-tau)!.
    """
    if not (1 <= alpha <= 10 and 0 <= tau <= alpha):
        raise ValueError(f"s_constant needs 1 <= alpha <= 10 and 0 <= tau <= alpha, "
                         f"got alpha={alpha}, tau={tau}")
    c = [(-1) ** l * math.comb(alpha, l) * math.perm(alpha + l, tau) for l in range(alpha + 1)]
    return float(sum(c[l1] * c[l2] for l1 in range(alpha + 1) for l2 in range(alpha + 1)))


@dataclass(frozen=True)
class FoolingFunction:
    """Bump u^alpha (1-u)^alpha on ((j-1)/n, j/n) with u the local coordinate."""

    alpha: int
    n: int
    j: int
    local: Polynomial = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.alpha < 1 or self.n < 1:
            raise ValueError("fooling bumps need alpha >= 1 and n >= 1")
        if not (-5 * self.n + 1 <= self.j <= 5 * self.n):
            raise ValueError(f"j={self.j} outside {{{-5 * self.n + 1}, ..., {5 * self.n}}}")
        u = Polynomial([0.0, 1.0])
        object.__setattr__(self, "local", u ** self.alpha * (1.0 - u) ** self.alpha)

    @property
    def support(self):
        return ((self.j - 1) / self.n, self.j / self.n)

    def derivative(self, tau, x):
        """tau-th derivative in x; zero outside the open support."""
        a, b = self.support
        x = np.asarray(x, dtype=float)
        u = (x - a) * self.n
        p = self.local.deriv(tau) if tau else self.local
        inside = (x > a) & (x < b)
        return np.where(inside, self.n ** tau * p(np.where(inside, u, 0.5)), 0.0)

    def __call__(self, x):
        return self.derivative(0, x)

    def lebesgue_integral(self):
        """Exact integral over the support: (alpha!)^2 / (n (2 alpha + 1)!)."""
        return math.factorial(self.alpha) ** 2 / (self.n * math.factorial(2 * self.alpha + 1))

    def _local_l2_sq(self, tau):
        p = self.local.deriv(tau) if tau else self.local
        q = (p * p).integ()
        return float(q(1.0) - q(0.0))

    def _peak_density(self):
        a, b = self.support
        near = 0.0 if a < 0.0 < b else min(abs(a), abs(b))
        return INV_SQRT_2PI * math.exp(-0.5 * near * near)

    def derivative_l2_sq(self, tau, rtol=1e-12):
        """Unweighted int |h^(tau)|^2 dx over the support, by the oracle."""
        a, b = self.support
        scale = self._local_l2_sq(tau) * self.n ** (2 * tau - 1)
        return integrate(lambda x: self.derivative(tau, x) ** 2, a, b, tol=rtol * scale).value

    def gaussian_integral(self, rtol=1e-12):
        """I(h) = int h rho over the support, by the oracle."""
        a, b = self.support
        scale = self.lebesgue_integral() * self._peak_density()
        return integrate(lambda x: self(x) * INV_SQRT_2PI * np.exp(-0.5 * x * x),
                         a, b, tol=rtol * scale).value

    def sobolev_norm(self, rtol=1e-12):
        """||h||_alpha = (sum_tau int |h^(tau)|^2 rho)^(1/2), by the oracle."""
        a, b = self.support
        total = 0.0
        for tau in range(self.alpha + 1):
            scale = self._local_l2_sq(tau) * self.n ** (2 * tau - 1) * self._peak_density()
            g = lambda x, t=tau: self.derivative(t, x) ** 2 * INV_SQRT_2PI * np.exp(-0.5 * x * x)
            total += integrate(g, a, b, tol=rtol * scale).value
        return math.sqrt(total)

    @cached_property
    def normalized_integral(self):
        """I(f_j) for f_j = h_j / ||h_j||_alpha."""
        return self.gaussian_integral() / self.sobolev_norm()


def fooling_bump(alpha, n, j):
    return FoolingFunction(alpha, n, j)


def fooling_gaussian_integral_lower_bound(alpha, n, j):
    """Closed-form lower bound (alpha!)^2 / (n (2 alpha+1)! sqrt(2 pi e^25)) on I(h_j)."""
    FoolingFunction(alpha, n, j)  # validates the index range
    return (math.factorial(alpha) ** 2
            / (n * math.factorial(2 * alpha + 1) * math.sqrt(2.0 * math.pi * math.exp(25.0))))


def eta(alpha):
    """Constant eta_alpha with I(f_j) >= eta_alpha n^(-alpha-1/2)."""
    s = sum(s_constant(alpha, tau) for tau in range(alpha + 1))
    return (math.factorial(alpha) ** 2
            / (math.factorial(2 * alpha + 1) * math.sqrt(2.0 * math.pi * math.exp(25.0)))
            * (s * INV_SQRT_2PI) ** -0.5)
