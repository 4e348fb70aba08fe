"""Independent ground truth for the rule code.

``integrate_gaussian`` is a globally adaptive 7/15-point Gauss-Kronrod
integrator for f*rho, used for reference integrals. ``exhaustive_expectation``
computes the exact mixture expectation of the randomized rule (uniform over
m_star, Gauss-Legendre in delta, analytic tails) without any sampling.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_legendre

from .special import gaussian_pdf, INV_SQRT_2PI

MAX_PANELS = 2 ** 16
MAX_CUTOFF = 40.0

# QUADPACK qk15 abscissae (descending, last is the centre) and weights
_XGK = np.array([
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0])
_WGK = np.array([
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714])
_WG = np.array([
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327])

# full 15-point node set on [-1, 1] and the matching weight vectors
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KW = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GW = np.zeros(15)
_GW[1:7:2] = _WG[:3]
_GW[7] = _WG[3]
_GW[9:15:2] = _WG[2::-1]


class OracleError(ArithmeticError):
    """Raised when the adaptive integrator hits its panel limit."""


@dataclass(frozen=True)
class OracleResult:
    value: float
    error_estimate: float
    subdivisions: int


def _gk15(f, a, b):
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    x = c[:, None] + h[:, None] * _NODES[None, :]
    y = np.asarray(f(x.ravel()), dtype=float).reshape(x.shape)
    k = h * (y @ _KW)
    g = h * (y @ _GW)
    return k, np.abs(k - g)


def integrate(f, a, b, tol=1e-13, points=()):
    """Adaptive Gauss-Kronrod integral of a vectorized ``f`` over ``[a, b]``.

    ``points`` are optional interior breakpoints (kinks) that start as
    panel boundaries. Every round, the panels carrying more than their
    share of the error budget are bisected until the summed Kronrod-Gauss
    difference is below ``tol``.
    """
    a, b = float(a), float(b)
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValueError("integrate needs finite limits")
    if b == a:
        return OracleResult(0.0, 0.0, 0)
    sign = 1.0
    if b < a:
        a, b, sign = b, a, -1.0
    edges = np.unique(np.concatenate([[a, b], [p for p in points if a < p < b]]))
    lo, hi = edges[:-1], edges[1:]
    vals, errs = _gk15(f, lo, hi)
    done_val = 0.0
    done_err = 0.0
    subdivisions = len(lo)
    while True:
        total_err = done_err + errs.sum()
        if total_err <= tol:
            break
        if subdivisions >= MAX_PANELS:
            raise OracleError(
                f"no convergence on [{a}, {b}]: error {total_err:.3e} > tol {tol:.3e} "
                f"after {subdivisions} panels")
        npan = len(lo)
        split = errs * npan > 0.5 * (tol - done_err)
        # panels too narrow to bisect are frozen; their error stays in the budget
        tiny = (hi - lo) <= 1e-13 * max(1.0, abs(a), abs(b))
        freeze = split & tiny
        if freeze.any():
            done_val += vals[freeze].sum()
            done_err += errs[freeze].sum()
            split &= ~tiny
        keep = ~split & ~freeze
        done_val += vals[keep].sum()
        done_err += errs[keep].sum()
        if not split.any():
            lo = hi = vals = errs = np.empty(0)
            total_err = done_err
            if total_err > tol:
                raise OracleError(
                    f"no convergence on [{a}, {b}]: error {total_err:.3e} held by "
                    f"panels at the resolution limit")
            break
        mid = 0.5 * (lo[split] + hi[split])
        lo = np.concatenate([lo[split], mid])
        hi = np.concatenate([mid, hi[split]])
        vals, errs = _gk15(f, lo, hi)
        subdivisions += int(split.sum())
    value = done_val + math.fsum(vals.tolist())
    return OracleResult(float(sign * value), float(total_err), subdivisions)


def _tail_cutoff(f, start, tol):
    """Smallest R >= start (quarter steps) whose Mills-ratio tail bound
    ``max(1, |f(+-R)|) * rho(R) / R`` on both sides is below ``tol / 10``."""
    R = max(1.0, float(start))
    while R < MAX_CUTOFF:
        fr = np.abs(np.asarray(f(np.array([-R, R])), dtype=float))
        scale = max(1.0, float(np.max(fr)))
        if 2.0 * scale * gaussian_pdf(R) / R <= 0.1 * tol:
            return R
        R += 0.25
    return MAX_CUTOFF


def integrate_gaussian(f, tol=1e-13, lower=-math.inf, upper=math.inf, points=()):
    """Integral of ``f * rho`` over ``[lower, upper]`` (default: the real line).

    Infinite limits are replaced by a finite cut-off R chosen so that the
    discarded Gaussian tail is below ``tol / 10``; ``f`` is assumed to grow
    at most polynomially. The returned error estimate includes that budget.
    """
    if tol < 1e-13:
        raise ValueError("tol below 1e-13 is not supported")
    if lower >= upper:
        return OracleResult(0.0, 0.0, 0)
    finite = [abs(v) for v in (lower, upper) if math.isfinite(v)]
    R = _tail_cutoff(f, max(finite, default=1.0), tol) if len(finite) < 2 else None
    a = lower if math.isfinite(lower) else -R
    b = upper if math.isfinite(upper) else R
    tail_budget = 0.0 if R is None else 0.1 * tol
    if a >= b:
        return OracleResult(0.0, tail_budget, 0)

    def g(x):
        return np.asarray(f(x), dtype=float) * (INV_SQRT_2PI * np.exp(-0.5 * x * x))

    res = integrate(g, a, b, tol=tol - tail_budget, points=points)
    return OracleResult(res.value, float(res.error_estimate + tail_budget), res.subdivisions)


@lru_cache(maxsize=8)
def _legendre(k):
    return roots_legendre(k)


def exhaustive_expectation(f, config, delta_points=256, tol=1e-13):
    """Exact expectation of the randomized rule applied to ``f``.

    Averages uniformly over every admissible m_star, integrates the interior
    sum over the shift delta with a ``delta_points`` Gauss-Legendre rule
    (split wherever a node crosses a kink of ``f``), and adds the two tail
    expectations ``int_{-inf}^{-T} f rho`` and ``int_T^inf f rho`` from the
    Gauss-Kronrod oracle.
    """
    from .rules import m_star_range

    if delta_points < 64:
        raise ValueError("delta_points must be at least 64")
    T = config.T
    kinks = [float(k) for k in getattr(f, "breakpoints", ())]
    gl_x, gl_w = _legendre(int(delta_points))

    ms = m_star_range(config.n)
    interior = []
    for m in ms:
        # node j crosses x0 when delta = frac(m (x0/T + 1) / 2)
        cuts = {0.0, 1.0}
        for x0 in kinks:
            if -T < x0 < T:
                d = (m * (x0 / T + 1.0) / 2.0) % 1.0
                if 0.0 < d < 1.0:
                    cuts.add(d)
        cuts = sorted(cuts)
        j = np.arange(m)
        pieces = []
        for d0, d1 in zip(cuts[:-1], cuts[1:]):
            delta = 0.5 * (d1 - d0) * gl_x + 0.5 * (d0 + d1)
            x = T * (2.0 * (j[None, :] + delta[:, None]) / m - 1.0)
            y = np.asarray(f(x.ravel()), dtype=float).reshape(x.shape) * gaussian_pdf(x)
            s = (2.0 * T / m) * y.sum(axis=1)
            pieces.append(0.5 * (d1 - d0) * float(gl_w @ s))
        interior.append(math.fsum(pieces))
    mean_interior = math.fsum(interior) / len(ms)

    pts = tuple(kinks)
    left = integrate_gaussian(f, tol=tol, upper=-T, points=pts).value
    right = integrate_gaussian(f, tol=tol, lower=T, points=pts).value
    return mean_interior + left + right
