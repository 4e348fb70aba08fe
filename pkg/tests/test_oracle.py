import math

import numpy as np
import pytest

from gaussquad.functions import TestFunction, get, polynomial_function
from gaussquad.oracle import (OracleError, exhaustive_expectation, integrate,
                              integrate_gaussian, _GW, _KW, _NODES)
from gaussquad.rules import CutoffStrategy, RuleConfig


def double_factorial(k):
    return math.prod(range(k, 0, -2)) if k > 0 else 1


def test_kronrod_pair_exactness():
    # K15 integrates degree <= 22 exactly, the embedded G7 degree <= 13
    for d in range(23):
        exact = 2.0 / (d + 1) if d % 2 == 0 else 0.0
        assert _KW @ _NODES ** d == pytest.approx(exact, abs=1e-15)
        if d <= 13:
            assert _GW @ _NODES ** d == pytest.approx(exact, abs=1e-15)
    g_nodes, g_weights = np.polynomial.legendre.leggauss(7)
    assert np.allclose(_NODES[1::2], g_nodes, atol=1e-15)
    assert np.allclose(_GW[1::2], g_weights, atol=1e-15)


@pytest.mark.parametrize("f, expected, tol", [
    (lambda x: np.ones_like(x), 1.0, 1e-13),
    (lambda x: x ** 2, 1.0, 1e-13),
    (lambda x: x ** 4, 3.0, 1e-12),
])
def test_integrate_gaussian_moments(f, expected, tol):
    res = integrate_gaussian(f, tol=1e-13)
    assert abs(res.value - expected) <= tol
    assert res.error_estimate <= 1e-13


@pytest.mark.parametrize("k", range(6))
def test_even_monomials_self_consistency(k):
    exact = double_factorial(2 * k - 1)
    tol = 1e-13 * max(1.0, exact)
    res = integrate_gaussian(lambda x: x ** (2 * k), tol=tol)
    assert abs(res.value - exact) <= 10 * tol


def test_odd_monomial_vanishes():
    assert abs(integrate_gaussian(lambda x: x ** 3).value) <= 1e-13


def test_tail_integrals_match_cdf():
    from gaussquad.special import gaussian_cdf, upper_tail_mass
    T = 2.5
    one = lambda x: np.ones_like(x)
    assert integrate_gaussian(one, upper=-T).value == pytest.approx(gaussian_cdf(-T), abs=1e-13)
    assert integrate_gaussian(one, lower=T).value == pytest.approx(upper_tail_mass(T), abs=1e-13)


def test_integrate_plain_interval():
    assert integrate(np.sin, 0.0, math.pi).value == pytest.approx(2.0, abs=1e-13)
    assert integrate(np.sin, math.pi, 0.0).value == pytest.approx(-2.0, abs=1e-13)
    res = integrate(np.abs, -1.0, 2.0, points=(0.0,))
    assert res.value == pytest.approx(2.5, abs=1e-14)


def test_tolerance_floor():
    with pytest.raises(ValueError):
        integrate_gaussian(np.cos, tol=1e-14)


def test_non_convergence_raises():
    # integrable singularity too strong for bisection to resolve
    with pytest.raises(OracleError):
        integrate(lambda x: np.abs(x) ** -0.99, 0.0, 1.0, tol=1e-13)


# --- exhaustive expectation ------------------------------------------------

CFG8 = RuleConfig(8, CutoffStrategy("alpha", 1, 0.51))


def test_exhaustive_constant():
    one = polynomial_function([1.0])
    assert abs(exhaustive_expectation(one, CFG8) - 1.0) <= 1e-10


def test_exhaustive_second_moment():
    sq = polynomial_function([0.0, 0.0, 1.0])
    assert abs(exhaustive_expectation(sq, CFG8) - 1.0) <= 1e-10


def test_exhaustive_half_second_moment():
    cfg = RuleConfig(16, CutoffStrategy("alpha", 2, 0.51))
    assert abs(exhaustive_expectation(get("f1p2"), cfg) - 0.5) <= 1e-9


@pytest.mark.parametrize("coeffs", [[1.0], [0.0, 1.0], [0.0, 0.0, 1.0], [1.0, -2.0, 0.5, 0.0, 1.0],
                                    [0, 0, 0, 0, 0, 0, 1.0]])
def test_delta_quadrature_converged(coeffs):
    f = polynomial_function(coeffs)
    cfg = RuleConfig(16, CutoffStrategy("alpha", 2, 0.51))
    a = exhaustive_expectation(f, cfg, delta_points=256)
    b = exhaustive_expectation(f, cfg, delta_points=512)
    assert abs(a - b) < 1e-10


@pytest.mark.parametrize("fid", ["f1p1", "f1p2", "f1p3", "f2", "f3"])
@pytest.mark.parametrize("n", [8, 13, 32])
def test_exhaustive_matches_oracle_for_registry(fid, n):
    f = get(fid)
    cfg = RuleConfig(n, CutoffStrategy("alpha-free", None, 0.51))
    expected = integrate_gaussian(f, points=f.breakpoints).value
    assert abs(exhaustive_expectation(f, cfg) - expected) <= 1e-9


def test_kink_splitting_matters():
    # dropping the breakpoint leaves the delta integrand kinked and the rule loses accuracy
    f = get("f1p1")
    blind = TestFunction("f1p1-blind", f.func)
    cfg = RuleConfig(16, CutoffStrategy("alpha", 1, 0.51))
    err_split = abs(exhaustive_expectation(f, cfg, 64) - f.reference_integral)
    err_blind = abs(exhaustive_expectation(blind, cfg, 64) - f.reference_integral)
    assert err_split < 1e-12
    assert err_blind > 10 * err_split


def test_delta_points_minimum():
    with pytest.raises(ValueError):
        exhaustive_expectation(polynomial_function([1.0]), CFG8, delta_points=32)
