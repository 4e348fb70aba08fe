import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gaussquad.estimator import (ReplicatedEstimate, mse_estimator_unbiasedness_check,
                                 replicate)
from gaussquad.functions import TestFunction, get, polynomial_function
from gaussquad.rng import RngStream
from gaussquad.rules import CutoffStrategy, RuleConfig, draw_realization

FREE = CutoffStrategy("alpha-free", None, 0.51)


def test_hand_example():
    est = ReplicatedEstimate.from_values([1.0, 2.0, 3.0])
    assert est.mean == 2.0
    assert est.mse_estimate == pytest.approx(1 / 3, rel=1e-15)
    assert est.r == 3


def test_needs_two_replicates():
    with pytest.raises(ValueError):
        ReplicatedEstimate.from_values([1.0])
    with pytest.raises(ValueError):
        replicate(get("f3"), RuleConfig(16), 1, RngStream(0))


@given(st.lists(st.floats(-1e6, 1e6), min_size=2, max_size=40), st.randoms())
def test_permutation_invariance(values, rnd):
    a = ReplicatedEstimate.from_values(values)
    shuffled = list(values)
    rnd.shuffle(shuffled)
    b = ReplicatedEstimate.from_values(shuffled)
    scale = max(1.0, max(abs(v) for v in values)) ** 2
    assert abs(a.mse_estimate - b.mse_estimate) <= 1e-12 * scale
    assert a.mse_estimate >= 0.0


@given(st.lists(st.floats(-1e3, 1e3), min_size=2, max_size=40))
def test_matches_two_pass(values):
    est = ReplicatedEstimate.from_values(values)
    v = np.array(values)
    r = len(v)
    two_pass = ((v - v.mean()) ** 2).sum() / (r * (r - 1))
    assert est.mse_estimate == pytest.approx(two_pass, rel=1e-9, abs=1e-12)


def test_no_cancellation_for_close_values():
    base = 0.39894228040143
    vals = base + np.array([1e-13, -2e-13, 3e-13, 0.0])
    est = ReplicatedEstimate.from_values(vals)
    centred = vals - base
    exact = ((centred - centred.mean()) ** 2).sum() / 12
    assert est.mse_estimate == pytest.approx(exact, rel=1e-2)


def test_zero_function():
    est = replicate(get("zero"), RuleConfig(64, FREE), 50, RngStream(0))
    assert est.mean == 0.0 and est.mse_estimate == 0.0


def test_constant_function_replicates():
    c = 1.5
    f = TestFunction("c", lambda x: np.full_like(x, c))
    est = replicate(f, RuleConfig(32, FREE), 10, RngStream(4, 100))
    from gaussquad.rules import evaluate_realization
    for i, v in enumerate(est.replicate_values):
        real = draw_realization(RuleConfig(32, FREE), RngStream(4, 100 + i))
        assert v == evaluate_realization(f, real)


def test_second_moment_within_five_standard_errors():
    f = polynomial_function([0.0, 0.0, 1.0])
    est = replicate(f, RuleConfig(64, FREE), 50, RngStream(11))
    assert abs(est.mean - 1.0) <= 5 * est.standard_error


def test_evaluation_accounting_and_determinism():
    cfg = RuleConfig(100, FREE)
    a = replicate(get("f3"), cfg, 20, RngStream(5, 7))
    b = replicate(get("f3"), cfg, 20, seed=5, base_id=7)
    assert a == b
    expected = sum(draw_realization(cfg, RngStream(5, 7 + i)).m_star + 2 for i in range(20))
    assert a.evaluations_total == expected <= 20 * cfg.n


@pytest.mark.parametrize("c", [-3.0, 0.5, 7.0])
def test_scaling(c):
    f = get("f3")
    cf = TestFunction("cf3", lambda x: c * f(x))
    cfg = RuleConfig(64, FREE)
    a = replicate(f, cfg, 30, RngStream(8))
    b = replicate(cf, cfg, 30, RngStream(8))
    assert b.mean == pytest.approx(c * a.mean, rel=1e-12)
    assert b.mse_estimate == pytest.approx(c * c * a.mse_estimate, rel=1e-12)


def test_unbiasedness_check_zero():
    res = mse_estimator_unbiasedness_check(get("zero"), RuleConfig(16, FREE), 5, 100, RngStream(0))
    assert tuple(res) == (0.0, 0.0)
    assert res.z_score == 0.0


def test_unbiasedness_check_needs_outer():
    with pytest.raises(ValueError):
        mse_estimator_unbiasedness_check(get("f3"), RuleConfig(16), 5, 99, RngStream(0))


def test_unbiasedness_check_linear():
    f = polynomial_function([0.0, 1.0])
    res = mse_estimator_unbiasedness_check(f, RuleConfig(16, FREE), 10, 2000, RngStream(21))
    assert abs(res.z_score) <= 4


def test_unbiasedness_check_f11():
    cfg = RuleConfig(64, CutoffStrategy("alpha", 1, 0.51))
    res = mse_estimator_unbiasedness_check(get("f1p1"), cfg, 50, 500, RngStream(22))
    assert abs(res.z_score) <= 4
    m, e = res
    assert m > 0 and e > 0
