import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from psiconc import AffineOf, Arctan, BoxCox, Identity, Log, Logit
from psiconc.bounds import (CLAIMED_IMPROVEMENT, E_SQUARED, claimed_improvement, hoeffding_constant,
                            hoeffding_report, improvement_factor, master_tail_bound, max_tail_bound,
                            max_tail_bound_mcdiarmid, product_tail_bound, recommend_coordinate)
from psiconc.errors import DomainError, InvalidArgument
from psiconc.measure import SupportInterval

E = math.e


@pytest.mark.parametrize("t, iv, expected", [
    (Identity(), (0, 1), 0.25),
    (Log(), (1, E_SQUARED), 1.0),
    (Log(), (1, 1000), math.log(1000) ** 2 / 4),
])
def test_hoeffding_constant_examples(t, iv, expected):
    assert hoeffding_constant(t, iv) == pytest.approx(expected, rel=1e-14)


def test_log_1000_constant_value():
    assert hoeffding_constant(Log(), (1, 1000)) == pytest.approx(11.929, abs=5e-4)


def test_hoeffding_constant_domain_error():
    with pytest.raises(DomainError):
        hoeffding_constant(Log(), (0, 1))


GRID = [(Log(), (0.5, 20.0)), (BoxCox(0.5), (1, 9)), (Logit(), (0.1, 0.8)), (Arctan(), (-3, 7)),
        (BoxCox(-1.0), (2, 50)), (Identity(), (-1, 4))]


@pytest.mark.parametrize("t, iv", GRID, ids=lambda v: getattr(v, "label", str(v)))
def test_covariance_identity_is_exact(t, iv):
    a, b = iv
    assert hoeffding_constant(t, iv) == hoeffding_constant(Identity(), (t.forward(a), t.forward(b)))


@given(st.sampled_from(GRID), st.floats(-50, 50).filter(lambda v: abs(v) > 1e-3), st.floats(-10, 10))
def test_affine_law(pair, alpha, beta):
    t, iv = pair
    lhs = hoeffding_constant(AffineOf(alpha, beta, t), iv)
    rhs = alpha ** 2 * hoeffding_constant(t, iv)
    assert lhs == pytest.approx(rhs, rel=1e-12)


def test_report_bound_shape():
    rep = hoeffding_report(Log(), (1, 1000), n=10)
    assert rep.sigma_sq == pytest.approx(10 * math.log(1000) ** 2 / 4)
    assert rep.bound_at(0.0) == 1.0
    ts = np.linspace(0, 40, 200)
    vals = [rep.bound_at(x) for x in ts]
    assert all(0 <= v <= 1 for v in vals)
    assert all(np.diff(vals) <= 0)
    assert rep.bound_at(20.0) == pytest.approx(2 * math.exp(-400 / (2 * rep.sigma_sq)))
    assert rep.assumptions


# master bound

def test_master_bound_examples():
    assert master_tail_bound(1.0, [(0, 1)], 0.0) == 1.0
    assert master_tail_bound(1.0, [(0, 1)], 0.5) == pytest.approx(math.exp(-0.5), rel=1e-15)
    assert master_tail_bound(2.0, [(0, 1)] * 4, 2.0) == pytest.approx(math.exp(-0.5), rel=1e-15)


def test_master_bound_errors_and_degenerate():
    with pytest.raises(InvalidArgument):
        master_tail_bound(0.0, [(0, 1)], 1.0)
    with pytest.raises(InvalidArgument):
        master_tail_bound(1.0, [(0, 1)], -1.0)
    assert master_tail_bound(1.0, [(2, 2)], 0.0) == 1.0
    assert master_tail_bound(1.0, [(2, 2)], 0.1) == 0.0
    # a degenerate range among non-degenerate ones contributes nothing
    assert master_tail_bound(1.0, [(2, 2), (0, 1)], 0.5) == master_tail_bound(1.0, [(0, 1)], 0.5)


# improvement factor

def test_improvement_factor_examples():
    assert improvement_factor((1, 1000)) == pytest.approx(20915, rel=1e-4)
    assert improvement_factor((1, E_SQUARED)) == pytest.approx((E_SQUARED - 1) ** 2 / 4, rel=1e-14)
    assert improvement_factor((1, E_SQUARED)) == pytest.approx(10.21, abs=5e-3)
    assert improvement_factor((2, 2000)) == pytest.approx(4 * improvement_factor((1, 1000)), rel=1e-14)
    assert improvement_factor((1, 100)) == pytest.approx(462.2, rel=1e-3)


def test_improvement_factor_small_ratio_limit():
    assert improvement_factor((1, 1.0001)) == pytest.approx(1.0001, rel=1e-6)


def test_improvement_factor_domain():
    with pytest.raises(DomainError):
        improvement_factor((0, 5))
    with pytest.raises(DomainError):
        improvement_factor((2, 2))


@given(st.floats(0.01, 100), st.floats(1.001, 1e4), st.floats(0.1, 10))
def test_improvement_factor_scales_with_a_squared(a, r, c):
    assert improvement_factor((c * a, c * a * r)) == pytest.approx(c * c * improvement_factor((a, a * r)), rel=1e-10)


def test_claimed_values_lookup():
    assert claimed_improvement(1000.0) == 21000.0
    assert claimed_improvement(100.0) == 144.0
    assert claimed_improvement(E_SQUARED) == 1.0
    assert claimed_improvement(50.0) is None
    # only the largest claim is consistent with the formula
    consistent = {r: abs(improvement_factor((1, r)) - v) / v <= 0.01 for r, v in CLAIMED_IMPROVEMENT.items()}
    assert consistent == {E_SQUARED: False, 100.0: False, 1000.0: True}


# recommendation

def test_recommendation_examples():
    rec = recommend_coordinate((1, 1000))
    assert rec.choice == Log() and rec.threshold_choice == Log()
    assert rec.ratio == pytest.approx(998001 / math.log(1000) ** 2, rel=1e-12)
    rec = recommend_coordinate((1, 100))
    assert rec.choice == Log()
    assert rec.ratio == pytest.approx(462.2, rel=1e-3)
    rec = recommend_coordinate((1, 1.0001))
    assert rec.threshold_choice == Identity()
    assert rec.ratio == pytest.approx(1.0001, rel=1e-6)
    assert rec.stated_threshold == E_SQUARED


def test_recommendation_reports_raw_constants():
    rec = recommend_coordinate((3, 300))
    assert rec.identity_constant == pytest.approx(297 ** 2 / 4)
    assert rec.log_constant == pytest.approx(math.log(100) ** 2 / 4)
    assert rec.raw_ratio == pytest.approx(9 * rec.ratio, rel=1e-12)


@given(st.floats(1.0 + 1e-6, 1e6))
def test_formula_prefers_log_for_every_ratio_above_one(r):
    assert recommend_coordinate((1, r)).choice == Log()


def test_recommendation_domain():
    with pytest.raises(DomainError):
        recommend_coordinate((-1, 4))


# products and maxima

def test_product_bound_examples():
    ivs = [(1, E)] * 4
    assert product_tail_bound(ivs, 1.0)[0] == 1.0
    assert product_tail_bound(ivs, 2.0)[0] == pytest.approx(2 * math.exp(-2), rel=1e-14)
    assert product_tail_bound(ivs, 0.0) == (1.0, 1.0)
    with pytest.raises(DomainError):
        product_tail_bound([(0, 1)], 1.0)


@given(st.lists(st.tuples(st.floats(0.01, 100), st.floats(1.0, 1e3)), min_size=1, max_size=8),
       st.floats(0, 50))
def test_log_bound_never_exceeds_classical(pairs, t):
    ivs = [(a, a * r) for a, r in pairs]
    lb, cb = product_tail_bound(ivs, t)
    assert lb <= cb


def test_max_bound_examples():
    assert max_tail_bound(100, (1, E), 0.5, "log") == pytest.approx(math.exp(-50), rel=1e-12)
    assert max_tail_bound(7, (1, 5), 0.0) == 1.0
    assert max_tail_bound(1, (0, 1), 1.0, "identity") == pytest.approx(math.exp(-2), rel=1e-15)
    assert max_tail_bound_mcdiarmid(1, (0, 1), 1.0) == pytest.approx(math.exp(-2), rel=1e-15)
    assert max_tail_bound_mcdiarmid(4, (0, 1), 1.0) == pytest.approx(math.exp(-0.5), rel=1e-15)
    with pytest.raises(DomainError):
        max_tail_bound(3, (0, 1), 1.0, "log")
    with pytest.raises(InvalidArgument):
        max_tail_bound(3, (1, 2), 1.0, "sqrt")


def test_support_interval_validation():
    with pytest.raises(InvalidArgument):
        SupportInterval(2, 1)
    with pytest.raises(InvalidArgument):
        SupportInterval(0, math.inf)
    assert SupportInterval(1, 1).degenerate
