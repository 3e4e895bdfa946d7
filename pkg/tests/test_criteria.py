import random

import pytest
from gmpy2 import mpq

from conftest import conj_pair_form
from diagthue import criteria, faults, solver
from diagthue.exactnum import QuadElem
from diagthue.forms import make_binomial, make_from_xi


def _cls(form, h, box=(30, 30)):
    return solver.classify(form, solver.enumerate_box(form, h, *box))


def test_omega():
    assert criteria.omega(1) == 0
    assert criteria.omega(12) == 2
    assert criteria.omega(30) == 3
    assert criteria.omega(2 ** 31 - 1) == 1
    assert criteria.omega((2 ** 31 - 1) * 6) == 3


def test_delta_prime_examples():
    f = make_binomial(1, 1, 5)
    assert criteria.delta_prime(f, 1) == mpq(3125, 2 ** 20 * 5 ** 5)
    # doubling h divides delta' by 2^(2r-2)
    assert criteria.delta_prime(f, 2) == criteria.delta_prime(f, 1) / 2 ** 8
    g = make_binomial(7, 11, 5)
    assert criteria.delta_prime(g, 1) == mpq(77) ** 4 / mpq(2) ** 20


def test_t14_m3_equals_c15():
    rng = random.Random(50)
    for _ in range(10):
        a, b = rng.randint(1, 10 ** 8), rng.randint(1, 10 ** 8)
        f = make_binomial(a, b, rng.choice([5, 6, 7]))
        h = rng.randint(1, 50)
        cls = _cls(f, h, box=(10, 10))
        v1 = criteria.check_T1_4(f, h, 3, cls)
        v2 = criteria.check_C1_5(f, h, cls)
        assert v1.hypothesis_holds == v2.hypothesis_holds
        assert v1.bound == v2.bound and v1.observed == v2.observed


def test_hypothesis_monotone_in_h():
    f = make_binomial(10 ** 14 + 7, 10 ** 14, 5)
    cls = _cls(f, 1, box=(5, 5))
    held = True
    for h in (1, 2, 4, 8, 16, 64, 256):
        v = criteria.check_C1_5(f, h, cls)
        if not held:
            assert not v.hypothesis_holds
        held = v.hypothesis_holds


def test_t11_hypothesis_monotone_in_c():
    ab = 2 ** 5 * 5 ** 35 * 9
    held = True
    for c in (1, 2, 3, 5, 9, 20, 100):
        v = criteria.check_T1_1(ab, 1, c, 5, y_max=50)
        if not held:
            assert not v.hypothesis_holds
        held = v.hypothesis_holds
    assert criteria.check_T1_1(ab, 1, 1, 5, y_max=50).hypothesis_holds


def test_t13_threshold_and_bounds():
    small = make_binomial(2, 3, 6)
    assert not criteria.check_T1_3(small, 1, _cls(small, 1, (8, 8))).hypothesis_holds
    big = make_binomial(10 ** 25 + 1, 10 ** 25, 7)
    v = criteria.check_T1_3(big, 1, _cls(big, 1, (6, 6)))
    assert v.hypothesis_holds and v.case == "D>0_odd_indef" and v.bound == 3
    assert v.passed
    with pytest.raises(criteria.ParameterError):
        criteria.check_T1_3(make_binomial(2, 3, 5), 1, _cls(make_binomial(2, 3, 5), 1, (5, 5)))


def test_t21_cases():
    big = make_binomial(10 ** 14 + 1, 10 ** 14, 5)
    cls = _cls(big, 1, (6, 6))
    v3 = criteria.check_T2_1(big, 1, 3, cls)
    assert v3.hypothesis_holds and v3.bound == 2 * 3 and v3.passed   # r odd indefinite: 2l
    v2 = criteria.check_T2_1(big, 1, 2, cls)
    assert v2.hypothesis_holds
    v1 = criteria.check_T2_1(big, 1, 1, cls)
    assert not v1.hypothesis_holds   # l=1 needs astronomically larger ab
    huge = make_binomial(10 ** 83 + 1, 10 ** 83, 5)
    assert criteria.check_T2_1(huge, 1, 1, _cls(huge, 1, (4, 4))).hypothesis_holds


def test_t11_threshold_example():
    # r=5, c=1: threshold is exactly ab >= 2^5 * 5^35
    lo = 2 ** 5 * 5 ** 35
    v = criteria.check_T1_1(lo, 1, 1, 5, y_max=200)
    assert v.hypothesis_holds
    v = criteria.check_T1_1(lo - 1, 1, 1, 5, y_max=200)
    assert not v.hypothesis_holds
    v = criteria.check_T1_1(3, 2, 1, 5, y_max=300)
    assert not v.hypothesis_holds and v.observed == 1   # (1,1) reported anyway


def test_t12_gcd_and_bounds():
    a = 10 ** 82 + 1
    b = 10 ** 82 + 3
    v = criteria.check_T1_2(a, b, 11, 5, y_max=60)
    assert v.hypothesis_holds and v.notes["strong"] and v.bound == 2 * 5 ** 1
    v6 = criteria.check_T1_2(10 ** 82, 10 ** 82 + 1, 6, 5, y_max=60)
    assert not v6.hypothesis_holds and not v6.notes["gcd_ok"]   # gcd(6, 10^82 rab) > 1
    # omega arithmetic in the bound
    v143 = criteria.check_T1_2(a, b, 143, 5, y_max=60)
    assert v143.bound == 2 * 5 ** 2


def test_t19_verdict():
    big = make_binomial(10 ** 25 + 1, 10 ** 25, 5)
    cls = _cls(big, 1, (6, 6))
    v = criteria.check_T1_9(big, 1, cls)
    assert v.hypothesis_holds and v.notes["omega_h"] == 0 and v.bound == 3
    assert v.passed
    v3 = criteria.check_T1_9(big, 3, _cls(big, 3, (6, 6)))
    assert v3.notes["omega_h"] == 1


def test_t19_gcd_violation():
    big = make_binomial(10 ** 25, 10 ** 25 + 1, 5)   # 2 | Delta via ab
    cls = _cls(big, 2, (6, 6))
    v = criteria.check_T1_9(big, 2, cls)
    assert not v.hypothesis_holds and not v.notes["gcd_ok"]


def test_t17_filter():
    form = conj_pair_form(-4, QuadElem(10 ** 9), 0, 6, two_a=2)
    assert form.D == -4 and (form.A, form.B, form.C) == (1, 0, 1)
    h = 10
    cls = _cls(form, h, (8, 8))
    v = criteria.check_T1_7(form, h, 2, cls)
    assert v.hypothesis_holds and v.bound == 12
    assert v.passed
    with pytest.raises(criteria.ParameterError):
        criteria.check_T1_7(make_binomial(2, 3, 6), 1, 2, _cls(make_binomial(2, 3, 6), 1, (5, 5)))


def test_t18_filter_counts():
    big = make_binomial(10 ** 25 + 1, 10 ** 25, 5)
    h = 1
    cls = _cls(big, h, (6, 6))
    v = criteria.check_T1_8(big, h, 3, cls)
    assert v.hypothesis_holds
    # (1,1) has huge |H| and passes the filter; (1,0),(0,1) have H = 0
    assert v.observed >= 1
    assert v.passed


def test_c16_window_and_bound():
    r = 5
    big = make_binomial(10 ** 25 + 1, 10 ** 25, r)
    cls = _cls(big, 10, (6, 6))
    eps = mpq(1, 4 * (r - 1))
    v = criteria.check_C1_6(big, 10, eps, cls)
    assert v.hypothesis_holds
    assert v.passed
    with pytest.raises(criteria.ParameterError):
        criteria.check_C1_6(big, 10, mpq(1, 2), cls)
    # bound monotone nonincreasing in eps for D<0 forms
    neg = conj_pair_form(-3, QuadElem(10 ** 20), 1, 5, two_a=2)
    ncls = _cls(neg, 1, (5, 5))
    bounds = []
    for eps in (mpq(1, 100), mpq(1, 50), mpq(1, 20), mpq(1, 10)):
        bounds.append(criteria.check_C1_6(neg, 1, eps, ncls).bound)
    assert bounds == sorted(bounds, reverse=True)


def test_c16_exact_power_ceiling():
    # 1/(4 eps) = (r-1)^2 exactly: symbolic path must fire
    r = 5
    eps = mpq(1, 4 * (r - 1) ** 2)
    neg = conj_pair_form(-3, QuadElem(10 ** 20), 1, r, two_a=2)
    v = criteria.check_C1_6(neg, 1, eps, _cls(neg, 1, (5, 5)))
    assert v.notes["ceil_term"] == 2
    assert v.bound == (4 + 2) * r


def test_verdict_replay_determinism():
    f = make_binomial(10 ** 25 + 1, 10 ** 25, 5)
    cls1 = _cls(f, 1, (6, 6))
    cls2 = _cls(f, 1, (6, 6))
    v1 = criteria.check_C1_5(f, 1, cls1).to_dict()
    v2 = criteria.check_C1_5(f, 1, cls2).to_dict()
    assert v1 == v2
    assert v1["exact_trace"]


def test_bound_table_tight_definite_and_fault():
    c = 2 * 10 ** 18
    fdef = make_from_xi(1, 0, -c, 1, 6)
    assert fdef.definite
    cls = _cls(fdef, 1, (8, 8))
    v = criteria.check_T1_4(fdef, 1, 3, cls)
    assert v.hypothesis_holds and v.bound == 1 and v.observed == 1 and v.passed
    faults.inject("bound-off-by-one")
    try:
        v_bad = criteria.check_T1_4(fdef, 1, 3, cls)
        assert v_bad.bound == 0 and not v_bad.passed
    finally:
        faults.clear()
