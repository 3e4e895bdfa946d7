import random

import pytest
from gmpy2 import mpq

from diagthue import pade
from diagthue.exactnum import QuadElem
from diagthue.forms import binom


def test_build_1_0_5():
    p = pade.build(1, 0, 5)
    assert list(p.a_coeffs) == [mpq(2), mpq(-6, 5)]
    assert list(p.b_coeffs) == [mpq(2), mpq(-4, 5)]


def test_degrees_and_constant_term():
    p = pade.build(1, 1, 5)
    assert len(p.a_coeffs) - 1 == 1 and len(p.b_coeffs) - 1 == 0
    for n, g, r in [(2, 0, 5), (3, 1, 7), (4, 0, 9), (5, 1, 6)]:
        p = pade.build(n, g, r)
        assert p.a_coeffs[0] == binom(2 * n - g, n)
        assert p.a_coeffs[0] == p.b_coeffs[0]


def test_remainder_series_first_nonzero():
    p = pade.build(1, 0, 5)
    rs = pade.remainder_series(p, 4)
    assert rs[:3] == [0, 0, 0] and rs[3] != 0
    rs = pade.remainder_series(pade.build(1, 1, 5), 3)
    assert rs[:2] == [0, 0] and rs[2] != 0


def test_vanishing_order_sweep():
    for r in range(5, 10):
        for n in range(1, 7):
            for g in (0, 1):
                rs = pade.remainder_series(pade.build(n, g, r), 2 * n + 2 - g)
                assert all(c == 0 for c in rs[: 2 * n + 1 - g]), (r, n, g)
                assert rs[2 * n + 1 - g] != 0, (r, n, g)


def test_contiguity():
    assert pade.contiguity_check(1, 0, 5, [mpq(1, 3), mpq(2)])
    assert pade.contiguity_check(3, 1, 7, [mpq(-1, 2)])
    for n, g, r in [(2, 0, 6), (4, 1, 9), (5, 0, 5)]:
        assert pade.contiguity_check(n, g, r)
        # C(1) = binom(2n-g, n) and all C coefficients positive
        c = pade.c_coeffs(n, g, r)
        assert sum(c) == binom(2 * n - g, n)
        assert all(x > 0 for x in c)


def test_sup_bounds_spec_points():
    p = pade.build(2, 0, 5)
    ok, results = pade.sup_bound_check(p, [(1, 0), (0, 0), (-1, 0)])
    assert ok
    # z = 0 is the equality case |A(0)| = binom(2n-g, n)
    val = p.a_at(mpq(0))
    assert val == binom(4, 2)


def test_sup_bounds_random_disk_points():
    rng = random.Random(20)
    for n, g, r in [(1, 0, 5), (2, 1, 7), (3, 0, 9)]:
        p = pade.build(n, g, r)
        samples = []
        while len(samples) < 20:
            re = mpq(rng.randint(-40, 40), 20)
            im = mpq(rng.randint(-40, 40), 20)
            if (1 - re) ** 2 + im ** 2 <= 4:
                samples.append((re, im))
        ok, _ = pade.sup_bound_check(p, samples)
        assert ok


def test_sup_bound_skips_outside():
    ok, results = pade.sup_bound_check(pade.build(1, 0, 5), [(5, 5)])
    assert ok and results[0].get("skipped")


def test_wronskian_value_and_expansion():
    assert pade.wronskian_at_one(1, 0, 5) == mpq(-4, 25)
    assert pade.wronskian_at_one(1, 1, 5) != 0
    for n in range(1, 7):
        for big_i in (0, 1):
            for r in (5, 7, 9):
                assert pade.wronskian_expansion_check(n, big_i, r), (n, big_i, r)


def test_integrality_t_examples():
    assert pade.integrality_t(1, 5, 2) == -50
    assert pade.integrality_t(1, 5, 1) == 5
    assert pade.integrality_t(7, 9, 0) == 1


def test_integrality_t_sweep():
    for r in range(3, 13):
        for a in range(-r, r + 1):
            for m in range(0, 31):
                pade.integrality_t(a, r, m)   # raises on any non-integer


def test_remainder_magnitude_certified():
    rng = random.Random(21)
    for n, g, r in [(1, 0, 5), (2, 1, 7), (3, 0, 6), (4, 1, 9)]:
        p = pade.build(n, g, r)
        for _ in range(6):
            z = mpq(rng.randint(-50, 50), 101)   # |z| < 1/2
            if z == 0:
                continue
            assert pade.remainder_magnitude_check(p, z, bits=64), (n, g, r, z)


def test_star_integrality():
    rng = random.Random(22)
    for d in (5, -3, 13, -8):
        for _ in range(6):
            lam = QuadElem(rng.randint(-4, 4), rng.randint(-4, 4), d)
            if d % 4 != 1 and lam.b != 0:
                lam = QuadElem(lam.a, lam.b, d)   # still in Z[sqrt d] subset of O
            c = rng.randint(-3, 3)
            assert pade.star_integrality_check(2, 0, 5, lam, c, d)
            assert pade.star_integrality_check(1, 1, 7, lam, c, d)


def test_build_rejects_bad_params():
    with pytest.raises(ValueError):
        pade.build(0, 0, 5)
    with pytest.raises(ValueError):
        pade.build(1, 2, 5)
