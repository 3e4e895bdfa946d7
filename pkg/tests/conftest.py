"""Shared factories for randomized form generation."""

import math
import random

from gmpy2 import mpq

from diagthue.exactnum import QuadElem
from diagthue.forms import eval_form, make_binomial, make_from_xi


def conj_pair_form(d, lam, big_b, r, two_a=2):
    """Integral form from the line pair lam(2A x + (B -+ sqrt(d)) y)."""
    ku = lam ** r * two_a ** r
    kv = -(lam.conj() ** r) * two_a ** r
    beta1 = QuadElem(mpq(big_b, two_a), mpq(-1, two_a), d)
    delta1 = QuadElem(mpq(big_b, two_a), mpq(1, two_a), d)
    return make_from_xi(ku, beta1, kv, delta1, r)


def random_form(rng: random.Random, r_choices=(5, 6, 7), allow_binomial=True):
    """A random diagonalizable form: binomial or conjugate-pair xi data."""
    for _ in range(100):
        r = rng.choice(r_choices)
        if allow_binomial and rng.random() < 0.5:
            return make_binomial(rng.randint(1, 9), rng.randint(1, 9), r)
        d = rng.choice([-3, -4, -7, -8, 5, 8, 12, 13])
        lam = QuadElem(rng.randint(1, 3), rng.randint(0, 2), d)
        if lam.norm() == 0:
            continue
        big_b = d % 2
        try:
            return conj_pair_form(d, lam, big_b, r)
        except Exception:
            continue
    raise RuntimeError("failed to generate a random form")


def brute_enumerate(form, h, x_bound, y_bound):
    """Independent double-loop oracle for box enumeration."""
    out = set()
    for y in range(0, y_bound + 1):
        for x in range(-x_bound, x_bound + 1):
            if y == 0 and x <= 0:
                continue
            if math.gcd(abs(x), y) != 1:
                continue
            fv = eval_form(form, x, y)
            if 0 < abs(fv) <= h:
                out.add((x, y))
    return out
