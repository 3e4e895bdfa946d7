"""Hypergeometric approximation pairs A_{n,g}, B_{n,g} to (1-z)^(1/r).

All coefficients are exact rationals; the remainder series, contiguity
identities, Wronskian constant, sup-norm bounds on disks, and the p-adic
integrality quantity t(m) are checked byte-exactly.  The only certified
(non-symbolic) check is the remainder magnitude bound, which compares an
irrational value against an irrational envelope at a requested bit count.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from gmpy2 import mpq, mpz

from .exactnum import (
    PowProd,
    QuadElem,
    is_integral,
    rat,
    rat_root_interval,
)
from .forms import binom


class TheoremViolationError(AssertionError):
    """An identity the construction guarantees failed on concrete data."""


def gen_binom(q, m: int) -> mpq:
    """Generalized binomial coefficient binom(q, m) over the rationals."""
    q = rat(q)
    if m < 0:
        return mpq(0)
    num = mpq(1)
    for i in range(m):
        num *= q - i
    return num / _factorial(m)


def _factorial(m: int) -> mpz:
    out = mpz(1)
    for i in range(2, m + 1):
        out *= i
    return out


@dataclass(frozen=True)
class PadePair:
    """Degree-n / degree-(n-g) polynomial pair approximating (1-z)^(1/r)."""

    n: int
    g: int
    r: int
    a_coeffs: tuple
    b_coeffs: tuple

    def a_at(self, z):
        return poly_eval(self.a_coeffs, z)

    def b_at(self, z):
        return poly_eval(self.b_coeffs, z)


def build(n: int, g: int, r: int) -> PadePair:
    if n < 1 or g not in (0, 1) or r < 3:
        raise ValueError(f"invalid parameters n={n}, g={g}, r={r}")
    inv_r = mpq(1, r)
    a = tuple(
        gen_binom(n - g + inv_r, m) * binom(2 * n - g - m, n - g) * (-1) ** m
        for m in range(n + 1)
    )
    b = tuple(
        gen_binom(n - inv_r, m) * binom(2 * n - g - m, n) * (-1) ** m
        for m in range(n - g + 1)
    )
    return PadePair(n, g, r, a, b)


def poly_eval(coeffs, z):
    """Horner evaluation; works for mpq, QuadElem, and GaussRat points."""
    acc = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * z + c
    return acc


def root_series_coeffs(r: int, order: int):
    """Power series of (1-z)^(1/r) through z^order, exact."""
    return [gen_binom(mpq(1, r), k) * (-1) ** k for k in range(order + 1)]


def remainder_series(p: PadePair, order: int):
    """Coefficients of A(z) - (1-z)^(1/r) B(z) through z^order.

    Exactly zero through z^(2n-g); the first possibly-nonzero entry sits
    at z^(2n+1-g).
    """
    if order < 2 * p.n + 2 - p.g:
        raise ValueError("order too small to expose the remainder")
    root = root_series_coeffs(p.r, order)
    out = []
    for k in range(order + 1):
        acc = p.a_coeffs[k] if k < len(p.a_coeffs) else mpq(0)
        for j, bj in enumerate(p.b_coeffs):
            if k - j >= 0:
                acc -= bj * root[k - j]
        out.append(acc)
    return out


def c_coeffs(n: int, g: int, r: int):
    inv_r = mpq(1, r)
    return [gen_binom(n - inv_r, n - m) * gen_binom(n - g + inv_r, m) for m in range(n + 1)]


def d_coeffs(n: int, g: int, r: int):
    inv_r = mpq(1, r)
    return [gen_binom(n - inv_r, m) * gen_binom(n - g + inv_r, n - g - m) for m in range(n - g + 1)]


def _compose_one_minus_z(coeffs):
    """Coefficients of P(1-z) from those of P(z)."""
    out = [mpq(0)] * len(coeffs)
    for m, cm in enumerate(coeffs):
        # (1-z)^m expansion
        for k in range(m + 1):
            out[k] += cm * binom(m, k) * (-1) ** k
    return out


def contiguity_check(n: int, g: int, r: int, sample_points=()) -> bool:
    """C(z) = A(1-z) and D(z) = B(1-z) as exact coefficient identities."""
    p = build(n, g, r)
    c = c_coeffs(n, g, r)
    d = d_coeffs(n, g, r)
    if _compose_one_minus_z(list(p.a_coeffs)) != c:
        return False
    if _compose_one_minus_z(list(p.b_coeffs)) != d:
        return False
    for z in sample_points:
        z = rat(z)
        if poly_eval(c, z) != p.a_at(1 - z) or poly_eval(d, z) != p.b_at(1 - z):
            return False
    return True


# ---------------------------------------------------------------------------
# Sup-norm bounds on disks (exact Gaussian-rational samples)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GaussRat:
    """Exact complex rational re + im*i."""

    re: mpq
    im: mpq

    def __add__(self, other):
        other = _gauss(other)
        return GaussRat(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __mul__(self, other):
        other = _gauss(other)
        return GaussRat(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __sub__(self, other):
        other = _gauss(other)
        return GaussRat(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return _gauss(other).__sub__(self)

    def abs_sq(self) -> mpq:
        return self.re * self.re + self.im * self.im


def _gauss(x):
    if isinstance(x, GaussRat):
        return x
    return GaussRat(rat(x), mpq(0))


def sup_bound_check(p: PadePair, samples):
    """|A(z)| <= binom(2n-g, n) on |1-z| <= 1 and <= 2^(3n+2) on |1-z| <= 2.

    samples: iterable of (re, im) rational pairs.  Out-of-disk samples are
    skipped with a notice.  Comparisons are exact on |.|^2.
    """
    bound1 = mpq(binom(2 * p.n - p.g, p.n))
    bound2 = mpq(2) ** (3 * p.n + 2)
    results = []
    ok = True
    for re, im in samples:
        z = GaussRat(rat(re), rat(im))
        dist_sq = (1 - z).abs_sq()
        val_sq = poly_eval([_gauss(c) for c in p.a_coeffs], z).abs_sq()
        entry = {"z": (str(z.re), str(z.im)), "checked": []}
        if dist_sq <= 1:
            holds = val_sq <= bound1 * bound1
            entry["checked"].append(("disk1", holds))
            ok = ok and holds
        if dist_sq <= 4:
            holds = val_sq <= bound2 * bound2
            entry["checked"].append(("disk2", holds))
            ok = ok and holds
        if not entry["checked"]:
            entry["skipped"] = "outside |1-z| <= 2"
        results.append(entry)
    return ok, results


# ---------------------------------------------------------------------------
# Wronskian and integrality
# ---------------------------------------------------------------------------


def wronskian_at_one(n: int, big_i: int, r: int) -> mpq:
    """The constant P with A_{n,0} B_{n+I,1} - A_{n+I,1} B_{n,0} = P z^(2n+I)."""
    inv_r = mpq(1, r)
    val = gen_binom(n - inv_r, n) * gen_binom(n + big_i + inv_r - 1, n + big_i - 1) - gen_binom(
        n + big_i - inv_r, n + big_i
    ) * gen_binom(n + inv_r, n)
    if val == 0:
        raise TheoremViolationError(f"Wronskian vanished at n={n}, I={big_i}, r={r}")
    return val


def wronskian_expansion_check(n: int, big_i: int, r: int) -> bool:
    """Full polynomial check that the cross-product is exactly P * z^(2n+I)."""
    p0 = build(n, 0, r)
    p1 = build(n + big_i, 1, r)
    prod = _poly_mul_q(p0.a_coeffs, p1.b_coeffs)
    prod2 = _poly_mul_q(p1.a_coeffs, p0.b_coeffs)
    diff = [a - b for a, b in zip(_pad(prod, prod2), _pad(prod2, prod))]
    k = 2 * n + big_i
    expected = wronskian_at_one(n, big_i, r)
    if any(c != 0 for c in diff[:k]):
        return False
    if len(diff) <= k or diff[k] != expected:
        return False
    return all(c == 0 for c in diff[k + 1:])


def _poly_mul_q(p, q):
    out = [mpq(0)] * (len(p) + len(q) - 1)
    for i, pi in enumerate(p):
        for j, qj in enumerate(q):
            out[i + j] += pi * qj
    return out


def _pad(p, q):
    n = max(len(p), len(q))
    return list(p) + [mpq(0)] * (n - len(p))


def integrality_t(a: int, r: int, m: int) -> mpz:
    """t(m) = binom(a/r, m) r^(2m), provably an integer for all primes at once."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    val = gen_binom(mpq(a, r), m) * mpq(r) ** (2 * m)
    if not is_integral(val):
        raise TheoremViolationError(f"t({m}) = {val} not integral for a={a}, r={r}")
    return mpz(val.numerator)


# ---------------------------------------------------------------------------
# Homogenized evaluation and the remainder magnitude bound
# ---------------------------------------------------------------------------


def homogeneous_eval(coeffs, x, y):
    """P*(x, y) = x^deg P(y/x) = sum_m coeffs[m] y^m x^(deg-m)."""
    deg = len(coeffs) - 1
    acc = None
    for m, cm in enumerate(coeffs):
        term = cm * y ** m * x ** (deg - m)
        acc = term if acc is None else acc + term
    return acc


def a_star_eval(p: PadePair, x: QuadElem, y: QuadElem) -> QuadElem:
    return homogeneous_eval([QuadElem(c) for c in p.a_coeffs], x, y)


def b_star_eval(p: PadePair, x: QuadElem, y: QuadElem) -> QuadElem:
    return homogeneous_eval([QuadElem(c) for c in p.b_coeffs], x, y)


def star_integrality_check(n: int, g: int, r: int, lam: QuadElem, c: int, d: int) -> bool:
    """A*(lam, r^2 sqrt(d) c) and B*(lam, r^2 sqrt(d) c) lie in the integer ring."""
    p = build(n, g, r)
    arg = QuadElem.sqrt_of(d) * (r * r * c)
    a_val = a_star_eval(p, lam, arg)
    b_val = b_star_eval(p, lam, arg)
    return a_val.in_integer_ring() and b_val.in_integer_ring()


def remainder_envelope(p: PadePair) -> mpq:
    """The rational constant in the remainder magnitude bound."""
    inv_r = mpq(1, p.r)
    return abs(
        gen_binom(p.n - p.g + inv_r, p.n + 1 - p.g) * gen_binom(p.n - inv_r, p.n)
    ) / binom(2 * p.n + 1 - p.g, p.n)


def remainder_magnitude_check(p: PadePair, z, bits: int = 64) -> bool:
    """Certified check of |A(z) - (1-z)^(1/r) B(z)| against its envelope.

    z rational with |z| < 1; equality-tight cases refine up to 4x bits
    before reporting failure.
    """
    z = rat(z)
    if not -1 < z < 1:
        raise ValueError("need |z| < 1")
    if z == 0:
        return True
    a_val = p.a_at(z)
    b_val = p.b_at(z)
    k = 2 * p.n + 1 - p.g
    rhs = PowProd.of(remainder_envelope(p)) * PowProd.of(abs(z), k) * PowProd.of(
        1 - abs(z), Fraction(-k, 2)
    )
    b = bits
    for _ in range(4):
        root = rat_root_interval(1 - z, p.r, b)
        lhs_lo = a_val - root.hi * b_val if b_val >= 0 else a_val - root.lo * b_val
        lhs_hi = a_val - root.lo * b_val if b_val >= 0 else a_val - root.hi * b_val
        lhs_abs_hi = max(abs(lhs_lo), abs(lhs_hi))
        if lhs_abs_hi <= rhs.interval(b).lo:
            return True
        b *= 2
    return False
