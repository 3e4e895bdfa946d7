"""Exact scalar arithmetic: big rationals, quadratic field elements,
certified dyadic enclosures, and exact comparison of rational powers.

Every ordering that feeds a verdict is decided by integer arithmetic
(sign tests after clearing exponents).  Intervals appear only for
genuinely transcendental quantities (logs, arguments of complex numbers)
and always carry exact rational endpoints, so refining never rounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import gmpy2
from gmpy2 import iroot, is_square, mpq, mpz


class FieldMismatchError(ValueError):
    """Raised when combining quadratic elements over different sqrt(d)."""


class DomainError(ValueError):
    """Raised on out-of-domain input (negative base, even root of negative...)."""


class PrecisionExhaustedError(RuntimeError):
    """Raised when a refinement loop hits its bit budget undecided."""

    def __init__(self, message, bits=0):
        super().__init__(message)
        self.bits = bits


Rational = mpq

_ZERO = mpq(0)
_ONE = mpq(1)


def rat(x) -> mpq:
    """Coerce ints, Fractions, strings like '3/5', and mpq to mpq."""
    if isinstance(x, type(_ZERO)):
        return x
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    return mpq(x)


def rat_str(x) -> str:
    """Serialize exactly as 'p' or 'p/q' (decimal digits, no truncation)."""
    x = rat(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def sign(q) -> int:
    if q > 0:
        return 1
    if q < 0:
        return -1
    return 0


def is_integral(q) -> bool:
    return rat(q).denominator == 1


def rational_nth_root(q, k: int):
    """Exact k-th root of a rational, or None if irrational."""
    q = rat(q)
    if k <= 0:
        raise DomainError("root degree must be positive")
    if q < 0:
        if k % 2 == 0:
            return None
        r = rational_nth_root(-q, k)
        return None if r is None else -r
    pn, en = iroot(mpz(q.numerator), k)
    pd, ed = iroot(mpz(q.denominator), k)
    if en and ed:
        return mpq(pn, pd)
    return None


# ---------------------------------------------------------------------------
# Quadratic field elements
# ---------------------------------------------------------------------------


class QuadElem:
    """a + b*sqrt(d) in Q(sqrt(d)), exact.

    d is stored as given (never reduced to a squarefree kernel).  If d is a
    perfect square the value is folded into the rational part, and purely
    rational elements are canonicalized to d = 0, which acts as a wildcard
    when combining with elements over any field.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b=0, d=0):
        a = rat(a)
        b = rat(b)
        d = int(d)
        if b != 0 and d >= 0 and is_square(mpz(d)):
            a = a + b * mpq(isqrt_exact(d))
            b = _ZERO
        if b == 0:
            d = 0
        self.a = a
        self.b = b
        self.d = d

    # -- construction helpers

    @classmethod
    def sqrt_of(cls, d: int) -> "QuadElem":
        return cls(0, 1, d)

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def as_rational(self) -> mpq:
        if self.b != 0:
            raise DomainError(f"{self!r} is irrational")
        return self.a

    # -- field bookkeeping

    def _join_d(self, other: "QuadElem") -> int:
        if self.d == 0:
            return other.d
        if other.d == 0 or other.d == self.d:
            return self.d
        raise FieldMismatchError(f"cannot mix sqrt({self.d}) with sqrt({other.d})")

    @staticmethod
    def _coerce(x):
        if isinstance(x, QuadElem):
            return x
        if isinstance(x, (int, Fraction)) or isinstance(x, type(_ZERO)) or isinstance(x, type(mpz(0))):
            return QuadElem(rat(x))
        return None

    # -- arithmetic

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = self._join_d(o)
        return QuadElem(self.a + o.a, self.b + o.b, d)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = self._join_d(o)
        return QuadElem(self.a - o.a, self.b - o.b, d)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o.__sub__(self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = self._join_d(o)
        return QuadElem(self.a * o.a + self.b * o.b * d, self.a * o.b + self.b * o.a, d)

    __rmul__ = __mul__

    def inverse(self) -> "QuadElem":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero quadratic element")
        return QuadElem(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __neg__(self):
        return QuadElem(-self.a, -self.b, self.d)

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = QuadElem(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conj(self) -> "QuadElem":
        return QuadElem(self.a, -self.b, self.d)

    def norm(self) -> mpq:
        return self.a * self.a - self.b * self.b * self.d

    def trace(self) -> mpq:
        return 2 * self.a

    # -- predicates

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.b == 0 and o.b == 0:
            return self.a == o.a
        return self.a == o.a and self.b == o.b and self.d == o.d

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def sign(self) -> int:
        """Exact sign under the real embedding sqrt(d) > 0; d < 0 rejected."""
        if self.b == 0:
            return sign(self.a)
        if self.d < 0:
            raise DomainError("sign undefined for complex embedding (d < 0)")
        sa, sb = sign(self.a), sign(self.b)
        if sa == 0:
            return sb
        if sa == sb:
            return sa
        # opposite signs: compare a^2 against b^2 d (equality impossible
        # since d is not a perfect square here)
        cmp = sign(self.a * self.a - self.b * self.b * self.d)
        return sa * cmp

    def in_integer_ring(self) -> bool:
        """Membership in the ring of integers of Q(sqrt(d)): integral trace and norm."""
        return is_integral(self.trace()) and is_integral(self.norm())

    def abs_square(self):
        """|x|^2: exact rational for d <= 0, QuadElem x^2 for real d > 0."""
        if self.b == 0:
            return self.a * self.a
        if self.d < 0:
            return self.norm()
        return self * self

    def __repr__(self):
        if self.b == 0:
            return rat_str(self.a)
        return f"{rat_str(self.a)}+{rat_str(self.b)}*sqrt({self.d})"


def isqrt_exact(d: int):
    r, exact = iroot(mpz(d), 2)
    if not exact:
        raise DomainError(f"{d} is not a perfect square")
    return r


def _q_bits(q) -> int:
    q = rat(q)
    return int(mpz(q.numerator).bit_length() + mpz(q.denominator).bit_length())


def quad_add(x: QuadElem, y: QuadElem) -> QuadElem:
    return x + y


def quad_mul(x: QuadElem, y: QuadElem) -> QuadElem:
    return x * y


def quad_conj(x: QuadElem) -> QuadElem:
    return x.conj()


def quad_norm(x: QuadElem) -> mpq:
    return x.norm()


def quad_sign(x) -> int:
    if isinstance(x, QuadElem):
        return x.sign()
    return sign(rat(x))


def exact_cmp(x, y) -> int:
    """Exact -1/0/+1 ordering of two real exact scalars (mpq or QuadElem)."""
    xe = x if isinstance(x, QuadElem) else QuadElem(rat(x))
    ye = y if isinstance(y, QuadElem) else QuadElem(rat(y))
    return (xe - ye).sign()


def exact_str(x) -> str:
    return repr(x) if isinstance(x, QuadElem) else rat_str(x)


# ---------------------------------------------------------------------------
# Exact comparison of rational powers
# ---------------------------------------------------------------------------


def pow_compare(base, exp_num: int, exp_den: int, rhs, rhs_exp_num: int, rhs_exp_den: int) -> int:
    """Ordering of base^(exp_num/exp_den) vs rhs^(rhs_exp_num/rhs_exp_den).

    Decided exactly by clearing denominators to integer exponents; both
    bases must be positive rationals.
    """
    base = rat(base)
    rhs = rat(rhs)
    if base <= 0 or rhs <= 0:
        raise DomainError("pow_compare requires positive bases")
    if exp_den <= 0 or rhs_exp_den <= 0:
        raise DomainError("exponent denominators must be positive")
    lhs_val = base ** (exp_num * rhs_exp_den)
    rhs_val = rhs ** (rhs_exp_num * exp_den)
    return sign(lhs_val - rhs_val)


# ---------------------------------------------------------------------------
# Intervals with exact rational endpoints
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RealInterval:
    """Closed interval [lo, hi] with exact rational endpoints."""

    lo: mpq
    hi: mpq
    precision_bits: int = 0

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"inverted interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, v, bits: int = 0) -> "RealInterval":
        v = rat(v)
        return cls(v, v, bits)

    def width(self) -> mpq:
        return self.hi - self.lo

    def contains(self, v) -> bool:
        v = rat(v)
        return self.lo <= v <= self.hi

    def contains_interval(self, other: "RealInterval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def __add__(self, other):
        o = _as_interval(other)
        return RealInterval(self.lo + o.lo, self.hi + o.hi, min(self.precision_bits, o.precision_bits))

    __radd__ = __add__

    def __neg__(self):
        return RealInterval(-self.hi, -self.lo, self.precision_bits)

    def __sub__(self, other):
        return self + (-_as_interval(other))

    def __rsub__(self, other):
        return _as_interval(other) + (-self)

    def __mul__(self, other):
        o = _as_interval(other)
        cands = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return RealInterval(min(cands), max(cands), min(self.precision_bits, o.precision_bits))

    __rmul__ = __mul__

    def reciprocal(self) -> "RealInterval":
        if self.lo <= 0 <= self.hi:
            raise ZeroDivisionError("interval straddles zero")
        return RealInterval(1 / self.hi, 1 / self.lo, self.precision_bits)

    def __truediv__(self, other):
        return self * _as_interval(other).reciprocal()

    def pow_int(self, n: int) -> "RealInterval":
        if n == 0:
            return RealInterval.point(1, self.precision_bits)
        if n < 0:
            return self.reciprocal().pow_int(-n)
        if n % 2 == 0 and self.lo < 0 < self.hi:
            top = max(self.lo ** n, self.hi ** n)
            return RealInterval(_ZERO, top, self.precision_bits)
        a, b = self.lo ** n, self.hi ** n
        return RealInterval(min(a, b), max(a, b), self.precision_bits)

    def intersect(self, other: "RealInterval") -> "RealInterval":
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        if lo > hi:
            raise ValueError("empty intersection")
        return RealInterval(lo, hi, max(self.precision_bits, other.precision_bits))

    def sign_certain(self):
        """+1/-1/0 when certified, None when the interval straddles zero."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == self.hi == 0:
            return 0
        return None

    def __repr__(self):
        return f"[{float(self.lo):.6g}, {float(self.hi):.6g}]~{self.precision_bits}b"


def _as_interval(x) -> RealInterval:
    if isinstance(x, RealInterval):
        return x
    return RealInterval.point(rat(x))


def rat_root_interval(value, k: int, bits: int) -> RealInterval:
    """Tightest dyadic enclosure of value^(1/k) at 2^-bits resolution.

    Collapses to a point when the root is rational.  Tightest-dyadic
    endpoints make enclosures at higher bits nest inside lower ones.
    """
    value = rat(value)
    if k <= 0:
        raise DomainError("root degree must be positive")
    if value == 0:
        return RealInterval.point(0, bits)
    if value < 0:
        if k % 2 == 0:
            raise DomainError("even root of a negative value")
        inner = rat_root_interval(-value, k, bits)
        return RealInterval(-inner.hi, -inner.lo, bits)
    exact = rational_nth_root(value, k)
    if exact is not None:
        return RealInterval.point(exact, bits)
    p = mpz(value.numerator)
    q = mpz(value.denominator)
    scaled = (p << (k * bits)) // q
    m = iroot(scaled, k)[0]
    # m = floor((p*2^(k*bits)/q)^(1/k)); fix up iroot's floor-of-floor slack
    while (m + 1) ** k * q <= (p << (k * bits)):
        m += 1
    while m ** k * q > (p << (k * bits)):
        m -= 1
    denom = mpz(1) << bits
    return RealInterval(mpq(m, denom), mpq(m + 1, denom), bits)


def embed_interval(x, bits: int) -> RealInterval:
    """Certified real enclosure of a QuadElem or of value^(1/root_degree).

    Width is at most 2^-bits * max(1, |x|); larger bits shrink and nest.
    """
    if isinstance(x, tuple):
        value, degree = x
        base = rat_root_interval(rat(value), degree, bits)
        builder = lambda b: rat_root_interval(rat(value), degree, b)  # noqa: E731
    elif isinstance(x, QuadElem):
        if x.b != 0 and x.d < 0:
            raise DomainError("no real embedding for d < 0")
        if x.b == 0:
            return RealInterval.point(x.a, bits)

        def builder(b):
            return rat_root_interval(mpq(x.d), 2, b) * x.b + x.a

        base = builder(bits)
    else:
        return RealInterval.point(rat(x), bits)

    b = bits
    while True:
        # conservative lower estimate of max(1, |value|)
        if base.lo > 0 or base.hi < 0:
            scale = max(_ONE, min(abs(base.lo), abs(base.hi)))
        else:
            scale = _ONE
        if base.width() * (mpz(1) << bits) <= scale:
            return base
        b += max(8, b // 2)
        base = builder(b)


# ---------------------------------------------------------------------------
# Formal products of rational powers
# ---------------------------------------------------------------------------


class PowProd:
    """Formal product prod_i base_i^(e_i): positive exact bases (mpq or real
    QuadElem), Fraction exponents.  Comparisons clear every exponent to an
    integer, so the decision is a single exact sign test."""

    __slots__ = ("factors",)

    def __init__(self, factors=()):
        self.factors = []
        for base, e in factors:
            self._push(base, e)

    def _push(self, base, e):
        e = Fraction(e)
        if e == 0:
            return
        if not isinstance(base, QuadElem):
            base = rat(base)
            if base <= 0:
                raise DomainError("PowProd bases must be positive")
            if base == 1:
                return
        else:
            if base.is_rational:
                self._push(base.as_rational(), e)
                return
            if base.sign() <= 0:
                raise DomainError("PowProd bases must be positive")
        self.factors.append((base, e))

    @classmethod
    def of(cls, base, e=1) -> "PowProd":
        p = cls()
        p._push(base, e)
        return p

    def __mul__(self, other: "PowProd") -> "PowProd":
        p = PowProd()
        p.factors = list(self.factors)
        for base, e in other.factors:
            p._push(base, e)
        return p

    def __pow__(self, e) -> "PowProd":
        e = Fraction(e)
        p = PowProd()
        for base, old in self.factors:
            p._push(base, old * e)
        return p

    def inverse(self) -> "PowProd":
        return self ** -1

    def _cleared_value(self):
        """(value, N): value = (prod)^N with N clearing all denominators."""
        if not self.factors:
            return _ONE, 1
        n = 1
        for _, e in self.factors:
            n = n * e.denominator // gmpy2.gcd(n, e.denominator)
        val = None
        for base, e in self.factors:
            piece = base ** int(e * n)
            val = piece if val is None else val * piece
        return val, n

    def _cleared_cost_bits(self) -> int:
        """Rough bit size of the fully cleared product."""
        if not self.factors:
            return 0
        n = 1
        for _, e in self.factors:
            n = n * e.denominator // gmpy2.gcd(n, e.denominator)
        total = 0
        for base, e in self.factors:
            if isinstance(base, QuadElem):
                bits = max(_q_bits(base.a), _q_bits(base.b)) + base.d.bit_length() + 2
            else:
                bits = _q_bits(base)
            total += abs(int(e * n)) * max(bits, 1)
            if total > 1 << 62:
                return total
        return total

    def log_enclosure(self, bits: int) -> RealInterval:
        """Certified enclosure of log(product)."""
        out = RealInterval.point(0, bits)
        for base, e in self.factors:
            coeff = mpq(e.numerator, e.denominator)
            if isinstance(base, QuadElem):
                b2 = bits + 8
                enc = embed_interval(base, b2)
                while enc.lo <= 0:
                    b2 *= 2
                    enc = embed_interval(base, b2)
                lg = RealInterval(
                    log_interval(enc.lo, bits + 8).lo,
                    log_interval(enc.hi, bits + 8).hi,
                    bits,
                )
            else:
                lg = log_interval(base, bits + 8)
            out = out + lg * coeff
        return out

    _EXACT_COST_CAP = 20_000_000   # bits; beyond this compare via certified logs

    def cmp(self, other: "PowProd") -> int:
        """Exact by power clearing when affordable, else certified log intervals.

        Log comparison decides every strict inequality; exact equality at
        astronomically large exponents would exhaust the refinement budget
        and raise PrecisionExhaustedError instead of guessing.
        """
        ratio = self * other.inverse()
        if not ratio.factors:
            return 0
        if ratio._cleared_cost_bits() <= self._EXACT_COST_CAP:
            val, _ = ratio._cleared_value()
            return exact_cmp(val, 1)
        bits = 128
        while bits <= 1 << 16:
            enc = ratio.log_enclosure(bits)
            s = enc.sign_certain()
            if s is not None:
                return s
            bits *= 2
        raise PrecisionExhaustedError(
            "power-product comparison undecided at log budget", bits=1 << 16
        )

    def cmp_rational(self, q) -> int:
        return self.cmp(PowProd.of(rat(q)))

    def describe(self) -> str:
        if not self.factors:
            return "1"
        return " * ".join(f"({exact_str(b)})^({e})" for b, e in self.factors)

    def interval(self, bits: int) -> RealInterval:
        """Certified enclosure; refine by calling again with more bits."""
        out = RealInterval.point(1, bits)
        guard = bits + 8 * (len(self.factors) + 1)
        for base, e in self.factors:
            if isinstance(base, QuadElem):
                enc = embed_interval(base, guard)
            else:
                enc = RealInterval.point(base, guard)
            # base^(p/q): q-th root of the integer power, sign-safe since base > 0
            powered = enc.pow_int(e.numerator)
            if e.denominator > 1:
                lo = rat_root_interval(powered.lo, e.denominator, guard).lo
                hi = rat_root_interval(powered.hi, e.denominator, guard).hi
                powered = RealInterval(lo, hi, guard)
            out = out * powered
        return RealInterval(out.lo, out.hi, bits)


# ---------------------------------------------------------------------------
# Complex enclosures and transcendental helpers (mpmath-backed)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ComplexInterval:
    """Rectangle re x im with exact rational endpoints."""

    re: RealInterval
    im: RealInterval

    def __add__(self, other: "ComplexInterval") -> "ComplexInterval":
        return ComplexInterval(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "ComplexInterval") -> "ComplexInterval":
        return ComplexInterval(self.re - other.re, self.im - other.im)

    def __mul__(self, other: "ComplexInterval") -> "ComplexInterval":
        return ComplexInterval(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def scale(self, q) -> "ComplexInterval":
        return ComplexInterval(self.re * q, self.im * q)

    def abs_square(self) -> RealInterval:
        return self.re.pow_int(2) + self.im.pow_int(2)

    def contains_zero(self) -> bool:
        return self.re.contains(0) and self.im.contains(0)

    @classmethod
    def point(cls, re, im=0) -> "ComplexInterval":
        return cls(RealInterval.point(re), RealInterval.point(im))


def quad_complex_interval(x: QuadElem, bits: int) -> ComplexInterval:
    """Enclosure of x under the embedding sqrt(d) = i*sqrt(|d|) for d < 0."""
    if x.d >= 0:
        return ComplexInterval(embed_interval(x, bits), RealInterval.point(0, bits))
    root = rat_root_interval(mpq(-x.d), 2, bits)
    return ComplexInterval(RealInterval.point(x.a, bits), root * x.b)


def _mpf_tuple_to_mpq(t) -> mpq:
    sign_bit, man, exp, _ = t
    if man == 0:
        return _ZERO
    v = mpq(int(man))
    if sign_bit:
        v = -v
    if exp >= 0:
        return v * (mpz(1) << exp)
    return v / (mpz(1) << -exp)


def _iv_value_to_interval(x, bits: int) -> RealInterval:
    lo, hi = x._mpi_
    return RealInterval(_mpf_tuple_to_mpq(lo), _mpf_tuple_to_mpq(hi), bits)


def _mpq_to_iv(ctx, q):
    q = rat(q)
    return ctx.mpf(int(q.numerator)) / ctx.mpf(int(q.denominator))


def _interval_to_iv(ctx, x: RealInterval):
    lo = _mpq_to_iv(ctx, x.lo)._mpi_[0]
    hi = _mpq_to_iv(ctx, x.hi)._mpi_[1]
    return ctx.make_mpf((lo, hi))


def pi_interval(bits: int) -> RealInterval:
    from mpmath import iv

    old = iv.prec
    try:
        iv.prec = bits + 16
        return _iv_value_to_interval(+iv.pi, bits)
    finally:
        iv.prec = old


def log_interval(q, bits: int) -> RealInterval:
    """Certified enclosure of log(q) for rational q > 0."""
    q = rat(q)
    if q <= 0:
        raise DomainError("log of a non-positive value")
    from mpmath import iv

    old = iv.prec
    try:
        iv.prec = bits + 16
        return _iv_value_to_interval(iv.log(_mpq_to_iv(iv, q)), bits)
    finally:
        iv.prec = old


def atan2_interval(y: RealInterval, x: RealInterval, bits: int) -> RealInterval:
    """Certified enclosure of atan2(y, x) on interval arguments."""
    from mpmath import iv

    old = iv.prec
    try:
        iv.prec = bits + 16
        val = iv.atan2(_interval_to_iv(iv, y), _interval_to_iv(iv, x))
        return _iv_value_to_interval(val, bits)
    finally:
        iv.prec = old


def cos_sin_interval(theta: RealInterval, bits: int):
    from mpmath import iv

    old = iv.prec
    try:
        iv.prec = bits + 16
        t = _interval_to_iv(iv, theta)
        return (
            _iv_value_to_interval(iv.cos(t), bits),
            _iv_value_to_interval(iv.sin(t), bits),
        )
    finally:
        iv.prec = old


def arg_interval(z: QuadElem, bits: int) -> RealInterval:
    """Certified enclosure of arg(a + b*sqrt(d)) in (-pi, pi], d < 0 embedding."""
    if z.d >= 0:
        s = quad_sign(z)
        if s > 0:
            return RealInterval.point(0, bits)
        if s < 0:
            return pi_interval(bits)
        raise DomainError("arg(0) undefined")
    c = quad_complex_interval(z, bits)
    if c.re.contains(0) and c.im.contains(0):
        raise DomainError("arg of an enclosure containing 0")
    return atan2_interval(c.im, c.re, bits)


def complex_root_interval(z: QuadElem, k: int, bits: int) -> ComplexInterval:
    """Principal k-th root of a nonzero QuadElem under the standard embedding."""
    if not z:
        raise DomainError("root of zero")
    if z.d >= 0:
        s = quad_sign(z)
        if s > 0:
            if z.is_rational:
                return ComplexInterval(rat_root_interval(z.a, k, bits), RealInterval.point(0, bits))
            b2 = bits + 8
            enc = embed_interval(z, b2)
            while enc.lo <= 0:
                b2 *= 2
                enc = embed_interval(z, b2)
            lo = rat_root_interval(enc.lo, k, bits + 8).lo
            hi = rat_root_interval(enc.hi, k, bits + 8).hi
            return ComplexInterval(RealInterval(lo, hi, bits), RealInterval.point(0, bits))
        # negative real: principal root has argument pi/k
        theta = pi_interval(bits + 8) * mpq(1, k)
        mod = _abs_root(z, k, bits + 8)
        cos_t, sin_t = cos_sin_interval(theta, bits + 8)
        return ComplexInterval(mod * cos_t, mod * sin_t)
    theta = arg_interval(z, bits + 8) * mpq(1, k)
    mod = _abs_root(z, k, bits + 8)
    cos_t, sin_t = cos_sin_interval(theta, bits + 8)
    return ComplexInterval(mod * cos_t, mod * sin_t)


def _abs_root(z: QuadElem, k: int, bits: int) -> RealInterval:
    """Enclosure of |z|^(1/k) via the exact |z|^2."""
    abs_sq = z.abs_square()
    if isinstance(abs_sq, QuadElem):
        b2 = bits + 8
        enc = embed_interval(abs_sq, b2)
        while enc.lo <= 0:
            b2 *= 2
            enc = embed_interval(abs_sq, b2)
        lo = rat_root_interval(enc.lo, 2 * k, bits).lo
        hi = rat_root_interval(enc.hi, 2 * k, bits).hi
        return RealInterval(lo, hi, bits)
    return rat_root_interval(abs_sq, 2 * k, bits)
