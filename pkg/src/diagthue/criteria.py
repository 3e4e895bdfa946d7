"""Hypothesis predicates and count-bound verdicts for the main theorems.

Every threshold with fractional exponents is decided by exact power
clearing (PowProd comparisons); the only certified-interval computation
is the ceiling-of-logs bound in the epsilon-parametrized corollary,
refined until the integer ceiling is unambiguous.

Observed counts are always box-relative (or convergent-certified for
binomials); a pass means observed <= bound inside the search region, and
the verdict records that region.

Note on constants: the binomial-equation threshold exponent 182.6 is
encoded exactly as 1826/10.  It descends from the l = 1 case of the
Siegel-type theorem (the remark quoting 183.6 applies to the discriminant
form of the same inequality); both are kept as stated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from gmpy2 import is_prime, mpq, mpz

from . import faults
from .exactnum import PowProd, log_interval, rat_str
from .forms import DiagForm, classify_form, is_reduced
from .solver import RelatedClassification, enumerate_binomial_convergents


class ParameterError(ValueError):
    pass


class FactorizationBudgetError(RuntimeError):
    def __init__(self, n, partial):
        super().__init__(f"factorization budget exceeded for {n}; partial: {partial}")
        self.partial = partial


# ---------------------------------------------------------------------------
# omega and delta'
# ---------------------------------------------------------------------------

_SIEVE_LIMIT = 100_000
_SMALL_PRIMES: list = []


def _small_primes():
    if not _SMALL_PRIMES:
        sieve = bytearray([1]) * (_SIEVE_LIMIT + 1)
        sieve[:2] = b"\x00\x00"
        for p in range(2, int(_SIEVE_LIMIT ** 0.5) + 1):
            if sieve[p]:
                sieve[p * p:: p] = b"\x00" * len(range(p * p, _SIEVE_LIMIT + 1, p))
        _SMALL_PRIMES.extend(i for i, v in enumerate(sieve) if v)
    return _SMALL_PRIMES


def _pollard_rho(n: mpz, budget: int = 1 << 20):
    if n % 2 == 0:
        return mpz(2)
    x = mpz(2)
    y = mpz(2)
    c = mpz(1)
    while budget > 0:
        x = (x * x + c) % n
        y = (y * y + c) % n
        y = (y * y + c) % n
        d = math.gcd(int(abs(x - y)), int(n))
        if d == n:
            c += 1
            x = y = mpz(2)
        elif d > 1:
            return mpz(d)
        budget -= 1
    return None


def factorize(n: int) -> dict:
    """Prime factorization; deterministic below 2^64, rho fallback above."""
    n = mpz(abs(n))
    if n == 0:
        raise ParameterError("cannot factor 0")
    out: dict = {}
    for p in _small_primes():
        while n % p == 0:
            out[int(p)] = out.get(int(p), 0) + 1
            n //= p
        if n == 1:
            return out
    stack = [n]
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out[int(m)] = out.get(int(m), 0) + 1
            continue
        d = _pollard_rho(m)
        if d is None:
            raise FactorizationBudgetError(int(m), dict(out))
        stack.extend([d, m // d])
    return out


def omega(n: int) -> int:
    """Number of distinct prime divisors; omega(1) = 0."""
    if n < 1:
        raise ParameterError("omega requires n >= 1")
    if n == 1:
        return 0
    return len(factorize(n))


def delta_prime(form: DiagForm, h: int) -> mpq:
    """|Delta| / (2^(r^2-r) r^r h^(2r-2)), exact."""
    if h < 1:
        raise ParameterError("h must be >= 1")
    r = form.r
    return abs(form.j_power) / (mpq(2) ** (r * r - r) * mpq(h) ** (2 * r - 2))


# ---------------------------------------------------------------------------
# Bound table and verdicts
# ---------------------------------------------------------------------------

CASES = ("D<0", "D>0_even_indef", "D>0_odd_indef", "definite")


def case_of(form: DiagForm) -> str:
    fc = classify_form(form)
    if fc.definiteness == "definite":
        return "definite"
    if fc.d_sign == "negative":
        return "D<0"
    return "D>0_even_indef" if fc.parity == "even" else "D>0_odd_indef"


def bound_table(theorem: str, r: int, case: str, m: int = 0, l: int = 0, w: int = 0) -> int:
    table = {
        "T1_3": (2 * r + 1, 5, 3, 1),
        "T1_4": (r * m, 2 * m, m, 1),
        "C1_5": (3 * r, 6, 3, 1),
        "C1_6": (r * m, 2 * m, m, 1),
        "T2_1": (2 * l * r, 4 * l, 2 * l, 1),
        "T1_8": (r * m, 2 * m, m, 1),
        "T1_9": (3 * r ** (1 + w), 6 * r ** w, 3 * r ** w, r ** w),
    }
    bound = table[theorem][CASES.index(case)]
    if "bound-off-by-one" in faults.active:
        bound -= 1
    return bound


@dataclass
class TheoremVerdict:
    theorem_id: str
    hypothesis_holds: bool
    bound: int | None
    observed: int | None
    passed: bool | None          # defined only when the hypothesis holds
    case: str
    search_region: dict
    exact_trace: list = dc_field(default_factory=list)
    notes: dict = dc_field(default_factory=dict)

    def to_dict(self):
        return {
            "theorem_id": self.theorem_id,
            "hypothesis_holds": self.hypothesis_holds,
            "bound": None if self.bound is None else str(self.bound),
            "observed": None if self.observed is None else str(self.observed),
            "passed": self.passed,
            "case": self.case,
            "search_region": self.search_region,
            "exact_trace": self.exact_trace,
            "notes": self.notes,
        }


def _trace(trace: list, label: str, lhs: PowProd, relation: str, rhs: PowProd, result: bool):
    trace.append({
        "compare": label,
        "lhs": lhs.describe(),
        "relation": relation,
        "rhs": rhs.describe(),
        "result": bool(result),
    })


def _dp_threshold_check(form: DiagForm, h: int, r_exp: Fraction, h_exp: Fraction,
                        trace: list, label: str, strict: bool = False) -> bool:
    dp = delta_prime(form, h)
    lhs = PowProd.of(dp)
    rhs = PowProd.of(mpq(form.r), r_exp) * PowProd.of(mpq(h), h_exp)
    c = lhs.cmp(rhs)
    holds = c > 0 if strict else c >= 0
    _trace(trace, label, lhs, ">" if strict else ">=", rhs, holds)
    return holds


def _observed_count(cls: RelatedClassification) -> int:
    return sum(len(g) for g in cls.groups.values())


def _region(cls: RelatedClassification, extra=None) -> dict:
    out = {"kind": "box-or-list", "count": _observed_count(cls)}
    if extra:
        out.update(extra)
    return out


def _verdict(theorem_id, holds, bound, observed, case, region, trace, notes=None):
    return TheoremVerdict(
        theorem_id=theorem_id,
        hypothesis_holds=holds,
        bound=bound if holds else None,
        observed=observed,
        passed=(observed <= bound) if holds else None,
        case=case,
        search_region=region,
        exact_trace=trace,
        notes=notes or {},
    )


def check_T1_3(form: DiagForm, h: int, cls: RelatedClassification) -> TheoremVerdict:
    r = form.r
    if r < 6:
        raise ParameterError("degree must be >= 6")
    den = r * r - 5 * r - 2
    trace: list = []
    holds = _dp_threshold_check(
        form, h,
        Fraction(13 * r * r * (r - 1), den),
        Fraction(4 * (r - 1) * (r * r - r + 2), den),
        trace, "delta_prime_vs_threshold",
    )
    case = case_of(form)
    return _verdict("T1_3", holds, bound_table("T1_3", r, case), _observed_count(cls),
                    case, _region(cls), trace)


def _t14_exponents(r: int, m: int):
    big_m = (r - 1) ** (m - 1) - 2 * r - 1
    if big_m <= 0:
        raise ParameterError("(r-1)^(m-1) - 2r - 1 must be positive")
    return (Fraction(7 * r * r * (r - 1), big_m),
            Fraction((r - 1) * (r * r + r + 2), big_m))


def check_T1_4(form: DiagForm, h: int, m: int, cls: RelatedClassification) -> TheoremVerdict:
    r = form.r
    if r < 5 or m < 3:
        raise ParameterError("need r >= 5 and m >= 3")
    a1, a2 = _t14_exponents(r, m)
    trace: list = []
    holds = _dp_threshold_check(form, h, a1, a2, trace, "delta_prime_vs_threshold")
    case = case_of(form)
    return _verdict(f"T1_4(m={m})", holds, bound_table("T1_4", r, case, m=m),
                    _observed_count(cls), case, _region(cls), trace)


def check_C1_5(form: DiagForm, h: int, cls: RelatedClassification) -> TheoremVerdict:
    r = form.r
    if r < 5:
        raise ParameterError("degree must be >= 5")
    trace: list = []
    holds = _dp_threshold_check(
        form, h,
        Fraction(7 * r * (r - 1), r - 4),
        Fraction((r - 1) * (r * r + r + 2), r * (r - 4)),
        trace, "delta_prime_vs_threshold",
    )
    case = case_of(form)
    return _verdict("C1_5", holds, bound_table("C1_5", r, case), _observed_count(cls),
                    case, _region(cls), trace)


_SIEGEL_C = {1: mpq(41678, 913), 2: mpq(27632, 4583), 3: mpq(12681, 167)}


def check_T2_1(form: DiagForm, h: int, l: int, cls: RelatedClassification) -> TheoremVerdict:
    r = form.r
    if l not in (1, 2, 3) or r < 6 - l:
        raise ParameterError("need l in {1,2,3} and r >= 6 - l")
    c_l = _SIEGEL_C[l]
    exp = Fraction(int(c_l.numerator), int(c_l.denominator)) * Fraction(r) ** (2 - l)
    dp = delta_prime(form, h)
    lhs = PowProd.of(dp)
    rhs = PowProd.of(mpq(r) ** 4 * h, exp)
    trace: list = []
    holds = lhs.cmp(rhs) > 0
    _trace(trace, "delta_prime_vs_siegel_threshold", lhs, ">", rhs, holds)
    case = case_of(form)
    return _verdict(f"T2_1(l={l})", holds, bound_table("T2_1", r, case, l=l),
                    _observed_count(cls), case, _region(cls), trace)


def _eps_window_low(r: int, m: int) -> mpq:
    return mpq(r * r + r + 2, 4 * (r - 1) * ((r - 1) ** (m - 1) - 2 * r - 1))


def _ceil_log_ratio(inv4eps: mpq, base: int, bits: int = 64) -> int:
    """ceil(log(inv4eps) / log(base)) with symbolic exact-power fallback."""
    power = mpq(1)
    t = 0
    while power < inv4eps:
        power *= base
        t += 1
    if power == inv4eps:
        return t
    while bits <= 1 << 16:
        num = log_interval(inv4eps, bits)
        den = log_interval(mpq(base), bits)
        x = num / den
        lo_c = -((-x.lo.numerator) // x.lo.denominator)   # ceil of endpoints
        hi_c = -((-x.hi.numerator) // x.hi.denominator)
        if lo_c == hi_c:
            return int(lo_c)
        bits *= 2
    raise ParameterError("log-ratio ceiling did not stabilize")


def check_C1_6(form: DiagForm, h: int, epsilon, cls: RelatedClassification) -> TheoremVerdict:
    r = form.r
    eps = mpq(epsilon)
    if not 0 < eps < mpq(1, 2 * (r - 1)):
        raise ParameterError("epsilon must satisfy 0 < eps < 1/(2(r-1))")
    m = 3
    while _eps_window_low(r, m) >= eps:
        m += 1
        if m > 10_000:
            raise ParameterError("no admissible m for this epsilon")
    eps_frac = Fraction(int(eps.numerator), int(eps.denominator))
    lhs = PowProd.of(mpq(h)) * PowProd.of(mpq(2), Fraction(r, 2)) * PowProd.of(mpq(r), 7)
    rhs = PowProd.of(abs(form.j_power) * mpq(form.r) ** form.r,
                     Fraction(1, 2 * (r - 1)) - eps_frac)
    trace: list = []
    holds = lhs.cmp(rhs) <= 0
    _trace(trace, "h_vs_disc_power", lhs, "<=", rhs, holds)
    case = case_of(form)
    if case == "D<0":
        ceil_val = _ceil_log_ratio(1 / (4 * eps), r - 1)
        bound = (4 + ceil_val) * r
        notes = {"m": m, "ceil_term": ceil_val}
    else:
        bound = bound_table("C1_6", r, case, m=m)
        notes = {"m": m}
    return _verdict(f"C1_6(eps={rat_str(eps)})", holds, bound, _observed_count(cls),
                    case, _region(cls), trace, notes)


def check_T1_7(form: DiagForm, h: int, m: int, cls: RelatedClassification) -> TheoremVerdict:
    r = form.r
    if not (form.D < 0 and is_reduced(form)):
        raise ParameterError("need a reduced form with D < 0")
    if r < 6 or m < 2:
        raise ParameterError("need r >= 6 and m >= 2")
    j_pow = abs(form.j_power)
    rr1 = Fraction(r * (r - 1))
    i1 = Fraction(2 * r + 2, r)
    i2 = Fraction(1, r - 2) + Fraction(r - 3, (r - 2) * (r - 1) ** (m - 1))
    j_ge_1 = j_pow >= 1
    i3 = Fraction(0) if j_ge_1 else Fraction(r, 2 * (r - 2))
    y_l = (
        PowProd.of(mpq(r), i1)
        * PowProd.of(mpq(h), i2)
        * PowProd.of(j_pow, -i3 / rr1)
    )
    trace: list = []
    filtered = 0
    for rec in cls.all_records():
        if rec.y >= 1 and PowProd.of(mpq(rec.y)).cmp(y_l) >= 0:
            filtered += 1
    _trace(trace, "y_filter", PowProd.of(mpq(1)), ">=", y_l, True)
    bound = m * r
    if "bound-off-by-one" in faults.active:
        bound -= 1
    return _verdict(f"T1_7(m={m})", True, bound, filtered, "D<0",
                    _region(cls, {"filter": "y >= Y_L", "j_ge_1": j_ge_1}), trace)


def check_T1_8(form: DiagForm, h: int, m: int, cls: RelatedClassification) -> TheoremVerdict:
    r = form.r
    if r < 5 or m < 3:
        raise ParameterError("need r >= 5 and m >= 3")
    j_pow = abs(form.j_power)
    rr1 = Fraction(r * (r - 1))
    pw = (r - 1) ** (m - 1)
    i4 = Fraction(5) + Fraction(11 * r - 3, pw)
    i5 = Fraction(2) + Fraction(2 * (r - 3), pw)
    j_ge_1 = j_pow >= 1
    i6 = Fraction(2) if j_ge_1 else Fraction(2, (r - 3) * pw)
    h_l = (
        PowProd.of(mpq(r), i4)
        * PowProd.of(mpq(h), i5)
        * PowProd.of(j_pow, i6 / rr1)
    )
    trace: list = []
    filtered = 0
    for rec in cls.all_records():
        if rec.hessian != 0 and PowProd.of(mpq(abs(rec.hessian))).cmp(h_l) >= 0:
            filtered += 1
    _trace(trace, "hessian_filter", PowProd.of(mpq(1)), ">=", h_l, True)
    case = case_of(form)
    return _verdict(f"T1_8(m={m})", True, bound_table("T1_8", r, case, m=m), filtered,
                    case, _region(cls, {"filter": "|H| >= H_L", "j_ge_1": j_ge_1}), trace)


def check_T1_9(form: DiagForm, h: int, cls: RelatedClassification) -> TheoremVerdict:
    r = form.r
    if r < 5:
        raise ParameterError("degree must be >= 5")
    trace: list = []
    abs_disc = abs(form.j_power) * mpq(r) ** r
    lhs = PowProd.of(abs_disc)
    rhs = PowProd.of(mpq(2), r * r - r) * PowProd.of(mpq(r), Fraction(r) + Fraction(7 * r * (r - 1), r - 4))
    size_ok = lhs.cmp(rhs) >= 0
    _trace(trace, "disc_size", lhs, ">=", rhs, size_ok)
    gcd_ok = math.gcd(h, int(mpz((abs_disc).numerator))) == 1
    holds = size_ok and gcd_ok
    observed = sum(1 for rec in cls.all_records() if abs(rec.f_value) == h)
    w = omega(h)
    case = case_of(form)
    return _verdict("T1_9", holds, bound_table("T1_9", r, case, w=w), observed, case,
                    _region(cls, {"filter": "|F| = h"}), trace, {"omega_h": w, "gcd_ok": gcd_ok})


def check_T1_1(a: int, b: int, c: int, r: int, y_max: int = 10_000) -> TheoremVerdict:
    if min(a, b, c) < 1 or r < 5:
        raise ParameterError("need a, b, c >= 1 and r >= 5")
    trace: list = []
    lhs = PowProd.of(mpq(a) * b)
    rhs = (
        PowProd.of(mpq(2), r)
        * PowProd.of(mpq(r), Fraction(7 * r, r - 4))
        * PowProd.of(mpq(c), Fraction(2) + Fraction(r * r + r + 2, r * (r - 4)))
    )
    holds = lhs.cmp(rhs) >= 0
    _trace(trace, "ab_vs_threshold", lhs, ">=", rhs, holds)
    recs = enumerate_binomial_convergents(a, b, r, c, y_max)
    observed = len(recs)
    bound = 3 - (1 if "bound-off-by-one" in faults.active else 0)
    return TheoremVerdict(
        theorem_id="T1_1",
        hypothesis_holds=holds,
        bound=bound if holds else None,
        observed=observed,
        passed=(observed <= bound) if holds else None,
        case="binomial_positive",
        search_region={"kind": "convergents", "y_max": y_max},
        exact_trace=trace,
        notes={"a": str(a), "b": str(b), "c": str(c)},
    )


def check_T1_2(a: int, b: int, c: int, r: int, y_max: int = 10_000) -> TheoremVerdict:
    if min(a, b, c) < 1 or r < 5:
        raise ParameterError("need a, b, c >= 1 and r >= 5")
    trace: list = []
    gcd_ok = math.gcd(c, r * a * b) == 1
    lhs = PowProd.of(mpq(a) * b)
    rhs_strong = PowProd.of(mpq(2), r) * PowProd.of(mpq(r), Fraction(1826, 10) * Fraction(r, r - 1))
    rhs_weak = PowProd.of(mpq(2), r) * PowProd.of(mpq(r), Fraction(7 * r, r - 4))
    strong = lhs.cmp(rhs_strong) >= 0
    weak = lhs.cmp(rhs_weak) >= 0
    _trace(trace, "ab_vs_strong_threshold", lhs, ">=", rhs_strong, strong)
    _trace(trace, "ab_vs_weak_threshold", lhs, ">=", rhs_weak, weak)
    holds = gcd_ok and (strong or weak)
    w = omega(c)
    bound = (2 if strong else 3) * r ** w if holds else None
    if bound is not None and "bound-off-by-one" in faults.active:
        bound -= 1
    recs = enumerate_binomial_convergents(a, b, r, c, y_max)
    observed = sum(1 for rec in recs if rec.f_value == c)
    return TheoremVerdict(
        theorem_id="T1_2",
        hypothesis_holds=holds,
        bound=bound,
        observed=observed,
        passed=(observed <= bound) if holds else None,
        case="binomial_positive_equation",
        search_region={"kind": "convergents", "y_max": y_max},
        exact_trace=trace,
        notes={"gcd_ok": gcd_ok, "omega_c": w, "strong": strong, "weak": weak},
    )
