"""Primitive-solution enumeration and the exact gap-principle audits.

Enumeration is box-relative (or convergent-certified for binomials in the
positive quadrant); every reported solution is verified with exact integer
arithmetic.  Gap inequalities are decided by clearing all fractional
exponents to a common integer power, so each audit line is a single exact
sign test in Q(sqrt(D)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from gmpy2 import iroot, mpq, mpz

from .exactnum import (
    PowProd,
    PrecisionExhaustedError,
    QuadElem,
    arg_interval,
    exact_cmp,
    exact_str,
    pi_interval,
    rat_root_interval,
    rational_nth_root,
)
from .forms import DiagForm, eval_form, eval_xi_eta, hessian_value, is_reduced

_EPS = mpq(1, 2**52)


@dataclass(eq=False)
class SolutionRecord:
    """One primitive solution with its exact analytic data."""

    x: int
    y: int
    f_value: mpz
    xi: QuadElem
    eta: QuadElem
    xi_abs_sq: object      # mpq, or QuadElem when D > 0 nonsquare
    eta_abs_sq: object
    zeta_sq: object
    z_pow_2r: object       # Z^(2r) = max(|xi|^2, |eta|^2)
    hessian: mpz
    related_index: int | None = None
    related_tie: bool = False
    tie_pair: tuple | None = None
    decided_bits: int = 0

    def key(self):
        return (self.x, self.y)

    def __repr__(self):
        return f"({self.x},{self.y}|F={self.f_value})"


def make_record(form: DiagForm, x: int, y: int) -> SolutionRecord:
    fv = eval_form(form, x, y)
    xi, eta = eval_xi_eta(form, x, y)
    xa = xi.abs_square()
    ea = eta.abs_square()
    z2r = xa if exact_cmp(xa, ea) >= 0 else ea
    zeta_sq = mpq(fv) ** 2 / z2r if not isinstance(z2r, QuadElem) else QuadElem(mpq(fv) ** 2) / z2r
    return SolutionRecord(
        x=x, y=y, f_value=fv, xi=xi, eta=eta,
        xi_abs_sq=xa, eta_abs_sq=ea, zeta_sq=zeta_sq, z_pow_2r=z2r,
        hessian=hessian_value(form, x, y),
    )


def canonical(x: int, y: int):
    """Fold (x, y) ~ (-x, -y) to y > 0, or x > 0 when y = 0."""
    if y < 0 or (y == 0 and x < 0):
        return -x, -y
    return x, y


def _to_float(c):
    # coefficients beyond float range degrade the prefilter to exact scans
    try:
        return float(c)
    except OverflowError:
        return float("inf") if c > 0 else float("-inf")


# ---------------------------------------------------------------------------
# Box enumeration
# ---------------------------------------------------------------------------


def enumerate_box(form: DiagForm, h: int, x_bound: int, y_bound: int):
    """All primitive canonical (x, y) in the box with 0 < |F(x,y)| <= h.

    A float prefilter with a rigorous Horner error bound proposes
    candidates; every candidate is verified exactly, and rows that
    overflow the prefilter fall back to exact scanning.
    """
    if h < 1 or x_bound < 1 or y_bound < 1:
        raise ValueError("h and bounds must be >= 1")
    out = []
    if 0 < abs(form.coeffs[0]) <= h:
        out.append(make_record(form, 1, 0))

    xs = np.arange(-x_bound, x_bound + 1, dtype=np.float64)
    abs_xs = np.abs(xs)
    cf = [_to_float(c) for c in form.coeffs]
    acf = [abs(v) for v in cf]
    r = form.r
    with np.errstate(over="ignore", invalid="ignore"):
        for y in range(1, y_bound + 1):
            val = np.full_like(xs, cf[0])
            mag = np.full_like(xs, acf[0])
            ypow = 1.0
            for i in range(1, r + 1):
                ypow *= y
                val = val * xs + cf[i] * ypow
                mag = mag * abs_xs + acf[i] * ypow
            err = mag * float(_EPS) * (2 * r + 2)
            thresh = h + err
            safe = np.isfinite(val) & np.isfinite(thresh)
            cand = np.where(~safe | ~(np.abs(val) > thresh))[0]
            for idx in cand:
                x = int(xs[idx])
                if math.gcd(abs(x), y) != 1:
                    continue
                fv = eval_form(form, x, y)
                if 0 < abs(fv) <= h:
                    out.append(make_record(form, x, y))
    out.sort(key=lambda rec: (rec.y, rec.x))
    return out


# ---------------------------------------------------------------------------
# Convergent-accelerated enumeration for binomials, positive quadrant
# ---------------------------------------------------------------------------


def _ceil_div(a, b):
    return -((-a) // b)


def _x_range_for_y(a, b, r, h, y):
    """Integer x with b*y^r - h <= a*x^r <= b*y^r + h, x >= 1 (exact)."""
    target = mpz(b) * mpz(y) ** r
    hi_num = target + h
    lo_num = target - h
    x_hi = iroot(hi_num // a, r)[0]
    if x_hi < 1:
        return range(0)
    if lo_num <= a:
        x_lo = mpz(1)
    else:
        x_lo = iroot(lo_num // a, r)[0]
        while a * x_lo ** r < lo_num:
            x_lo += 1
    return range(int(max(1, x_lo)), int(x_hi) + 1)


def continued_fraction_convergents(b: int, a: int, r: int, q_limit: int, bits_budget: int = 1 << 16):
    """Convergents (p, q) of (b/a)^(1/r) with q <= q_limit, certified digits.

    Raises PrecisionExhaustedError (carrying the attained depth) if the
    bit budget cannot separate a partial quotient from an integer.
    """
    theta = mpq(b, a)
    digits = []
    bits = 128
    while bits <= bits_budget:
        enc = rat_root_interval(theta, r, bits)
        digits = []
        cur = enc
        ok = True
        p2, p1 = mpz(0), mpz(1)
        q2, q1 = mpz(1), mpz(0)
        convergents = []
        while True:
            lo_f = cur.lo.numerator // cur.lo.denominator
            hi_f = cur.hi.numerator // cur.hi.denominator
            if lo_f != hi_f:
                ok = False
                break
            ak = lo_f
            digits.append(int(ak))
            p2, p1 = p1, ak * p1 + p2
            q2, q1 = q1, ak * q1 + q2
            if q1 > q_limit:
                return convergents
            convergents.append((int(p1), int(q1)))
            frac = cur - ak
            if frac.lo <= 0:
                ok = False
                break
            cur = frac.reciprocal()
        if ok:
            return convergents
        bits *= 2
    raise PrecisionExhaustedError(
        f"continued fraction stalled after {len(digits)} digits", bits=bits_budget
    )


def enumerate_binomial_convergents(a: int, b: int, r: int, h: int, y_max: int, bits_budget: int = 1 << 16):
    """All positive primitive solutions of 0 < |a x^r - b y^r| <= h, y <= y_max.

    Complete by the classical convergent criterion: beyond an explicitly
    computed crossover, |x/y - (b/a)^(1/r)| < 1/(2y^2), so x/y must be a
    convergent; below it, x ranges over exact integer-root windows.
    """
    if min(a, b, h, y_max) < 1:
        raise ValueError("a, b, h, y_max must be >= 1")
    found = {}

    def try_pair(x, y):
        if (x, y) in found or math.gcd(x, y) != 1:
            return
        fv = mpz(a) * mpz(x) ** r - mpz(b) * mpz(y) ** r
        if 0 < abs(fv) <= h:
            found[(x, y)] = True

    theta_rat = rational_nth_root(mpq(b, a), r)
    if theta_rat is not None:
        # rational slope p/q: any solution keeps |x/y - p/q| >= 1/(qy),
        # so y^(r-1) <= q h / (a theta^(r-1)) bounds an exhaustive band
        qden = theta_rat.denominator
        band = PowProd.of(mpq(qden) * h) * PowProd.of(mpq(a), -1) * PowProd.of(theta_rat, -(r - 1))
        y_cut = _powprod_floor_frac(band, r - 1)
        for y in range(1, min(y_max, y_cut) + 1):
            for x in _x_range_for_y(a, b, r, h, y):
                try_pair(x, y)
        return _records_sorted(found, a, b, r)

    # crossover: y^(r-2) > 2h / (a^(1/r) b^((r-1)/r)) forces convergents
    from fractions import Fraction

    cross = (
        PowProd.of(mpq(2 * h))
        * PowProd.of(mpq(a), Fraction(-1, r))
        * PowProd.of(mpq(b), Fraction(-(r - 1), r))
    )
    y_cut = _powprod_floor_frac(cross, r - 2) + 1
    for y in range(1, min(y_max, y_cut) + 1):
        for x in _x_range_for_y(a, b, r, h, y):
            try_pair(x, y)
    if y_max > y_cut:
        for p, q in continued_fraction_convergents(b, a, r, y_max, bits_budget):
            if p >= 1 and q >= 1:
                try_pair(p, q)
    return _records_sorted(found, a, b, r)


def _powprod_floor_frac(prod: PowProd, root: int) -> int:
    """floor(value^(1/root)) for a positive PowProd, certified."""
    from fractions import Fraction

    target = prod ** Fraction(1, root)
    bits = 64
    while True:
        enc = target.interval(bits)
        lo_f = enc.lo.numerator // enc.lo.denominator
        hi_f = enc.hi.numerator // enc.hi.denominator
        if lo_f == hi_f:
            return int(lo_f)
        if hi_f - lo_f == 1:
            # the value may equal hi_f exactly; settle with an exact compare
            return int(hi_f) if target.cmp_rational(int(hi_f)) >= 0 else int(lo_f)
        bits *= 2


def _records_sorted(found, a, b, r):
    from .forms import make_binomial

    form = make_binomial(a, b, r)
    recs = [make_record(form, x, y) for (x, y) in sorted(found)]
    recs.sort(key=lambda rec: (rec.y, rec.x))
    return recs


# ---------------------------------------------------------------------------
# Related-root classification
# ---------------------------------------------------------------------------


@dataclass
class RelatedClassification:
    """Solutions grouped by related r-th root of unity (index k in [0, r))."""

    r: int
    groups: dict = field(default_factory=dict)       # k -> S_omega sorted by zeta desc
    sprime: dict = field(default_factory=dict)       # k -> S'_omega (max-zeta removed)
    excluded: dict = field(default_factory=dict)     # k -> the removed record
    ties: list = field(default_factory=list)
    undecided: list = field(default_factory=list)
    max_bits: int = 0

    def all_records(self):
        for grp in self.groups.values():
            yield from grp


def zeta_cmp(r1: SolutionRecord, r2: SolutionRecord) -> int:
    # zeta1^2 vs zeta2^2 == F1^2 * Z2^(2r) vs F2^2 * Z1^(2r)
    lhs = mpq(r1.f_value) ** 2 * r2.z_pow_2r
    rhs = mpq(r2.f_value) ** 2 * r1.z_pow_2r
    return exact_cmp(lhs, rhs)


def _order_key(rec: SolutionRecord):
    return (abs(rec.y), abs(rec.x), 0 if rec.x >= 0 else 1)


def _sort_group(group):
    import functools

    def cmp(a, b):
        z = zeta_cmp(a, b)
        if z:
            return -z  # descending zeta
        ka, kb = _order_key(a), _order_key(b)
        return -1 if ka < kb else (1 if ka > kb else 0)

    group.sort(key=functools.cmp_to_key(cmp))


def _tie_choice(k_low: int, k_high: int, r: int, tie_break: str) -> int:
    pair = sorted((k_low % r, k_high % r))
    return pair[0] if tie_break == "low" else pair[1]


def _classify_real(form: DiagForm, rec: SolutionRecord, tie_break: str):
    """Exact related index for D > 0 (or square D): z = c0 * w is real."""
    r = form.r
    ratio = form.kappa_u / form.kappa_v
    lu = form.line_u(rec.x, rec.y)
    lv = form.line_v(rec.x, rec.y)
    if not lv:
        return 0, False, None           # v = 0: documented convention
    if not lu:
        return 0, True, (0, 0)          # u = 0: all roots equidistant
    s_w = lu.sign() * lv.sign()
    s_ratio = ratio.sign()
    if r % 2 == 1 or s_ratio > 0:
        s_c0 = s_ratio if r % 2 == 1 else 1
        s_z = s_c0 * s_w
        if s_z > 0:
            return 0, False, None
        if r % 2 == 0:
            return r // 2, False, None   # -1 is itself an r-th root of unity
        pair = ((r - 1) // 2, (r + 1) // 2)
        return _tie_choice(*pair, r, tie_break), True, pair
    # r even, ratio < 0 (definite-type): arg(c0) = pi/r, z sits midway
    if s_w > 0:
        pair = (0, 1)
    else:
        pair = (r // 2, r // 2 + 1)
    return _tie_choice(*pair, r, tie_break), True, pair


def _classify_complex(form: DiagForm, rec: SolutionRecord, bits_budget: int, tie_break: str):
    """Certified related index for D < 0 via tau = (arg(kappa ratio) + r*arg(w)) / 2pi."""
    r = form.r
    lu = form.line_u(rec.x, rec.y)
    lv = form.line_v(rec.x, rec.y)
    if not lv:
        return 0, False, None, 0
    if not lu:
        return 0, True, (0, 0), 0
    ratio = form.kappa_u / form.kappa_v
    w = lu / lv
    exact_tie = not (rec.xi + rec.eta)   # arg(xi/eta) = pi exactly
    bits = 64
    bits_budget = max(bits_budget, 128)
    tau = None
    while bits <= bits_budget:
        two_pi = pi_interval(bits) * 2
        tau = (arg_interval(ratio, bits) + arg_interval(w, bits) * r) / two_pi
        lo_r = _floor_q(tau.lo + mpq(1, 2))
        hi_r = _floor_q(tau.hi + mpq(1, 2))
        if lo_r == hi_r and not exact_tie:
            return int(lo_r) % r, False, None, bits
        if exact_tie and tau.width() < mpq(1, 2):
            # true tau is an exact half-integer m + 1/2 inside the enclosure
            m = _floor_q((tau.lo + tau.hi) / 2)
            pair = (int(m) % r, int(m + 1) % r)
            return _tie_choice(*pair, r, tie_break), True, pair, bits
        bits *= 2
    # budget exhausted: flag and break deterministically low
    lo_r = _floor_q(tau.lo + mpq(1, 2))
    pair = (int(lo_r) % r, int(lo_r + 1) % r)
    return _tie_choice(*pair, r, tie_break), True, pair, -bits_budget


def _floor_q(q: mpq):
    return q.numerator // q.denominator


def classify(form: DiagForm, sols, bits_budget: int = 4096, tie_break: str = "low") -> RelatedClassification:
    """Group solutions into S_omega classes and split off the max-zeta element."""
    cls = RelatedClassification(r=form.r)
    for rec in sols:
        if form.D > 0 or form.D == 0:
            k, tie, pair = _classify_real(form, rec, tie_break)
            bits = 0
        else:
            k, tie, pair, bits = _classify_complex(form, rec, bits_budget, tie_break)
            if bits < 0:
                cls.undecided.append(rec)
                bits = -bits
        rec.related_index = k
        rec.related_tie = tie
        rec.tie_pair = pair
        rec.decided_bits = bits
        cls.max_bits = max(cls.max_bits, bits)
        if tie:
            cls.ties.append(rec)
        cls.groups.setdefault(k, []).append(rec)
    for k, grp in cls.groups.items():
        _sort_group(grp)
        cls.excluded[k] = grp[0]
        cls.sprime[k] = grp[1:]
    return cls


# ---------------------------------------------------------------------------
# Gap-principle audits
# ---------------------------------------------------------------------------


@dataclass
class GapAuditReport:
    form_repr: str
    h: int
    checks: list = field(default_factory=list)
    all_passed: bool = True
    counts: dict = field(default_factory=dict)

    def add(self, name, subject, lhs, rhs, passed, relation=">="):
        self.checks.append({
            "name": name,
            "subject": subject,
            "lhs": exact_str(lhs) if not isinstance(lhs, str) else lhs,
            "relation": relation,
            "rhs": exact_str(rhs) if not isinstance(rhs, str) else rhs,
            "passed": bool(passed),
        })
        if not passed:
            self.all_passed = False
        self.counts[name] = self.counts.get(name, 0) + 1


def _ge(lhs, rhs, flip=False) -> bool:
    c = exact_cmp(lhs, rhs)
    return (c <= 0) if flip else (c >= 0)


def _lt(lhs, rhs) -> bool:
    return exact_cmp(lhs, rhs) < 0


def gap_audit(form: DiagForm, h: int, cls: RelatedClassification, fault_gap_flip: bool = False) -> GapAuditReport:
    """Exact audit of the growth inequalities on an enumerated classification.

    fault_gap_flip intentionally negates the main gap comparison; it exists
    so the harness can prove it detects its own corruption.
    """
    r = form.r
    rep = GapAuditReport(form_repr=repr(form), h=h)
    j_pow = abs(form.j_power)            # |j|^(r(r-1)) = |Delta| / r^r
    j_sq_pow = j_pow ** 2
    records = sorted(cls.all_records(), key=lambda rec: (rec.y, rec.x))
    if not records:
        return rep

    # global max-zeta solution (x0, y0)
    best = records[0]
    for rec in records[1:]:
        if zeta_cmp(rec, best) > 0:
            best = rec
    zeta0_ge_1 = exact_cmp(best.zeta_sq, 1) >= 0

    for rec in records:
        if rec is best:
            continue
        lhs = (rec.z_pow_2r * mpq(2) ** r * h * h) ** (2 * (r - 1))
        rep.add("Z_lower_sqrt_j", rec.key(), lhs, j_sq_pow, _ge(lhs, j_sq_pow))
        if zeta0_ge_1:
            lhs2 = (rec.z_pow_2r * mpq(2) ** (2 * r) * h * h) ** (r - 1)
            rep.add("Z_lower_j", rec.key(), lhs2, j_sq_pow, _ge(lhs2, j_sq_pow))
            for nu in (1, 2, r):
                hyp = j_pow > mpq(2) ** (r * (r - 1) + nu * (r - 1)) * mpq(h) ** (2 * (r - 1))
                if hyp:
                    lhs3 = rec.zeta_sq * mpq(2) ** (2 * nu)
                    rep.add(f"zeta_decay_nu{nu}", rec.key(), lhs3, 1, _lt(lhs3, 1), relation="<")

    if form.definite:
        for rec in records:
            rep.add("definite_zeta_ge_1", rec.key(), rec.zeta_sq, 1, exact_cmp(rec.zeta_sq, 1) >= 0)
        if j_pow > mpq(2) ** (r * (r - 1)) * mpq(h) ** (2 * (r - 1)):
            rep.add("definite_at_most_one", "box", len(records), 1, len(records) <= 1, relation="<=")

    if form.D < 0 and is_reduced(form):
        bound = form.chi_r ** 2 * mpq(3 * abs(form.D)) ** r / mpq(2) ** (4 * r)
        for rec in records:
            if rec.y != 0:
                lhs = rec.xi_abs_sq ** 2
                rhs = bound * mpq(rec.y) ** (4 * r)
                rep.add("reduced_uv_lower", rec.key(), lhs, rhs, _ge(lhs, rhs))

    for k, sp in cls.sprime.items():
        if len(sp) >= 2:
            for rec in sp:
                lhs = (rec.z_pow_2r * mpq(2) ** (2 * r) * h * h) ** (r - 1)
                rep.add("sprime_Z_lower_j", (k, rec.key()), lhs, j_sq_pow, _ge(lhs, j_sq_pow))
        for i in range(1, len(sp)):
            prev, cur = sp[i - 1], sp[i]
            if exact_cmp(prev.zeta_sq, 1) >= 0:
                continue
            lhs = cur.z_pow_2r ** (r - 1) * mpq(2 * h) ** (2 * r * (r - 1))
            rhs = j_sq_pow * prev.z_pow_2r ** ((r - 1) * (r - 1))
            rep.add("gap_consecutive", (k, prev.key(), cur.key()), lhs, rhs,
                    _ge(lhs, rhs, flip=fault_gap_flip))
        kk = len(sp)
        if kk >= 2 and exact_cmp(sp[0].zeta_sq, 1) < 0:
            big_r = (r - 1) ** (kk - 1)
            lhs = (
                PowProd.of(sp[-1].z_pow_2r, (r - 1) * (r - 2))
                * PowProd.of(mpq(2 * h), 2 * r * (r - 1) * (big_r - 1))
            )
            rhs = (
                PowProd.of(j_pow, 2 * (big_r - 1))
                * PowProd.of(sp[0].z_pow_2r, (r - 1) * (r - 2) * big_r)
            )
            rep.add("gap_chain", (k, kk), lhs.describe(), rhs.describe(),
                    lhs.cmp(rhs) >= 0)

    for k, grp in cls.groups.items():
        decreasing = [rec for rec in grp if exact_cmp(rec.zeta_sq, 1) < 0]
        t = len(decreasing)
        if t >= 3:
            big_r = (r - 1) ** (t - 2)        # R(t-1)
            exp2 = r * (r - 1) * (big_r - 1) + (r - 2) * (r - 1)
            hyp_lhs = PowProd.of(j_pow, big_r - 1)
            hyp_rhs = PowProd.of(mpq(2), exp2) * PowProd.of(mpq(h), 2 * (r - 1) * (big_r - 1))
            if hyp_lhs.cmp(hyp_rhs) > 0:
                lhs = decreasing[t - 2].zeta_sq * 4
                rep.add("zeta_half", (k, t), lhs, 1, _lt(lhs, 1), relation="<")

    return rep
