"""Paired-solution algebraic numbers Sigma_{n,g}, Lambda_{n,g} and their laws.

Lambda_{n,0} lies in the integer ring O of Q(sqrt(D)) and is assembled
here *exactly*, using the rearrangement through (2/chi) u_i v_j products
(each equal to 2 t * line products, with t the integer scaling of the
quadratic part).  Lambda_{n,1} factors as (fixed r-th root of kappa) *
(exact element of Q(sqrt(D))), so Lambda_{n,1}^r is exact as well.  The
product law |Lambda Lambda~| >= 1, the nonvanishing alternative, and
both integrality statements are therefore decided with no intervals at
all; certified-interval Sigma/Lambda evaluation is kept alongside as the
refinable surface and as a cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from gmpy2 import mpq, mpz

from .exactnum import (
    ComplexInterval,
    DomainError,
    PowProd,
    QuadElem,
    RealInterval,
    complex_root_interval,
    exact_cmp,
    quad_complex_interval,
    rat_root_interval,
)
from .forms import DiagForm, InconsistencyError
from .pade import build as pade_build
from .pade import homogeneous_eval, remainder_envelope
from .solver import SolutionRecord, zeta_cmp


@dataclass(eq=False)
class PairContext:
    """Two solutions related to one root of unity, with the (X, Y) assignment."""

    form: DiagForm
    sol1: SolutionRecord
    sol2: SolutionRecord
    swapped: bool          # True when (X1, Y1) = (v1, u1)
    lx1: QuadElem          # X-side line value of sol1
    ly1: QuadElem
    lx2: QuadElem
    ly2: QuadElem
    x1r: QuadElem          # X1^r (= xi1 or eta1)
    y1r: QuadElem
    z1: QuadElem           # 1 - Y1^r / X1^r
    z1_tilde: QuadElem
    kap_x: QuadElem        # kappa whose fixed r-th root scales the X side
    kap_y: QuadElem


def _field_is_rational(form: DiagForm) -> bool:
    from gmpy2 import is_square

    return form.D > 0 and is_square(mpz(form.D))


def make_pair_context(form: DiagForm, sol1: SolutionRecord, sol2: SolutionRecord) -> PairContext:
    l1, lt1 = form.line_u(sol1.x, sol1.y), form.line_v(sol1.x, sol1.y)
    l2, lt2 = form.line_u(sol2.x, sol2.y), form.line_v(sol2.x, sol2.y)
    if not (l1 and lt1):
        raise DomainError("X1 Y1 = 0")
    if not (l2 and lt2):
        raise DomainError("X2 Y2 = 0")
    swapped = exact_cmp(sol1.xi_abs_sq, sol1.eta_abs_sq) < 0
    if not swapped:
        lx1, ly1, lx2, ly2 = l1, lt1, l2, lt2
        x1r, y1r = sol1.xi, sol1.eta
        kap_x, kap_y = form.kappa_u, form.kappa_v
    else:
        lx1, ly1, lx2, ly2 = lt1, l1, lt2, l2
        x1r, y1r = sol1.eta, sol1.xi
        kap_x, kap_y = form.kappa_v, form.kappa_u
    z1 = QuadElem(1) - y1r / x1r
    z1_tilde = QuadElem(1) - x1r / y1r
    return PairContext(form, sol1, sol2, swapped, lx1, ly1, lx2, ly2,
                       x1r, y1r, z1, z1_tilde, kap_x, kap_y)


# ---------------------------------------------------------------------------
# Exact Lambda values
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExactLambda:
    """Lambda_{n,g} in closed exact form.

    g = 0: value = Lambda itself (element of Q(sqrt(D))).
    g = 1: Lambda = kappa_root^(1/r) * value, so Lambda^r = kappa_root * value^r.
    """

    n: int
    g: int
    value: QuadElem
    kappa_root: QuadElem   # QuadElem(1) when g = 0

    def is_zero(self) -> bool:
        return not self.value

    def power_r(self, r: int) -> QuadElem:
        """Lambda^r, exact. (g=0: value^r; g=1: kappa_root * value^r.)"""
        return self.kappa_root * self.value ** r


def _star_values(ctx: PairContext, n: int, g: int, tilde: bool):
    form = ctx.form
    r = form.r
    sd = QuadElem.sqrt_of(form.D)
    scale = sd * (r * r * (r - 1))
    base = ctx.y1r if tilde else ctx.x1r
    other = ctx.x1r if tilde else ctx.y1r
    w = scale * base
    wz = scale * (base - other)
    p = pade_build(n, g, r)
    a_star = homogeneous_eval([QuadElem(c) for c in p.a_coeffs], w, wz)
    b_star = homogeneous_eval([QuadElem(c) for c in p.b_coeffs], w, wz)
    return a_star, b_star


def lambda_exact(ctx: PairContext, n: int, g: int, tilde: bool = False) -> ExactLambda:
    """Closed-form Lambda_{n,g} (or its tilde partner) for the pair."""
    form = ctx.form
    r = form.r
    a_star, b_star = _star_values(ctx, n, g, tilde)
    if not tilde:
        lead1, lead2 = ctx.lx1, ctx.ly1
        cross1, cross2 = ctx.lx2, ctx.ly2
        kap_lead, kap_other = ctx.kap_x, ctx.kap_y
    else:
        lead1, lead2 = ctx.ly1, ctx.lx1
        cross1, cross2 = ctx.ly2, ctx.lx2
        kap_lead, kap_other = ctx.kap_y, ctx.kap_x
    if g == 0:
        two_t = 2 * form.t_scale
        val = (lead1 * cross2 * a_star - cross1 * lead2 * b_star) * two_t
        return ExactLambda(n, 0, val, QuadElem(1))
    if g == 1:
        sd = QuadElem.sqrt_of(form.D)
        term1 = sd * (r * (r - 1)) * cross2 * a_star
        term2 = (
            QuadElem(form.D)
            * (r ** 3 * (r - 1) ** 2)
            * kap_lead
            * lead1 ** (r - 1)
            * cross1
            * lead2
            * b_star
        )
        return ExactLambda(n, 1, term1 - term2, kap_other)
    raise ValueError("g must be 0 or 1")


def sigma_is_zero(ctx: PairContext, n: int, g: int) -> bool:
    """Exact vanishing test: Sigma = 0 iff Lambda = 0."""
    return lambda_exact(ctx, n, g).is_zero()


def product_law_check(ctx: PairContext, n: int, g: int) -> dict:
    """Exact audit of the product law |Lambda Lambda~| >= 1 plus integrality.

    Returns status 'sigma_zero' (law not applicable), 'holds', or 'fails',
    with the exact product value.
    """
    form = ctx.form
    r = form.r
    lam = lambda_exact(ctx, n, g)
    if lam.is_zero():
        return {"status": "sigma_zero", "n": n, "g": g}
    lam_t = lambda_exact(ctx, n, g, tilde=True)
    out = {"status": "holds", "n": n, "g": g}
    if g == 0:
        in_ring = lam.value.in_integer_ring() and lam_t.value.in_integer_ring()
        prod = lam.value * lam_t.value
        if not prod.is_rational:
            raise InconsistencyError(f"Lambda*Lambda~ = {prod!r} not rational")
        pr = prod.as_rational()
        out["integral"] = in_ring and pr.denominator == 1
        out["product"] = str(pr)
        out["product_abs_ge_1"] = abs(pr) >= 1
        if not _field_is_rational(form):
            out["conjugate_pair"] = lam_t.value == lam.value.conj()
        if not (out["integral"] and out["product_abs_ge_1"]):
            out["status"] = "fails"
        return out
    # g = 1: work with the exact r-th powers
    lam_r = lam.power_r(r)
    lam_t_r = lam_t.power_r(r)
    out["integral"] = lam_r.in_integer_ring() and lam_t_r.in_integer_ring()
    v = lam_r * lam_t_r            # Lambda^r * Lambda~^r
    if form.D < 0:
        if not v.is_rational:
            raise InconsistencyError("product of conjugate r-th powers not rational")
        ge1 = abs(v.as_rational()) >= 1
        out["product"] = str(v.as_rational())
    else:
        ge1 = (v - 1).sign() >= 0 or (v + 1).sign() <= 0
        out["product"] = repr(v)
    out["product_abs_ge_1"] = ge1
    if not (out["integral"] and ge1):
        out["status"] = "fails"
    return out


def conjugate_magnitude_check(ctx: PairContext, n: int, g: int) -> bool:
    """D < 0: |Lambda| = |Lambda~| exactly (they are complex conjugates)."""
    if ctx.form.D >= 0:
        raise DomainError("conjugate-magnitude law is the D < 0 case")
    lam = lambda_exact(ctx, n, g)
    lam_t = lambda_exact(ctx, n, g, tilde=True)
    if g == 0:
        return lam.value.norm() == lam_t.value.norm()
    r = ctx.form.r
    return (lam.kappa_root.norm() * lam.value.norm() ** r
            == lam_t.kappa_root.norm() * lam_t.value.norm() ** r)


def nonvanishing_check(ctx: PairContext, n: int, big_i: int) -> str:
    """At most one of Sigma_{n,0}, Sigma_{n+I,1} vanishes (exact zeros)."""
    z0 = sigma_is_zero(ctx, n, 0)
    z1 = sigma_is_zero(ctx, n + big_i, 1)
    if z0 and z1:
        return "both_zero"
    if z0:
        return "first_zero"
    if z1:
        return "second_zero"
    return "both_nonzero"


# ---------------------------------------------------------------------------
# Certified-interval surface (refinable Sigma / Lambda)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LambdaValue:
    n: int
    g: int
    value: ComplexInterval
    cng_data: dict


def _ratio_interval(ctx: PairContext, num: QuadElem, den: QuadElem,
                    kap_num: QuadElem, kap_den: QuadElem, bits: int) -> ComplexInterval:
    root = complex_root_interval(kap_num / kap_den, ctx.form.r, bits)
    frac = quad_complex_interval(num / den, bits)
    return root * frac


def sigma_interval(ctx: PairContext, n: int, g: int, bits: int) -> ComplexInterval:
    """Certified enclosure of Sigma_{n,g}; refine by raising bits."""
    p = pade_build(n, g, ctx.form.r)
    a_val = QuadElem(0)
    for c in reversed(p.a_coeffs):
        a_val = a_val * ctx.z1 + c
    b_val = QuadElem(0)
    for c in reversed(p.b_coeffs):
        b_val = b_val * ctx.z1 + c
    ratio2 = _ratio_interval(ctx, ctx.ly2, ctx.lx2, ctx.kap_y, ctx.kap_x, bits)
    ratio1 = _ratio_interval(ctx, ctx.ly1, ctx.lx1, ctx.kap_y, ctx.kap_x, bits)
    return ratio2 * quad_complex_interval(a_val, bits) - ratio1 * quad_complex_interval(b_val, bits)


def lambda_interval(ctx: PairContext, n: int, g: int, bits: int) -> LambdaValue:
    """Certified enclosure of Lambda_{n,g} built from its exact closed form."""
    lam = lambda_exact(ctx, n, g)
    if g == 0:
        enc = quad_complex_interval(lam.value, bits)
    else:
        root = complex_root_interval(lam.kappa_root, ctx.form.r, bits)
        enc = root * quad_complex_interval(lam.value, bits)
    form = ctx.form
    cng_data = {
        "r_power": str(mpq(form.r) ** n),
        "rr1_sqrtD_power": f"(r(r-1)sqrt({form.D}))^{n + g}",
        "two_over_chi_exponent": 1 - g,
        "chi_r": str(form.chi_r),
        "t_scale": str(form.t_scale),
    }
    return LambdaValue(n, g, enc, cng_data)


# ---------------------------------------------------------------------------
# Two-term lower bound on the paired growth quantity
# ---------------------------------------------------------------------------


def _abs_cng_powprod(form: DiagForm, n: int, g: int) -> PowProd:
    """|c_{n,g}| as an exact power product (|chi| cleared through chi^r)."""
    prod = PowProd.of(mpq(form.r), n)
    prod = prod * PowProd.of(mpq(form.r * (form.r - 1)), n + g)
    prod = prod * PowProd.of(mpq(abs(form.D)), Fraction(n + g, 2))
    if g == 0:
        prod = prod * PowProd.of(mpq(2))
        prod = prod * PowProd.of(form.chi_r ** 2, Fraction(-1, 2 * form.r))
    return prod


def _z_powprod(rec: SolutionRecord, exponent: Fraction) -> PowProd:
    """Z^exponent as a power product via the exact Z^(2r)."""
    return PowProd.of(rec.z_pow_2r, exponent)


def lambda_prime_check(ctx: PairContext, n: int, g: int, h: int, bits_budget: int = 4096) -> dict:
    """Exact-where-possible check that the two-term growth bound is >= 1.

    h is the inequality bound the pair was harvested under; Z1^r > 2h is
    re-verified.  Status is 'holds', 'violated', or 'undecided' (budget
    exhausted on the sum).
    """
    form = ctx.form
    r = form.r
    if sigma_is_zero(ctx, n, g):
        return {"status": "sigma_zero", "n": n, "g": g}
    if exact_cmp(ctx.sol1.z_pow_2r, mpq(4) * h * h) <= 0:
        return {"status": "precondition_unmet", "n": n, "g": g}

    abs_cng = _abs_cng_powprod(form, n, g)
    two_r = 2 * r
    t1 = (
        PowProd.of(mpq(2), 3 * n + 2) * abs_cng * PowProd.of(mpq(h))
        * _z_powprod(ctx.sol1, Fraction(n * r + 1 - g, two_r))
        * _z_powprod(ctx.sol2, Fraction(1 - r, two_r))
    )
    w = (
        PowProd.of(mpq(2), n + 1 - g) * abs_cng
        * PowProd.of(remainder_envelope(pade_build(n, g, r)))
        * PowProd.of(mpq(h), 2 * n + 1 - g)
        * _z_powprod(ctx.sol1, Fraction(-r * (n + 1 - g) + 1 - g, two_r))
        * _z_powprod(ctx.sol2, Fraction(1, two_r))
    )
    out = {"n": n, "g": g, "term1": t1.describe(), "term2_base": w.describe()}
    if t1.cmp_rational(1) >= 0:
        out["status"] = "holds"
        out["decided_by"] = "term1_exact"
        return out
    if w.cmp_rational(1) >= 0:
        out["status"] = "holds"
        out["decided_by"] = "term2_floor_exact"
        return out
    bits = 128
    while bits <= bits_budget:
        s_factor = _s_factor_interval(ctx, h, 2 * n + 1 - g, bits)
        total = t1.interval(bits) + w.interval(bits) * s_factor
        if total.lo >= 1:
            out["status"] = "holds"
            out["decided_by"] = f"interval@{bits}"
            return out
        if total.hi < 1:
            out["status"] = "violated"
            out["decided_by"] = f"interval@{bits}"
            return out
        bits *= 2
    out["status"] = "undecided"
    return out


def _s_factor_interval(ctx: PairContext, h, k: int, bits: int) -> RealInterval:
    """(1 - 2h/Z1^r)^(-k/2) as a certified enclosure."""
    z2r = ctx.sol1.z_pow_2r

    def z1r_enc(b):
        if isinstance(z2r, QuadElem):
            from .exactnum import embed_interval

            enc = embed_interval(z2r, b)
            while enc.lo <= 0:
                b *= 2
                enc = embed_interval(z2r, b)
            return RealInterval(
                rat_root_interval(enc.lo, 2, b).lo,
                rat_root_interval(enc.hi, 2, b).hi,
                b,
            )
        return rat_root_interval(z2r, 2, b)

    b2 = bits
    while True:
        s = 1 - RealInterval.point(mpq(2 * h)) / z1r_enc(b2)
        if s.lo > 0:
            break
        b2 *= 2
        if b2 > 1 << 20:
            raise InconsistencyError("s-factor cannot be separated from zero")
    inv = s.pow_int(-k)
    return RealInterval(
        rat_root_interval(inv.lo, 2, bits).lo,
        rat_root_interval(inv.hi, 2, bits).hi,
        bits,
    )


# ---------------------------------------------------------------------------
# The iterated-growth hypothesis and conclusion
# ---------------------------------------------------------------------------


def iterated_growth_hypothesis(form: DiagForm, h: int, k: int) -> bool:
    """Exact size condition on |j| for a class with |S'_omega| = k >= 3."""
    r = form.r
    big_r = (r - 1) ** (k - 1)
    e = big_r - 2 * r - 1
    if e <= 0:
        raise DomainError(f"R(k) - 2r - 1 = {e} must be positive")
    j_pow = abs(form.j_power)
    lhs = PowProd.of(j_pow, e)
    rhs = (
        PowProd.of(mpq(2), r * (r - 1) * e)
        * PowProd.of(mpq(r), 7 * r * r * (r - 1))
        * PowProd.of(mpq(h), (r - 1) * (2 * big_r + r * r - 3 * r))
    )
    return lhs.cmp(rhs) >= 0


def iterated_growth_check(records, n: int, form: DiagForm, h: int) -> bool:
    """Exact check of the iterated growth bound on a descending-zeta list."""
    if len(records) <= 1:
        return True
    for i in range(1, len(records)):
        if zeta_cmp(records[i], records[i - 1]) > 0:
            raise ValueError("records must be sorted by descending zeta")
    r = form.r
    last, prev = records[-1], records[-2]
    j_pow = abs(form.j_power)
    nn = 2 * r * (r - 1) * (r - 2)
    lhs = (
        last.z_pow_2r ** ((r - 1) * (r - 2))
        * mpq(2) ** ((n + 4) * nn)
        * mpq(r) ** ((3 * n * r + 2) * 2 * r * (r - 1))
        * j_pow ** (2 * (n * r + 2))
        * mpq(h) ** ((2 * n + 1) * nn)
    )
    rhs = prev.z_pow_2r ** (((n + 1) * r - 1) * (r - 1) * (r - 2))
    return exact_cmp(lhs, rhs) >= 0


# ---------------------------------------------------------------------------
# Pair harvesting for the verification sweeps
# ---------------------------------------------------------------------------


def harvest_pairs(form: DiagForm, h: int, cls, limit: int | None = None):
    """PairContexts from same-class ordered pairs with Z1^r > 2h.

    Pairs are ordered (sol1, sol2) with zeta2 <= zeta1, i.e. sol2 comes
    later in the descending-zeta group order.
    """
    out = []
    for grp in cls.groups.values():
        for i in range(len(grp)):
            if exact_cmp(grp[i].z_pow_2r, mpq(4) * h * h) <= 0:
                continue
            for j in range(i + 1, len(grp)):
                try:
                    out.append(make_pair_context(form, grp[i], grp[j]))
                except DomainError:
                    continue
                if limit is not None and len(out) >= limit:
                    return out
    return out
