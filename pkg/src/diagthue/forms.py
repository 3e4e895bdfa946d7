"""Diagonalizable binary forms kappa_u*(p_u x + q_u y)^r - kappa_v*(p_v x + q_v y)^r.

A form is built from binomial data, from xi-representation data, or by a
GL(2,Z) action, never recognized from raw coefficients.  Construction
validates integrality, derives the quadratic part (A, B, C) with
D = B^2 - 4AC != 0, and cross-checks the discriminant two independent
ways (resultant vs r^r j^(r(r-1))), which stays on as a standing
self-check for every constructed form.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from gmpy2 import bincoef, mpq, mpz

from .exactnum import (
    DomainError,
    QuadElem,
    is_integral,
    quad_sign,
    rat,
    rat_str,
    rational_nth_root,
    sign,
)


class FormError(ValueError):
    """Invalid construction data for a diagonalizable form."""


class NotIntegralError(FormError):
    """Expansion of the xi-data does not have integer coefficients."""


class DegenerateFormError(FormError):
    """j = 0 or D = 0: the two linear forms are proportional."""


class InconsistencyError(RuntimeError):
    """A dual-route identity check failed; signals a broken build."""


def binom(n: int, k: int):
    return bincoef(int(n), int(k))


@dataclass(eq=False)
class DiagForm:
    """Expanded coefficients plus exact xi-representation of one form."""

    r: int
    coeffs: tuple                     # r+1 mpz, F = sum coeffs[i] x^(r-i) y^i
    A: int
    B: int
    C: int
    D: int
    chi_r: mpq                        # chi^r, rational
    j_power: mpq                      # j^(r(r-1)) = chi^(r(r-1)) D^(r(r-1)/2)
    d1_sign: int                      # sign s in d1 = j/chi = s*sqrt(D)
    t_scale: mpq                      # (A,B,C) = t * (line product coefficients)
    kappa_u: QuadElem
    p_u: int                          # 0 or 1 after normalization
    q_u: QuadElem
    kappa_v: QuadElem
    p_v: int
    q_v: QuadElem
    definite: bool
    disc_sign_matches_identity: bool
    provenance: dict = field(default_factory=dict)

    # -- basic evaluation

    def eval(self, x: int, y: int):
        return eval_form(self, x, y)

    def quad_value(self, x: int, y: int):
        return self.A * x * x + self.B * x * y + self.C * y * y

    def line_u(self, x: int, y: int) -> QuadElem:
        return self.q_u * y + self.p_u * x

    def line_v(self, x: int, y: int) -> QuadElem:
        return self.q_v * y + self.p_v * x

    def abs_disc(self) -> mpz:
        v = mpq(self.r) ** self.r * abs(self.j_power)
        assert is_integral(v)
        return mpz(v.numerator)

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}*x^{self.r - i}*y^{i}")
        return f"DiagForm(r={self.r}, {' + '.join(terms) or '0'})"


@dataclass(frozen=True)
class FormClass:
    definiteness: str   # "definite" | "indefinite"
    d_sign: str         # "negative" | "positive"
    parity: str         # "odd" | "even"


def classify_form(f: DiagForm) -> FormClass:
    return FormClass(
        "definite" if f.definite else "indefinite",
        "negative" if f.D < 0 else "positive",
        "odd" if f.r % 2 else "even",
    )


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------


def _normalize_line(kappa: QuadElem, p: QuadElem, q: QuadElem, r: int):
    """Scale so the line is x + q'y (p=1) or exactly y (p=0, q=1)."""
    if p:
        return kappa * p ** r, 1, q / p
    if not q:
        raise DegenerateFormError("zero linear form")
    return kappa * q ** r, 0, QuadElem(1)


def _convert_field(x: QuadElem, new_d: int, scale: mpq) -> QuadElem:
    if x.b == 0:
        return x
    return QuadElem(x.a, x.b / scale, new_d)


def _build_form(r, kappa_u, p_u, q_u, kappa_v, p_v, q_v, provenance, expect_coeffs=None) -> DiagForm:
    if r < 3:
        raise FormError(f"degree must be >= 3, got {r}")
    kappa_u, p_u, q_u = _normalize_line(_q(kappa_u), _q(p_u), _q(q_u), r)
    kappa_v, p_v, q_v = _normalize_line(_q(kappa_v), _q(p_v), _q(q_v), r)
    if not kappa_u or not kappa_v:
        raise DegenerateFormError("zero leading value")

    cross = q_v * p_u - q_u * p_v
    if not cross:
        raise DegenerateFormError("proportional linear forms (j = 0)")

    # quadratic part of the line product, before integer scaling
    pp = QuadElem(p_u * p_v)
    qq = q_v * p_u + q_u * p_v
    rr = q_u * q_v
    for name, val in (("x^2", pp), ("xy", qq), ("y^2", rr)):
        if not val.is_rational:
            raise FormError(f"line product has irrational {name} coefficient {val!r}")
    pr, qr, rrr = pp.as_rational(), qq.as_rational(), rr.as_rational()

    t = mpq(_lcm3(pr.denominator, qr.denominator, rrr.denominator))
    lead = next((v for v in (pr, qr, rrr) if v != 0))
    if lead < 0:
        t = -t
    A, B, C = int(t * pr), int(t * qr), int(t * rrr)
    D = B * B - 4 * A * C
    if D == 0:
        raise DegenerateFormError("D = B^2 - 4AC = 0")

    # d1 = t * (p_u q_v - q_u p_v) must square to D; align field parameters to D
    d1 = cross * t
    if d1.is_rational:
        d1_rat = d1.as_rational()
        if d1_rat * d1_rat != D:
            raise InconsistencyError(f"d1^2 = {d1_rat**2} != D = {D}")
        d1_sign = sign(d1_rat)
        new_d = 0
    else:
        scale_sq = mpq(D, d1.d)
        scale = rational_nth_root(scale_sq, 2)
        if scale is None or d1.b * d1.b * d1.d != D:
            raise InconsistencyError(f"d1 = {d1!r} does not square to D = {D}")
        d1_sign = sign(d1.b)
        new_d = D
        kappa_u = _convert_field(kappa_u, new_d, scale)
        q_u = _convert_field(q_u, new_d, scale)
        kappa_v = _convert_field(kappa_v, new_d, scale)
        q_v = _convert_field(q_v, new_d, scale)

    kk = kappa_u * kappa_v
    if not kk.is_rational:
        raise FormError(f"kappa_u * kappa_v = {kk!r} is not rational")
    chi_r = kk.as_rational() / t ** r

    coeffs = _expand_coeffs(r, kappa_u, p_u, q_u, kappa_v, p_v, q_v)
    if expect_coeffs is not None and tuple(coeffs) != tuple(expect_coeffs):
        raise InconsistencyError("transformed coefficients disagree with line expansion")

    j_power = mpq(D) ** (r * (r - 1) // 2) * chi_r ** (r - 1)

    disc_res = _disc_from_coeffs(coeffs, r)
    rr_jp = mpq(r) ** r * j_power
    if abs(mpq(disc_res)) != abs(rr_jp):
        raise InconsistencyError(
            f"discriminant mismatch: resultant {disc_res} vs identity {rr_jp}"
        )
    paper_sign = -1 if ((r - 1) * (r + 2) // 2) % 2 else 1
    sign_matches = sign(mpq(disc_res)) == paper_sign * sign(rr_jp)

    definite = False
    if D > 0 and r % 2 == 0:
        definite = quad_sign(kappa_u) * quad_sign(kappa_v) == -1

    return DiagForm(
        r=r, coeffs=tuple(coeffs), A=A, B=B, C=C, D=D,
        chi_r=chi_r, j_power=j_power, d1_sign=d1_sign, t_scale=t,
        kappa_u=kappa_u, p_u=p_u, q_u=q_u, kappa_v=kappa_v, p_v=p_v, q_v=q_v,
        definite=definite, disc_sign_matches_identity=sign_matches,
        provenance=dict(provenance),
    )


def _q(x) -> QuadElem:
    return x if isinstance(x, QuadElem) else QuadElem(rat(x))


def _lcm3(a, b, c):
    from gmpy2 import lcm

    return lcm(lcm(mpz(a), mpz(b)), mpz(c))


def _expand_coeffs(r, kappa_u, p_u, q_u, kappa_v, p_v, q_v):
    coeffs = []
    for i in range(r + 1):
        term_u = _line_term(kappa_u, p_u, q_u, r, i)
        term_v = _line_term(kappa_v, p_v, q_v, r, i)
        c = term_u - term_v
        if not c.is_rational or not is_integral(c.as_rational()):
            raise NotIntegralError(f"coefficient of x^{r-i}y^{i} is {c!r}, not an integer")
        coeffs.append(mpz(c.as_rational().numerator))
    if all(c == 0 for c in coeffs):
        raise DegenerateFormError("zero form")
    return coeffs


def _line_term(kappa, p, q, r, i) -> QuadElem:
    # coefficient of x^(r-i) y^i in kappa (p x + q y)^r with p in {0, 1}
    if p == 0:
        return kappa if i == r else QuadElem(0)
    return kappa * q ** i * binom(r, i)


def make_binomial(a: int, b: int, r: int) -> DiagForm:
    """a x^r - b y^r with a, b >= 1; quadratic part fixed at (0, 1, 0), D = 1."""
    if a < 1 or b < 1:
        raise FormError("binomial coefficients must be positive")
    return _build_form(
        r, QuadElem(a), QuadElem(1), QuadElem(0), QuadElem(b), QuadElem(0), QuadElem(1),
        {"kind": "binomial", "a": str(a), "b": str(b)},
    )


def make_from_xi(alpha1, beta1, gamma1, delta1, r: int) -> DiagForm:
    """Form with xi = alpha1 (x + beta1 y)^r, eta = gamma1 (x + delta1 y)^r.

    Accepts iff the expansion is integral; rejects beta1 = delta1.
    """
    alpha1, beta1, gamma1, delta1 = map(_q, (alpha1, beta1, gamma1, delta1))
    if delta1 == beta1:
        raise DegenerateFormError("delta1 = beta1")
    return _build_form(
        r, alpha1, QuadElem(1), beta1, gamma1, QuadElem(1), delta1,
        {"kind": "xi_data"},
    )


def gl2_action(f: DiagForm, m) -> DiagForm:
    """F o m for unimodular integer m = ((a, b), (c, d)): x -> ax+by, y -> cx+dy."""
    (a, b), (c, d) = m
    det = a * d - b * c
    if det not in (1, -1):
        raise FormError(f"matrix determinant {det}, must be +-1")
    new_coeffs = _compose_coeffs(f.coeffs, f.r, m)
    return _build_form(
        f.r,
        f.kappa_u, f.p_u * a + f.q_u * c, f.p_u * b + f.q_u * d,
        f.kappa_v, f.p_v * a + f.q_v * c, f.p_v * b + f.q_v * d,
        {**f.provenance, "gl2": [[str(a), str(b)], [str(c), str(d)]]},
        expect_coeffs=new_coeffs,
    )


def _compose_coeffs(coeffs, r, m):
    (a, b), (c, d) = m
    # (a x + b y)^k and (c x + d y)^k expansions, then convolve
    out = [mpz(0)] * (r + 1)
    for i, ci in enumerate(coeffs):
        if ci == 0:
            continue
        left = _pow_linear(a, b, r - i)
        right = _pow_linear(c, d, i)
        conv = [mpz(0)] * (r + 1)
        for j, lj in enumerate(left):
            for k, rk in enumerate(right):
                conv[j + k] += lj * rk
        for j in range(r + 1):
            out[j] += ci * conv[j]
    return out


def _pow_linear(a, b, k):
    a, b = mpz(a), mpz(b)
    return [binom(k, j) * a ** (k - j) * b ** j for j in range(k + 1)]


# ---------------------------------------------------------------------------
# Reduction of the quadratic part (D < 0)
# ---------------------------------------------------------------------------


def is_reduced(f: DiagForm) -> bool:
    return f.C >= f.A >= abs(f.B)


def reduce_form(f: DiagForm):
    """Equivalent form with reduced quadratic part, plus the witness matrix.

    Requires D < 0 (definite quadratic part, A > 0 by construction).
    """
    if f.D >= 0:
        raise DomainError("reduction implemented only for D < 0")
    A, B, C = f.A, f.B, f.C
    m = ((1, 0), (0, 1))
    while not (C >= A >= abs(B)):
        if C < A:
            A, B, C = C, -B, A
            m = _mat_mul(m, ((0, 1), (-1, 0)))
        else:
            k = (B + A) // (2 * A)  # shift B into (-A, A]
            A, B, C = A, B - 2 * k * A, A * k * k - B * k + C
            m = _mat_mul(m, ((1, -k), (0, 1)))
    g = gl2_action(f, m)
    if (g.A, g.B, g.C) != (A, B, C):
        raise InconsistencyError("reduction bookkeeping mismatch")
    return g, m


def _mat_mul(m1, m2):
    (a, b), (c, d) = m1
    (e, g), (h, i) = m2
    return ((a * e + b * h, a * g + b * i), (c * e + d * h, c * g + d * i))


# ---------------------------------------------------------------------------
# Evaluation and covariants
# ---------------------------------------------------------------------------


def eval_form(f: DiagForm, x: int, y: int) -> mpz:
    x, y = mpz(x), mpz(y)
    acc = mpz(0)
    for i, c in enumerate(f.coeffs):
        acc += c * x ** (f.r - i) * y ** i
    return acc


def eval_xi_eta(f: DiagForm, x: int, y: int):
    """(xi, eta) with xi - eta = F(x, y)."""
    xi = f.kappa_u * f.line_u(x, y) ** f.r
    eta = f.kappa_v * f.line_v(x, y) ** f.r
    return xi, eta


def q_value(f: DiagForm, x: int, y: int) -> mpq:
    """Q(x,y) = sqrt(D)(xi + eta), rational by construction."""
    xi, eta = eval_xi_eta(f, x, y)
    total = xi + eta
    if total.is_rational:
        root = rational_nth_root(mpq(f.D), 2)
        if root is not None:
            return root * total.as_rational()
        if total.as_rational() == 0:
            return mpq(0)
        raise InconsistencyError("xi+eta rational over an irrational field")
    prod = QuadElem(0, 1, f.D) * total
    if not prod.is_rational:
        raise InconsistencyError(f"sqrt(D)(xi+eta) = {prod!r} not rational")
    return prod.as_rational()


def _partial_x(coeffs, r):
    return [c * (r - i) for i, c in enumerate(coeffs[:-1])]


def _partial_y(coeffs, r):
    return [c * i for i, c in enumerate(coeffs) if i >= 1]


def _eval_poly(coeffs, deg, x, y):
    acc = mpz(0)
    for i, c in enumerate(coeffs):
        acc += c * x ** (deg - i) * y ** i
    return acc


def hessian_value(f: DiagForm, x: int, y: int) -> mpz:
    """H = F_xx F_yy - F_xy^2, cross-checked against -r^2(r-1)^2 chi^r D q^(r-2)."""
    r = f.r
    fx = _partial_x(f.coeffs, r)
    fy = _partial_y(f.coeffs, r)
    fxx = _partial_x(fx, r - 1)
    fxy = _partial_y(fx, r - 1)
    fyy = _partial_y(fy, r - 1)
    x, y = mpz(x), mpz(y)
    h = _eval_poly(fxx, r - 2, x, y) * _eval_poly(fyy, r - 2, x, y) - _eval_poly(fxy, r - 2, x, y) ** 2
    ident = -mpq(r) ** 2 * mpq(r - 1) ** 2 * f.chi_r * f.D * mpq(f.quad_value(x, y)) ** (r - 2)
    if mpq(h) != ident:
        raise InconsistencyError(f"Hessian mismatch at ({x},{y}): {h} vs {ident}")
    return h


def jacobian_value(f: DiagForm, x: int, y: int) -> mpz:
    """P = F_x H_y - F_y H_x, cross-checked via the chi^r D Q(x,y) identity."""
    r = f.r
    fx = _partial_x(f.coeffs, r)
    fy = _partial_y(f.coeffs, r)
    h_coeffs = _hessian_coeffs(f)
    hx = _partial_x(h_coeffs, 2 * r - 4)
    hy = _partial_y(h_coeffs, 2 * r - 4)
    x, y = mpz(x), mpz(y)
    p = (
        _eval_poly(fx, r - 1, x, y) * _eval_poly(hy, 2 * r - 5, x, y)
        - _eval_poly(fy, r - 1, x, y) * _eval_poly(hx, 2 * r - 5, x, y)
    )
    ident = (
        -mpq(r) ** 3 * mpq(r - 1) ** 2 * (r - 2)
        * f.chi_r * f.d1_sign * f.D * q_value(f, x, y)
        * mpq(f.quad_value(x, y)) ** (r - 3)
    )
    if mpq(p) != ident:
        raise InconsistencyError(f"Jacobian mismatch at ({x},{y}): {p} vs {ident}")
    return p


def _hessian_coeffs(f: DiagForm):
    r = f.r
    fx = _partial_x(f.coeffs, r)
    fy = _partial_y(f.coeffs, r)
    fxx = _partial_x(fx, r - 1)
    fxy = _partial_y(fx, r - 1)
    fyy = _partial_y(fy, r - 1)
    prod1 = _poly_mul(fxx, fyy)
    prod2 = _poly_mul(fxy, fxy)
    return [a - b for a, b in zip(prod1, prod2)]


def _poly_mul(p, q):
    out = [mpz(0)] * (len(p) + len(q) - 1)
    for i, pi in enumerate(p):
        for j, qj in enumerate(q):
            out[i + j] += pi * qj
    return out


@dataclass(frozen=True)
class DiscriminantResult:
    value: mpz          # resultant-convention discriminant, signed
    via_identity: mpq   # (-1)^((r-1)(r+2)/2) r^r j^(r(r-1))
    sign_matches: bool


def discriminant(f: DiagForm) -> DiscriminantResult:
    """Discriminant computed two independent ways; |values| must agree."""
    res = _disc_from_coeffs(f.coeffs, f.r)
    paper_sign = -1 if ((f.r - 1) * (f.r + 2) // 2) % 2 else 1
    ident = paper_sign * mpq(f.r) ** f.r * f.j_power
    if abs(mpq(res)) != abs(ident):
        raise InconsistencyError(f"|disc| mismatch: {res} vs {ident}")
    return DiscriminantResult(res, ident, sign(mpq(res)) == sign(ident))


def _disc_from_coeffs(coeffs, r) -> mpz:
    coeffs = list(coeffs)
    if coeffs[0] == 0:
        # shear x -> x, y -> tx + y until the x^r coefficient is nonzero
        for t in range(1, r + 2):
            sheared = _compose_coeffs(coeffs, r, ((1, 0), (t, 1)))
            if sheared[0] != 0:
                coeffs = sheared
                break
        else:
            raise DegenerateFormError("form vanishes on every test line")
    f = coeffs
    fp = [c * (r - i) for i, c in enumerate(f[:-1])]
    res = _resultant(f, fp)
    num = (-1 if (r * (r - 1) // 2) % 2 else 1) * res
    q, rem = divmod(num, f[0])
    if rem != 0:
        raise InconsistencyError("discriminant division not exact")
    return q


def _resultant(f, g):
    n = len(f) - 1
    m = len(g) - 1
    size = n + m
    rows = []
    for i in range(m):
        rows.append([mpz(0)] * i + [mpz(c) for c in f] + [mpz(0)] * (size - n - 1 - i))
    for i in range(n):
        rows.append([mpz(0)] * i + [mpz(c) for c in g] + [mpz(0)] * (size - m - 1 - i))
    return _det_bareiss(rows)


def _det_bareiss(m):
    n = len(m)
    m = [row[:] for row in m]
    denom = mpz(1)
    sgn = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sgn = -sgn
                    break
            else:
                return mpz(0)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // denom
            m[i][k] = mpz(0)
        denom = m[k][k]
    return sgn * m[n - 1][n - 1]


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def _quad_to_json(x: QuadElem):
    return {"a": rat_str(x.a), "b": rat_str(x.b), "d": str(x.d)}


def form_to_dict(f: DiagForm) -> dict:
    """Canonical JSON object; all integers as decimal strings."""
    ku, pu, qu = f.kappa_u, f.p_u, f.q_u
    kv, pv, qv = f.kappa_v, f.p_v, f.q_v
    provenance = dict(f.provenance)
    if pu == 0 or pv == 0:
        # documented change of variable y -> cx + y so that alpha*gamma != 0
        for c in (1, 2, -1, 3):
            pu2 = pu + qu * c
            pv2 = pv + qv * c
            if pu2 and pv2:
                ku = ku * pu2 ** f.r
                qu = qu / pu2
                kv = kv * pv2 ** f.r
                qv = qv / pv2
                provenance["substitution"] = [[1, 0], [c, 1]]
                break
    return {
        "r": str(f.r),
        "coeffs": [str(c) for c in f.coeffs],
        "A": str(f.A),
        "B": str(f.B),
        "C": str(f.C),
        "D": str(f.D),
        "chi_r": rat_str(f.chi_r),
        "alpha1": _quad_to_json(ku),
        "beta1": _quad_to_json(qu),
        "gamma1": _quad_to_json(kv),
        "delta1": _quad_to_json(qv),
        "provenance": provenance,
    }


def xi_scaled_coefficients(f: DiagForm):
    """Coefficients of r(r-1)sqrt(D) xi as QuadElems (integer-ring membership data)."""
    sd = QuadElem.sqrt_of(f.D)
    scale = f.r * (f.r - 1) * sd
    out = []
    for i in range(f.r + 1):
        out.append(scale * _line_term(f.kappa_u, f.p_u, f.q_u, f.r, i))
    return out
