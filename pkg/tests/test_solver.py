import random

from gmpy2 import mpq

from conftest import brute_enumerate, conj_pair_form, random_form
from diagthue import solver
from diagthue.exactnum import QuadElem, exact_cmp
from diagthue.forms import make_binomial, reduce_form


def test_box_examples():
    f = make_binomial(1, 1, 5)
    assert {r.key() for r in solver.enumerate_box(f, 1, 10, 10)} == {(1, 0), (0, 1)}
    g = make_binomial(3, 2, 5)
    recs = solver.enumerate_box(g, 1, 100, 100)
    assert {r.key() for r in recs if r.x >= 1 and r.y >= 1} == {(1, 1)}


def test_box_matches_oracle_random():
    rng = random.Random(30)
    for _ in range(50):
        form = random_form(rng)
        h = rng.randint(1, 800)
        got = {r.key() for r in solver.enumerate_box(form, h, 18, 18)}
        assert got == brute_enumerate(form, h, 18, 18)


def test_box_huge_coefficients():
    # prefilter must stay exact when coefficients dwarf float precision
    a = 10 ** 40 + 1
    f = make_binomial(a, 10 ** 40, 5)
    got = {r.key() for r in solver.enumerate_box(f, 1, 6, 6)}
    assert got == brute_enumerate(f, 1, 6, 6) == {(1, 1)}
    # beyond float64 range entirely: prefilter degrades to exact scanning
    g = make_binomial(10 ** 400 + 1, 10 ** 400, 5)
    got = {r.key() for r in solver.enumerate_box(g, 1, 5, 5)}
    assert got == {(1, 1)}


def test_canonical_fold_invariance():
    f = make_binomial(2, 3, 5)
    assert solver.canonical(-2, -3) == (2, 3)
    assert solver.canonical(-1, 0) == (1, 0)
    assert solver.canonical(3, -1) == (-3, 1)
    recs = solver.enumerate_box(f, 100, 12, 12)
    for rec in recs:
        assert rec.y > 0 or (rec.y == 0 and rec.x > 0)


def test_record_invariants():
    rng = random.Random(31)
    for _ in range(20):
        form = random_form(rng)
        for rec in solver.enumerate_box(form, 400, 10, 10):
            assert 0 < abs(rec.f_value) <= 400
            assert (rec.xi - rec.eta) == QuadElem(mpq(rec.f_value))
            z = rec.z_pow_2r
            assert exact_cmp(z, rec.xi_abs_sq) >= 0 and exact_cmp(z, rec.eta_abs_sq) >= 0
            lhs = rec.zeta_sq * z
            assert exact_cmp(lhs, mpq(rec.f_value) ** 2) == 0
            if form.D < 0:
                assert rec.xi_abs_sq == rec.eta_abs_sq


def test_convergents_unit_family_members():
    assert [r.key() for r in solver.enumerate_binomial_convergents(3, 2, 5, 1, 10 ** 6)] == [(1, 1)]
    assert [r.key() for r in solver.enumerate_binomial_convergents(8, 7, 7, 1, 10 ** 4)] == [(1, 1)]


def test_convergents_rational_theta():
    # (b/a)^(1/r) rational: 32 x^5 - y^5, theta = 1/2
    recs = solver.enumerate_binomial_convergents(32, 1, 5, 1, 10 ** 4)
    assert [r.key() for r in recs] == []
    recs = solver.enumerate_binomial_convergents(1, 1, 5, 1, 10 ** 4)
    assert [r.key() for r in recs] == []   # x=y gives F=0; nothing else


def test_convergents_cross_box_agreement():
    rng = random.Random(32)
    for _ in range(12):
        a, b = rng.randint(1, 9), rng.randint(1, 9)
        r = rng.choice([5, 6, 7])
        h = rng.randint(1, 60)
        conv = {rec.key() for rec in solver.enumerate_binomial_convergents(a, b, r, h, 400)}
        box = {rec.key() for rec in solver.enumerate_box(make_binomial(a, b, r), h, 500, 400)
               if rec.x >= 1 and rec.y >= 1}
        assert conv == box, (a, b, r, h)


def test_classify_positive_d():
    f = make_binomial(1, 1, 5)
    cls = solver.classify(f, solver.enumerate_box(f, 1000, 12, 12))
    # positive-quadrant solutions in one class, mirrored ones in another
    for rec in cls.all_records():
        if rec.x > 0 and rec.y > 0:
            assert rec.related_index == 0
        if rec.x < 0 and rec.y > 0:
            assert rec.related_index == 2   # tie broken low at (r-1)/2
            assert rec.related_tie
    # r odd, D>0: all zeta<1 records in one class
    small = [rec for rec in cls.all_records() if exact_cmp(rec.zeta_sq, 1) < 0]
    assert len({rec.related_index for rec in small}) <= 1


def test_classify_even_degree_two_classes():
    f = make_binomial(2, 3, 6)
    cls = solver.classify(f, solver.enumerate_box(f, 3000, 15, 15))
    small = [rec for rec in cls.all_records() if exact_cmp(rec.zeta_sq, 1) < 0]
    classes = {rec.related_index for rec in small}
    assert len(classes) <= 2
    if len(classes) == 2:
        a, b = sorted(classes)
        assert (b - a) == f.r // 2   # omega and -omega


def test_classify_negative_d_stability():
    form = conj_pair_form(-3, QuadElem(1), 1, 5, two_a=2)
    sols = solver.enumerate_box(form, 3000, 12, 12)
    cls64 = solver.classify(form, sols, bits_budget=4096)
    idx1 = {rec.key(): rec.related_index for rec in cls64.all_records()}
    sols2 = solver.enumerate_box(form, 3000, 12, 12)
    cls_hi = solver.classify(form, sols2, bits_budget=1 << 14)
    idx2 = {rec.key(): rec.related_index for rec in cls_hi.all_records()}
    assert idx1 == idx2
    assert not cls64.undecided


def test_classify_d_negative_exact_ties():
    # xi + eta = 0 happens on lines where Q(x,y) = 0; engineered case x=0
    form = conj_pair_form(-4, QuadElem(1), 0, 5, two_a=2)   # u = x - sqrt(-1)... B=0
    sols = solver.enumerate_box(form, 10 ** 5, 8, 8)
    cls = solver.classify(form, sols)
    for rec in cls.all_records():
        if not (rec.xi + rec.eta):
            assert rec.related_tie


def test_sprime_and_ordering():
    f = make_binomial(1, 1, 5)
    cls = solver.classify(f, solver.enumerate_box(f, 2000, 14, 14))
    for k, grp in cls.groups.items():
        for i in range(1, len(grp)):
            assert solver.zeta_cmp(grp[i - 1], grp[i]) >= 0
        assert cls.excluded[k] is grp[0]
        assert cls.sprime[k] == grp[1:]


def test_gap_audit_passes_and_detects_fault():
    rng = random.Random(33)
    audited = 0
    for _ in range(25):
        form = random_form(rng)
        h = rng.randint(50, 2000)
        cls = solver.classify(form, solver.enumerate_box(form, h, 16, 16))
        rep = solver.gap_audit(form, h, cls)
        assert rep.all_passed, rep.checks
        audited += rep.counts.get("gap_consecutive", 0)
    assert audited > 10
    f = make_binomial(1, 1, 5)
    cls = solver.classify(f, solver.enumerate_box(f, 1000, 12, 12))
    flipped = solver.gap_audit(f, 1000, cls, fault_gap_flip=True)
    assert not flipped.all_passed


def test_gap_audit_reduced_lower_bound():
    form = conj_pair_form(-4, QuadElem(3), 0, 5, two_a=2)
    red, _ = reduce_form(form)
    h = 10 ** 6
    cls = solver.classify(red, solver.enumerate_box(red, h, 10, 10))
    rep = solver.gap_audit(red, h, cls)
    assert rep.all_passed
    assert rep.counts.get("reduced_uv_lower", 0) > 0


def test_gap_audit_definite():
    from diagthue.forms import make_from_xi

    f = make_from_xi(1, 0, -1, 1, 6)
    cls = solver.classify(f, solver.enumerate_box(f, 2, 10, 10))
    rep = solver.gap_audit(f, 2, cls)
    assert rep.all_passed
    assert rep.counts.get("definite_zeta_ge_1", 0) > 0


def test_vacuous_singleton_groups():
    f = make_binomial(10 ** 12 + 1, 10 ** 12, 5)
    cls = solver.classify(f, solver.enumerate_box(f, 1, 5, 5))
    rep = solver.gap_audit(f, 1, cls)
    assert rep.all_passed
    assert rep.counts.get("gap_consecutive", 0) == 0


def test_tie_direction_does_not_change_verdicts():
    from diagthue import criteria

    f = make_binomial(1, 1, 6)
    h = 3000
    low = solver.classify(f, solver.enumerate_box(f, h, 12, 12), tie_break="low")
    high = solver.classify(f, solver.enumerate_box(f, h, 12, 12), tie_break="high")
    assert sum(len(g) for g in low.groups.values()) == sum(len(g) for g in high.groups.values())
    assert criteria.check_T1_4(f, h, 3, low).to_dict() == criteria.check_T1_4(f, h, 3, high).to_dict()
    assert criteria.check_T1_8(f, h, 3, low).to_dict() == criteria.check_T1_8(f, h, 3, high).to_dict()


def test_classify_matches_numeric_argmin_oracle():
    # independent oracle: same fixed branch, 50-digit numerics, brute argmin
    import cmath

    import mpmath as mp

    mp.mp.dps = 50

    def to_c(q):
        if q.d == 0:
            return mp.mpf(str(q.a.numerator)) / mp.mpf(str(q.a.denominator))
        sq = mp.sqrt(abs(q.d)) * (1j if q.d < 0 else 1)
        return (mp.mpf(str(q.a.numerator)) / mp.mpf(str(q.a.denominator))
                + mp.mpf(str(q.b.numerator)) / mp.mpf(str(q.b.denominator)) * sq)

    rng = random.Random(60)
    checked = 0
    for _ in range(10):
        form = random_form(rng, allow_binomial=False)
        r = form.r
        ratio = to_c(form.kappa_u / form.kappa_v)
        if form.D > 0 and abs(mp.im(ratio)) < mp.mpf("1e-40") and (mp.re(ratio) > 0 or r % 2 == 1):
            # the real path picks the real r-th root whenever one exists
            sign = 1 if mp.re(ratio) > 0 else -1
            c0 = sign * abs(ratio) ** (mp.mpf(1) / r)
        else:
            # the complex path always takes the principal root of the ratio
            c0 = mp.mpc(ratio) ** (mp.mpf(1) / r)
        h = 50 * max(abs(int(c)) for c in form.coeffs)
        sols = solver.enumerate_box(form, h, 14, 14)
        cls = solver.classify(form, sols)
        for rec in cls.all_records():
            lu, lv = form.line_u(rec.x, rec.y), form.line_v(rec.x, rec.y)
            if rec.related_tie or not lu or not lv:
                continue
            z = c0 * to_c(lu) / to_c(lv)
            dists = [abs(z - cmath.exp(2j * cmath.pi * k / r)) for k in range(r)]
            best = min(range(r), key=lambda k: dists[k])
            runner_up = sorted(dists)[1] - sorted(dists)[0]
            if runner_up > mp.mpf("1e-30"):
                assert best == rec.related_index, (rec.key(), best, rec.related_index)
                checked += 1
    assert checked >= 40


def test_powprod_floor_helper():
    from diagthue.exactnum import PowProd
    from diagthue.solver import _powprod_floor_frac

    assert _powprod_floor_frac(PowProd.of(mpq(8)), 3) == 2
    assert _powprod_floor_frac(PowProd.of(mpq(9)), 3) == 2
    assert _powprod_floor_frac(PowProd.of(mpq(26)), 3) == 2
    assert _powprod_floor_frac(PowProd.of(mpq(27)), 3) == 3
