"""Command-line surface: analyze, enumerate, pade, verify.

verify runs a sweep described by a JSON spec file and writes a
deterministic report (verdicts sorted, integers as decimal strings).
Exit codes: 0 all checked properties hold, 1 falsification or critical
undecided, 2 nothing checked (every hypothesis unmet), 3 input error.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time

from gmpy2 import mpq

from . import __version__, algseq, criteria, faults, pade, solver
from .exactnum import QuadElem, rat, rat_str
from .forms import (
    DiagForm,
    FormError,
    classify_form,
    discriminant,
    form_to_dict,
    is_reduced,
    make_binomial,
    make_from_xi,
)

SCHEMA_VERSION = 1


class InputError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _default_bits() -> int:
    try:
        return int(os.environ.get("DIAGTHUE_BITS_BUDGET", "4096"))
    except ValueError:
        return 4096


# ---------------------------------------------------------------------------
# Form parsing
# ---------------------------------------------------------------------------


def _quad_from_json(obj) -> QuadElem:
    return QuadElem(rat(obj["a"]), rat(obj.get("b", "0")), int(obj.get("d", 0)))


def parse_form(args) -> DiagForm:
    if getattr(args, "binomial", None):
        a, b, r = args.binomial
        return make_binomial(a, b, r)
    if getattr(args, "xi_json", None):
        raw = args.xi_json
        if os.path.exists(raw):
            with open(raw) as fh:
                obj = json.load(fh)
        else:
            obj = json.loads(raw)
        return make_from_xi(
            _quad_from_json(obj["alpha1"]),
            _quad_from_json(obj["beta1"]),
            _quad_from_json(obj["gamma1"]),
            _quad_from_json(obj["delta1"]),
            int(obj["r"]),
        )
    raise InputError("no form given: use --binomial A B R or --xi-json SPEC")


def _solutions_json(records):
    out = []
    for rec in records:
        out.append({
            "x": str(rec.x),
            "y": str(rec.y),
            "F": str(rec.f_value),
            "zeta_sq": _exact_json(rec.zeta_sq),
            "related_index": rec.related_index,
            "related_tie": rec.related_tie,
            "hessian": str(rec.hessian),
        })
    return out


def _exact_json(v):
    if isinstance(v, QuadElem):
        return repr(v)
    return rat_str(v)


# ---------------------------------------------------------------------------
# analyze / enumerate / pade
# ---------------------------------------------------------------------------


def _single_theorem_verdicts(args, form, h, cls):
    out = []
    for tid in args.theorem or []:
        if tid == "T1_3":
            v = criteria.check_T1_3(form, h, cls)
        elif tid == "T1_4":
            v = criteria.check_T1_4(form, h, args.m, cls)
        elif tid == "C1_5":
            v = criteria.check_C1_5(form, h, cls)
        elif tid == "C1_6":
            if not args.epsilon:
                raise InputError("C1_6 needs --epsilon")
            v = criteria.check_C1_6(form, h, rat(args.epsilon), cls)
        elif tid == "T2_1":
            v = criteria.check_T2_1(form, h, args.l, cls)
        elif tid == "T1_7":
            v = criteria.check_T1_7(form, h, max(args.m, 2), cls)
        elif tid == "T1_8":
            v = criteria.check_T1_8(form, h, args.m, cls)
        elif tid == "T1_9":
            v = criteria.check_T1_9(form, h, cls)
        else:
            raise InputError(f"--theorem {tid!r} not usable on a single form")
        out.append(v.to_dict())
    return out


def cmd_analyze(args) -> int:
    form = parse_form(args)
    h = args.h
    xb, yb = args.box
    disc = discriminant(form)
    fc = classify_form(form)
    sols = solver.enumerate_box(form, h, xb, yb)
    cls = solver.classify(form, sols, bits_budget=args.bits_budget)
    audit = solver.gap_audit(form, h, cls, fault_gap_flip="gap-flip" in faults.active)
    report = {
        "artifact_version": __version__,
        "schema_version": SCHEMA_VERSION,
        "kind": "analyze",
        "form": form_to_dict(form),
        "h": str(h),
        "invariants": {
            "r": str(form.r),
            "A": str(form.A), "B": str(form.B), "C": str(form.C), "D": str(form.D),
            "disc_resultant": str(disc.value),
            "disc_via_identity": rat_str(disc.via_identity),
            "disc_sign_matches": disc.sign_matches,
            "delta_prime": rat_str(criteria.delta_prime(form, h)),
            "reduced": is_reduced(form),
            "definiteness": fc.definiteness,
            "parity": fc.parity,
            "d_sign": fc.d_sign,
        },
        "search_region": {"kind": "box", "x_bound": xb, "y_bound": yb},
        "solutions": _solutions_json(sorted(cls.all_records(), key=lambda rec: (rec.y, rec.x))),
        "classes": {str(k): [[str(rec.x), str(rec.y)] for rec in grp] for k, grp in sorted(cls.groups.items())},
        "gap_audit": {
            "all_passed": audit.all_passed,
            "counts": audit.counts,
            "checks": audit.checks,
        },
        "precision": {"max_bits": cls.max_bits, "undecided": len(cls.undecided)},
    }
    verdicts = _single_theorem_verdicts(args, form, h, cls)
    if verdicts:
        report["verdicts"] = verdicts
    _emit(report, args.json)
    if not audit.all_passed or any(v["passed"] is False for v in verdicts):
        return 1
    if verdicts and all(not v["hypothesis_holds"] for v in verdicts) and audit.counts == {}:
        return 2
    return 0


def cmd_enumerate(args) -> int:
    form = parse_form(args)
    if args.ymax:
        if not getattr(args, "binomial", None):
            raise InputError("--ymax (convergent search) requires --binomial")
        a, b, r = args.binomial
        recs = solver.enumerate_binomial_convergents(a, b, r, args.h, args.ymax,
                                                     bits_budget=args.bits_budget)
        region = {"kind": "convergents", "y_max": args.ymax}
    else:
        xb, yb = args.box
        recs = solver.enumerate_box(form, args.h, xb, yb)
        region = {"kind": "box", "x_bound": xb, "y_bound": yb}
    _emit({
        "artifact_version": __version__,
        "schema_version": SCHEMA_VERSION,
        "kind": "enumerate",
        "form": form_to_dict(form),
        "h": str(args.h),
        "search_region": region,
        "solutions": _solutions_json(recs),
    }, args.json)
    return 0


def cmd_pade(args) -> int:
    if args.g not in (0, 1):
        raise InputError("g must be 0 or 1")
    p = pade.build(args.n, args.g, args.r)
    order = args.order or (2 * args.n + 2 - args.g)
    _emit({
        "artifact_version": __version__,
        "schema_version": SCHEMA_VERSION,
        "kind": "pade",
        "n": args.n, "g": args.g, "r": args.r,
        "a_coeffs": [rat_str(c) for c in p.a_coeffs],
        "b_coeffs": [rat_str(c) for c in p.b_coeffs],
        "remainder_head": [rat_str(c) for c in pade.remainder_series(p, order)],
        "wronskian_with_I0": rat_str(pade.wronskian_at_one(args.n, 0, args.r)),
        "wronskian_with_I1": rat_str(pade.wronskian_at_one(args.n, 1, args.r)),
    }, args.json)
    return 0


def _emit(obj, path):
    text = json.dumps(obj, indent=2, sort_keys=True)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
        print(f"report written to {path}")
    else:
        print(text)


# ---------------------------------------------------------------------------
# verify: sweep orchestration
# ---------------------------------------------------------------------------


def _gen_cells(spec) -> list:
    fam = spec["family"]
    kind = fam["kind"]
    cells = []
    if kind == "binomial_list":
        for a, b, r, h in fam["cells"]:
            cells.append({"key": f"binomial:{a}:{b}:{r}:h{h}",
                          "form_args": ("binomial", a, b, r), "h": h})
    elif kind == "xi_list":
        for i, c in enumerate(fam["cells"]):
            cells.append({
                "key": f"xiraw:{i}:r{c['r']}:h{c['h']}",
                "form_args": ("xi_raw", c["alpha1"], c["beta1"], c["gamma1"], c["delta1"], c["r"]),
                "h": c["h"],
            })
    elif kind == "binomial":
        rng = random.Random(fam.get("seed", spec.get("seed", 0)))
        for _ in range(fam["count"]):
            a = rng.randint(*fam["a_range"])
            b = rng.randint(*fam["b_range"])
            r = rng.choice(fam["r_set"])
            h = rng.randint(*fam["h_range"])
            cells.append({"key": f"binomial:{a}:{b}:{r}:h{h}",
                          "form_args": ("binomial", a, b, r), "h": h})
    elif kind == "binomial_pairs":
        # cells tuned so related classes are dense and Z1^r > 2h pairs exist
        rng = random.Random(fam.get("seed", spec.get("seed", 0)))
        y_top = fam.get("y_top", 60)
        for _ in range(fam["count"]):
            a = rng.randint(*fam["a_range"])
            b = rng.randint(*fam["b_range"])
            r = rng.choice(fam["r_set"])
            h = int(r * (a * b ** (r - 1)) ** (1.0 / r) * y_top ** (r - 1))
            cells.append({"key": f"binomial:{a}:{b}:{r}:h{h}",
                          "form_args": ("binomial", a, b, r), "h": h,
                          "box": (int(1.3 * y_top) + 2, y_top)})
    elif kind == "xi_random":
        rng = random.Random(fam.get("seed", spec.get("seed", 0)))
        bound = fam.get("coeff_bound", 3)
        count = fam["count"]
        tries = 0
        while len(cells) < count and tries < 100 * count:
            tries += 1
            d = rng.choice(fam["D_set"])
            if d % 4 not in (0, 1):
                continue
            r = rng.choice(fam["r_set"])
            h = rng.randint(*fam["h_range"])
            e = rng.randint(1, bound)
            f_ = rng.randint(0, bound)
            big_b = d % 2
            big_c = (big_b * big_b - d) // 4
            lam = QuadElem(e, f_, d)
            if lam.norm() == 0:
                continue
            args = ("xi", str(lam.a), str(lam.b), d, big_b, big_c, r)
            cells.append({"key": f"xi:{d}:{e}:{f_}:{r}:h{h}", "form_args": args, "h": h})
        if len(cells) < count:
            raise InputError("xi_random family could not generate enough valid cells")
    else:
        raise InputError(f"unknown family kind {kind!r}")
    return cells


def _build_cell_form(form_args) -> DiagForm:
    if form_args[0] == "binomial":
        _, a, b, r = form_args
        return make_binomial(a, b, r)
    if form_args[0] == "xi_raw":
        _, a1, b1, g1, d1, r = form_args
        return make_from_xi(
            _quad_from_json(a1), _quad_from_json(b1),
            _quad_from_json(g1), _quad_from_json(d1), int(r),
        )
    _, ea, fb, d, big_b, big_c, r = form_args
    lam = QuadElem(rat(ea), rat(fb), d)
    two_a = 2
    ku = lam ** r * two_a ** r
    kv = -(lam.conj() ** r) * two_a ** r
    beta1 = QuadElem(mpq(big_b, two_a), mpq(-1, two_a), d)
    delta1 = QuadElem(mpq(big_b, two_a), mpq(1, two_a), d)
    return make_from_xi(ku, beta1, kv, delta1, r)


def _run_theorem(entry, form, h, cls, cell) -> criteria.TheoremVerdict:
    tid = entry["id"]
    if tid == "T1_1" or tid == "T1_2":
        if cell["form_args"][0] != "binomial":
            raise InputError(f"{tid} applies to binomial cells only")
        _, a, b, r = cell["form_args"]
        fn = criteria.check_T1_1 if tid == "T1_1" else criteria.check_T1_2
        return fn(a, b, h, r, y_max=entry.get("y_max", 10_000))
    if tid == "T1_3":
        return criteria.check_T1_3(form, h, cls)
    if tid == "T1_4":
        return criteria.check_T1_4(form, h, entry["m"], cls)
    if tid == "C1_5":
        return criteria.check_C1_5(form, h, cls)
    if tid == "C1_6":
        return criteria.check_C1_6(form, h, rat(entry["epsilon"]), cls)
    if tid == "T2_1":
        return criteria.check_T2_1(form, h, entry["l"], cls)
    if tid == "T1_7":
        return criteria.check_T1_7(form, h, entry["m"], cls)
    if tid == "T1_8":
        return criteria.check_T1_8(form, h, entry["m"], cls)
    if tid == "T1_9":
        return criteria.check_T1_9(form, h, cls)
    raise InputError(f"unknown theorem id {tid!r}")


def _lambda_cell_checks(form, h, cls, cfg, stats):
    pairs = algseq.harvest_pairs(form, h, cls, limit=cfg.get("pairs_per_cell", 4))
    out = []
    for ctx in pairs:
        entry = {"pair": [list(ctx.sol1.key()), list(ctx.sol2.key())], "checks": []}
        for n in cfg.get("n_values", [1]):
            for g in (0, 1):
                chk = algseq.product_law_check(ctx, n, g)
                stats["lambda_product"] += 1
                if chk["status"] == "fails":
                    stats["falsifications"] += 1
                entry["checks"].append({"law": "product_ge_1", **_strs(chk)})
                lp = algseq.lambda_prime_check(ctx, n, g, h, bits_budget=cfg.get("bits_budget", 4096))
                stats["lambda_prime"] += 1
                if lp["status"] == "violated":
                    stats["falsifications"] += 1
                elif lp["status"] == "undecided":
                    stats["undecided"] += 1
                entry["checks"].append({"law": "growth_ge_1", "n": n, "g": g, "status": lp["status"]})
            nv = algseq.nonvanishing_check(ctx, n, 1)
            stats["nonvanishing"] += 1
            if nv == "both_zero":
                stats["falsifications"] += 1
            entry["checks"].append({"law": "nonvanishing", "n": n, "I": 1, "status": nv})
        out.append(entry)
    return out


def _strs(d):
    return {k: (str(v) if not isinstance(v, (bool, int, type(None))) else v) for k, v in d.items()}


def _pade_suite(cfg, stats):
    r_max = cfg.get("r_max", 9)
    n_max = cfg.get("n_max", 6)
    failures = []
    for r in range(5, r_max + 1):
        for n in range(1, n_max + 1):
            for g in (0, 1):
                p = pade.build(n, g, r)
                rs = pade.remainder_series(p, 2 * n + 2 - g)
                if any(c != 0 for c in rs[: 2 * n + 1 - g]) or rs[2 * n + 1 - g] == 0:
                    failures.append(("vanishing", r, n, g))
                if not pade.contiguity_check(n, g, r):
                    failures.append(("contiguity", r, n, g))
            for big_i in (0, 1):
                if n + big_i >= 1:
                    try:
                        pade.wronskian_at_one(n, big_i, r)
                    except pade.TheoremViolationError:
                        failures.append(("wronskian", r, n, big_i))
    for r in range(3, 13):
        for a in range(-r, r + 1):
            for m in range(0, 31):
                try:
                    pade.integrality_t(a, r, m)
                except pade.TheoremViolationError:
                    failures.append(("integrality", a, r, m))
    stats["pade_checks"] += 1
    stats["falsifications"] += len(failures)
    return failures


def cmd_verify(args) -> int:
    with open(args.specfile) as fh:
        spec = json.load(fh)
    if args.seed is not None:
        spec["seed"] = args.seed
    for name in args.inject_fault or []:
        faults.inject(name)
    try:
        return _verify_run(spec, args)
    finally:
        faults.clear()


def _verify_run(spec, args) -> int:
    t0 = time.monotonic()
    stats = {
        "cells": 0, "verdicts_checked": 0, "hypotheses_unmet": 0,
        "falsifications": 0, "undecided": 0, "gap_checks": 0,
        "lambda_product": 0, "lambda_prime": 0, "nonvanishing": 0,
        "pade_checks": 0, "max_bits": 0,
    }
    report = {
        "artifact_version": __version__,
        "schema_version": SCHEMA_VERSION,
        "kind": "verify",
        "seed": spec.get("seed", 0),
        "sweep": spec,
        "cells": [],
    }
    if "pade_suite" in spec:
        report["pade_failures"] = [list(map(str, f)) for f in _pade_suite(spec["pade_suite"], stats)]

    search = spec.get("search", {"kind": "box", "x_bound": 30, "y_bound": 30})
    for cell in sorted(_gen_cells(spec), key=lambda c: c["key"]):
        stats["cells"] += 1
        form = _build_cell_form(cell["form_args"])
        h = cell["h"]
        if search["kind"] == "box":
            xb, yb = cell.get("box", (search["x_bound"], search["y_bound"]))
            sols = solver.enumerate_box(form, h, xb, yb)
            region = {"kind": "box", "x_bound": xb, "y_bound": yb}
        else:
            if cell["form_args"][0] != "binomial":
                raise InputError("convergent search requires binomial cells")
            _, a, b, r = cell["form_args"]
            sols = solver.enumerate_binomial_convergents(a, b, r, h, search["y_max"])
            region = {"kind": "convergents", "y_max": search["y_max"]}
        cls = solver.classify(form, sols, bits_budget=args.bits_budget)
        stats["max_bits"] = max(stats["max_bits"], cls.max_bits)
        stats["undecided"] += len(cls.undecided)
        cell_report = {
            "key": cell["key"], "h": str(h), "form": form_to_dict(form),
            "search_region": region, "n_solutions": len(sols),
            "verdicts": [],
        }
        for entry in spec.get("theorems", []):
            try:
                v = _run_theorem(entry, form, h, cls, cell)
            except (criteria.ParameterError, InputError) as exc:
                cell_report["verdicts"].append({"theorem_id": entry["id"], "error": str(exc)})
                continue
            if v.hypothesis_holds:
                stats["verdicts_checked"] += 1
                if not v.passed:
                    stats["falsifications"] += 1
            else:
                stats["hypotheses_unmet"] += 1
            cell_report["verdicts"].append(v.to_dict())
        if spec.get("gap_audit", True):
            audit = solver.gap_audit(form, h, cls, fault_gap_flip="gap-flip" in faults.active)
            stats["gap_checks"] += len(audit.checks)
            if not audit.all_passed:
                stats["falsifications"] += 1
            cell_report["gap_audit"] = {"all_passed": audit.all_passed, "counts": audit.counts}
            if not audit.all_passed:
                cell_report["gap_audit"]["checks"] = audit.checks
            growth = []
            for k, sp in sorted(cls.sprime.items()):
                kk = len(sp)
                if kk >= 3 and (form.r - 1) ** (kk - 1) - 2 * form.r - 1 > 0:
                    if algseq.iterated_growth_hypothesis(form, h, kk):
                        for n in (1, 2, 3):
                            ok = algseq.iterated_growth_check(sp, n, form, h)
                            stats["gap_checks"] += 1
                            if not ok:
                                stats["falsifications"] += 1
                            growth.append({"class": k, "k": kk, "n": n, "passed": ok})
            if growth:
                cell_report["iterated_growth"] = growth
        if "lambda_checks" in spec:
            cell_report["lambda"] = _lambda_cell_checks(form, h, cls, spec["lambda_checks"], stats)
        report["cells"].append(cell_report)

    checked_anything = (
        stats["verdicts_checked"] + stats["gap_checks"] + stats["lambda_product"]
        + stats["lambda_prime"] + stats["nonvanishing"] + stats["pade_checks"]
    ) > 0
    total_lambda = max(1, stats["lambda_product"] + stats["lambda_prime"])
    stats["undecided_rate"] = f"{stats['undecided']}/{total_lambda}"
    report["summary"] = stats
    if args.timing:
        report["timing"] = {"seconds": time.monotonic() - t0}
    _emit(report, args.json or spec.get("output"))
    if stats["falsifications"] > 0:
        return 1
    if stats["undecided"] > 0:
        return 1
    if not checked_anything:
        return 2
    return 0


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def _add_form_args(p):
    p.add_argument("--binomial", nargs=3, type=int, metavar=("A", "B", "R"))
    p.add_argument("--xi-json", type=str, help="xi-data JSON (inline or file path)")


def build_parser() -> _Parser:
    parser = _Parser(prog="diagthue", description=__doc__)
    parser.add_argument("--bits-budget", type=int, default=_default_bits())
    sub = parser.add_subparsers(dest="command", required=True)

    p_an = sub.add_parser("analyze", help="invariants, enumeration, classes, gap audit")
    _add_form_args(p_an)
    p_an.add_argument("--h", type=int, default=1)
    p_an.add_argument("--box", nargs=2, type=int, default=[40, 40], metavar=("XB", "YB"))
    p_an.add_argument("--theorem", action="append",
                      help="also run this count-bound check (repeatable)")
    p_an.add_argument("--m", type=int, default=3)
    p_an.add_argument("--l", type=int, default=3)
    p_an.add_argument("--epsilon", type=str, help="rational like 1/16 (for C1_6)")
    p_an.add_argument("--json", type=str)

    p_en = sub.add_parser("enumerate", help="list primitive solutions")
    _add_form_args(p_en)
    p_en.add_argument("--h", type=int, default=1)
    p_en.add_argument("--box", nargs=2, type=int, default=[40, 40], metavar=("XB", "YB"))
    p_en.add_argument("--ymax", type=int, default=0)
    p_en.add_argument("--json", type=str)

    p_pd = sub.add_parser("pade", help="approximation pair coefficient dump")
    p_pd.add_argument("n", type=int)
    p_pd.add_argument("g", type=int)
    p_pd.add_argument("r", type=int)
    p_pd.add_argument("--order", type=int, default=0)
    p_pd.add_argument("--json", type=str)

    p_vf = sub.add_parser("verify", help="run a sweep spec and emit a verdict report")
    p_vf.add_argument("specfile", type=str)
    p_vf.add_argument("--json", type=str)
    p_vf.add_argument("--seed", type=int, help="override the sweep spec seed")
    p_vf.add_argument("--timing", action="store_true")
    p_vf.add_argument("--inject-fault", action="append", choices=list(faults.KNOWN),
                      help="corrupt one comparison on purpose (harness self-test)")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "analyze":
            return cmd_analyze(args)
        if args.command == "enumerate":
            return cmd_enumerate(args)
        if args.command == "pade":
            return cmd_pade(args)
        if args.command == "verify":
            return cmd_verify(args)
        raise InputError(f"unknown command {args.command!r}")
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 3
    except (FormError, criteria.ParameterError, FileNotFoundError, json.JSONDecodeError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
