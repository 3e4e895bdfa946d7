import json
import os
import subprocess
import sys

import pytest

from diagthue import cli

STANDARD_SWEEP = {
    "seed": 7,
    "family": {
        "kind": "binomial_list",
        "cells": [
            [2, 3, 5, 720000000],
            [3, 2, 5, 354],
            [5, 4, 6, 900],
        ],
    },
    "theorems": [{"id": "T1_4", "m": 3}, {"id": "C1_5"}],
    "search": {"kind": "box", "x_bound": 95, "y_bound": 80},
    "gap_audit": True,
    "lambda_checks": {"pairs_per_cell": 2, "n_values": [1]},
}

TIGHT_CELL_SWEEP = {
    "seed": 7,
    "family": {
        "kind": "xi_list",
        "cells": [
            {
                "alpha1": {"a": "1", "b": "0", "d": 0},
                "beta1": {"a": "0", "b": "0", "d": 0},
                "gamma1": {"a": str(-2 * 10 ** 18), "b": "0", "d": 0},
                "delta1": {"a": "1", "b": "0", "d": 0},
                "r": 6,
                "h": 1,
            }
        ],
    },
    "theorems": [{"id": "T1_4", "m": 3}],
    "search": {"kind": "box", "x_bound": 8, "y_bound": 8},
    "gap_audit": True,
}


def run_cli(*argv):
    return cli.main(list(argv))


def test_analyze_binomial(tmp_path, capsys):
    out = tmp_path / "a.json"
    rc = run_cli("analyze", "--binomial", "3", "2", "5", "--h", "1",
                 "--box", "30", "30", "--json", str(out))
    assert rc == 0
    rep = json.loads(out.read_text())
    keys = {(s["x"], s["y"]) for s in rep["solutions"]}
    assert ("1", "1") in keys
    assert rep["invariants"]["disc_via_identity"] in ("4050000", "-4050000")
    assert rep["gap_audit"]["all_passed"]


def test_analyze_square_field_binomial(tmp_path):
    out = tmp_path / "b.json"
    rc = run_cli("analyze", "--binomial", "1", "1", "5", "--h", "1",
                 "--box", "20", "20", "--json", str(out))
    assert rc == 0
    rep = json.loads(out.read_text())
    assert len(rep["solutions"]) == 2
    assert rep["form"]["D"] == "1"


def test_malformed_input_exit_3(capsys):
    assert run_cli("analyze", "--binomial", "3", "2") == 3          # wrong arity
    assert run_cli("analyze") == 3                                   # no form
    assert run_cli("verify", "/nonexistent/spec.json") == 3
    assert run_cli("pade", "1", "2", "5") == 3                       # g = 2 invalid


def test_pade_json(tmp_path):
    out = tmp_path / "p.json"
    assert run_cli("pade", "1", "0", "5", "--order", "4", "--json", str(out)) == 0
    rep = json.loads(out.read_text())
    assert rep["a_coeffs"] == ["2", "-6/5"]
    assert rep["remainder_head"][:3] == ["0", "0", "0"]
    assert rep["remainder_head"][3] != "0"


def test_enumerate_convergents(tmp_path):
    out = tmp_path / "e.json"
    rc = run_cli("enumerate", "--binomial", "3", "2", "5", "--h", "1",
                 "--ymax", "1000", "--json", str(out))
    assert rc == 0
    rep = json.loads(out.read_text())
    assert [(s["x"], s["y"]) for s in rep["solutions"]] == [("1", "1")]


def test_verify_standard_sweep(tmp_path):
    spec = tmp_path / "sweep.json"
    spec.write_text(json.dumps(STANDARD_SWEEP))
    out = tmp_path / "rep.json"
    rc = run_cli("verify", str(spec), "--json", str(out))
    assert rc == 0
    rep = json.loads(out.read_text())
    assert rep["summary"]["falsifications"] == 0
    assert rep["summary"]["gap_checks"] > 0
    assert rep["summary"]["lambda_product"] > 0


def test_verify_exit_2_when_nothing_checked(tmp_path):
    spec = dict(STANDARD_SWEEP)
    spec["family"] = {"kind": "binomial_list", "cells": [[3, 2, 5, 2]]}
    spec["gap_audit"] = False
    spec.pop("lambda_checks")
    path = tmp_path / "s.json"
    path.write_text(json.dumps(spec))
    rc = run_cli("verify", str(path))
    assert rc == 2   # tiny ab: both hypotheses unmet, nothing else requested


def test_verify_t11_sweep_small_ab_exit_2(tmp_path):
    # small a, b never meet the binomial threshold: nothing gets checked
    spec = {
        "seed": 3,
        "family": {"kind": "binomial", "a_range": [1, 1000], "b_range": [1, 1000],
                   "r_set": [5], "h_range": [1, 3], "count": 6},
        "theorems": [{"id": "T1_1", "y_max": 300}],
        "search": {"kind": "convergents", "y_max": 300},
        "gap_audit": False,
    }
    path = tmp_path / "s.json"
    path.write_text(json.dumps(spec))
    out = tmp_path / "r.json"
    assert run_cli("verify", str(path), "--json", str(out)) == 2
    rep = json.loads(out.read_text())
    assert rep["summary"]["hypotheses_unmet"] == 6
    assert rep["summary"]["verdicts_checked"] == 0


def test_verify_gap_flip_detected(tmp_path):
    spec = tmp_path / "sweep.json"
    spec.write_text(json.dumps(STANDARD_SWEEP))
    rc = run_cli("verify", str(spec), "--inject-fault", "gap-flip",
                 "--json", str(tmp_path / "r.json"))
    assert rc == 1


def test_verify_bound_fault_detected(tmp_path):
    spec = tmp_path / "sweep.json"
    spec.write_text(json.dumps(TIGHT_CELL_SWEEP))
    ok = run_cli("verify", str(spec), "--json", str(tmp_path / "ok.json"))
    assert ok == 0
    rc = run_cli("verify", str(spec), "--inject-fault", "bound-off-by-one",
                 "--json", str(tmp_path / "bad.json"))
    assert rc == 1


def test_verify_deterministic_reports(tmp_path):
    spec = tmp_path / "sweep.json"
    spec.write_text(json.dumps(STANDARD_SWEEP))
    out1, out2 = tmp_path / "r1.json", tmp_path / "r2.json"
    assert run_cli("verify", str(spec), "--json", str(out1)) == 0
    assert run_cli("verify", str(spec), "--json", str(out2)) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_verify_pade_suite(tmp_path):
    spec = {"seed": 0, "family": {"kind": "binomial_list", "cells": []},
            "theorems": [], "gap_audit": False,
            "pade_suite": {"r_max": 6, "n_max": 3}}
    path = tmp_path / "s.json"
    path.write_text(json.dumps(spec))
    out = tmp_path / "r.json"
    assert run_cli("verify", str(path), "--json", str(out)) == 0
    rep = json.loads(out.read_text())
    assert rep["pade_failures"] == []


def test_report_schema_validates(tmp_path):
    jsonschema = pytest.importorskip("jsonschema")
    import diagthue

    schema_path = os.path.join(os.path.dirname(diagthue.__file__), "schemas", "report.schema.json")
    schema = json.loads(open(schema_path).read())
    spec = tmp_path / "sweep.json"
    spec.write_text(json.dumps(STANDARD_SWEEP))
    out = tmp_path / "rep.json"
    run_cli("verify", str(spec), "--json", str(out))
    jsonschema.validate(json.loads(out.read_text()), schema)
    out2 = tmp_path / "an.json"
    run_cli("analyze", "--binomial", "3", "2", "5", "--json", str(out2))
    jsonschema.validate(json.loads(out2.read_text()), schema)


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "diagthue.cli", "pade", "1", "0", "5"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert '"-6/5"' in proc.stdout


def test_timing_flag_breaks_no_defaults(tmp_path):
    spec = tmp_path / "sweep.json"
    spec.write_text(json.dumps(TIGHT_CELL_SWEEP))
    out = tmp_path / "t.json"
    run_cli("verify", str(spec), "--timing", "--json", str(out))
    rep = json.loads(out.read_text())
    assert "timing" in rep and rep["timing"]["seconds"] >= 0
