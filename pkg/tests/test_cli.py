import io
import json
from pathlib import Path

import pytest

from eigpert.cli import exit_code_for, main
from eigpert.errors import (
    MatchingFailure,
    NearOrthogonalPair,
    NotSimple,
    NotVerifiable,
    PinnedEntryZero,
    ResolventBreakdown,
    SingularDecoupling,
)
from eigpert.documents import ParseError

SAMPLES = Path(__file__).resolve().parents[1] / "samples"


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main([str(a) for a in argv], stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def report(*argv):
    code, out, err = run(*argv)
    assert code == 0, err
    return json.loads(out)


def error_of(*argv):
    code, out, err = run(*argv)
    assert out == ""
    return code, json.loads(err)


def test_analyze_symmetric_example():
    r = report("analyze", "--input", SAMPLES / "diag_swap.json")
    assert r["triple"]["lambda0"] == [1.0, 0.0]
    d = r["derivatives"]
    assert d["lambda_prime"] == [0.0, 0.0]
    assert [z[0] for z in d["x_prime"]] == pytest.approx([0, -1], abs=1e-15)
    assert [z[0] for row in d["pi_prime"] for z in row] == pytest.approx([0, -1, -1, 0], abs=1e-15)


def test_analyze_example1_off_the_branch_point():
    r = report("analyze", "--input", SAMPLES / "example1_tau0.01.json")
    assert r["triple"]["lambda0"][0] == pytest.approx(0.1, abs=1e-10)


def test_analyze_with_pinned_scheme():
    r = report("analyze", "--input", SAMPLES / "diag_swap.json", "--scheme", "n1", "--pin-j", "1", "--pin-k", "1")
    n = r["normalization"]
    assert (n["scheme"], n["pin_j"], n["pin_k"]) == ("n1", 1, 1)
    assert [z[0] for z in n["x_hat"]] == pytest.approx([1, 0], abs=1e-15)
    assert [z[0] for z in n["y_hat"]] == pytest.approx([1, 0], abs=1e-15)
    assert [z[0] for z in n["x_hat_prime"]] == pytest.approx([0, -1], abs=1e-15)


def test_verify_seeded_passes():
    r = report("verify", "--seed", 7)
    assert r["verdict"] == "pass"
    assert set(r["sweeps"]) == {"lambda", "projector", "x", "ystar"}
    assert r["input"]["seed"] == 7


def test_defective_demo_report():
    r = report("defective-demo", "--example", 2)
    exps = {f["quantity"]: f["fitted_exponent"] for f in r["fits"]}
    assert exps["eigenvalue"] == pytest.approx(1.5, abs=0.02)
    assert r["tau0_error"] in ("NotSimple", "NearOrthogonalPair")


def test_contour_check_report():
    r = report("contour-check", "--input", SAMPLES / "diag_swap.json")
    assert r["count"] == 1
    assert r["oracle"]["projector_error"] <= 1e-12


# -- determinism -------------------------------------------------------------


@pytest.mark.parametrize(
    "argv",
    [
        ("verify", "--seed", 11, "--dim", 9),
        ("analyze", "--input", SAMPLES / "example2_tau0.05.json"),
        ("defective-demo", "--example", 1),
        ("contour-check", "--seed", 3),
    ],
)
def test_reports_are_byte_identical(argv):
    first = run(*argv)
    second = run(*argv)
    assert first[0] == 0
    assert first == second


def test_output_flag_matches_stdout(tmp_path):
    path = tmp_path / "r.json"
    code, out, _ = run("analyze", "--seed", 2, "--output", path)
    assert code == 0 and out == ""
    assert path.read_text() == run("analyze", "--seed", 2)[1]


# -- exit-code taxonomy ------------------------------------------------------


def _write(tmp_path, doc):
    p = tmp_path / "family.json"
    p.write_text(json.dumps(doc))
    return p


def test_exit_2_parse_errors(tmp_path):
    assert error_of("analyze", "--input", tmp_path / "missing.json")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    code, err = error_of("analyze", "--input", bad)
    assert code == 2 and err["error"] == "ParseError"
    assert error_of("verify", "--seed", 1, "--steps", "1e-1:3e-4")[0] == 2
    assert error_of("verify", "--seed", 1, "--select", "nearest")[0] == 2
    assert error_of("frobnicate")[0] == 2
    assert error_of("defective-demo", "--example", 1, "--grid", "1e-1:1e-3:3")[0] == 2
    assert error_of("analyze")[0] == 2


def test_exit_3_not_simple():
    code, err = error_of("analyze", "--input", SAMPLES / "example1_tau0.json")
    assert code == 3 and err["error"] == "NotSimple"
    assert err["exit_code"] == 3


def test_exit_4_numerical(tmp_path):
    # the only requested step lands on an eigenvalue crossing
    doc = {
        "schema_version": 1,
        "kind": "linear",
        "dimension": 2,
        "tau0": [0, 0],
        "matrices": {
            "A0": [[[1, 0], [0, 0]], [[0, 0], [1.05, 0]]],
            "dA": [[[0, 0], [0, 0]], [[0, 0], [-0.5, 0]]],
        },
        "selector": "closest=1,0",
    }
    code, err = error_of("verify", "--input", _write(tmp_path, doc), "--steps", "0.1")
    assert code == 4 and err["error"] == "MatchingFailure"


def test_exit_5_scheme():
    code, err = error_of("verify", "--seed", 4, "--scheme", "n4")
    assert code == 5 and err["error"] == "NotVerifiable"
    code, err = error_of("analyze", "--input", SAMPLES / "triangular_n1.json", "--scheme", "n1", "--pin-j", 2)
    assert code == 5 and err["error"] == "PinnedEntryZero"


@pytest.mark.parametrize(
    "exc, code",
    [
        (ParseError("x"), 2),
        (NotSimple("x"), 3),
        (SingularDecoupling("x"), 3),
        (NearOrthogonalPair("x"), 3),
        (MatchingFailure("x"), 4),
        (ResolventBreakdown("x"), 4),
        (NotVerifiable("x"), 5),
        (PinnedEntryZero("x"), 5),
    ],
)
def test_exit_code_table(exc, code):
    assert exit_code_for(exc) == code
