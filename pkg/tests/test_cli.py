import json
import subprocess
import sys

import jsonschema
import pytest

from ncrewrite import cli
from ncrewrite.freealg import ParseError
from ncrewrite.suite import (Check, IDENTITY_GROUPS, builtin_checks, file_checks, load_schema, parse_suite,
                             run_checks)


def run(capsys, *argv):
    rc = cli.main(list(argv))
    out = capsys.readouterr()
    return rc, out.out, out.err


@pytest.mark.parametrize("system, expr, nf", [
    ("weyl", "x*y", "y*x + 1"),
    ("wprime", "f*y'", "0"),
    ("toeplitz", "vstar*v", "1"),
    ("toeplitz", "v*vstar", "-e + 1"),
    ("laurent", "z^3*zinv^2", "z"),
])
def test_nf(capsys, system, expr, nf):
    rc, out, _ = run(capsys, "nf", "--system", system, "--expr", expr)
    assert rc == cli.EXIT_OK and out.strip() == nf


def test_nf_json_and_decompose(capsys):
    rc, out, _ = run(capsys, "nf", "--system", "toeplitz", "--expr", "v*e*vstar^2 + v^2", "--decompose",
                     "--format", "json")
    doc = json.loads(out)
    assert rc == 0 and doc["system"] == "toeplitz" and "decomposition" in doc


def test_pretty_names(capsys):
    rc, out, _ = run(capsys, "nf", "--system", "toeplitz", "--expr", "vstar^2", "--pretty")
    assert rc == 0 and out.strip() == "v*^2"


@pytest.mark.parametrize("argv, code", [
    (["nf", "--system", "nope", "--expr", "x"], cli.EXIT_SYSTEM),
    (["nf", "--system", "weyl", "--expr", "x+*"], cli.EXIT_PARSE),
    (["nf", "--system", "weyl", "--expr", "q"], cli.EXIT_PARSE),
    (["nf", "--system", "weyl", "--expr", "x^30*y^30", "--max-terms", "5"], cli.EXIT_BUDGET),
    (["verify", "--system", "weyl", "--lhs", "x*y", "--rhs", "y*x"], cli.EXIT_FAIL),
    (["seminorm", "--kind", "P_N"], cli.EXIT_PARSE),
    (["report"], cli.EXIT_PARSE),
])
def test_exit_codes(capsys, argv, code):
    rc, _, err = run(capsys, *argv)
    assert rc == code
    if code != cli.EXIT_FAIL:
        assert err.startswith("error:")


def test_verify_pass(capsys):
    rc, out, _ = run(capsys, "verify", "--system", "weyl", "--lhs", "x*y - y*x", "--rhs", "1")
    assert rc == 0 and out.strip() == "pass"


def test_presentation_file(capsys, tmp_path):
    pres = tmp_path / "ab.txt"
    pres.write_text("alphabet: a b\norder: deglex a > b\nrule: a*b -> b*a + 1\n")
    rc, out, _ = run(capsys, "nf", "--presentation", str(pres), "--expr", "a*b^2")
    assert rc == 0 and out.strip() == "b^2*a + 2*b"
    pres.write_text("alphabet: a\nrule: a -> a*a\n")
    assert run(capsys, "nf", "--presentation", str(pres), "--expr", "a")[0] == cli.EXIT_PARSE


@pytest.mark.parametrize("argv, value", [
    (["--kind", "P_N", "--n", "1", "--expr", "v*e*vstar^2"], "6"),
    (["--kind", "Q_N", "--n", "0", "--expr", "z + zinv"], "2"),
    (["--kind", "BETA_PHI", "--phi", "ONE", "--expr", "y'*f*x'"], "2"),
])
def test_seminorm_values(capsys, argv, value):
    rc, out, _ = run(capsys, "seminorm", *argv)
    assert rc == 0 and out.strip() == value


def test_seminorm_sweeps(capsys):
    assert run(capsys, "seminorm", "--kind", "P_N", "--n", "2", "--fuzz", "--trials", "20",
               "--truncation-dim", "5")[0] == 0
    assert run(capsys, "seminorm", "--mixed", "--trials", "10")[0] == 0
    assert run(capsys, "seminorm", "--tensor-bound", "--trials", "10")[0] == 0
    rc, out, _ = run(capsys, "seminorm", "--kind", "BETA_PHI", "--phi", "ONE", "--witness")
    assert rc == 0 and out.startswith("witness:")
    assert run(capsys, "seminorm", "--kind", "BETA_PHI", "--phi", "PHI0", "--witness")[0] == cli.EXIT_FAIL


@pytest.mark.parametrize("at", ["t", "0", "pi/2"])
def test_family_command(capsys, at):
    rc, out, _ = run(capsys, "family", "--name", "WPRIME_PHI_T", "--at", at, "--format", "json")
    doc = json.loads(out)
    assert rc == 0 and doc["relations"] == "pass" and set(doc["assignment"]) == {"x'", "y'"}


def test_check_file(capsys, tmp_path):
    suite = tmp_path / "ids.txt"
    suite.write_text("# identities\nCHECK weyl: x*y == y*x + 1\nCHECK toeplitz: e*e == e\n"
                     "CHECK weyl: x*y == y*x\nCHECK nope: a == a\n")
    rc, out, _ = run(capsys, "suite", "--suite", str(suite), "--format", "json", "--no-timing")
    doc = json.loads(out)
    assert rc == cli.EXIT_FAIL
    assert doc["summary"] == {"total": 4, "pass": 2, "fail": 1, "error": 1}
    fail = next(c for c in doc["checks"] if c["status"] == "fail")
    assert fail["id"] == "line.4" and fail["residual"] == "1"
    jsonschema.validate(doc, load_schema())


def test_malformed_check_file(capsys, tmp_path):
    suite = tmp_path / "bad.txt"
    suite.write_text("CHECK weyl x*y == y*x\n")
    assert run(capsys, "suite", "--suite", str(suite))[0] == cli.EXIT_PARSE
    assert run(capsys, "suite", "--suite", str(tmp_path / "missing.txt"))[0] == cli.EXIT_PARSE


@pytest.fixture(scope="module")
def builtin_report(tmp_path_factory):
    path = tmp_path_factory.mktemp("rep") / "builtin.json"
    assert cli.main(["suite", "--suite", "builtin", "--trials", "5", "--format", "json", "--output", str(path),
                     "--jobs", "4"]) == 0
    return path


def test_builtin_report_validates(capsys, builtin_report):
    doc = json.loads(builtin_report.read_text())
    jsonschema.validate(doc, load_schema())
    assert doc["summary"]["fail"] == doc["summary"]["error"] == 0
    assert [c["id"] for c in doc["checks"]] == sorted(c["id"] for c in doc["checks"])
    rc, out, _ = run(capsys, "report", "--input", str(builtin_report))
    assert rc == 0 and "passed" in out


def test_report_rejects_tampered_json(capsys, builtin_report, tmp_path):
    doc = json.loads(builtin_report.read_text())
    doc["checks"][0]["status"] = "maybe"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    assert run(capsys, "report", "--input", str(bad))[0] == cli.EXIT_PARSE


def test_schema_printing(capsys):
    rc, out, _ = run(capsys, "report", "--schema")
    assert rc == 0 and json.loads(out) == load_schema()


def test_parallel_and_serial_runs_agree():
    checks = [c for c in builtin_checks(trials=3) if c.id.startswith(IDENTITY_GROUPS)]
    a = run_checks("x", checks, jobs=1, timing=False).to_json(False)
    b = run_checks("x", checks, jobs=4, timing=False).to_json(False)
    assert a == b


def test_run_checks_records_errors_and_rejects_duplicates():
    def boom():
        raise ValueError("bad input")
    rep = run_checks("x", [Check("a", "s", boom), Check("b", "s", lambda: (True, ""))], timing=False)
    assert [c.status for c in rep.checks] == ["error", "pass"]
    assert rep.checks[0].residual == "ValueError: bad input"
    with pytest.raises(ValueError):
        run_checks("x", [Check("a", "s", boom), Check("a", "s", boom)])


def test_parse_suite_lines():
    lines = parse_suite("CHECK weyl: x == x  # trailing\n\n# only a comment\n")
    assert [(l.lineno, l.system, l.lhs, l.rhs) for l in lines] == [(1, "weyl", "x", "x")]
    assert [c.id for c in file_checks(lines)] == ["line.1"]
    with pytest.raises(ParseError):
        parse_suite("CHECK weyl: x")


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "ncrewrite", "nf", "--system", "weyl", "--expr", "x^2*y"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and res.stdout.strip() == "y*x^2 + 2*x"
