import json
import subprocess
import sys
from fractions import Fraction

import pytest

from nerveforms.catalog import COEFFICIENTS
from nerveforms.cli import main
from nerveforms.textio import parse, print_canonical
from nerveforms.torus import torus_bss_c


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_torus_suite_passes(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "torus", "--p", "3", "--n", "3")
    assert code == 0
    assert "overall: PASS" in out


def test_euler_json_report(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "euler", "--format", "json")
    assert code == 0
    report = json.loads(out)
    assert report["schema"] == "nerveforms-report-1"
    entries = {e["id"]: e for e in report["entries"]}
    assert entries[r"coefficient -\frac{1}{96\pi^{2}}"]["status"] == "pass"
    assert entries[r"coefficient -\frac{1}{64\pi^{2}}"]["status"] == "pass"
    assert "global sign" in entries["D(TE) = E"]["note"]


def test_ng_c3_suite_reports_non_coincidence(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "ng-c3")
    assert code == 0
    assert "[PASS] D(c15 + c24 + c33) = 0" in out
    assert "[PASS] 2ch3 - ch2 cup ch1 + ch1^3/6 differs from c15 + c24 + c33" in out


def test_generate_chern_simons_latex(capsys):
    code, out, _ = run(capsys, "generate", "--target", "cs", "--poly", "ch:3", "--group", "gl", "--format", "latex")
    assert code == 0
    lines = out.strip().splitlines()
    assert [line.split(":")[0] for line in lines] == [
        "level 0, degree 5", "level 1, degree 4", "level 2, degree 3"]
    assert r"\operatorname{tr}" in out


def test_generate_torus_chern_class(capsys):
    code, out, _ = run(capsys, "generate", "--target", "bss", "--poly", "c:2", "--group", "torus:2")
    assert code == 0
    assert out.strip() == print_canonical(torus_bss_c(2, 2))


@pytest.mark.parametrize(
    "argv",
    [
        ["generate", "--target", "cs", "--poly", "pf", "--group", "torus:2"],
        ["generate", "--target", "cs", "--poly", "pf", "--group", "gl"],
        ["generate", "--target", "cs", "--poly", "ch:2", "--group", "so4"],
        ["generate", "--target", "bss", "--poly", "ch:0", "--group", "gl"],
        ["generate", "--target", "bss", "--poly", "ch:2", "--group", "gl", "--level", "5"],
        ["verify", "--suite", "ch3-cs", "--q", "3"],
        ["verify", "--suite", "torus", "--p", "0"],
        ["parse", "tr(inv(h1)"],
    ],
)
def test_usage_errors_exit_two(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err.startswith("nerveforms: error:")


def test_unknown_suite_is_a_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        main(["verify", "--suite", "nope"])
    assert info.value.code == 2


@pytest.mark.parametrize(
    "text, expected",
    [
        ("d(tr(inv(h1)*d(h1)))", "0"),
        ("tr(th0*th1) + tr(th1*th0)", "0"),
    ],
)
def test_eval_prints_canonical_form(capsys, tmp_path, text, expected):
    f = tmp_path / "expr.txt"
    f.write_text(text)
    code, out, _ = run(capsys, "eval", str(f))
    assert code == 0
    assert out.strip() == expected


def test_eval_numeric_reports_nonzero(capsys, tmp_path):
    f = tmp_path / "expr.txt"
    f.write_text("tr(th0*th1) - tr(th1*th0)")
    code, out, _ = run(capsys, "eval", str(f), "--numeric", "--n", "2")
    assert code == 0
    assert out.splitlines()[0] == "2*tr(th0*th1)"
    assert "(nonzero)" in out


def test_eval_parse_error_exit_two(capsys, tmp_path):
    f = tmp_path / "expr.txt"
    f.write_text("tr(th0*")
    code, _, _ = run(capsys, "eval", str(f))
    assert code == 2


def test_eval_missing_file_exit_two(capsys, tmp_path):
    code, _, _ = run(capsys, "eval", str(tmp_path / "missing.txt"))
    assert code == 2


@pytest.mark.parametrize("fmt", ["text", "json", "latex"])
def test_parse_formats(capsys, fmt):
    code, out, _ = run(capsys, "parse", "1/(2*pi*I) * tr(inv(h1)*d(h1))", "--format", fmt)
    assert code == 0
    if fmt == "json":
        assert json.loads(out)["version"] == "nerveforms-1"
    elif fmt == "text":
        assert parse(out.strip()) == parse("1/(2*pi*I) * tr(inv(h1)*d(h1))")


def test_mutated_coefficient_fails_both_paths(capsys, monkeypatch):
    monkeypatch.setitem(COEFFICIENTS, "C15", Fraction(1, 9))
    code, out, _ = run(capsys, "verify", "--suite", "thm36", "--format", "json")
    assert code == 1
    failed = {e["id"] for e in json.loads(out)["entries"] if e["status"] == "fail"}
    assert "generated (p=3, q=2) = stated C1,5" in failed
    assert "generated (p=3, q=2) = stated C1,5 [numeric n=3]" in failed


def test_mutated_coefficient_fails_chern_simons_suite(capsys, monkeypatch):
    monkeypatch.setitem(COEFFICIENTS, "C15", Fraction(1, 9))
    code, _, _ = run(capsys, "verify", "--suite", "ch3-cs")
    assert code == 1


def test_json_reports_are_byte_identical(capsys):
    _, first, _ = run(capsys, "verify", "--suite", "ng-c1", "--format", "json", "--seed", "7")
    _, second, _ = run(capsys, "verify", "--suite", "ng-c1", "--format", "json", "--seed", "7")
    assert first == second
    assert json.loads(first)["seed"] == 7


def test_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("NERVEFORMS_SEED", "42")
    _, out, _ = run(capsys, "verify", "--suite", "ng-c1", "--format", "json", "--no-numeric")
    assert json.loads(out)["seed"] == 42


def test_bad_seed_environment_is_usage_error(capsys, monkeypatch):
    monkeypatch.setenv("NERVEFORMS_SEED", "abc")
    code, _, _ = run(capsys, "verify", "--suite", "ng-c1")
    assert code == 2


def test_timings_only_on_request(capsys):
    _, out, _ = run(capsys, "verify", "--suite", "ng-c1", "--format", "json", "--no-numeric")
    assert "wall_ms" not in out
    _, out, _ = run(capsys, "verify", "--suite", "ng-c1", "--format", "json", "--no-numeric", "--timings")
    assert "wall_ms" in out


def test_latex_report(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "ng-c1", "--format", "latex", "--no-numeric")
    assert code == 0
    assert r"\begin{tabular}" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "nerveforms", "parse", "tr(th0^2)"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.strip() == "0"
