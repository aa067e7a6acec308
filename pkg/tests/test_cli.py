import subprocess
import sys

import pytest

from ifgcyl import algebra
from ifgcyl.cli import main, parse_team
from ifgcyl.formula import parse
from ifgcyl.model import Structure, space
from ifgcyl.semantics import meaning, models_minus, models_plus

SIGNATURE_EXAMPLE = "A v0/{} . E v1/{v0} . v0 = v1"


@pytest.fixture
def two(tmp_path):
    path = tmp_path / "two.txt"
    path.write_text("universe = 2\n")
    return str(path)


@pytest.fixture
def unary3(tmp_path):
    path = tmp_path / "unary3.txt"
    path.write_text("universe = 3\nrel R 1 = (0)\n")
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_eval_signature_example(capsys, two):
    code, out, _ = run(capsys, "eval", "--structure", two, "--formula", SIGNATURE_EXAMPLE)
    assert code == 0
    assert out == "plus: false\nminus: false\n"


def test_eval_tautology_and_empty_team(capsys, two):
    _, out, _ = run(capsys, "eval", "--structure", two, "--formula", "v0 = v0")
    assert out == "plus: true\nminus: false\n"
    _, out, _ = run(capsys, "eval", "--structure", two, "--formula", "v0 = v0", "--team", "{}")
    assert out == "plus: true\nminus: true\n"


@pytest.mark.parametrize("team", ["{(0,0),(1,1)}", "{(0,1)}", "{(0,0),(0,1),(1,0)}", "full"])
@pytest.mark.parametrize("text", ["v0 = v1", SIGNATURE_EXAMPLE, "(v0 = v1 |/{v0} ~v0 = v1)"])
def test_eval_matches_library(capsys, two, team, text):
    _, out, _ = run(capsys, "eval", "--structure", two, "--formula", text, "--team", team,
                    "--format", "machine")
    sp = space(2, 2)
    mask = parse_team(team, sp)
    phi = parse(text, 2)
    S = Structure(2)
    expected = (f"PLUS={str(models_plus(S, phi, mask)).lower()}\n"
                f"MINUS={str(models_minus(S, phi, mask)).lower()}\n")
    assert out == expected


def test_meaning_equality(capsys, two):
    code, out, _ = run(capsys, "meaning", "--structure", two, "--formula", "v0 = v1")
    assert code == 0
    assert "maximal trumps:\n  {(0,0),(1,1)}\n" in out
    assert "perfect: yes" in out


def test_meaning_signature_example_not_perfect(capsys, two):
    _, out, _ = run(capsys, "meaning", "--structure", two, "--formula", SIGNATURE_EXAMPLE, "--format", "machine")
    assert "PERFECT=no" in out
    assert "DOUBLE_SUIT=yes" in out


def test_meaning_contradiction_is_zero(capsys, two):
    _, out, _ = run(capsys, "meaning", "--structure", two, "--formula", "~(v0 = v0)", "--format", "machine")
    assert "ZERO=yes" in out
    m = meaning(Structure(2), parse("~(v0 = v0)"))
    assert m == algebra.zero(2, 1)


def test_perfect_verb(capsys, two):
    _, out, _ = run(capsys, "perfect", "--formula", SIGNATURE_EXAMPLE, "--structure", two)
    assert "perfection: A v0/{} . E v1/{} . v0 = v1" in out
    assert "perfect formula: no" in out
    assert "same meaning as perfection: no" in out


@pytest.mark.parametrize("size, n, count", [(2, 1, 2), (2, 2, 4), (3, 2, 4)])
def test_iso_equality_only(capsys, tmp_path, size, n, count):
    path = tmp_path / "s.txt"
    path.write_text(f"universe = {size}\n")
    code, out, _ = run(capsys, "iso", "--structure", str(path), "--n", str(n))
    assert code == 0
    assert out.rstrip().endswith(f"PASS ({count} elements)")


def test_iso_machine(capsys, unary3):
    code, out, _ = run(capsys, "iso", "--structure", unary3, "--n", "2", "--format", "machine")
    assert code == 0
    assert "EQ F(V+W)=F(V)+F(W) PASS" in out
    assert "RESULT=PASS" in out


def test_closure_verb(capsys, two):
    code, out, _ = run(capsys, "closure", "--structure", two, "--n", "2", "--format", "machine")
    assert code == 0
    assert "ELEMENTS=4" in out and "PERFECT=4" in out
    code, out, _ = run(capsys, "closure", "--structure", two, "--n", "2", "--formula", SIGNATURE_EXAMPLE,
                       "--format", "machine")
    facts = dict(line.split("=") for line in out.split())
    assert int(facts["ELEMENTS"]) > int(facts["PERFECT"])
    assert facts["DOUBLE_SUITS"] == facts["ELEMENTS"]


@pytest.mark.parametrize(
    "argv, code",
    [
        (["eval", "--formula", "v0 = v0"], 1),
        (["eval", "--structure", "STRUCT", "--formula", "(v0 ="], 1),
        (["eval", "--structure", "STRUCT", "--formula", "v0 = v3", "--n", "2"], 1),
        (["eval", "--structure", "/nonexistent/file", "--formula", "v0 = v0"], 1),
        (["eval", "--structure", "STRUCT", "--formula", "v0 = v0", "--team", "{(0,0)}"], 1),
        (["bogus"], 1),
        (["iso", "--structure", "STRUCT"], 1),
        (["meaning", "--structure", "STRUCT", "--formula", "v0 = v0", "--n", "5"], 2),
        (["closure", "--structure", "STRUCT", "--n", "2", "--signature", "full", "--closure-cap", "5"], 2),
    ],
)
def test_exit_codes(capsys, two, argv, code):
    argv = [two if a == "STRUCT" else a for a in argv]
    got, _, err = run(capsys, *argv)
    assert got == code
    assert err


def test_module_entry_point(two):
    proc = subprocess.run(
        [sys.executable, "-m", "ifgcyl", "eval", "--structure", two, "--formula", SIGNATURE_EXAMPLE],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout == "plus: false\nminus: false\n"
