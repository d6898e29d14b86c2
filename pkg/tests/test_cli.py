import subprocess
import sys

import pytest

from conftest import fixture_path

from arcover.cli import run


def cli(*args):
    argv = [fixture_path(a) if a.endswith((".alg", ".tq")) else a for a in args]
    return run(argv)


@pytest.mark.parametrize(
    "args, expected",
    [
        (("hh", "example_a.alg"), "HH1 = 7"),
        (("hh", "example_c.alg"), "HH1 = 0"),
        (("hh", "riedtmann.alg"), "HH1 = 3"),
        (("pi1", "riedtmann.alg"), "verdict: trivial"),
        (("pi1", "kronecker.alg"), "verdict: free(1)"),
        (("orbit-graph", "example_c.tq"), "tree: yes, rank: 0"),
        (("orbit-graph", "example_a.tq"), "tree: no, rank: 3"),
        (("validate", "example_a.alg"), "dimension: 12"),
        (("basis", "a2.alg"), "1 -> 2: a"),
        (("knit", "a2.alg"), "tau I2 = P1"),
        (("analyze", "example_a.tq"), "maximal projectives: P1"),
        (("left-part", "a2.alg"), "left part: 3"),
        (("left-section", "a2.tq", "P2", "I2"), "left section: yes"),
        (("tqcover", "verify", "example_a.tq"), "galois: yes"),
        (("tqcover", "quotient", "example_a.tq"), "isomorphic to example_a_gamma: yes"),
        (("cover", "quotient", "example_a_cover.alg"), "matches example_a: yes"),
        (("cover", "verify", "kronecker.alg", "--functor", "kronecker_F"), "galois: yes"),
        (("cover", "pushdown", "kronecker.alg", "--functor", "kronecker_p"),
         "kronecker_p: push-down of P_s2 is isomorphic to P_2: yes"),
        (("cover-algebra", "example_a.tq", "--algebra", "example_a.alg"),
         "cover algebra example_a': 10 vertices, 14 arrows, dim 24 (route: voltage search)"),
        (("report", "theorem1", "example_c.alg", "example_c.tq", "--standard"), "orbit graph is a tree: weakly shod"),
        (("report", "theorem1", "example_a.alg", "example_a.tq", "--standard"), "bound rank <= dim HH1: 3 <= 7: yes"),
        (("filtration", "example_a.alg", "--base", "2,3,4", "--add", "5,1", "--tq", "example_a.tq"),
         "maximal filtration: yes"),
    ],
)
def test_commands(args, expected):
    status, text = cli(*args)
    assert status == 0, text
    assert any(line.strip().endswith(expected) for line in text.splitlines()), text


def test_forced_cover_algebra_relations():
    status, text = cli("cover-algebra", "riedtmann.tq", "--algebra", "riedtmann.alg", "--forced", "--window", "5")
    assert status == 0
    assert "relation Py@-4>Px@-3*Px@-5>Py@-4" in text
    assert "relation Px@-4>Py@-3*Py@-5>Px@-4 + Py@-4>Py@-3*Py@-5>Py@-4" in text


def test_unforced_non_standard_cover_fails():
    status, text = cli("cover-algebra", "riedtmann.tq", "--algebra", "riedtmann.alg", "--window", "5")
    assert status == 1
    assert "forced" in text


@pytest.mark.parametrize(
    "args, status",
    [
        (("left-section", "a2.tq", "P1", "I2"), 1),
        (("filtration", "example_a.alg", "--base", "2,3", "--add", "4,5,1", "--tq", "example_a.tq"), 1),
        (("hh", "missing.alg"), 2),
        (("frobnicate",), 2),
        (("hh",), 2),
        (("tqcover", "build", "a2.tq"), 2),
        (("hh", "a2.alg", "--field", "GF(4)"), 2),
    ],
)
def test_exit_codes(args, status):
    assert cli(*args)[0] == status


def test_empty_file(tmp_path):
    p = tmp_path / "empty.alg"
    p.write_text("")
    status, text = run(["hh", str(p)])
    assert status == 2
    assert "no blocks" in text


def test_parse_error_reports_line(tmp_path):
    p = tmp_path / "bad.alg"
    p.write_text("algebra A\nvertex 1\nwhat is this\n")
    status, text = run(["validate", str(p)])
    assert status == 2
    assert "bad.alg:3" in text


def test_dot_file_output(tmp_path):
    out = tmp_path / "g.dot"
    status, text = run(["dot", fixture_path("a2.tq"), "--dot", str(out)])
    assert status == 0
    assert out.read_text().startswith('digraph "a2_gamma"')


@pytest.mark.parametrize(
    "args",
    [
        ("knit", "riedtmann.alg"),
        ("orbit-graph", "riedtmann.tq"),
        ("tqcover", "build", "example_a.tq"),
        ("cover", "build", "example_a_cover.alg"),
    ],
)
def test_output_is_deterministic(args):
    assert cli(*args) == cli(*args)


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-c", "import sys; from arcover.cli import main; sys.exit(main())",
                           "hh", fixture_path("a2.alg")], capture_output=True, text=True, timeout=60)
    assert proc.returncode == 0
    assert "HH1 = 0" in proc.stdout
