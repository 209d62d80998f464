"""The equihom command line: golden outputs, exit codes and determinism."""

import subprocess
import sys

import pytest

from equihom import cli, verify
from equihom.groups import builtin, format_group_text


def run(*argv):
    return subprocess.run([sys.executable, "-m", "equihom", *argv], capture_output=True, text=True)


def table(out):
    """Data rows (skipping comments, header and verdict lines) as lists."""
    rows = []
    for line in out.splitlines():
        if not line or line.startswith(("#", "PASS", "FAIL", "degree")):
            continue
        rows.append(line.split("\t"))
    return rows


def test_phi_example():
    r = run("phi", "--group", "elementary-2-2", "--p", "2", "--max-degree", "4")
    assert r.returncode == 0
    assert [int(row[1]) for row in table(r.stdout)] == [1, 3, 5, 7, 9]
    assert r.stdout.rstrip().splitlines()[-1].startswith("PASS")


def test_hilbert_integral_example():
    r = run("hilbert", "--p", "2", "--n", "1", "--form", "integral", "--max-degree", "4")
    assert r.returncode == 0
    assert [int(row[1]) for row in table(r.stdout)] == [1, 0, 1, 0, 1]


def test_extraspecial_example():
    r = run("extraspecial", "--n", "1", "--poset-homology")
    assert r.returncode == 0
    assert table(r.stdout) == [["0", "3"]]


def test_bredon_both_routes(capsys):
    assert cli.main(["bredon", "--group", "cyclic-2", "--complex", "s-alpha", "--route", "both"]) == 0
    out = capsys.readouterr().out
    assert table(out) == [["0", "2", "2"], ["1", "1", "1"]]


def test_cohomology_asymmetry(capsys):
    assert cli.main(["bredon", "--group", "cyclic-2", "--complex", "s-alpha", "--cohomology"]) == 0
    assert table(capsys.readouterr().out) == [["0", "1"], ["1", "0"]]


def test_e1_nerve(capsys):
    assert cli.main(["e1", "--group", "elementary-2-2", "--max-degree", "4"]) == 0
    out = capsys.readouterr().out
    totals = out.split("# totals by degree h+q")[1]
    assert [int(row[1]) for row in table(totals)] == [1, 3, 5, 7, 9]


def test_group_from_file(tmp_path, capsys):
    f = tmp_path / "d8.txt"
    f.write_text(format_group_text(builtin("dihedral", 8)))
    assert cli.main(["group", "--group", str(f), "--subgroups"]) == 0
    assert "8" in capsys.readouterr().out


def test_non_p_group_certificate(capsys):
    assert cli.main(["phi", "--group", "symmetric-3", "--p", "2"]) == 0
    out = capsys.readouterr().out
    assert "certificate\t1" in out


@pytest.mark.parametrize("argv", [["group", "--group", "bogus"],
                                  ["phi", "--group", "cyclic-2", "--p", "4"],
                                  ["hilbert", "--p", "2", "--n", "1", "--max-degree", "-1"],
                                  ["bredon", "--group", "cyclic-2", "--complex", "no-such-fixture"],
                                  ["bredon", "--group", "cyclic-2", "--complex", "/nonexistent/x"]])
def test_usage_errors_exit_2(argv, capsys):
    assert cli.main(argv) == 2
    assert capsys.readouterr().err.startswith("error:")


def test_parse_error_names_line(tmp_path, capsys):
    f = tmp_path / "bad.txt"
    f.write_text("group 2\nmul 0 0 0\nmul 0 zz 1\n")
    assert cli.main(["group", "--group", str(f)]) == 2
    err = capsys.readouterr().err
    assert "line 3" in err and "zz" in err


def test_size_cap_exit_3(monkeypatch, capsys):
    monkeypatch.setenv("EQUIHOM_MAX_CELLS", "5")
    assert cli.main(["bredon", "--group", "dihedral-8", "--complex", "gamma-join-2"]) == 3
    assert "MAX_CELLS" in capsys.readouterr().err


def test_verification_failure_exit_1(monkeypatch, capsys):
    failing = {1: lambda seed=0: verify.Criterion(1, "forced", False)}
    monkeypatch.setattr(verify, "CRITERIA", failing)
    assert cli.main(["verify-all"]) == 1
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "FAIL\t1\tforced"


def test_verify_all_subset(capsys):
    assert cli.main(["verify-all", "--only", "2", "8"]) == 0
    lines = [l for l in capsys.readouterr().out.splitlines() if l.startswith(("PASS", "FAIL"))]
    assert lines[0].startswith("PASS\t2\t") and lines[1].startswith("PASS\t8\t")


def test_output_file_and_determinism(tmp_path):
    argv = ["e1", "--group", "dihedral-8", "--flavor", "strata", "--complex", "gamma-sphere-2",
            "--max-degree", "3"]
    a, b = tmp_path / "a.tsv", tmp_path / "b.tsv"
    assert cli.main(["--output", str(a), *argv]) == 0
    assert cli.main(["--output", str(b), *argv]) == 0
    assert a.read_bytes() == b.read_bytes() and a.read_text()
    r = run(*argv)
    assert r.stdout == a.read_text()
