from __future__ import annotations

import subprocess
import sys
from pathlib import Path

import pytest

from charkummer import cli

ROOT = Path(__file__).resolve().parents[1]
GRAPHS = ROOT / "graphs"
DB = ROOT / "src" / "charkummer" / "data" / "rdp_classes.txt"


def run(capsys, *argv):
    rc = cli.main(list(argv))
    out = capsys.readouterr()
    return rc, out.out, out.err


def test_quotient_ok(capsys):
    rc, out, _ = run(capsys, "quotient", "--a", "x", "--b", "y")
    assert rc == 0
    assert "z^2 + x^2*y + x*y^2 + x*y*z" in out


def test_quotient_records_format(capsys):
    rc, out, _ = run(capsys, "quotient", "--a", "x", "--b", "y", "--format", "records")
    assert rc == 0
    lines = [l for l in out.splitlines() if l.startswith("assert ")]
    assert lines and all("status=pass" in l for l in lines)


def test_not_a_parameter_system_is_domain_error(capsys):
    rc, _, err = run(capsys, "quotient", "--a", "0", "--b", "y")
    assert rc == 3
    assert "parameter system" in err


@pytest.mark.parametrize("poly", ["x+", "x*(y", "x^^2", "q"])
def test_bad_polynomial_is_parse_error(capsys, poly):
    rc, _, err = run(capsys, "quotient", "--a", poly, "--b", "y")
    assert rc == 2
    assert err.startswith("error:")


def test_lattice_fundamental(capsys):
    rc, out, _ = run(capsys, "lattice", "fundamental", "--graph", str(GRAPHS / "elliptic_double_point.cfg"))
    assert rc == 0
    assert out.splitlines()[0] == "Z = 1,2,1,1,1  Z^2 = -1"


def test_lattice_missing_graph_is_parse_error(capsys, tmp_path):
    rc, _, _ = run(capsys, "lattice", "fundamental", "--graph", str(tmp_path / "nope.cfg"))
    assert rc == 2


def test_serre_depth(capsys):
    rc, out, _ = run(capsys, "serre", "--g", "3", "--n", "2", "--p", "2")
    assert rc == 0
    assert "depth: 5" in out
    assert "fails for k >= 6" in out


def test_tjurina(capsys):
    rc, out, _ = run(capsys, "tjurina", "--poly", "z^2 + x*y")
    assert rc == 0
    assert out.strip() == "2"


def test_precision_env_must_be_integer(capsys, monkeypatch):
    monkeypatch.setenv("CHARKUMMER_PRECISION", "abc")
    rc, _, err = run(capsys, "tjurina", "--poly", "z^2 + x*y")
    assert rc == 2
    assert "CHARKUMMER_PRECISION" in err


def test_scenario_ordinary(capsys):
    rc, out, _ = run(capsys, "scenario", "--p-rank", "2", "--format", "records")
    assert rc == 0
    assert "status=fail" not in out


def test_verify_paper_records_are_stable_and_sorted(capsys):
    rc1, out1, _ = run(capsys, "verify-paper", "--format", "records")
    rc2, out2, _ = run(capsys, "verify-paper", "--format", "records")
    assert out1 == out2
    ids = [l.split()[1] for l in out1.splitlines()]
    assert ids == sorted(ids)
    # the only red records are the right-equivalence normal form for q in F4*
    failing = [l.split()[1] for l in out1.splitlines() if "status=fail" in l]
    assert failing == ["id=c11.right_equivalence.q=1", "id=c11.right_equivalence.q=gen_gf4"]
    assert rc1 == rc2 == 1


def test_verify_paper_subset_passes(capsys):
    rc, out, _ = run(capsys, "verify-paper", "--criteria", "1,6,14")
    assert rc == 0
    assert "criterion  6 PASS" in out


def test_corrupted_database_names_failing_class(capsys, tmp_path):
    text = DB.read_text().replace(
        "class name=D8^2 family=D index=8 coindex=2 equation=\"z^2 + x*y^2*z + x*y^4 + x^2*y\" tau=12",
        "class name=D8^2 family=D index=8 coindex=2 equation=\"z^2 + x*y^2*z + x*y^4 + x^2*y\" tau=13")
    assert text != DB.read_text()
    bad = tmp_path / "bad.txt"
    bad.write_text(text)
    rc, out, _ = run(capsys, "verify-paper", "--rdp-db", str(bad), "--criteria", "1", "--format", "records")
    assert rc == 1
    failing = [l for l in out.splitlines() if "status=fail" in l]
    assert any("D8^2" in l for l in failing)


def test_malformed_database_is_parse_error(capsys, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("class name=Q1 family=Q index=1 tau=1 provenance=PAPER\n")
    rc, _, _ = run(capsys, "verify-paper", "--rdp-db", str(bad), "--criteria", "1")
    assert rc == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "charkummer", "tjurina", "--poly", "z^2 + x*y"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.strip() == "2"
