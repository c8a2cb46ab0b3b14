import json
import subprocess
import sys

import pytest

from trinitymaps import certificate as certmod
from trinitymaps.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture()
def cert_file(tmp_path, cert5):
    path = tmp_path / "k5.json"
    path.write_text(certmod.dumps(cert5))
    return path


def test_table_text(capsys):
    code, out, _ = run(capsys, "table", "5", "29")
    assert code == 0
    assert "37 x 419" in out and "59 x 53591" in out
    assert "MISMATCH" not in out
    assert out.count(" ok") == 13


def test_table_json_and_flags(capsys):
    code, out, _ = run(capsys, "table", "--from", "5", "--to", "9", "--json")
    assert code == 0
    rows = json.loads(out)["rows"]
    assert [r["N_g"] for r in rows] == ["-11", "-13", "-73"]
    assert all(r["matches"] for r in rows)


def test_table_beyond_reference(capsys):
    code, out, _ = run(capsys, "table", "31", "33", "--json")
    rows = json.loads(out)["rows"]
    assert code == 0 and all(r["matches"] is None for r in rows)


def test_table_bad_range(capsys):
    assert run(capsys, "table", "9", "5")[0] == 2
    assert run(capsys, "table")[0] == 2


def test_construct_and_verify(capsys, tmp_path):
    out_path = tmp_path / "c.json"
    code, out, _ = run(capsys, "construct", "5", "--out", str(out_path))
    assert code == 0 and "PSL(2,11)" in out
    code, out, _ = run(capsys, "verify", str(out_path))
    assert code == 0 and out.strip().endswith("certificate verified")
    code, out, _ = run(capsys, "verify", str(out_path), "--json")
    assert code == 0 and json.loads(out)["ok"] is True


def test_construct_json_is_stable(capsys):
    _, a, _ = run(capsys, "construct", "5", "--json")
    _, b, _ = run(capsys, "construct", "5", "--json")
    assert a == b
    assert json.loads(a)["group_order"] == "660"


def test_construct_prime_override(capsys):
    assert run(capsys, "construct", "19", "--prime", "41")[0] == 2


def test_construct_k3(capsys):
    code, _, err = run(capsys, "construct", "3")
    assert code == 2 and "tetrahedron" in err


def test_verify_tampered(capsys, tmp_path, cert5):
    raw = json.loads(certmod.dumps(cert5))
    raw["S"][1][0]["a0"] = str((int(raw["S"][1][0]["a0"]) + 1) % 11)
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(raw))
    code, out, _ = run(capsys, "verify", str(path))
    assert code == 1 and "FAIL  S matches generator formula" in out


def test_verify_malformed(capsys, tmp_path):
    path = tmp_path / "junk.json"
    path.write_text("{\"schema_version\": \"1\"}")
    assert run(capsys, "verify", str(path))[0] == 2
    path.write_text("not json")
    assert run(capsys, "verify", str(path))[0] == 2
    assert run(capsys, "verify", str(tmp_path / "missing.json"))[0] == 2


def test_plan(capsys):
    code, out, _ = run(capsys, "plan", "35")
    assert code == 0 and "35 = 7 x 5" in out
    code, out, _ = run(capsys, "plan", "27", "--json")
    data = json.loads(out)
    assert (data["d"], data["n"]) == ("9", "3")
    assert run(capsys, "plan", "3")[0] == 2
    assert run(capsys, "plan", "10")[0] == 2


def test_lift_toy(capsys):
    code, out, _ = run(capsys, "lift", "--toy", "z2cubed", "--n", "3", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["total_flags"] == "648" and data["size"] == "216"
    assert data["component_count"] == "3"
    assert data["translation_group_order"] == "27" and data["translation_check"] is True


def test_lift_orbit_mode(capsys, cert_file):
    code, out, _ = run(capsys, "lift", "--base", str(cert_file), "--n", "3", "--mode", "orbit", "--json")
    assert code == 0
    orders = json.loads(out)["orders"]
    assert orders == {"yz": "15", "zx": "15", "xy": "2", "xyz": "15"}


def test_lift_resource_limit(capsys, cert_file):
    code, _, err = run(capsys, "lift", "--base", str(cert_file), "--n", "3")
    assert code == 3 and "budget" in err


@pytest.mark.parametrize("n", ["1", "4"])
def test_lift_bad_n(capsys, n):
    assert run(capsys, "lift", "--toy", "z2cubed", "--n", n)[0] == 2


def test_lift_unknown_toy(capsys):
    assert run(capsys, "lift", "--toy", "cube", "--n", "3")[0] == 2


def test_export_flaggraph(capsys, cert_file, tmp_path):
    dot = tmp_path / "g.dot"
    code, _, _ = run(capsys, "export-flaggraph", str(cert_file), "--dot", str(dot))
    assert code == 0
    text = dot.read_text()
    assert text.startswith("graph flags {")
    assert sum("--" in line for line in text.splitlines()) == 3 * 660 // 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "trinitymaps", "plan", "15"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0 and "5 x 3" in proc.stdout
