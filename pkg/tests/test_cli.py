"""Command-line interface: parsing, output formats, manifests and exit codes."""

import io
import json
import os
from fractions import Fraction as F

import pytest

from rchwave.cli import dumps, main, parse_grid, parse_rational, to_csv


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(argv, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_parse_rational_exact():
    assert parse_rational("1.6") == F(8, 5)
    assert parse_rational("8/5") == F(8, 5)
    assert parse_rational("-0.25") == F(-1, 4)


def test_parse_grid():
    assert parse_grid("1:2:3") == [F(1), F(3, 2), F(2)]
    with pytest.raises(Exception):
        parse_grid("2:1:3")
    with pytest.raises(Exception):
        parse_grid("1:2")


def test_dumps_is_sorted_and_uses_17_digits():
    s = dumps({"b": 0.1, "a": [1, F(1, 3)]})
    assert s.index('"a"') < s.index('"b"')
    assert "0.10000000000000001" in s
    assert json.loads(s) == {"a": [1, "1/3"], "b": 0.1}


def test_csv_has_header_and_lf():
    s = to_csv(["x", "y"], [(1.0, 2.5)])
    assert s == "x,y\n1,2.5\n"


def test_constants_c1_exact():
    code, out, _ = run(["constants", "--c", "1"])
    assert code == 0
    d = json.loads(out)["data"]["exact"]
    assert d["w1"] == "0/1" and d["w2"] == "0/1"
    assert d["alpha"] == "1/2" and d["beta0"] == "1/2" and d["beta"] == "5/6" and d["K"] == "3/5"


def test_decimal_input_echoed_exactly(tmp_path):
    code, _, _ = run(["constants", "--c", "1.6", "--out", str(tmp_path)])
    assert code == 0
    man = json.loads((tmp_path / "manifest.json").read_text())
    assert man["config"]["c"] == "8/5"
    assert man["version"]
    assert "rtol" in man["tolerances"]


def test_c_and_omega_mutually_exclusive():
    with pytest.raises(SystemExit):
        run(["constants", "--c", "1", "--omega", "0"])


def test_omega_entry():
    code, out, _ = run(["constants", "--omega", "0"])
    assert code == 0
    assert json.loads(out)["data"]["exact"]["c"] == "1/1"


def test_invalid_regime_exit_2():
    code, _, err = run(["stability", "--c", "6/5", "--sigma", "1"])
    assert code == 2
    assert "invalid regime" in err


def test_missing_sigma_exit_2():
    code, _, _ = run(["stability", "--c", "8/5"])
    assert code == 2


def test_stability_high_c_passes(tmp_path):
    code, _, _ = run(["stability", "--c", "8/5", "--sigma", "2", "--out", str(tmp_path)])
    assert code == 0
    rep = json.loads((tmp_path / "stability.json").read_text())["reports"][0]
    assert rep["sign_verdict"] is True
    assert (tmp_path / "stability.csv").read_text().startswith("sigma,H,d,")


def test_stability_low_c_reports_failed_sign():
    code, out, err = run(["stability", "--c", "1/2", "--sigma", "0"])
    assert code == 1
    assert "d_second_positive" in err
    assert json.loads(out)["checks"]["d_second_methods_agree"] is True


def test_deterministic_output(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    run(["conserved", "--c", "1", "--sigma-grid", "3/2:5/2:3", "--out", str(a)])
    run(["conserved", "--c", "1", "--sigma-grid", "3/2:5/2:3", "--out", str(b), "--jobs", "2"])
    for name in ("conserved.json", "conserved.csv"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_figure1_bundle(tmp_path):
    code, _, _ = run(["reproduce-figure1", "--c", "8/5", "--sigma", "2", "--out", str(tmp_path)])
    assert code == 0
    man = json.loads((tmp_path / "manifest.json").read_text())
    assert man["checks"] == {"center_found": True, "homoclinic_found": True, "saddle_found": True}
    assert set(man["notes"]) == {"saddle found", "center found", "homoclinic found"}
    head = (tmp_path / "figure1.csv").read_text().splitlines()[0]
    assert head == "curve,xi,phi,zeta"


def test_spectrum_csv(tmp_path):
    code, out, _ = run(["spectrum", "--c", "8/5", "--sigma", "2", "--format", "csv", "--n", "2000"])
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "index,eigenvalue"
    assert float(lines[1].split(",")[1]) < 0


def test_orbit_and_profile():
    assert run(["orbit", "--c", "8/5", "--sigma", "2"])[0] == 0
    assert run(["profile", "--c", "8/5", "--sigma", "2"])[0] == 0


def test_table_format():
    code, out, _ = run(["critical-points", "--c", "8/5", "--sigma", "2", "--format", "table"])
    assert code == 0
    assert "saddle" in out.lower()


def test_sign_sweep_without_certification():
    code, out, _ = run(["reproduce-theorem34", "--c", "8/5", "--sigma-grid", "17/10:3:3", "--skip-certify"])
    assert code == 0
    assert all(json.loads(out)["checks"].values())
