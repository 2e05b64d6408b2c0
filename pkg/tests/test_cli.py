import json
import subprocess
import sys

import pytest

from genus5.cli import config_from_points, main, read_sextic, verify_curve
from genus5.fixtures import fixture_data, reference_curves

FISCHER = "x^4*y^4 + y^4 + 2*x^3*y^3 + y^2 + 2*x*y + x^4 + x^2"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_reference_curve_json(capsys):
    c = reference_curves()[1]
    code, out, _ = run(capsys, "verify", str(c.form), "--json", "--expect-N1", "32")
    assert code == 0
    rep = json.loads(out)
    assert rep["ok"] and rep["N"][0] == 32 and tuple(rep["weil"]) == c.weil_coeffs


def test_verify_fischer_reciprocal(capsys):
    code, out, _ = run(capsys, "verify", "--reciprocal", FISCHER,
                       "--expect-weil", "(t^2 + 2t + 9)(t^2 + 5t + 9)^4")
    assert code == 0
    assert "N1..N5: 32" in out


def test_verify_reports_expectation_mismatch(capsys):
    code, out, _ = run(capsys, "verify", "--reciprocal", FISCHER, "--expect-N1", "31")
    assert code == 1 and "MISMATCH" in out


def test_verify_rejects_special_sextic(capsys):
    code, out, _ = run(capsys, "verify", "x^6+y^6+z^6+x*y*z^4+x^2*y^2*z^2")
    assert code == 1 and "FAIL" in out


def test_verify_bad_input(capsys):
    code, _, err = run(capsys, "verify", "x^6 + zeta2^1*y^6 + z^6")
    assert code == 2 and "genus5:" in err
    code, _, _ = run(capsys, "verify", "x^5 + y^5")
    assert code in (1, 2)


def test_read_sextic_from_file(tmp_path):
    p = tmp_path / "f.txt"
    p.write_text("x^6 + y^6 + z^6\n")
    assert str(read_sextic(f"@{p}")) == "x^6 + y^6 + z^6"


def test_config_from_points():
    cfg = config_from_points(["(0:0:1)^3", "(1:zeta2^1:0)"])
    assert cfg.case == "II"
    assert sorted(m for _, m in cfg.points) == [2, 2, 3]


def test_verify_curve_with_wrong_configuration():
    c = reference_curves()[0]
    cfg = config_from_points(["(1:1:1)", "(1:2:1)", "(1:0:1)", "(0:1:1)", "(1:1:0)"])
    rep = verify_curve(c.form, cfg)
    assert not rep["ok"]


def test_weil_counts(capsys):
    code, out, _ = run(capsys, "weil", "--counts", "32,68,644,6980,57632")
    assert code == 0 and "(t^2 + 2t + 9)(t^2 + 5t + 9)^4" in out
    code, _, err = run(capsys, "weil", "--counts", "40,1,1,1,1")
    assert code == 2 and "inconsistent" in err


def test_classify_small_pattern(capsys, tmp_path):
    out_json = tmp_path / "t.json"
    code, out, _ = run(capsys, "classify", "--pattern", "1,1,1,1,1", "--expect-paper", "--out", str(out_json))
    assert code == 0 and "ok" in out
    assert json.loads(out_json.read_text())["tables"][0]["configs_total"] == 1170


def test_classify_case_ii_json(capsys):
    code, out, _ = run(capsys, "classify", "--case", "II", "--json")
    assert code == 0
    tables = json.loads(out)["tables"]
    assert [len(t["orbits"]) for t in tables] == [1, 1]
    assert all(t["ok"] for t in tables)


def test_search_dry_run_and_refusal(capsys, tmp_path):
    base = ["search", "--pattern", "1,1,1,1,1", "--orbit", "1", "--checkpoint-dir", str(tmp_path)]
    code, out, _ = run(capsys, *base, "--dry-run")
    assert code == 0 and "dry-run" in out
    code, out, _ = run(capsys, *base, "--range", "0:3000", "--N", "30")
    assert code == 0 and "done" in out
    runs = list(tmp_path.glob("run-*"))
    assert len(runs) == 1
    summary = json.loads((runs[0] / "summary.json").read_text())
    assert summary["visited"] == 3000
    assert sum(summary["rejected"].values()) + summary["survivors"] == 3000
    code, _, err = run(capsys, *base, "--range", "0:3000", "--N", "30")
    assert code == 2 and "--force" in err
    code, _, _ = run(capsys, *base, "--range", "0:3000", "--N", "30", "--force")
    assert code == 0


def test_search_usage_errors(capsys, tmp_path):
    code, _, err = run(capsys, "search", "--pattern", "9,9", "--orbit", "1", "--checkpoint-dir", str(tmp_path))
    assert code == 2
    code, _, _ = run(capsys, "search", "--pattern", "1,1,1,1,1", "--orbit", "7",
                     "--checkpoint-dir", str(tmp_path))
    assert code == 2
    code, _, _ = run(capsys, "search", "--pattern", "1,1,1,1,1", "--orbit", "1", "--range", "5:2",
                     "--checkpoint-dir", str(tmp_path))
    assert code == 2


def test_reproduce_negative_control(capsys, tmp_path):
    data = json.loads(json.dumps(fixture_data()))
    data["curves"][2]["sextic"] = data["curves"][2]["sextic"] + " + x^6"
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(data))
    code, out, _ = run(capsys, "reproduce", "--fixtures", str(p))
    assert code == 1
    assert "FAILED: example-3" in out


def test_reproduce_writes_figures(capsys, tmp_path):
    code, out, _ = run(capsys, "reproduce", "--figures", str(tmp_path))
    assert code == 0 and "7/7 curves verified" in out
    for name in ("n1_by_curve.png", "weil_classes.png", "reproduce.tsv"):
        assert (tmp_path / name).stat().st_size > 0


def test_console_script_entry_point():
    r = subprocess.run([sys.executable, "-m", "genus5.cli", "--version"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.strip()


@pytest.mark.parametrize("argv", [[], ["bogus"]])
def test_parser_rejects(argv):
    with pytest.raises(SystemExit):
        main(argv)
