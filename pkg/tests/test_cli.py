import json
import subprocess
import sys

import pytest

from eberhard.cli import ReportRow, main
from eberhard.data_io import builtin_published_dataset, dataset_to_json
from eberhard.validation import Check


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(out):
    return {r.label: r for r in map(ReportRow.from_json, json.loads(out))}


def test_predict_json(capsys):
    code, out, _ = run(capsys, "predict", "--json")
    assert code == 0
    r = rows(out)
    assert r["C(a1b1)"].model == pytest.approx(1_068_886, rel=2e-3)
    assert r["J"].model == pytest.approx(-120_191, rel=0.02)
    assert r["accidentals a2b2 [%]"].model == pytest.approx(18.6, abs=0.5)


def test_predict_text_and_overrides(capsys):
    code, out, _ = run(capsys, "predict", "--r", "1", "--V", "1", "--eta-a", "1", "--eta-b", "1",
                       "--dark", "0", "--tau-c", "0", "--angles", "0,90,0,90")
    assert code == 0
    assert "quantum model prediction" in out
    line = next(ln for ln in out.splitlines() if ln.startswith("C(a1b1)"))
    assert line.split()[-1] == "0"


def test_predict_bad_efficiency_exits_2(capsys):
    code, _, err = run(capsys, "predict", "--eta-a", "1.5")
    assert code == 2
    assert "parameter error" in err


def test_analyze_published(capsys):
    code, out, _ = run(capsys, "analyze", "--json")
    assert code == 0
    r = rows(out)
    assert [r[f"J round {k}"].data for k in range(1, 6)] == [-27_985, -25_032, -24_279, -24_597, -24_822]
    assert r["J sum"].data == -126_715
    assert round(r["J std"].data) == 1_503
    assert round(r["Delta A(a1) [%]"].data, 2) == -0.25


def test_analyze_single_round_has_no_std(tmp_path, capsys):
    obj = dataset_to_json(builtin_published_dataset())
    obj["rounds"] = obj["rounds"][:1]
    obj["totals"] = None
    p = tmp_path / "one.json"
    p.write_text(json.dumps(obj))
    code, out, _ = run(capsys, "analyze", str(p), "--json")
    assert code == 0
    r = rows(out)
    assert r["J sum"].data == -27_985
    assert "J std" not in r


@pytest.mark.parametrize(
    "variant, label, want, tol",
    [
        ("per-round", "J' sum", -123_132, 3),
        ("adversarial", "max(J, J') sum", -121_076, 1),
        ("total", "J' total", -123_412, 2),
        ("fixed-combo", "J' sum", -123_935, 1),
    ],
)
def test_normalize_variants(capsys, variant, label, want, tol):
    code, out, _ = run(capsys, "normalize", "--variant", variant, "--json")
    assert code == 0
    assert rows(out)[label].data == pytest.approx(want, abs=tol)


def test_normalize_round_factors_text(capsys):
    code, out, _ = run(capsys, "normalize")
    assert code == 0
    f = [ln.split()[-1] for ln in out.splitlines() if ln.startswith("f round 1 ")]
    assert f == ["102.07", "100.17", "100.00", "100.45"]


def test_normalize_bad_path_exits_2(capsys):
    code, _, err = run(capsys, "normalize", "--path", "a1b1>a2b2:A,a2b2>a1b2:B,a1b2>a2b1:A")
    assert code == 2 and err


def test_simulate_is_deterministic(tmp_path, capsys):
    outs = []
    for name in ("a", "b"):
        p = tmp_path / f"{name}.json"
        ev = tmp_path / f"{name}.csv"
        assert main(["simulate", "--rounds", "1", "--seconds-per-block", "0.05", "--seed", "5",
                     "--out", str(p), "--events", str(ev)]) == 0
        outs.append((p.read_bytes(), ev.read_bytes()))
    assert outs[0] == outs[1]
    code, out, _ = run(capsys, "analyze", str(tmp_path / "a.json"), "--json")
    assert code == 0 and "J sum" in rows(out)


def test_simulate_lhv_to_stdout(capsys):
    code, out, _ = run(capsys, "simulate", "--lhv", "always-pass", "--profile", "g22=0.9",
                       "--r0", "1e4", "--rounds", "1", "--seconds-per-block", "0.5")
    assert code == 0
    obj = json.loads(out)
    assert obj["metadata"]["sim"]["kind"] == "lhv"
    assert obj["metadata"]["sim"]["strategy"]["profile"]["g"]["a2b2"] == 0.9


def test_validate_paper_passes(capsys):
    code, out, _ = run(capsys, "validate-paper")
    assert code == 0
    assert "FAIL" not in out
    code, out, _ = run(capsys, "validate-paper", "--json")
    checks = [Check.from_json(d) for d in json.loads(out)]
    assert checks and all(c.passed for c in checks)
    assert {c.criterion for c in checks} == {1, 2, 3, 4, 5, 6, 7}


def test_validate_paper_detects_perturbation(tmp_path, capsys):
    obj = dataset_to_json(builtin_published_dataset())
    obj["rounds"][0]["blocks"][0]["cOO"] += 1000
    obj["totals"] = None
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(obj))
    code, out, _ = run(capsys, "validate-paper", "--dataset", str(p))
    assert code == 1
    assert "[FAIL] criterion 2: J round 1" in out


def test_invalid_dataset_exits_1(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text('{"format_version": 1, "rounds": [{"blocks": []}]}')
    code, _, err = run(capsys, "analyze", str(p))
    assert code == 1
    assert "validation error" in err and "rounds[0]" in err


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "eberhard", "predict"], capture_output=True, text=True)
    assert res.returncode == 0
    assert "S_A(a1)" in res.stdout
