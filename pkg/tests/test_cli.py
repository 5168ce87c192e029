import csv
import json
import os
import subprocess
import sys

import pytest

from vcceval.cli import main
from vcceval.oracle import FixtureSpec, generate_fixture


@pytest.fixture(scope="module")
def fx(tmp_path_factory):
    out = tmp_path_factory.mktemp("cli")
    generate_fixture(FixtureSpec(teams=4, utterances=8, seed=5), str(out))
    return out


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_campaign_formats(fx, tmp_path, capsys):
    for fmt, name in (("csv", "metrics_task1.csv"), ("json", "report.json"), ("md", "report.md")):
        code, out, _ = run(capsys, "campaign", "--manifest", fx / "manifest.json", "--out", tmp_path / fmt,
                           "--format", fmt)
        assert code in (0, 2)
        assert os.path.exists(tmp_path / fmt / name)


def test_campaign_diagnostics_exit_two(fx, tmp_path, capsys):
    doc = json.loads((fx / "manifest.json").read_text())
    doc["files"]["task1_T01_cm_spoof"] = "missing.txt"
    (tmp_path / "m.json").write_text(json.dumps(doc))
    for name in os.listdir(fx):
        if name.endswith(".txt"):
            (tmp_path / name).write_bytes((fx / name).read_bytes())
    code, _, err = run(capsys, "campaign", "--manifest", tmp_path / "m.json", "--out", tmp_path / "o")
    assert code == 2 and "FileMissing" in err


def test_fatal_exit_one(tmp_path, capsys):
    code, _, err = run(capsys, "campaign", "--manifest", tmp_path / "nope.json", "--out", tmp_path)
    assert code == 1 and "error" in err
    (tmp_path / "bad.txt").write_text("A u1 target nan\n")
    code, _, err = run(capsys, "cm", "--bona", tmp_path / "bad.txt", "--spoof", tmp_path / "bad.txt")
    assert code == 1 and "NonFiniteScore" in err


def test_asv_and_cm(fx, capsys):
    nat = fx / "task1_natural.txt"
    code, out, _ = run(capsys, "asv", "--natural-tar", nat, "--natural-non", nat,
                       "--conv-tar", fx / "task1_T01_asv_tgt.txt", "--genuine-tar", fx / "task1_genuine.txt",
                       "--conv-src", fx / "task1_T01_asv_src.txt")
    assert code == 0
    doc = json.loads(out)
    assert set(doc) == {"asv_eer_pct", "pfa_tar_pct", "pmiss_src_pct", "threshold"}
    want = json.loads((fx / "expected.json").read_text())["tasks"]["task1"]["T01"]
    for key in ("asv_eer_pct", "pfa_tar_pct", "pmiss_src_pct"):
        assert doc[key] == pytest.approx(want[key], abs=1e-12)
    code, out, _ = run(capsys, "cm", "--bona", fx / "task1_cm_bona.txt", "--spoof", fx / "task1_T01_cm_spoof.txt")
    expected = json.loads((fx / "expected.json").read_text())["tasks"]["task1"]["T01"]["cm_eer_pct"]
    assert code == 0 and json.loads(out)["cm_eer_pct"] == pytest.approx(expected, abs=1e-12)


def test_tdcf_with_json_and_score_file(fx, tmp_path, capsys):
    (tmp_path / "op.json").write_text(json.dumps({"p_miss_asv": 0.0, "p_fa_asv": 0.0, "p_fa_spoof_asv": 0.5}))
    code, out, _ = run(capsys, "tdcf", "--bona", fx / "task1_cm_bona.txt", "--spoof", fx / "task1_T01_cm_spoof.txt",
                       "--asv-op", tmp_path / "op.json")
    assert code == 0 and 0.0 <= json.loads(out)["min_tdcf_norm"] <= 1.0
    (tmp_path / "asv.txt").write_text("A u1 target 3\nA u2 nontarget 0\nA u3 spoof 2\n")
    (tmp_path / "cost.json").write_text(json.dumps({"pi_spoof": 0.05}))
    code, out, _ = run(capsys, "tdcf", "--bona", fx / "task1_cm_bona.txt", "--spoof", fx / "task1_T01_cm_spoof.txt",
                       "--asv-op", tmp_path / "asv.txt", "--cost-model", tmp_path / "cost.json")
    doc = json.loads(out)
    assert code == 0 and doc["asv_operating_point"] == {"p_miss_asv": 0.0, "p_fa_asv": 0.0, "p_fa_spoof_asv": 1.0}


def test_wer(tmp_path, capsys):
    (tmp_path / "p.txt").write_text("u1 | a b c d | a x c\nu2 | z | z\n")
    code, out, _ = run(capsys, "wer", "--pairs", tmp_path / "p.txt")
    assert code == 0 and json.loads(out) == {"wer_pct": 40.0, "utterances": 2}


def _table(path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["team_id", "x", "y", "flat"])
        for i, (x, y) in enumerate(zip([1, 2, 3, 4, 5], [2, 1, 4, 3, 5])):
            w.writerow([f"T{i}", x, y, 1])


def test_stats_corr_and_regress(tmp_path, capsys):
    _table(tmp_path / "t.csv")
    code, out, _ = run(capsys, "stats", "corr", "--table", tmp_path / "t.csv", "--x", "x", "--y", "y")
    doc = json.loads(out)
    assert code == 0 and doc["correlations"][0]["r"] == pytest.approx(0.8)
    code, out, _ = run(capsys, "stats", "corr", "--table", tmp_path / "t.csv")
    assert code == 2 and json.loads(out)["diagnostics"]
    code, out, _ = run(capsys, "stats", "regress", "--table", tmp_path / "t.csv", "--y", "y", "--x", "x")
    assert code == 0 and json.loads(out)["r_squared"] == pytest.approx(0.64)
    code, _, _ = run(capsys, "stats", "regress", "--table", tmp_path / "t.csv", "--y", "nope")
    assert code == 1


def test_fixture_command(tmp_path, capsys):
    (tmp_path / "spec.json").write_text(json.dumps({"teams": 2, "utterances": 3, "seed": 1}))
    code, out, _ = run(capsys, "fixture", "--spec", tmp_path / "spec.json", "--out", tmp_path / "fx")
    assert code == 0 and out.strip().endswith("manifest.json")
    assert (tmp_path / "fx" / "expected.json").exists()


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "vcceval", "--version"], capture_output=True, text=True)
    assert out.returncode == 0 and "vcceval" in out.stdout
