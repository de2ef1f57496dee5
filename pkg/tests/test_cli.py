import json
import subprocess
import sys

import pytest

from helpers import DATA
from rpminer.cli import main


def _generate(tmp_path, *extra):
    log = tmp_path / "log.csv"
    assert main(["generate", "--out", str(log), *extra]) == 0
    return log, tmp_path / "log.truth.csv"


def _files(out):
    return {p.name: p.read_bytes() for p in sorted(out.glob("routine_*.json"))}


def test_cpn1_defaults_give_one_routine(tmp_path, capsys):
    log, truth = _generate(tmp_path, "--model", "cpn1", "--instances", "100")
    out = tmp_path / "out"
    assert main(["run", "--log", str(log), "--out", str(out), "--seed-eval", str(truth)]) == 0
    report = json.loads((out / "report.json").read_text())
    assert report["routines"] == 1 and report["average_length"] == 14
    assert report["total_coverage"] == 1.0
    spec = json.loads((out / "routine_001.json").read_text())
    assert spec["format_version"] == 1 and len(spec["pattern"]) == 14
    assert spec["instances"] == 100 and spec["automatable"]
    metrics = json.loads((out / "evaluation.json").read_text())
    assert metrics["average_jaccard"] == 1.0 and metrics["total_coverage"] == 1.0


def test_spec_files_are_byte_identical_across_runs(tmp_path):
    log, _ = _generate(tmp_path, "--model", "multi", "--instances", "60", "--noise", "0.1")
    outs = [tmp_path / f"out{i}" for i in range(2)]
    for out in outs:
        assert main(["run", "--log", str(log), "--out", str(out)]) == 0
    first, second = (_files(o) for o in outs)
    assert first and first == second


def test_evaluate_subcommand(tmp_path, capsys):
    log, truth = _generate(tmp_path, "--model", "multi", "--instances", "60")
    out = tmp_path / "out"
    main(["run", "--log", str(log), "--out", str(out)])
    capsys.readouterr()
    assert main(["evaluate", "--specs", str(out), "--truth", str(truth)]) == 0
    metrics = json.loads(capsys.readouterr().out)
    assert metrics["discovered"] == 3 and metrics["average_jaccard"] == 1.0
    assert metrics["precision"] == metrics["recall"] == 1.0


def test_evaluate_without_routines_reports_zero_coverage(tmp_path, capsys):
    log = tmp_path / "log.csv"
    log.write_text("timestamp,type,p1,p2,p3,p4,p5,p6\n2020-01-01T00:00:00,Navigate to (Web),https://a\n")
    truth = tmp_path / "truth.csv"
    truth.write_text("event_index,segment_id,variant_id,automatable\n0,0,v1,1\n")
    out = tmp_path / "out"
    assert main(["run", "--log", str(log), "--out", str(out)]) == 0
    capsys.readouterr()
    assert main(["evaluate", "--specs", str(out), "--truth", str(truth)]) == 0
    assert json.loads(capsys.readouterr().out)["total_coverage"] == 0.0


def test_acyclic_log_explains_itself(tmp_path):
    log = tmp_path / "log.csv"
    rows = [f"2020-01-01T00:00:0{i},Navigate to (Web),https://site/{i}" for i in range(5)]
    log.write_text("timestamp,type,p1,p2,p3,p4,p5,p6\n" + "\n".join(rows) + "\n")
    out = tmp_path / "out"
    assert main(["run", "--log", str(log), "--out", str(out)]) == 0
    report = json.loads((out / "report.json").read_text())
    assert report["segments"] == 0 and report["routines"] == 0
    assert "no loops" in report["message"]


@pytest.mark.parametrize("content", ["", "timestamp,type,p1,p2,p3,p4,p5,p6\n"])
def test_empty_log_exits_cleanly(tmp_path, content):
    log = tmp_path / "log.csv"
    log.write_text(content)
    out = tmp_path / "out"
    assert main(["run", "--log", str(log), "--out", str(out)]) == 0
    report = json.loads((out / "report.json").read_text())
    assert report["events"] == 0 and report["message"] == "the log is empty"


def test_sample_log_with_dot_output(tmp_path):
    out = tmp_path / "out"
    assert main(["run", "--log", str(DATA / "sample_log.csv"), "--out", str(out), "--emit-dot"]) == 0
    assert (out / "cfg.dot").exists() and (out / "dominators.dot").exists()
    report = json.loads((out / "report.json").read_text())
    assert report["candidates"] == 2 and report["back_edges"] == [["Click button [Submit]", "Click button [New Record]"]]


def test_input_errors_exit_1(tmp_path):
    assert main(["run", "--log", str(tmp_path / "missing.csv"), "--out", str(tmp_path)]) == 1
    bad = tmp_path / "bad.csv"
    bad.write_text("timestamp,type,p1,p2,p3,p4,p5,p6\n2020-01-01T00:00:00,Hover (Web),x\n")
    assert main(["run", "--log", str(bad), "--out", str(tmp_path / "o")]) == 1
    with pytest.raises(SystemExit) as info:
        main(["run", "--log", str(bad), "--out", str(tmp_path), "--min-support", "7"])
    assert info.value.code == 1
    assert main(["evaluate", "--specs", str(tmp_path), "--truth", str(tmp_path / "none.csv")]) == 1


def test_internal_errors_exit_2(tmp_path, monkeypatch):
    import rpminer.estimator as estimator

    def boom(*args, **kwargs):
        raise RuntimeError("kaput")

    monkeypatch.setattr(estimator, "aggregate", boom)
    log, _ = _generate(tmp_path, "--instances", "5")
    assert main(["run", "--log", str(log), "--out", str(tmp_path / "o")]) == 2


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "rpminer.cli", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "generate" in proc.stdout
