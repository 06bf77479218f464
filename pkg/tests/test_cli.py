import json

import pandas as pd
import pytest

import ckspace
from ckspace.cli import main
from ckspace.events import read_log
from ckspace.knowledge import SkillParams


@pytest.fixture
def config(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"simulation": {"size": 4, "sessions": 2, "session_length": 15}}))

    return path


@pytest.fixture
def logs(tmp_path, config):
    path = tmp_path / "logs.jsonl"
    assert main(["simulate", "--config", str(config), "--seed", "3", "--out", str(path)]) == 0

    return path


class TestSimulate:
    def test_outputs(self, tmp_path, config):
        out = tmp_path / "logs.jsonl"
        truth = tmp_path / "truth.jsonl"
        students = tmp_path / "students.jsonl"

        args = ["--config", str(config), "--out", str(out), "--truth", str(truth), "--students", str(students)]
        code = main(["simulate", *args])

        assert code == 0
        assert {e.student_id for e in read_log(out)} == {"s0000", "s0001", "s0002", "s0003"}
        assert len(students.read_text().splitlines()) == 4
        assert all("skill_states" in json.loads(line) for line in truth.read_text().splitlines())

    def test_byte_identical(self, tmp_path, config):
        for name in ("a", "b"):
            main(["simulate", "--config", str(config), "--seed", "9", "--out", str(tmp_path / name)])

        assert (tmp_path / "a").read_bytes() == (tmp_path / "b").read_bytes()


class TestCommands:
    def test_report(self, tmp_path, logs):
        out = tmp_path / "report.csv"

        assert main(["report", "--logs", str(logs), "--kind", "skill-status", "--out", str(out)]) == 0

        report = pd.read_csv(out)
        assert list(report.columns) == ["student_id", "skill_id", "p_learned", "learned"]
        assert report["student_id"].nunique() == 4

    def test_report_is_deterministic(self, tmp_path, logs):
        for name in ("a.csv", "b.csv"):
            main(["report", "--logs", str(logs), "--kind", "ribbons", "--seed", "1", "--out", str(tmp_path / name)])

        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()

    def test_stop_policy_eval(self, tmp_path, logs):
        out = tmp_path / "stop.csv"

        assert main(["stop-policy-eval", "--logs", str(logs), "--out", str(out)]) == 0

        frame = pd.read_csv(out)
        assert set(frame["model"]) == {"dbn", "frequency"}
        assert set(frame["decision"]) <= {"Continue", "Mastered", "WheelSpinning"}

    def test_fit_knowledge(self, tmp_path, logs):
        out = tmp_path / "params.json"
        summary = tmp_path / "summary.csv"

        assert main(["fit-knowledge", "--logs", str(logs), "--out", str(out), "--summary", str(summary)]) == 0

        params = SkillParams.load(out)
        for skill in pd.read_csv(summary)["skill_id"]:
            assert params[skill].slip + params[skill].guess < 1.0


class TestErrors:
    def test_missing_logs(self, tmp_path, capsys):
        code = main(["report", "--logs", str(tmp_path / "none.jsonl"), "--kind", "path", "--out", str(tmp_path / "o")])

        assert code == 1
        assert capsys.readouterr().err.startswith("error: FileNotFoundError: ")

    def test_bad_config(self, tmp_path, logs, capsys):
        config = tmp_path / "bad.json"
        config.write_text(json.dumps({"grades": {}}))

        code = main(["report", "--config", str(config), "--logs", str(logs), "--kind", "path", "--out", str(tmp_path / "o")])

        assert code == 1
        assert capsys.readouterr().err.startswith("error: ConfigError: ")

    def test_missing_labels(self, tmp_path, logs, capsys):
        labels = tmp_path / "labels.jsonl"
        labels.write_text('{"sid": "s0000", "dd": true}\n')

        code = main(["fit-screener", "--logs", str(logs), "--labels", str(labels), "--out", str(tmp_path / "m")])

        assert code == 1
        assert "ValidationError" in capsys.readouterr().err

    def test_usage(self):
        with pytest.raises(SystemExit) as e:
            main(["report", "--kind", "grades"])

        assert e.value.code == 2

    def test_version(self, capsys):
        with pytest.raises(SystemExit) as e:
            main(["--version"])

        assert e.value.code == 0
        assert ckspace.version in capsys.readouterr().out
