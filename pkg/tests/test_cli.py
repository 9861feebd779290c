"""Tests for the mimiclearn command line."""

import json
from pathlib import Path

import pytest
import yaml
from click.testing import CliRunner

from mimiclearn.cli import cli, run_command
from mimiclearn.distill import MimicModel
from mimiclearn.serialization import load_model
from mimiclearn.trees import GbtEnsemble

SYNTH_ARGS = ["--n-samples", "60", "--q-static", "3", "--p-temporal", "6", "--t-steps", "2"]


def _write_config(directory: Path, payload: dict, name: str = "config.yaml") -> Path:
    path = directory / name
    path.write_text(yaml.safe_dump(payload), encoding="utf-8")
    return path


def _read_json(path: Path):
    return json.loads(path.read_text(encoding="utf-8"))


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def dataset(tmp_path, runner):
    """A small synthetic dataset written through the synth command."""
    path = tmp_path / "data.csv"
    result = runner.invoke(cli, ["synth", "-o", str(path), "--out", str(tmp_path / "synth")] + SYNTH_ARGS)
    assert result.exit_code == 0, result.output
    return path


@pytest.fixture
def fast_config(tmp_path):
    """Few epochs, small networks and short ensembles."""
    return _write_config(
        tmp_path,
        {"train": {"epochs": 2, "hidden_sizes": [4]}, "tree": {"n_stages": 5}},
        name="fast.yaml",
    )


class TestCliBasics:
    """Test the command group."""

    def test_help(self, runner):
        """Test that the group lists its commands."""
        result = runner.invoke(cli, ["--help"])
        assert result.exit_code == 0
        for command in ("synth", "train", "distill", "bench", "importance", "export-tree", "gradcheck"):
            assert command in result.output

    def test_no_command_prints_help(self, runner):
        """Test that a bare invocation prints usage."""
        result = runner.invoke(cli, [])
        assert result.exit_code == 0
        assert "Usage" in result.output

    def test_run_command_version(self):
        """Test that --version returns 0 through run_command."""
        assert run_command(["--version"]) == 0

    def test_run_command_usage_error(self, tmp_path):
        """Test that usage errors map to exit code 1."""
        assert run_command(["train", str(tmp_path / "missing.csv")]) == 1
        assert run_command(["no-such-command"]) == 1


class TestSynthCommand:
    """Test synth."""

    def test_deterministic(self, tmp_path, runner):
        """Test that the same seed writes identical files."""
        paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
        for path in paths:
            result = runner.invoke(cli, ["synth", "--seed", "3", "-o", str(path), "--out", str(tmp_path)] + SYNTH_ARGS)
            assert result.exit_code == 0, result.output

        assert paths[0].read_bytes() == paths[1].read_bytes()
        record = _read_json(tmp_path / "run.json")
        assert record["command"] == "synth"
        assert record["config"]["seed"] == 3
        assert record["config"]["n_samples"] == 60

    def test_config_file_and_flags(self, tmp_path, runner):
        """Test that flags override the config file."""
        config = _write_config(tmp_path, {"n_samples": 30, "missing_rate": 0.0, "seed": 1})
        args = ["synth", "--config", str(config), "--n-samples", "20", "-o", str(tmp_path / "d.csv")]
        result = runner.invoke(cli, args + ["--out", str(tmp_path), "--q-static", "3", "--p-temporal", "6"])

        assert result.exit_code == 0, result.output
        resolved = _read_json(tmp_path / "run.json")["config"]
        assert resolved["n_samples"] == 20
        assert resolved["missing_rate"] == 0.0

    def test_invalid_config_value(self, tmp_path, runner):
        """Test that an out-of-range value exits 1 naming the field."""
        config = _write_config(tmp_path, {"n_samples": -5})
        result = runner.invoke(cli, ["synth", "--config", str(config), "-o", str(tmp_path / "d.csv")])

        assert result.exit_code == 1
        assert "n_samples" in result.output

    def test_unknown_config_key(self, tmp_path, runner):
        """Test that unknown keys are rejected."""
        config = _write_config(tmp_path, {"bogus": 1})
        result = runner.invoke(cli, ["synth", "--config", str(config), "-o", str(tmp_path / "d.csv")])

        assert result.exit_code == 1
        assert "bogus" in result.output

    def test_missing_config_file(self, tmp_path, runner):
        """Test that a missing config file exits 1."""
        result = runner.invoke(cli, ["synth", "--config", str(tmp_path / "nope.yaml")])
        assert result.exit_code == 1
        assert "not found" in result.output


class TestTrainCommand:
    """Test train."""

    def test_linear_model(self, tmp_path, runner, dataset):
        """Test that LR writes a model, a training log and a run record."""
        out = tmp_path / "lr"
        result = runner.invoke(cli, ["train", str(dataset), "--method", "LR", "--out", str(out)])

        assert result.exit_code == 0, result.output
        log = _read_json(out / "train_log.json")
        assert log["method"] == "LR"
        assert log["n_samples"] == 60
        assert 0.0 <= log["train_auc"] <= 1.0
        assert _read_json(out / "run.json")["inputs"]["dataset"] == str(dataset)

    def test_lr_head_written(self, tmp_path, runner, dataset, fast_config):
        """Test that an LR-DNN run writes the head next to the network."""
        out = tmp_path / "lr_dnn"
        args = ["train", str(dataset), "--method", "LR-DNN", "--config", str(fast_config), "--out", str(out)]
        result = runner.invoke(cli, args)

        assert result.exit_code == 0, result.output
        assert (out / "model.json").exists()
        assert (out / "lr_head.json").exists()
        log = _read_json(out / "train_log.json")
        assert len(log["history"]) == 3
        assert log["lr_head_history"]

    def test_unknown_method(self, tmp_path, runner, dataset):
        """Test that an unknown method id exits 1."""
        result = runner.invoke(cli, ["train", str(dataset), "--method", "XGB", "--out", str(tmp_path)])
        assert result.exit_code == 1
        assert "method" in result.output


class TestDistillCommand:
    """Test distill, export-tree and importance end to end."""

    def test_distill_writes_outputs(self, tmp_path, runner, dataset, fast_config):
        """Test that distill saves a mimic model and its fidelity."""
        out = tmp_path / "mimic"
        args = ["distill", str(dataset), "--teacher", "dnn", "--config", str(fast_config), "--out", str(out)]
        result = runner.invoke(cli, args)

        assert result.exit_code == 0, result.output
        mimic = load_model(out / "mimic.json", expected=MimicModel)
        assert mimic.method_id == "GBTmimic-DNN"
        assert len(mimic.student.stages) == 5
        fidelity = _read_json(out / "fidelity.json")
        assert fidelity["n_rows"] == 60
        assert set(fidelity) == {"n_rows", "mse", "pearson_r", "rank_agreement"}

    def test_pretrained_teacher(self, tmp_path, runner, dataset, fast_config):
        """Test that a teacher saved by train is reused by distill."""
        teacher_dir = tmp_path / "teacher"
        args = ["train", str(dataset), "--method", "DNN", "--config", str(fast_config), "--out", str(teacher_dir)]
        assert runner.invoke(cli, args).exit_code == 0

        out = tmp_path / "mimic"
        args = [
            "distill", str(dataset), "--config", str(fast_config), "--pipeline", "p1",
            "--teacher-model", str(teacher_dir / "model.json"), "--out", str(out),
        ]
        result = runner.invoke(cli, args)

        assert result.exit_code == 0, result.output
        mimic = load_model(out / "mimic.json")
        assert mimic.method_id == "GBTmimic-LR-DNN"
        assert len(mimic.teacher_model.history) == 3

    def test_teacher_kind_mismatch(self, tmp_path, runner, dataset, fast_config):
        """Test that a DNN file cannot serve as an SDA teacher."""
        teacher_dir = tmp_path / "teacher"
        args = ["train", str(dataset), "--method", "DNN", "--config", str(fast_config), "--out", str(teacher_dir)]
        assert runner.invoke(cli, args).exit_code == 0

        args = [
            "distill", str(dataset), "--teacher", "sda",
            "--teacher-model", str(teacher_dir / "model.json"), "--out", str(tmp_path / "m"),
        ]
        result = runner.invoke(cli, args)
        assert result.exit_code == 1

    def test_export_and_importance(self, tmp_path, runner, dataset, fast_config):
        """Test DOT export and importance over a distilled model."""
        out = tmp_path / "mimic"
        args = ["distill", str(dataset), "--student", "dt", "--config", str(fast_config), "--out", str(out)]
        assert runner.invoke(cli, args).exit_code == 0

        dot = tmp_path / "tree.dot"
        result = runner.invoke(cli, ["export-tree", str(out / "mimic.json"), "-o", str(dot), "--out", str(tmp_path)])
        assert result.exit_code == 0, result.output
        assert dot.read_text(encoding="utf-8").startswith("digraph tree")

        result = runner.invoke(cli, ["export-tree", str(out / "mimic.json"), "--stage", "1"])
        assert result.exit_code == 1
        assert "stage" in result.output

        result = runner.invoke(
            cli, ["--quiet", "importance", "--models", str(out), "-k", "3", "--json", "--out", str(tmp_path)]
        )
        assert result.exit_code == 0, result.output
        report = json.loads(result.output)
        assert report["n_models"] == 1
        assert len(report["top_k"]) == 3
        assert (tmp_path / "importance.json").exists()

    def test_importance_rejects_non_tree(self, tmp_path, runner, dataset):
        """Test that a linear model has no importance report."""
        out = tmp_path / "lr"
        assert runner.invoke(cli, ["train", str(dataset), "--method", "LR", "--out", str(out)]).exit_code == 0

        result = runner.invoke(cli, ["importance", "--models", str(out / "model.json")])
        assert result.exit_code == 1
        assert "no tree model" in result.output


class TestBenchCommand:
    """Test bench."""

    def test_json_report(self, tmp_path, runner, dataset, fast_config):
        """Test a two-cell benchmark with saved fold models."""
        out = tmp_path / "bench"
        args = [
            "--quiet", "bench", str(dataset), "--config", str(fast_config), "--methods", "LR,GBT",
            "--trials", "1", "--folds", "2", "--format", "json", "--save-models", "--out", str(out),
        ]
        result = runner.invoke(cli, args)

        assert result.exit_code == 0, result.output
        report = json.loads(result.output)
        assert [c["method"] for c in report["cells"]] == ["LR", "GBT"]
        assert report == _read_json(out / "bench.json")

        saved = sorted((out / "models").rglob("*.json"))
        assert saved
        assert all(p.parent.name == "GBT__all__MOR" for p in saved)
        assert isinstance(load_model(saved[0]), GbtEnsemble)

    def test_unknown_method(self, tmp_path, runner, dataset):
        """Test that unknown methods are rejected before any training."""
        result = runner.invoke(cli, ["bench", str(dataset), "--methods", "LR,NOPE", "--out", str(tmp_path)])
        assert result.exit_code == 1
        assert "NOPE" in result.output


class TestGradcheckCommand:
    """Test gradcheck."""

    @pytest.mark.parametrize("kind", ["dnn", "sda", "lstm"])
    def test_passes(self, tmp_path, runner, kind):
        """Test that the analytic gradients pass for every network."""
        result = runner.invoke(cli, ["gradcheck", "--model", kind, "--out", str(tmp_path)])

        assert result.exit_code == 0, result.output
        assert "passed" in result.output
        assert _read_json(tmp_path / "run.json")["config"]["model"] == kind

    def test_invalid_dimension(self, tmp_path, runner):
        """Test that non-positive sizes exit 1."""
        result = runner.invoke(cli, ["gradcheck", "--hidden", "0", "--out", str(tmp_path)])
        assert result.exit_code == 1
        assert "hidden" in result.output
