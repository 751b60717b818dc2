"""
E2E tests for the span command line.

Runs main() in-process for every command and checks printed output, written
files and exit codes.
"""

import numpy as np
import pytest
from PIL import Image

import main
from lib.span_localization.datagen import load_dataset
from lib.span_localization.io import load_model, save_model
from lib.span_localization.training import read_history


def lines_report(text):
    """Parse `metric<TAB>value` output into a dict."""
    return dict(line.split("\t") for line in text.splitlines())


class TestGenData:
    """gen-data command."""

    def test_writes_dataset(self, tmp_path, run_config_file, capsys):
        """Test 1: samples, masks and index written with the eval seed by default."""
        out_dir = tmp_path / "data"
        code = main.main(["gen-data", "--config", str(run_config_file), "--out-dir", str(out_dir), "--count", "4"])
        assert code == 0
        assert "4 samples written" in capsys.readouterr().out
        samples = load_dataset(out_dir)
        assert len(samples) == 4
        assert samples.images[0].shape == (12, 12, 3)
        print("✅ gen-data wrote 4 samples")

    def test_explicit_seed_changes_data(self, tmp_path):
        """Test 2: --seed selects another stream."""
        assert main.main(["gen-data", "--out-dir", str(tmp_path / "a"), "--count", "1", "--seed", "10"]) == 0
        assert main.main(["gen-data", "--out-dir", str(tmp_path / "b"), "--count", "1", "--seed", "11"]) == 0
        a = load_dataset(tmp_path / "a").images[0].values
        b = load_dataset(tmp_path / "b").images[0].values
        assert not np.array_equal(a, b)

    def test_negative_count(self, tmp_path):
        """Test 3: usage error."""
        assert main.main(["gen-data", "--out-dir", str(tmp_path), "--count", "-1"]) == 2


class TestTrainPredictEval:
    """train -> predict -> eval on the tiny config."""

    @pytest.fixture
    def trained_dir(self, tmp_path, run_config_file):
        out_dir = tmp_path / "run"
        assert main.main(["train", "--config", str(run_config_file), "--out", str(out_dir)]) == 0
        return out_dir

    def test_train_outputs(self, capsys, trained_dir):
        """Test 1: checkpoint, history and effective config are written."""
        out = capsys.readouterr().out
        assert "best_epoch" in out and "val_f1" in out
        assert (trained_dir / "model.span").is_file()
        history = read_history(trained_dir / "history.txt")
        assert len(history) == 1
        assert "model.layers = 2" in (trained_dir / "run.conf").read_text(encoding="utf-8")
        model = load_model(trained_dir / "model.span")
        assert model.config.attention_depth == 4
        print(f"✅ Trained one epoch, val_loss={history[0].val_loss:.4f}")

    def test_predict_and_eval(self, trained_dir, dataset_dir, tmp_path, run_config_file, capsys):
        """Test 2: predicted mask matches the input size; eval prints a lines report with robustness."""
        mask_path = tmp_path / "mask.png"
        code = main.main([
            "predict", "--model", str(trained_dir / "model.span"),
            "--input", str(dataset_dir / "images" / "00000.png"),
            "--output", str(mask_path), "--threshold", "0.5",
        ])
        assert code == 0
        with Image.open(mask_path) as image:
            pixels = np.asarray(image)
        assert pixels.shape == (16, 16)
        assert set(np.unique(pixels)) <= {0, 255}

        capsys.readouterr()
        code = main.main([
            "eval", "--model", str(trained_dir / "model.span"), "--data-dir", str(dataset_dir),
            "--config", str(run_config_file), "--transforms", "--format", "lines",
        ])
        assert code == 0
        report = lines_report(capsys.readouterr().out)
        assert report["samples"] == "5"
        assert 0.0 <= float(report["pixel_auc"]) <= 1.0
        assert "robustness.identity.pixel_auc" in report
        assert "robustness.blur:3.f1" in report

    def test_resume_rejected(self, tmp_path):
        """Test 3: --resume is a usage error."""
        assert main.main(["train", "--out", str(tmp_path), "--resume"]) == 2
        assert not (tmp_path / "model.span").exists()


class TestEval:
    """eval command without training."""

    def test_ground_truth_as_predictions(self, dataset_dir, capsys):
        """Test 1: scoring the masks themselves gives AUC 1 and F1 1."""
        code = main.main([
            "eval", "--predictions-dir", str(dataset_dir), "--data-dir", str(dataset_dir), "--format", "lines",
        ])
        assert code == 0
        report = lines_report(capsys.readouterr().out)
        assert report["pixel_auc"] == "1.000000"
        assert report["f1"] == "1.000000"

    def test_constant_model(self, constant_model, dataset_dir, tmp_path, capsys):
        """Test 2: a constant 0.5 predictor scores AUC 0.5."""
        path = save_model(constant_model, tmp_path / "constant.span")
        assert main.main(["eval", "--model", str(path), "--data-dir", str(dataset_dir), "--format", "lines"]) == 0
        report = lines_report(capsys.readouterr().out)
        assert report["pixel_auc"] == "0.500000"
        assert report["recall"] == "1.000000"

    def test_text_report(self, constant_model, dataset_dir, tmp_path, capsys):
        """Test 3: default text report with explicit transforms."""
        path = save_model(constant_model, tmp_path / "constant.span")
        code = main.main([
            "eval", "--model", str(path), "--data-dir", str(dataset_dir), "--transforms", "identity,noise:15",
        ])
        assert code == 0
        out = capsys.readouterr().out
        assert out.startswith("metric")
        assert "noise:15" in out

    def test_model_and_predictions_are_exclusive(self, dataset_dir, tmp_path):
        """Test 4: exactly one prediction source."""
        assert main.main(["eval", "--data-dir", str(dataset_dir)]) == 2

    def test_unknown_transform(self, constant_model, dataset_dir, tmp_path):
        """Test 5: bad transform names are usage errors."""
        path = save_model(constant_model, tmp_path / "constant.span")
        assert main.main(["eval", "--model", str(path), "--data-dir", str(dataset_dir), "--transforms", "jpeg:50"]) == 2

    def test_missing_dataset(self, constant_model, tmp_path):
        """Test 6: a directory without index.tsv."""
        path = save_model(constant_model, tmp_path / "constant.span")
        assert main.main(["eval", "--model", str(path), "--data-dir", str(tmp_path / "nothing")]) == 2


class TestCorruptArtifacts:
    """Exit code 4 for damaged checkpoints."""

    def test_bad_magic(self, tiny_model, dataset_dir, tmp_path, caplog):
        """Test 1: overwritten magic bytes."""
        path = save_model(tiny_model, tmp_path / "model.span")
        data = path.read_bytes()
        path.write_bytes(b"JUNK!" + data[5:])
        assert main.main(["eval", "--model", str(path), "--data-dir", str(dataset_dir)]) == 4
        assert "bad magic" in caplog.text

    def test_truncated(self, tiny_model, dataset_dir, tmp_path):
        """Test 2: half a checkpoint."""
        path = save_model(tiny_model, tmp_path / "model.span")
        path.write_bytes(path.read_bytes()[:200])
        output = tmp_path / "mask.png"
        code = main.main([
            "predict", "--model", str(path), "--input", str(dataset_dir / "images" / "00000.png"),
            "--output", str(output),
        ])
        assert code == 4
        assert not output.exists()


class TestAblate:
    """ablate command."""

    def test_two_variants(self, run_config_file, capsys):
        """Test 1: one row per variant with matching fusion / position columns."""
        code = main.main(["ablate", "--config", str(run_config_file), "--variants", "res, none_pp"])
        assert code == 0
        rows = capsys.readouterr().out.splitlines()
        assert rows[0].split() == ["variant", "fusion", "position", "params", "best_epoch", "val_loss", "pixel_auc", "f1"]
        assert rows[2].split()[:3] == ["res", "residual", "none"]
        assert rows[3].split()[:3] == ["none_pp", "none", "pp"]

    def test_unknown_variant(self, run_config_file):
        """Test 2: usage error before any training."""
        assert main.main(["ablate", "--config", str(run_config_file), "--variants", "res,transformer"]) == 2


class TestAnalyze:
    """analyze command."""

    def test_receptive_field(self, capsys):
        """Test 1: five levels at N = 1."""
        assert main.main(["analyze", "--receptive-field", "5", "1"]) == 0
        out = capsys.readouterr().out
        assert "scales: 3 9 27 81 243" in out
        assert "receptive_field: 243" in out

    def test_complexity(self, capsys):
        """Test 2: block side 3 is the argmin for S = 243."""
        assert main.main(["analyze", "--complexity", "243"]) == 0
        out = capsys.readouterr().out.splitlines()
        assert out[-1] == "argmin: 3"
        starred = [line for line in out if line.rstrip().endswith("*")]
        assert len(starred) == 1 and starred[0].split()[0] == "3"

    def test_nothing_requested(self):
        """Test 3: usage error."""
        assert main.main(["analyze"]) == 2

    def test_invalid_depth(self):
        """Test 4: h = 0 is a configuration error."""
        assert main.main(["analyze", "--receptive-field", "0", "1"]) == 2


class TestUsage:
    """Argument parsing."""

    def test_unknown_command(self):
        """Test 1: exit code 2."""
        assert main.main(["colorize"]) == 2

    def test_missing_required_option(self):
        """Test 2: predict without --model."""
        assert main.main(["predict", "--input", "a.png", "--output", "b.png"]) == 2

    def test_help(self, capsys):
        """Test 3: --help exits cleanly."""
        assert main.main(["--help"]) == 0
        assert "gen-data" in capsys.readouterr().out

    def test_bad_config_file(self, tmp_path):
        """Test 4: unknown keys in the run config."""
        config = tmp_path / "bad.conf"
        config.write_text("model.heads = 8\n", encoding="utf-8")
        assert main.main(["gen-data", "--config", str(config), "--out-dir", str(tmp_path), "--count", "1"]) == 2
