"""End-to-end command-line flows on tiny data."""

import json

import pytest
from click.testing import CliRunner

from mtloop.cli import main


@pytest.fixture()
def runner():
    return CliRunner()


@pytest.fixture()
def pair_file(tmp_path):
    lines = [
        "ka nu ||| the cat",
        "ka wo ||| the dog",
        "nu tsi ||| cat runs",
        "wo tsi ||| dog runs",
        "ka nu tsi ||| the cat runs",
        "ka wo tsi ||| the dog runs",
    ]
    path = tmp_path / "train.pairs"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def test_bleu_corpus_and_sentence(runner, tmp_path):
    (tmp_path / "hyp.txt").write_text("the cat sat down\nthe dog ran away\n")
    (tmp_path / "ref.txt").write_text("the cat sat down\nthe dog ran away\n")
    result = runner.invoke(main, ["bleu", "--hyp", str(tmp_path / "hyp.txt"),
                                  "--ref", str(tmp_path / "ref.txt")])
    assert result.exit_code == 0
    assert result.output.strip() == "100.0"
    result = runner.invoke(main, ["bleu", "--hyp", str(tmp_path / "hyp.txt"),
                                  "--ref", str(tmp_path / "ref.txt"), "--sentence"])
    assert result.output.split() == ["100.0", "100.0"]


def test_smt_train_decode_tune(runner, tmp_path, pair_file):
    model_dir = tmp_path / "model"
    result = runner.invoke(main, ["smt", "train", "--corpus", str(pair_file),
                                  "--out", str(model_dir)])
    assert result.exit_code == 0, result.output
    assert (model_dir / "phrase_table.txt").exists()
    assert (model_dir / "lm.arpa").exists()

    result = runner.invoke(main, ["smt", "decode", "--model", str(model_dir)],
                           input="ka nu\n")
    assert result.exit_code == 0, result.output
    assert result.output.strip()

    result = runner.invoke(main, ["smt", "tune", "--dev", str(pair_file),
                                  "--model", str(model_dir),
                                  "--grid-points", "3", "--sweeps", "1", "--beam", "5"])
    assert result.exit_code == 0, result.output


def test_qe_build_train_eval(runner, tmp_path, pair_file):
    data_file = tmp_path / "qe.jsonl"
    result = runner.invoke(main, ["qe", "build-data", "--corpus", str(pair_file),
                                  "--k", "3", "--kind", "nmt",
                                  "--out", str(data_file), "--iterations", "3"])
    assert result.exit_code == 0, result.output
    assert data_file.exists()

    model_file = tmp_path / "qe_model.json"
    result = runner.invoke(main, ["qe", "train", "--data", str(data_file),
                                  "--depth", "2", "--eta", "0.3", "--rounds", "5",
                                  "--out", str(model_file)])
    assert result.exit_code == 0, result.output
    assert json.loads(model_file.read_text())["v"] == 1

    (tmp_path / "pred.txt").write_text("1\n2\n3\n")
    (tmp_path / "gold.txt").write_text("2\n4\n6\n")
    result = runner.invoke(main, ["qe", "eval", "--pred", str(tmp_path / "pred.txt"),
                                  "--gold", str(tmp_path / "gold.txt")])
    assert result.exit_code == 0
    assert "pearson=1.0000" in result.output


def test_hitl_retrain(runner, tmp_path, pair_file):
    data_dir = tmp_path / "loop"
    data_dir.mkdir()
    (data_dir / "train.pairs").write_text(pair_file.read_text(), encoding="utf-8")
    dev_file = tmp_path / "dev.pairs"
    dev_file.write_text("ka nu ||| the cat\nwo tsi ||| dog runs\n", encoding="utf-8")

    result = runner.invoke(main, ["hitl", "retrain", "--data", str(data_dir),
                                  "--dev", str(dev_file), "--iterations", "3"])
    assert result.exit_code == 0, result.output
    report = json.loads(result.output[: result.output.rindex("}") + 1])
    assert report["corrections_used"] == 0
    assert report["bleu_after"] == report["bleu_before"]
