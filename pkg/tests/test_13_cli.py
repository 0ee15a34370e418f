import pytest

from chaintag.cli import main
from chaintag.model import load_model
from chaintag.potentials import PotentialNet

TRAIN_FLAGS = [
    "--scheme", "BIO2", "--embedding-dim", "8", "--potential-hidden", "8",
    "--batch-size", "4", "--max-iters", "6", "--eval-every", "3", "--lr", "0.05", "-q",
]


def _train(tmp_path, toy_corpus_path, name="model.ckpt", extra=()):
    checkpoint = str(tmp_path / name)
    code = main([
        "train", "--train", toy_corpus_path, "--valid", toy_corpus_path,
        "--checkpoint", checkpoint, *TRAIN_FLAGS, *extra,
    ])
    return code, checkpoint


def test_missing_corpus_flag_is_a_usage_error(tmp_path, capsys):
    code = main(["train", "--checkpoint", str(tmp_path / "m.ckpt")])
    assert code == 2
    assert "--train is required" in capsys.readouterr().err


def test_missing_checkpoint_for_tag(toy_corpus_path, capsys):
    assert main(["tag", "--test", toy_corpus_path]) == 2
    assert "--checkpoint is required" in capsys.readouterr().err


def test_unreadable_corpus_is_a_pipeline_error(tmp_path, capsys):
    code = main(["train", "--train", str(tmp_path / "absent.txt"), "--checkpoint", str(tmp_path / "m")])
    assert code == 1
    err = capsys.readouterr().err.strip().splitlines()
    assert err[-1].startswith("chaintag: error:")


def test_train_writes_checkpoint_and_metric_log(tmp_path, toy_corpus_path, capsys):
    code, checkpoint = _train(tmp_path, toy_corpus_path)
    assert code == 0
    out = capsys.readouterr().out
    assert out.startswith("BEST f1 ")
    model = load_model(checkpoint)
    assert model.config.name == "crf-xo"
    assert list(model.label_set) == ["B-NP", "B-VP", "I-NP", "I-VP"]
    lines = (tmp_path / "model.ckpt.log").read_text(encoding="utf-8").splitlines()
    assert [line.split()[1] for line in lines] == ["3", "6"]
    assert all(line.startswith("ITER ") and " METRIC " in line for line in lines)


def test_identical_runs_write_identical_logs(tmp_path, toy_corpus_path):
    logs = []
    for name in ("a.ckpt", "b.ckpt"):
        code, checkpoint = _train(tmp_path, toy_corpus_path, name, ["--dropout", "0.1"])
        assert code == 0
        logs.append((tmp_path / f"{name}.log").read_bytes())
    assert logs[0] == logs[1]
    assert (tmp_path / "a.ckpt").read_bytes() == (tmp_path / "b.ckpt").read_bytes()


def test_validation_split_when_valid_absent(tmp_path, toy_corpus_path):
    code = main([
        "train", "--train", toy_corpus_path, "--checkpoint", str(tmp_path / "m.ckpt"),
        "--valid-size", "2", "--out", str(tmp_path / "trace.txt"), *TRAIN_FLAGS,
    ])
    assert code == 0
    assert (tmp_path / "trace.txt").read_text(encoding="utf-8").startswith("ITER 3 ")


def test_tag_appends_one_column(tmp_path, toy_corpus_path, capsys):
    _, checkpoint = _train(tmp_path, toy_corpus_path)
    capsys.readouterr()
    assert main(["tag", "--checkpoint", checkpoint, "--test", toy_corpus_path, "-q"]) == 0
    out = capsys.readouterr().out
    rows = [line.split() for line in out.splitlines() if line]
    source = [line.split() for line in open(toy_corpus_path, encoding="utf-8") if line.strip()]
    assert len(rows) == len(source)
    for row, original in zip(rows, source):
        assert len(row) == len(original) + 1
        assert row[:-1] == original


def test_tag_unlabelled_input(tmp_path, toy_corpus_path, write_file):
    _, checkpoint = _train(tmp_path, toy_corpus_path)
    words = write_file("words.txt", "the\ndog\nsat\n\nprices\nrose\n")
    out = tmp_path / "tagged.txt"
    code = main(["tag", "--checkpoint", checkpoint, "--test", words, "--unlabelled", "--out", str(out), "-q"])
    assert code == 0
    rows = [line.split() for line in out.read_text(encoding="utf-8").splitlines() if line]
    assert [len(r) for r in rows] == [2] * 5


def test_tag_empty_input(tmp_path, toy_corpus_path, write_file, capsys):
    _, checkpoint = _train(tmp_path, toy_corpus_path)
    capsys.readouterr()
    empty = write_file("empty.txt", "")
    assert main(["tag", "--checkpoint", checkpoint, "--test", empty, "-q"]) == 0
    assert capsys.readouterr().out == ""


def test_tag_label_set_mismatch(tmp_path, toy_corpus_path, write_file, capsys):
    _, checkpoint = _train(tmp_path, toy_corpus_path)
    other = write_file("other.txt", "Paris NNP B-LOC\n")
    assert main(["tag", "--checkpoint", checkpoint, "--test", other, "-q"]) == 1
    assert "unknown label 'B-LOC'" in capsys.readouterr().err


def test_eval_prints_report(tmp_path, toy_corpus_path, capsys):
    _, checkpoint = _train(tmp_path, toy_corpus_path)
    capsys.readouterr()
    assert main(["eval", "--checkpoint", checkpoint, "--test", toy_corpus_path, "--scheme", "BIO2", "-q"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("ALL P ")
    assert lines[-1].startswith("ACC ")
    assert main(["eval", "--checkpoint", checkpoint, "--test", toy_corpus_path,
                 "--metric", "accuracy", "-q"]) == 0
    assert capsys.readouterr().out.startswith("ACC ")


def test_contextual_embeddings_pipeline(tmp_path, toy_corpus_path, toy_corpus, write_file, rng, capsys):
    blocks = ["DIM 3"]
    for sentence in toy_corpus:
        blocks.append(f"SENT {sentence.sid} {len(sentence)}")
        blocks.extend(" ".join(f"{v:.6f}" for v in rng.normal(size=3)) for _ in sentence.words)
    vectors = write_file("vectors.txt", "\n".join(blocks) + "\n")
    checkpoint = str(tmp_path / "ctx.ckpt")
    code = main([
        "train", "--train", toy_corpus_path, "--valid", toy_corpus_path,
        "--contextual-embeddings", vectors, "--valid-contextual-embeddings", vectors,
        "--checkpoint", checkpoint, "--variant", "crf-x", *TRAIN_FLAGS,
    ])
    assert code == 0
    assert load_model(checkpoint).config.embedding_source == "precomputed"
    capsys.readouterr()
    assert main(["tag", "--checkpoint", checkpoint, "--test", toy_corpus_path, "-q"]) == 2
    assert "--contextual-embeddings is required" in capsys.readouterr().err
    assert main(["tag", "--checkpoint", checkpoint, "--test", toy_corpus_path,
                 "--contextual-embeddings", vectors, "-q"]) == 0


def test_embeddings_and_contextual_are_exclusive(tmp_path, toy_corpus_path, write_file, capsys):
    table = write_file("table.txt", "the 1 2\n")
    code = main([
        "train", "--train", toy_corpus_path, "--checkpoint", str(tmp_path / "m"),
        "--embeddings", table, "--contextual-embeddings", table,
    ])
    assert code == 2
    assert "mutually exclusive" in capsys.readouterr().err


def test_selftest_passes_at_reduced_size(capsys):
    assert main(["selftest", "--instances", "20", "--gradient-instances", "12", "-q"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out and all(line.startswith("PASS ") for line in out)
    assert any(line.startswith("PASS gradients[crf-xo/bilstm]") for line in out)
    assert any(line.startswith("PASS ablation[crf-xo>crf-o]") for line in out)


@pytest.mark.parametrize("seed", ["1", "2"])
def test_selftest_seed_changes_instances_not_outcome(seed):
    assert main(["selftest", "--seed", seed, "--instances", "10", "--gradient-instances", "12", "-q"]) == 0


def test_selftest_catches_sign_flip_in_right_neighbor_potential(monkeypatch, capsys):
    original = PotentialNet.forward

    def flipped(self, inputs, training=False, rng=None):
        out, cache = original(self, inputs, training, rng)
        return (-out if self.role == "xi" else out), cache

    monkeypatch.setattr(PotentialNet, "forward", flipped)
    assert main(["selftest", "--instances", "5", "--gradient-instances", "24", "-q"]) == 1
    captured = capsys.readouterr()
    assert "FAIL gradients[crf-xo/" in captured.out
    assert "first failing check: gradients[" in captured.err
    assert "transitions=" in captured.err


@pytest.mark.slow
def test_overfitted_checkpoint_reproduces_training_labels(tmp_path, toy_corpus_path, capsys):
    checkpoint = str(tmp_path / "fit.ckpt")
    code = main([
        "train", "--train", toy_corpus_path, "--valid", toy_corpus_path, "--checkpoint", checkpoint,
        "--variant", "crf-x", "--scheme", "BIO2", "--embedding-dim", "16", "--batch-size", "8",
        "--lr", "0.05", "--max-iters", "400", "--eval-every", "50", "--patience", "20",
        "--metric", "accuracy", "-q",
    ])
    assert code == 0
    capsys.readouterr()
    assert main(["tag", "--checkpoint", checkpoint, "--test", toy_corpus_path, "-q"]) == 0
    rows = [line.split() for line in capsys.readouterr().out.splitlines() if line]
    assert all(row[-1] == row[-2] for row in rows)
