import pytest

from chaintag.cli import build_parser, resolve_config
from chaintag.errors import ConfigError
from chaintag.utils import ConfigLoader


def test_defaults():
    cfg = ConfigLoader()
    assert cfg.get("training.batch_size") == 128
    assert cfg.get("training.lr") == 0.001
    assert cfg.get("training.momentum") == 0.9
    assert cfg.get("training.max_iters") == 100_000
    assert cfg.get("training.eval_every") == 1000
    assert cfg.get("training.patience") == 10
    assert cfg.get("training.workers") == 1
    assert cfg.get("training.metric") is None
    assert cfg.get("training.clip_norm") is None
    assert cfg.get("model.potential_hidden") == 600
    assert cfg.get("model.lstm_hidden") == 300
    assert cfg.get("model.embedding_dim") == 300
    assert cfg.get("data.valid_size") == 1000
    assert cfg.get("run.seed") == 0
    assert cfg.get("no.such.key", "fallback") == "fallback"


def test_set_coerces_strings_to_default_types():
    cfg = ConfigLoader()
    cfg.set("training.lr", "0.05")
    cfg.set("batch_size", "16")
    cfg.set("model.lowercase", "yes")
    cfg.set("clip_norm", "5")
    assert cfg.get("training.lr") == 0.05
    assert cfg.get("training.batch_size") == 16
    assert cfg.get("model.lowercase") is True
    assert cfg.get("training.clip_norm") == 5.0
    cfg.set("model.lowercase", "off")
    assert cfg.get("model.lowercase") is False


@pytest.mark.parametrize("key,value", [
    ("training.batch_size", "many"),
    ("model.trainable_embeddings", "maybe"),
    ("training.lr", "fast"),
])
def test_bad_values_rejected(key, value):
    with pytest.raises(ConfigError):
        ConfigLoader().set(key, value)


@pytest.mark.parametrize("key", ["training.learning_rate", "bogus", "paths.nowhere"])
def test_unknown_keys_rejected(key):
    with pytest.raises(ConfigError):
        ConfigLoader().set(key, "1")


def test_key_value_file(write_file):
    path = write_file("run.cfg", "# comment\n\nvariant = crf-x\ntraining.lr=0.01\nseed=3\n")
    cfg = ConfigLoader()
    assert cfg.load_from_file(path)
    assert cfg.get("model.variant") == "crf-x"
    assert cfg.get("training.lr") == 0.01
    assert cfg.get("run.seed") == 3


def test_key_value_file_errors(write_file):
    with pytest.raises(ConfigError):
        ConfigLoader().load_from_file(write_file("a.cfg", "just words\n"))
    with pytest.raises(ConfigError):
        ConfigLoader().load_from_file(write_file("b.cfg", "colour=blue\n"))
    with pytest.raises(ConfigError):
        ConfigLoader().load_from_file("/nonexistent/run.cfg")


def test_yaml_file_merges_nested_sections(write_file):
    path = write_file("run.yaml", "model:\n  encoder: bilstm\ntraining:\n  patience: 3\n")
    cfg = ConfigLoader()
    cfg.load_from_file(path)
    assert cfg.get("model.encoder") == "bilstm"
    assert cfg.get("training.patience") == 3
    assert cfg.get("model.variant") == "crf-xo"
    with pytest.raises(ConfigError):
        ConfigLoader().load_from_file(write_file("list.yaml", "- a\n- b\n"))


def test_flags_override_config_file(write_file):
    path = write_file("run.cfg", "lr=0.01\nbatch_size=8\n")
    args = build_parser().parse_args(["train", "--config", path, "--lr", "0.2"])
    cfg = resolve_config(args)
    assert cfg.get("training.lr") == 0.2
    assert cfg.get("training.batch_size") == 8
    assert cfg.get("training.momentum") == 0.9


def test_as_dict_is_a_copy():
    cfg = ConfigLoader()
    snapshot = cfg.as_dict()
    snapshot["training"]["lr"] = 1.0
    assert cfg.get("training.lr") == 0.001
    assert "paths.checkpoint" in set(cfg.keys())


@pytest.mark.parametrize("flags,metric", [
    ([], "accuracy"),
    (["--scheme", "raw"], "accuracy"),
    (["--scheme", "BIO2"], "f1"),
    (["--scheme", "IOB1"], "f1"),
    (["--scheme", "raw", "--metric", "f1"], "f1"),
    (["--scheme", "BIO2", "--metric", "accuracy"], "accuracy"),
])
def test_default_metric_follows_scheme(flags, metric):
    args = build_parser().parse_args(["train", *flags])
    assert resolve_config(args).get("training.metric") == metric


def test_raw_scheme_trains_with_accuracy(tmp_path, write_file, capsys):
    from chaintag.cli import main

    pos = write_file("pos.txt", "He PRP\nsat VBD\n\nthe DT\ndog NN\nsat VBD\n")
    code = main([
        "train", "--train", pos, "--valid", pos, "--checkpoint", str(tmp_path / "pos.ckpt"),
        "--embedding-dim", "4", "--potential-hidden", "4", "--max-iters", "2", "--eval-every", "1",
        "--batch-size", "2", "-q",
    ])
    assert code == 0
    assert capsys.readouterr().out.startswith("BEST accuracy ")
