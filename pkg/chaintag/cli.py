"""
Command-line entry point: train, tag, eval and selftest.

Data goes to stdout; logging and diagnostics go to stderr.
"""

import argparse
import logging
import sys
from contextlib import contextmanager
from typing import Dict, Iterator, List, Optional, Tuple

from . import __version__
from .data.batching import split_validation
from .data.conll import Corpus, read_conll, write_conll
from .data.schemes import convert_scheme
from .embeddings.precomputed import load_precomputed
from .embeddings.table import (
    EmbeddingSequence,
    EmbeddingTable,
    build_vocabulary,
    load_pretrained,
    random_table,
)
from .errors import ChainTagError, ConfigError
from .evaluation.scoring import accuracy_report, span_f1
from .model.model import Model, build, decode_corpus, load_model, save_model
from .model.variant import VARIANTS, ModelDims, VariantConfig
from .numerics.ops import make_rng
from .potentials.labels import LabelSet
from .selftest import CheckResult, run_selftest
from .training.optimizer import OptimizerState
from .training.trainer import METRICS, TrainSchedule, train, trace_logger
from .utils import ConfigLoader

logger = logging.getLogger(__name__)

LOG_FORMAT = "[%(asctime)s] %(levelname)s - %(name)s: %(message)s"

# flag destination -> configuration key
FLAG_KEYS = {
    "variant": "model.variant",
    "encoder": "model.encoder",
    "embedding_dim": "model.embedding_dim",
    "lstm_hidden": "model.lstm_hidden",
    "potential_hidden": "model.potential_hidden",
    "trainable_embeddings": "model.trainable_embeddings",
    "lowercase": "model.lowercase",
    "batch_size": "training.batch_size",
    "lr": "training.lr",
    "momentum": "training.momentum",
    "max_iters": "training.max_iters",
    "eval_every": "training.eval_every",
    "patience": "training.patience",
    "workers": "training.workers",
    "metric": "training.metric",
    "clip_norm": "training.clip_norm",
    "weight_decay": "training.weight_decay",
    "dropout": "training.dropout",
    "scheme": "data.scheme",
    "valid_size": "data.valid_size",
    "train": "paths.train",
    "valid": "paths.valid",
    "test": "paths.test",
    "embeddings": "paths.embeddings",
    "contextual_embeddings": "paths.contextual_embeddings",
    "valid_contextual_embeddings": "paths.valid_contextual_embeddings",
    "checkpoint": "paths.checkpoint",
    "out": "paths.out",
    "seed": "run.seed",
}


def _common_parser() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--config", help="key=value or YAML configuration file")
    parent.add_argument("--seed", type=int, help="random seed (default 0)")
    parent.add_argument("--scheme", choices=("raw", "BIO2", "IOB1"),
                        help="tag scheme of the corpora; IOB1 is converted to BIO2 on load")
    parent.add_argument("--lowercase", action="store_true", default=None,
                        help="case-fold words before embedding lookup")
    parent.add_argument("--metric", choices=METRICS,
                        help="validation/report metric (default: accuracy for --scheme raw, f1 otherwise)")
    verbosity = parent.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="warnings and errors only")
    return parent


def build_parser() -> argparse.ArgumentParser:
    parent = _common_parser()
    parser = argparse.ArgumentParser(
        prog="chaintag",
        description="Locally-contextual nonlinear CRF sequence labeler",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", metavar="{train,tag,eval,selftest}")

    p_train = commands.add_parser("train", parents=[parent], help="train a model")
    p_train.set_defaults(command_parser=p_train)
    p_train.add_argument("--variant", choices=sorted(VARIANTS), help="model variant (default crf-xo)")
    p_train.add_argument("--encoder", choices=("identity", "bilstm"), help="encoder (default identity)")
    p_train.add_argument("--train", help="training corpus (CoNLL columns)")
    p_train.add_argument("--valid", help="validation corpus; sampled from --train when absent")
    p_train.add_argument("--valid-size", type=int, help="sentences sampled for validation (default 1000)")
    p_train.add_argument("--embeddings", help="pretrained word vectors (text format)")
    p_train.add_argument("--contextual-embeddings", help="precomputed vectors for --train")
    p_train.add_argument("--valid-contextual-embeddings", help="precomputed vectors for --valid")
    p_train.add_argument("--checkpoint", help="where to write the best model")
    p_train.add_argument("--out", help="metric log file (default: <checkpoint>.log)")
    p_train.add_argument("--embedding-dim", type=int, help="embedding dimension (default 300)")
    p_train.add_argument("--lstm-hidden", type=int, help="biLSTM units per direction (default 300)")
    p_train.add_argument("--potential-hidden", type=int, help="potential-network width (default 600)")
    p_train.add_argument("--trainable-embeddings", action="store_true", default=None,
                         help="update the word-lookup table")
    p_train.add_argument("--batch-size", type=int, help="sentences per minibatch (default 128)")
    p_train.add_argument("--lr", type=float, help="learning rate (default 0.001)")
    p_train.add_argument("--momentum", type=float, help="Nesterov momentum (default 0.9)")
    p_train.add_argument("--max-iters", type=int, help="maximum minibatches (default 100000)")
    p_train.add_argument("--eval-every", type=int, help="minibatches between evaluations (default 1000)")
    p_train.add_argument("--patience", type=int, help="non-improving evaluations before stopping (default 10)")
    p_train.add_argument("--workers", type=int, help="threads computing sentence gradients (default 1)")
    p_train.add_argument("--clip-norm", type=float, help="global gradient-norm clip (default off)")
    p_train.add_argument("--weight-decay", type=float, help="L2 weight decay (default 0)")
    p_train.add_argument("--dropout", type=float, help="dropout on potential-network hidden units (default 0)")

    for name, help_text in (("tag", "label a corpus"), ("eval", "score a labelled corpus")):
        p = commands.add_parser(name, parents=[parent], help=help_text)
        p.set_defaults(command_parser=p)
        p.add_argument("--checkpoint", help="trained model")
        p.add_argument("--test", help="input corpus (CoNLL columns)")
        p.add_argument("--contextual-embeddings", help="precomputed vectors for --test")
        p.add_argument("--out", help="output file (default stdout)")
        if name == "tag":
            p.add_argument("--unlabelled", action="store_true", help="input has no gold label column")

    p_self = commands.add_parser("selftest", parents=[parent], help="run the oracle and gradient suites")
    p_self.add_argument("--instances", type=int, default=200, help="random lattices per variant")
    p_self.add_argument("--gradient-instances", type=int, default=24, help="finite-difference instances")
    return parser


def _configure_logging(args: argparse.Namespace) -> None:
    level = logging.INFO
    if getattr(args, "verbose", False):
        level = logging.DEBUG
    elif getattr(args, "quiet", False):
        level = logging.WARNING
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)


def resolve_config(args: argparse.Namespace) -> ConfigLoader:
    loader = ConfigLoader()
    if getattr(args, "config", None):
        loader.load_from_file(args.config)
    for dest, key in FLAG_KEYS.items():
        value = getattr(args, dest, None)
        if value is not None:
            loader.set(key, value)
    if loader.get("training.metric") is None:
        # raw labels (POS) carry no spans
        loader.set("training.metric", "accuracy" if loader.get("data.scheme") == "raw" else "f1")
    return loader


def _require(parser: argparse.ArgumentParser, cfg: ConfigLoader, *flags: str) -> None:
    for flag in flags:
        if not cfg.get(FLAG_KEYS[flag.lstrip("-").replace("-", "_")]):
            parser.error(f"{flag} is required")


def _load_corpus(cfg: ConfigLoader, path: str, labelled: bool = True) -> Corpus:
    scheme = cfg.get("data.scheme")
    corpus = read_conll(
        path,
        word_column=cfg.get("data.word_column"),
        label_column=cfg.get("data.label_column") if labelled else None,
        scheme=scheme if labelled else "raw",
    )
    if labelled and scheme == "IOB1":
        corpus = convert_scheme(corpus, "BIO2")
    return corpus


@contextmanager
def _output(path: Optional[str]) -> Iterator:
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8") as f:
            yield f


def _training_table(cfg: ConfigLoader, train_corpus: Corpus, rng) -> EmbeddingTable:
    dim = cfg.get("model.embedding_dim")
    lowercase = cfg.get("model.lowercase")
    path = cfg.get("paths.embeddings")
    if path:
        table = load_pretrained(path, dim, lowercase=lowercase)
        table.trainable = bool(cfg.get("model.trainable_embeddings"))
        return table
    logger.info("no --embeddings given; using a random trainable table")
    return random_table(build_vocabulary(train_corpus, lowercase=lowercase), dim, rng)


def cmd_train(parser: argparse.ArgumentParser, cfg: ConfigLoader) -> int:
    _require(parser, cfg, "--train", "--checkpoint")
    contextual = cfg.get("paths.contextual_embeddings")
    if cfg.get("paths.embeddings") and contextual:
        parser.error("--embeddings and --contextual-embeddings are mutually exclusive")
    rng = make_rng(cfg.get("run.seed"))

    train_corpus = _load_corpus(cfg, cfg.get("paths.train"))
    train_corpus.require_nonempty("training corpus")
    train_vectors: Optional[Dict[str, EmbeddingSequence]] = None
    valid_vectors: Optional[Dict[str, EmbeddingSequence]] = None
    if contextual:
        train_vectors = load_precomputed(contextual, train_corpus)

    if cfg.get("paths.valid"):
        valid_corpus = _load_corpus(cfg, cfg.get("paths.valid"))
        if contextual:
            valid_path = cfg.get("paths.valid_contextual_embeddings")
            if not valid_path:
                parser.error("--valid-contextual-embeddings is required with --valid and --contextual-embeddings")
            valid_vectors = load_precomputed(valid_path, valid_corpus)
    else:
        try:
            train_corpus, valid_corpus = split_validation(train_corpus, cfg.get("data.valid_size"), rng)
        except ValueError as e:
            raise ConfigError(f"--valid-size: {e}") from None
        valid_vectors = train_vectors

    label_set = LabelSet.from_sequences(
        train_corpus.label_sequences() + valid_corpus.label_sequences()
    )
    train_corpus = train_corpus.with_label_set(label_set)
    valid_corpus = valid_corpus.with_label_set(label_set)

    source = "precomputed" if contextual else "table"
    table = None if contextual else _training_table(cfg, train_corpus, rng)
    embedding_dim = cfg.get("model.embedding_dim")
    if train_vectors:
        embedding_dim = next(iter(train_vectors.values())).dim
    elif table is not None:
        embedding_dim = table.dim

    config = VariantConfig.from_name(cfg.get("model.variant"), label_set, cfg.get("model.encoder"), source)
    dims = ModelDims(embedding_dim, cfg.get("model.lstm_hidden"), cfg.get("model.potential_hidden"))
    model = build(config, dims, rng, table, dropout=cfg.get("training.dropout"))

    schedule = TrainSchedule(
        max_iterations=cfg.get("training.max_iters"),
        eval_every=cfg.get("training.eval_every"),
        patience=cfg.get("training.patience"),
        metric=cfg.get("training.metric"),
        batch_size=cfg.get("training.batch_size"),
        workers=cfg.get("training.workers"),
    )
    optimizer = OptimizerState(
        learning_rate=cfg.get("training.lr"),
        momentum=cfg.get("training.momentum"),
        clip_norm=cfg.get("training.clip_norm"),
        weight_decay=cfg.get("training.weight_decay"),
    )

    checkpoint = cfg.get("paths.checkpoint")
    log_path = cfg.get("paths.out") or f"{checkpoint}.log"
    handler = logging.FileHandler(log_path, mode="w", encoding="utf-8")
    handler.setFormatter(logging.Formatter("%(message)s"))
    handler.setLevel(logging.INFO)
    trace_logger.addHandler(handler)
    trace_logger.setLevel(logging.INFO)
    try:
        result = train(model, train_corpus, valid_corpus, schedule, rng, optimizer, train_vectors, valid_vectors)
    finally:
        trace_logger.removeHandler(handler)
        handler.close()
    save_model(model, checkpoint)
    print(
        f"BEST {schedule.metric} {result.best_metric:.4f} ITER {result.best_iteration} "
        f"OF {result.iterations}"
    )
    return 0


def _decode_input(
    parser: argparse.ArgumentParser, cfg: ConfigLoader, labelled: bool
) -> Tuple[Model, Corpus, List[List[str]]]:
    _require(parser, cfg, "--checkpoint", "--test")
    model = load_model(cfg.get("paths.checkpoint"))
    corpus = _load_corpus(cfg, cfg.get("paths.test"), labelled)
    if labelled:
        corpus = corpus.with_label_set(model.label_set)
    vectors = None
    if model.config.embedding_source == "precomputed":
        _require(parser, cfg, "--contextual-embeddings")
        vectors = load_precomputed(cfg.get("paths.contextual_embeddings"), corpus)
    return model, corpus, decode_corpus(model, corpus, vectors)


def cmd_tag(parser: argparse.ArgumentParser, cfg: ConfigLoader, unlabelled: bool) -> int:
    _, corpus, predictions = _decode_input(parser, cfg, labelled=not unlabelled)
    with _output(cfg.get("paths.out")) as stream:
        write_conll(corpus, stream, predictions, keep_columns=True)
    return 0


def cmd_eval(parser: argparse.ArgumentParser, cfg: ConfigLoader) -> int:
    _, corpus, predictions = _decode_input(parser, cfg, labelled=True)
    corpus.require_nonempty("evaluation corpus")
    gold = corpus.label_sequences()
    if cfg.get("training.metric") == "accuracy":
        report = accuracy_report(gold, predictions)
    else:
        report = span_f1(gold, predictions)
    with _output(cfg.get("paths.out")) as stream:
        for line in report.lines():
            stream.write(line + "\n")
    return 0


def cmd_selftest(cfg: ConfigLoader, instances: int, gradient_instances: int) -> int:
    def show(result: CheckResult) -> None:
        status = "PASS" if result.passed else "FAIL"
        print(f"{status} {result.name} ({result.cases} cases)", flush=True)

    results = run_selftest(
        seed=cfg.get("run.seed"),
        instances=instances,
        gradient_instances=gradient_instances,
        progress=show,
    )
    failed = [r for r in results if not r.passed]
    if failed:
        first = failed[0]
        print(f"first failing check: {first.name}\n{first.detail}", file=sys.stderr)
        return 1
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point for the chaintag command."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _configure_logging(args)
        if args.command is None:
            parser.print_help(sys.stderr)
            return 2
        sub = getattr(args, "command_parser", parser)
        cfg = resolve_config(args)
        if args.command == "train":
            return cmd_train(sub, cfg)
        if args.command == "tag":
            return cmd_tag(sub, cfg, args.unlabelled)
        if args.command == "eval":
            return cmd_eval(sub, cfg)
        return cmd_selftest(cfg, args.instances, args.gradient_instances)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2
    except (ChainTagError, OSError, ValueError) as e:
        message = " ".join(str(e).split())
        print(f"chaintag: error: {message}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
