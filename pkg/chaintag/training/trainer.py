"""
Minibatch training with early stopping on a validation metric.

An iteration is one minibatch. Every ``eval_every`` iterations the
validation corpus is decoded and scored; the best parameters so far are
kept, and training stops after ``patience`` evaluations in a row without
a strict improvement.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..data.batching import DEFAULT_BATCH_SIZE, batches
from ..data.conll import Corpus, Sentence
from ..embeddings.table import EmbeddingSequence
from ..errors import ConfigError
from ..evaluation import METRICS
from ..evaluation.scoring import span_f1, token_accuracy
from ..model.model import Model, decode_corpus, sentence_nll_grad
from ..numerics.ops import Rng, make_rng
from ..numerics.params import ParameterStore
from .optimizer import OptimizerState, nesterov_step

logger = logging.getLogger(__name__)
trace_logger = logging.getLogger("chaintag.training.trace")


@dataclass
class TrainSchedule:
    max_iterations: int = 100_000
    eval_every: int = 1000
    patience: int = 10
    metric: str = "f1"
    batch_size: int = DEFAULT_BATCH_SIZE
    workers: int = 1

    def __post_init__(self) -> None:
        if self.max_iterations < 1:
            raise ConfigError("max_iterations must be at least 1")
        if self.eval_every < 1:
            raise ConfigError("eval_every must be at least 1")
        if self.patience < 1:
            raise ConfigError("patience must be at least 1")
        if self.metric not in METRICS:
            raise ConfigError(f"unknown metric {self.metric!r}; expected one of {', '.join(METRICS)}")
        if self.batch_size < 1 or self.workers < 1:
            raise ConfigError("batch_size and workers must be at least 1")


@dataclass
class TraceEntry:
    iteration: int
    nll: float
    metric: float

    def line(self) -> str:
        return f"ITER {self.iteration} NLL {self.nll:.6f} METRIC {self.metric:.6f}"


@dataclass
class TrainResult:
    best_metric: float
    best_iteration: int
    iterations: int
    trace: List[TraceEntry] = field(default_factory=list)
    best_parameters: Dict[str, np.ndarray] = field(default_factory=dict, repr=False)
    stopped_early: bool = False


def evaluate(
    model: Model,
    corpus: Corpus,
    metric: str,
    embeddings: Optional[Mapping[str, EmbeddingSequence]] = None,
) -> float:
    predicted = decode_corpus(model, corpus, embeddings)
    gold = corpus.label_sequences()
    if metric == "accuracy":
        return token_accuracy(gold, predicted)
    return span_f1(gold, predicted).f1


def _chunks(batch: Sequence[Sentence], n: int) -> List[Tuple[int, Sequence[Sentence]]]:
    size = -(-len(batch) // n)
    return [(i, batch[i:i + size]) for i in range(0, len(batch), size)]


class _BatchGradient:
    """grad_fn for one minibatch: mean nll, gradients fanned out over workers."""

    def __init__(
        self,
        model: Model,
        batch: Sequence[Sentence],
        embeddings: Optional[Mapping[str, EmbeddingSequence]],
        pool: Optional[ThreadPoolExecutor],
        workers: int,
        rngs: Optional[List[Rng]],
    ):
        self.model = model
        self.batch = batch
        self.embeddings = embeddings
        self.pool = pool
        self.workers = workers
        self.rngs = rngs

    def _slice(self, item: Tuple[int, Sequence[Sentence]]) -> Tuple[float, Dict[str, np.ndarray]]:
        offset, sentences = item
        grads = self.model.store.new_gradients()
        total = 0.0
        for k, sentence in enumerate(sentences):
            h = self.embeddings[sentence.sid] if self.embeddings is not None else None
            rng = self.rngs[offset + k] if self.rngs is not None else None
            value, _ = sentence_nll_grad(self.model, sentence, h, grads, rng)
            total += value
        return total, grads

    def __call__(self, store: ParameterStore) -> float:
        slices = _chunks(self.batch, self.workers)
        if self.pool is not None and len(slices) > 1:
            results = list(self.pool.map(self._slice, slices))
        else:
            results = [self._slice(s) for s in slices]
        scale = 1.0 / len(self.batch)
        total = 0.0
        for value, grads in results:
            store.add_gradients(grads, scale)
            total += value
        return total * scale


def _uses_dropout(model: Model) -> bool:
    return any(getattr(e, "dropout", 0.0) > 0.0 for e in model.emitters.values())


def train(
    model: Model,
    train_corpus: Corpus,
    valid_corpus: Corpus,
    schedule: TrainSchedule,
    rng: Rng,
    optimizer: Optional[OptimizerState] = None,
    train_embeddings: Optional[Mapping[str, EmbeddingSequence]] = None,
    valid_embeddings: Optional[Mapping[str, EmbeddingSequence]] = None,
) -> TrainResult:
    """Train in place; on return the model holds the best parameters seen."""
    train_corpus.require_nonempty("training corpus")
    valid_corpus.require_nonempty("validation corpus")
    train_corpus = train_corpus.with_label_set(model.label_set)
    valid_corpus = valid_corpus.with_label_set(model.label_set)
    state = optimizer if optimizer is not None else OptimizerState()
    dropout = _uses_dropout(model)

    logger.info(
        "training %s on %d sentences (validation %d), batch %d, lr %g, momentum %g",
        model.config.name, len(train_corpus), len(valid_corpus),
        schedule.batch_size, state.learning_rate, state.momentum,
    )

    result = TrainResult(best_metric=float("-inf"), best_iteration=0, iterations=0)
    result.best_parameters = model.store.snapshot()
    window_nll = 0.0
    window_batches = 0
    bad_evaluations = 0
    pool = ThreadPoolExecutor(max_workers=schedule.workers) if schedule.workers > 1 else None

    def run_evaluation(iteration: int) -> bool:
        nonlocal window_nll, window_batches, bad_evaluations
        metric = evaluate(model, valid_corpus, schedule.metric, valid_embeddings)
        entry = TraceEntry(iteration, window_nll / max(window_batches, 1), metric)
        result.trace.append(entry)
        trace_logger.info(entry.line())
        window_nll, window_batches = 0.0, 0
        if metric > result.best_metric:
            result.best_metric = metric
            result.best_iteration = iteration
            result.best_parameters = model.store.snapshot()
            bad_evaluations = 0
        else:
            bad_evaluations += 1
        return bad_evaluations >= schedule.patience

    iteration = 0
    stop = False
    try:
        while not stop:
            for batch in batches(train_corpus, schedule.batch_size, rng):
                rngs = None
                if dropout:
                    seeds = rng.integers(0, 2**63 - 1, size=len(batch))
                    rngs = [make_rng(int(s)) for s in seeds]
                grad_fn = _BatchGradient(model, batch, train_embeddings, pool, schedule.workers, rngs)
                window_nll += nesterov_step(model.store, state, grad_fn)
                window_batches += 1
                iteration += 1
                if iteration % schedule.eval_every == 0:
                    if run_evaluation(iteration):
                        result.stopped_early = True
                        stop = True
                        break
                if iteration >= schedule.max_iterations:
                    if iteration % schedule.eval_every != 0:
                        run_evaluation(iteration)
                    stop = True
                    break
    finally:
        if pool is not None:
            pool.shutdown()

    result.iterations = iteration
    if result.best_iteration == 0:
        logger.warning("no evaluation produced a comparable metric; keeping the initial parameters")
    model.store.restore(result.best_parameters)
    logger.info(
        "stopped after %d iterations; best %s %.4f at iteration %d",
        iteration, schedule.metric, result.best_metric, result.best_iteration,
    )
    return result


__all__ = [
    "METRICS",
    "TrainSchedule",
    "TraceEntry",
    "TrainResult",
    "evaluate",
    "train",
]
