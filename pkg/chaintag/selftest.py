"""
Desk-scale verification suites.

Each check compares the dynamic programs or analytic gradients against an
independent computation: exhaustive enumeration for the chain, central
finite differences for every parameter, and the zeroing construction for
the variant ablations.
"""

import logging
import time
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from .chain.inference import log_partition, posteriors, viterbi
from .chain.oracle import brute_force, random_lattice
from .data.conll import Sentence
from .embeddings.table import EmbeddingSequence, EmbeddingTable
from .embeddings.vocabulary import Vocabulary
from .model.model import Model, build, nll, sentence_nll_grad, zero_context_potentials
from .model.variant import CONTEXT_ROLES, VARIANTS, ModelDims, VariantConfig
from .numerics.ops import Rng, make_rng
from .numerics.params import ParameterStore
from .potentials.labels import LabelSet

logger = logging.getLogger(__name__)

LOG_Z_TOLERANCE = 1e-8
MARGINAL_TOLERANCE = 1e-10
GRADIENT_TOLERANCE = 1e-4
ABLATION_TOLERANCE = 1e-10
FD_STEP = 1e-5

TOY_WORDS = ["the", "cat", "sat", "on", "mat", "dog"]


@dataclass
class CheckResult:
    name: str
    passed: bool
    cases: int
    detail: str = ""


def _oracle_checks(variant: str, rng: Rng, instances: int) -> List[CheckResult]:
    roles = CONTEXT_ROLES[VARIANTS[variant][0]]
    failures: Dict[str, str] = {}
    for _ in range(instances):
        T = int(rng.integers(1, 7))
        L = int(rng.integers(2, 6))
        lattice = random_lattice(roles, T, L, rng)
        oracle = brute_force(lattice)

        if "partition" not in failures:
            log_z, _ = log_partition(lattice)
            if abs(log_z - oracle.log_z) > LOG_Z_TOLERANCE:
                failures["partition"] = f"logZ {log_z!r} vs {oracle.log_z!r}\n{lattice.dump()}"

        if "viterbi" not in failures:
            path, score = viterbi(lattice)
            if abs(score - oracle.max_score) > LOG_Z_TOLERANCE or path != oracle.argmax:
                failures["viterbi"] = (
                    f"path {path} score {score!r} vs {oracle.argmax} {oracle.max_score!r}\n{lattice.dump()}"
                )

        if "marginals" not in failures:
            post = posteriors(lattice)
            problems = post.check(MARGINAL_TOLERANCE)
            node_err = float(np.abs(post.node_marginals - oracle.node_marginals).max())
            edge_err = (
                float(np.abs(post.edge_marginals - oracle.edge_marginals).max())
                if T > 1 else 0.0
            )
            if node_err > LOG_Z_TOLERANCE or edge_err > LOG_Z_TOLERANCE:
                problems.append(f"differs from enumeration by {max(node_err, edge_err):.3e}")
            if problems:
                failures["marginals"] = "; ".join(problems) + "\n" + lattice.dump()

    return [
        CheckResult(f"{kind}[{variant}]", kind not in failures, instances, failures.get(kind, ""))
        for kind in ("partition", "viterbi", "marginals")
    ]


def toy_table(rng: Rng, dim: int, trainable: bool = True) -> EmbeddingTable:
    vocabulary = Vocabulary(TOY_WORDS)
    matrix = rng.uniform(-1.0, 1.0, size=(len(vocabulary), dim))
    matrix[vocabulary.pad_index] = 0.0
    return EmbeddingTable(vocabulary, matrix, trainable=trainable)


def toy_sentence(rng: Rng, n_labels: int, length: int) -> Sentence:
    words = [TOY_WORDS[int(i)] for i in rng.integers(0, len(TOY_WORDS), size=length)]
    labels = [int(i) for i in rng.integers(0, n_labels, size=length)]
    return Sentence(words, labels, sid="toy")


def randomize(store: ParameterStore, rng: Rng, scale: float = 0.5) -> None:
    """Uniform values for every entry, biases and transitions included."""
    for param in store:
        param.value[...] = rng.uniform(-scale, scale, size=param.shape)


def toy_model(
    variant: str,
    encoder: str,
    rng: Rng,
    n_labels: int = 3,
    embedding_dim: int = 4,
    hidden: int = 5,
    lstm_hidden: int = 3,
    embedding_source: str = "table",
) -> Model:
    label_set = LabelSet([f"L{i}" for i in range(n_labels)])
    config = VariantConfig.from_name(variant, label_set, encoder, embedding_source)
    dims = ModelDims(embedding_dim, lstm_hidden, hidden)
    table = toy_table(rng, embedding_dim) if embedding_source == "table" else None
    return build(config, dims, rng, table)


def gradient_errors(
    model: Model,
    sentence: Sentence,
    h: Optional[EmbeddingSequence] = None,
    step: float = FD_STEP,
) -> Dict[str, float]:
    """Per-parameter ||analytic - numeric|| / (||numeric|| + 1e-8), central differences."""
    _, analytic = sentence_nll_grad(model, sentence, h)
    errors = {}
    for param in model.store:
        if not param.trainable:
            continue
        numeric = np.zeros_like(param.value)
        flat = param.value.reshape(-1)
        out = numeric.reshape(-1)
        for k in range(flat.size):
            saved = flat[k]
            flat[k] = saved + step
            plus = nll(model, sentence, h)
            flat[k] = saved - step
            minus = nll(model, sentence, h)
            flat[k] = saved
            out[k] = (plus - minus) / (2 * step)
        diff = np.linalg.norm(analytic[param.name] - numeric)
        errors[param.name] = float(diff / (np.linalg.norm(numeric) + 1e-8))
    return errors


def _gradient_checks(rng: Rng, instances: int) -> List[CheckResult]:
    combos = [(v, e) for v in VARIANTS for e in ("identity", "bilstm")]
    results: Dict[Tuple[str, str], CheckResult] = {}
    for n in range(instances):
        variant, encoder = combos[n % len(combos)]
        key = (variant, encoder)
        check = results.setdefault(key, CheckResult(f"gradients[{variant}/{encoder}]", True, 0))
        model = toy_model(variant, encoder, rng)
        randomize(model.store, rng)
        sentence = toy_sentence(rng, len(model.label_set), int(rng.integers(1, 5)))
        check.cases += 1
        if not check.passed:
            continue
        errors = gradient_errors(model, sentence)
        worst = max(errors, key=errors.get)
        if errors[worst] > GRADIENT_TOLERANCE:
            lattice, _, _ = model.lattice(sentence)
            check.passed = False
            check.detail = (
                f"{worst}: relative error {errors[worst]:.3e} on {sentence.words} / {sentence.labels}\n"
                f"{lattice.dump()}"
            )
    return list(results.values())


def _copy_shared(source: Model, target: Model) -> None:
    for param in target.store:
        if param.name in source.store:
            param.value[...] = source.store.value(param.name)


def _ablation_check(full: str, reduced: str, rng: Rng, sentences: int) -> CheckResult:
    check = CheckResult(f"ablation[{full}>{reduced}]", True, sentences)
    big = toy_model(full, "identity", rng)
    randomize(big.store, rng)
    small = toy_model(reduced, "identity", rng)
    _copy_shared(big, small)
    zero_context_potentials(big)
    for _ in range(sentences):
        sentence = toy_sentence(rng, len(big.label_set), int(rng.integers(1, 8)))
        a, b = nll(big, sentence), nll(small, sentence)
        if abs(a - b) > ABLATION_TOLERANCE:
            lattice, _, _ = big.lattice(sentence)
            check.passed = False
            check.detail = f"nll {a!r} vs {b!r} on {sentence.words}\n{lattice.dump()}"
            break
    return check


def run_selftest(
    seed: int = 0,
    instances: int = 200,
    gradient_instances: int = 24,
    ablation_sentences: int = 50,
    progress: Optional[Callable[[CheckResult], None]] = None,
) -> List[CheckResult]:
    rng = make_rng(seed)
    start = time.perf_counter()
    results: List[CheckResult] = []

    def record(batch: List[CheckResult]) -> None:
        for result in batch:
            results.append(result)
            if progress is not None:
                progress(result)

    for variant in VARIANTS:
        record(_oracle_checks(variant, rng, instances))
    record(_gradient_checks(rng, gradient_instances))
    record([
        _ablation_check("crf-xo", "crf-o", rng, ablation_sentences),
        _ablation_check("crf-x", "crf", rng, ablation_sentences),
    ])
    logger.info(
        "selftest: %d/%d checks passed in %.1fs",
        sum(r.passed for r in results), len(results), time.perf_counter() - start,
    )
    return results


__all__ = [
    "CheckResult",
    "toy_table",
    "toy_sentence",
    "toy_model",
    "randomize",
    "gradient_errors",
    "run_selftest",
]
