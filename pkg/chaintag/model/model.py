"""
Assembled taggers: embeddings -> encoder -> potentials -> chain.
"""

import io
import logging
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Tuple, Union

import numpy as np

from ..chain.inference import nll_and_potential_grads, sequence_nll, viterbi
from ..data.conll import Corpus, Sentence
from ..embeddings.table import EmbeddingSequence, EmbeddingTable, embed_sentence
from ..embeddings.vocabulary import Vocabulary
from ..encoder.bilstm import BiLstmEncoder
from ..encoder.identity import IdentityEncoder
from ..errors import CheckpointError, ConfigError, ShapeError
from ..numerics.checkpoint import read_store, write_store
from ..numerics.ops import Rng, make_rng
from ..numerics.params import ParameterStore, init_parameters
from ..potentials.labels import LabelSet
from ..potentials.lattice import TRANSITIONS, PotentialLattice, build_lattice, lattice_backward
from ..potentials.networks import LinearEmission, PotentialNet
from .variant import ModelDims, VariantConfig

logger = logging.getLogger(__name__)

EMBEDDINGS = "embeddings.table"
CONFIG_PREFIX = "CONFIG "


class Model:
    """One variant with all of its parameters in a single store."""

    def __init__(
        self,
        config: VariantConfig,
        dims: ModelDims,
        store: ParameterStore,
        encoder,
        emitters: Dict[str, object],
        table: Optional[EmbeddingTable] = None,
    ):
        self.config = config
        self.dims = dims
        self.store = store
        self.encoder = encoder
        self.emitters = emitters
        self.table = table

    @property
    def label_set(self) -> LabelSet:
        return self.config.label_set

    @property
    def transitions(self) -> np.ndarray:
        return self.store.value(TRANSITIONS)

    def parameter_count(self) -> int:
        """Parameters excluding the embedding table."""
        return self.store.parameter_count(exclude_prefix="embeddings.")

    def embed(self, sentence: Sentence, h: Optional[EmbeddingSequence] = None) -> EmbeddingSequence:
        if h is None:
            if self.table is None:
                raise ConfigError("a precomputed-embedding model needs vectors for every sentence")
            return embed_sentence(self.table, sentence)
        if h.length != len(sentence):
            raise ShapeError(f"sentence {sentence.sid}: {len(sentence)} words but {h.length} vectors")
        if h.dim != self.dims.embedding_dim:
            raise ShapeError(f"embedding dim {h.dim} != model dim {self.dims.embedding_dim}")
        return h

    def lattice(
        self,
        sentence: Sentence,
        h: Optional[EmbeddingSequence] = None,
        training: bool = False,
        rng: Optional[Rng] = None,
    ) -> Tuple[PotentialLattice, EmbeddingSequence, object]:
        hseq = self.embed(sentence, h)
        encoded = self.encoder.forward(hseq, training)
        return build_lattice(self.emitters, self.transitions, encoded, training, rng), hseq, encoded


def build(
    config: VariantConfig,
    dims: ModelDims,
    rng: Rng,
    table: Optional[EmbeddingTable] = None,
    dropout: float = 0.0,
) -> Model:
    """Register every active component, then initialize from ``rng``."""
    store = ParameterStore()
    if config.embedding_source == "table":
        if table is None:
            raise ConfigError("a table-embedding variant needs an embedding table")
        if table.dim != dims.embedding_dim:
            raise ShapeError(f"table dim {table.dim} != embedding_dim {dims.embedding_dim}")
        param = store.register(
            EMBEDDINGS, table.matrix.shape, init="keep", trainable=table.trainable, value=table.matrix
        )
        table.matrix = param.value
    else:
        table = None

    if config.encoder == "bilstm":
        encoder = BiLstmEncoder(store, dims.embedding_dim, dims.lstm_hidden)
    else:
        encoder = IdentityEncoder(dims.embedding_dim)

    n_labels = len(config.label_set)
    store.register(TRANSITIONS, (n_labels + 1, n_labels), init="zeros")
    emitters: Dict[str, object] = {}
    for role in config.roles:
        input_dim = encoder.output_dim * (3 if role == "sigma" else 1)
        if config.form == "nonlinear":
            emitters[role] = PotentialNet(
                store, role, input_dim, n_labels, hidden=dims.potential_hidden, dropout=dropout
            )
        else:
            emitters[role] = LinearEmission(store, role, input_dim, n_labels)

    init_parameters(store, rng)
    encoder.after_init()
    model = Model(config, dims, store, encoder, emitters, table)
    logger.info(
        "built %s (%s encoder, %s embeddings): %d parameters",
        config.name, config.encoder, config.embedding_source, model.parameter_count(),
    )
    return model


def sentence_nll_grad(
    model: Model,
    sentence: Sentence,
    h: Optional[EmbeddingSequence] = None,
    grads: Optional[Dict[str, np.ndarray]] = None,
    rng: Optional[Rng] = None,
) -> Tuple[float, Dict[str, np.ndarray]]:
    """nll of the gold labels; gradients are added into ``grads`` (fresh if None)."""
    if not sentence.labelled:
        raise ValueError(f"sentence {sentence.sid} has no gold labels")
    if grads is None:
        grads = model.store.new_gradients()
    lattice, hseq, encoded = model.lattice(sentence, h, training=True, rng=rng)
    nll, pgrads = nll_and_potential_grads(lattice, sentence.labels)
    dg = lattice_backward(lattice, pgrads.unaries, pgrads.transitions, grads)
    dh = model.encoder.backward(encoded, dg, grads)
    if model.table is not None and model.table.trainable and hseq.token_ids is not None:
        np.add.at(grads[EMBEDDINGS], hseq.token_ids, dh)
    return nll, grads


def nll(model: Model, sentence: Sentence, h: Optional[EmbeddingSequence] = None) -> float:
    lattice, _, _ = model.lattice(sentence, h)
    return sequence_nll(lattice, sentence.labels)


def decode(model: Model, sentence: Sentence, h: Optional[EmbeddingSequence] = None) -> List[str]:
    lattice, _, _ = model.lattice(sentence, h)
    path, _ = viterbi(lattice)
    return [model.label_set[i] for i in path]


def decode_corpus(
    model: Model, corpus: Corpus, embeddings: Optional[Mapping[str, EmbeddingSequence]] = None
) -> List[List[str]]:
    out = []
    for sentence in corpus.sentences:
        h = embeddings[sentence.sid] if embeddings is not None else None
        out.append(decode(model, sentence, h))
    return out


def zero_context_potentials(model: Model, roles: Iterable[str] = ("phi", "xi", "pi", "zeta")) -> List[str]:
    """Zero every parameter of the named neighbor families; returns the zeroed names.

    With phi/xi zeroed a local model scores exactly like its chain-only
    counterpart that shares the eta weights.
    """
    zeroed = []
    for role in roles:
        emitter = model.emitters.get(role)
        if emitter is None:
            continue
        names = list(emitter.names.values()) if isinstance(emitter, PotentialNet) else [emitter.name]
        for name in names:
            model.store.value(name).fill(0.0)
            zeroed.append(name)
    return zeroed


def _config_lines(model: Model) -> List[str]:
    cfg, dims = model.config, model.dims
    fields = {
        "variant": cfg.name,
        "encoder": cfg.encoder,
        "embedding_source": cfg.embedding_source,
        "labels": " ".join(cfg.label_set),
        "embedding_dim": str(dims.embedding_dim),
        "lstm_hidden": str(dims.lstm_hidden),
        "potential_hidden": str(dims.potential_hidden),
    }
    if model.table is not None:
        fields["trainable_embeddings"] = "1" if model.table.trainable else "0"
        fields["lowercase"] = "1" if model.table.vocabulary.lowercase else "0"
        fields["vocab"] = " ".join(model.table.vocabulary.words()[2:])
    return [f"{CONFIG_PREFIX}{key}={value}" for key, value in fields.items()]


def save_model(model: Model, path: Union[str, Path]) -> None:
    with open(path, "wb") as f:
        write_store(model.store, f)
        f.write(("\n".join(_config_lines(model)) + "\n").encode("utf-8"))
    logger.info("saved %s checkpoint to %s", model.config.name, path)


def _parse_config(text: str) -> Dict[str, str]:
    fields: Dict[str, str] = {}
    for line in text.splitlines():
        if not line:
            continue
        if not line.startswith(CONFIG_PREFIX) or "=" not in line:
            raise CheckpointError(f"bad config line {line[:40]!r}")
        key, value = line[len(CONFIG_PREFIX):].split("=", 1)
        fields[key] = value
    return fields


def load_model(path: Union[str, Path]) -> Model:
    with open(path, "rb") as f:
        loaded = read_store(f)
        try:
            fields = _parse_config(f.read().decode("utf-8"))
        except UnicodeDecodeError:
            raise CheckpointError(f"{path}: config block is not UTF-8") from None
    try:
        label_set = LabelSet(fields["labels"].split())
        config = VariantConfig.from_name(
            fields["variant"], label_set, fields["encoder"], fields["embedding_source"]
        )
        dims = ModelDims(
            int(fields["embedding_dim"]), int(fields["lstm_hidden"]), int(fields["potential_hidden"])
        )
        table = None
        if config.embedding_source == "table":
            vocabulary = Vocabulary(fields["vocab"].split(), lowercase=fields["lowercase"] == "1")
            table = EmbeddingTable(
                vocabulary,
                np.zeros((len(vocabulary), dims.embedding_dim)),
                trainable=fields["trainable_embeddings"] == "1",
            )
    except (KeyError, ValueError) as e:
        raise CheckpointError(f"{path}: incomplete or invalid config block ({e})") from None

    model = build(config, dims, make_rng(0), table)
    try:
        model.store.assign(loaded)
    except ShapeError as e:
        raise CheckpointError(f"{path}: parameters do not match config: {e}") from None
    logger.info("loaded %s checkpoint from %s", config.name, path)
    return model


def dumps_store(model: Model) -> bytes:
    """Serialized parameters only; used to compare models byte for byte."""
    buffer = io.BytesIO()
    write_store(model.store, buffer)
    return buffer.getvalue()


__all__ = [
    "EMBEDDINGS",
    "Model",
    "build",
    "sentence_nll_grad",
    "nll",
    "decode",
    "decode_corpus",
    "zero_context_potentials",
    "save_model",
    "load_model",
    "dumps_store",
]
