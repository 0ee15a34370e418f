import logging

import numpy as np
import pytest

from chaintag.data import read_conll
from chaintag.embeddings import (
    PAD,
    UNK,
    Vocabulary,
    align,
    build_vocabulary,
    embed_sentence,
    load_precomputed,
    load_pretrained,
    one_hot_table,
    random_table,
)
from chaintag.errors import AlignmentError, ParseError

TABLE = "the 1 2 3\ncat 4 5 6\n"


def test_vocabulary_reserves_pad_and_unk():
    vocab = Vocabulary(["a", "b", "a"])
    assert vocab.words() == [PAD, UNK, "a", "b"]
    assert vocab.lookup("b") == 3
    assert vocab.lookup("zzz") == vocab.unk_index
    assert "a" in vocab and "c" not in vocab


def test_vocabulary_lowercase():
    vocab = Vocabulary(["The"], lowercase=True)
    assert vocab.lookup("THE") == vocab.lookup("the") == 2


def test_load_pretrained_examples(write_file):
    table = load_pretrained(write_file("e.txt", TABLE), expected_dim=3)
    vocab = table.vocabulary
    assert table.dim == 3
    assert table.matrix[vocab.lookup("cat")].tolist() == [4.0, 5.0, 6.0]
    assert table.matrix[vocab.lookup("dog")].tolist() == [2.5, 3.5, 4.5]
    assert table.matrix[vocab.pad_index].tolist() == [0.0, 0.0, 0.0]
    assert not table.trainable


def test_load_pretrained_wrong_width_names_line(write_file):
    path = write_file("e.txt", TABLE + "dog 1 2\n")
    with pytest.raises(ParseError) as info:
        load_pretrained(path, expected_dim=3)
    assert info.value.line_number == 3


def test_load_pretrained_non_numeric(write_file):
    with pytest.raises(ParseError):
        load_pretrained(write_file("e.txt", "cat 1 x 3\n"), expected_dim=3)


def test_load_pretrained_empty_file(write_file):
    with pytest.raises(ParseError):
        load_pretrained(write_file("e.txt", "\n"), expected_dim=3)


def test_load_pretrained_duplicates_keep_first(write_file, caplog):
    path = write_file("e.txt", TABLE + "cat 0 0 0\n")
    with caplog.at_level(logging.WARNING, logger="chaintag.embeddings.table"):
        table = load_pretrained(path, expected_dim=3)
    assert table.matrix[table.vocabulary.lookup("cat")].tolist() == [4.0, 5.0, 6.0]
    assert "1 duplicate words" in caplog.text


def test_load_pretrained_skips_reserved_tokens(write_file, caplog):
    path = write_file("e.txt", "<unk> 9 9 9\n" + TABLE + "<PAD> 7 7 7\n")
    with caplog.at_level(logging.WARNING, logger="chaintag.embeddings.table"):
        table = load_pretrained(path, expected_dim=3, lowercase=True)
    assert len(table.vocabulary) == 4
    assert table.matrix[table.vocabulary.unk_index].tolist() == [2.5, 3.5, 4.5]
    assert table.matrix[table.vocabulary.pad_index].tolist() == [0.0, 0.0, 0.0]
    assert "reserved tokens <PAD>, <unk> ignored" in caplog.text
    assert "duplicate" not in caplog.text


def test_embed_sentence_uses_rows(toy_corpus):
    vocab = build_vocabulary(toy_corpus.sentences)
    table = one_hot_table(vocab)
    seq = embed_sentence(table, toy_corpus.sentences[0])
    assert seq.length == 2 and seq.dim == len(vocab)
    assert seq.token_ids.tolist() == [2, 3]
    assert np.array_equal(seq.vectors, np.eye(len(vocab))[[2, 3]])
    assert not table.trainable


def test_random_table_zero_pad_row(toy_corpus, rng):
    vocab = build_vocabulary(toy_corpus.sentences)
    table = random_table(vocab, 4, rng)
    assert table.trainable
    assert np.all(table.matrix[vocab.pad_index] == 0.0)
    assert table.matrix.shape == (len(vocab), 4)


PRECOMPUTED = """\
DIM 2
SENT 0 2
0.1 0.2
0.3 0.4

SENT 1 1
1 1
"""


def test_load_precomputed_and_align(write_file):
    corpus = read_conll(write_file("c.txt", "a B-X\nb O\n\nc O\n"))
    sequences = load_precomputed(write_file("p.txt", PRECOMPUTED), corpus)
    assert sequences["0"].vectors.tolist() == [[0.1, 0.2], [0.3, 0.4]]
    assert sequences["1"].length == 1


def test_load_precomputed_count_mismatch(write_file):
    text = "DIM 2\nSENT 0 2\n0.1 0.2\n"
    with pytest.raises(ParseError):
        load_precomputed(write_file("p.txt", text))


def test_load_precomputed_too_many_vectors(write_file):
    text = "DIM 2\nSENT 0 1\n0.1 0.2\n0.3 0.4\n"
    with pytest.raises(ParseError) as info:
        load_precomputed(write_file("p.txt", text))
    assert info.value.line_number == 4


@pytest.mark.parametrize("text", [
    "",
    "DIMS 2\n",
    "DIM 2\nSENT 0 1\n0.1\n",
    "DIM 2\nSENT 0 1\n0.1 0.2\nSENT 0 1\n0.1 0.2\n",
    "DIM 2\n0.1 0.2\n",
])
def test_load_precomputed_malformed(write_file, text):
    with pytest.raises(ParseError):
        load_precomputed(write_file("p.txt", text))


def test_align_detects_token_count_mismatch(write_file):
    corpus = read_conll(write_file("c.txt", "a O\n\nb O\nc O\n"))
    sequences = load_precomputed(write_file("p.txt", PRECOMPUTED))
    with pytest.raises(AlignmentError):
        align(sequences, corpus)


def test_align_detects_missing_sentence(write_file):
    corpus = read_conll(write_file("c.txt", "a O\nb O\n\nc O\n\nd O\n"))
    sequences = load_precomputed(write_file("p.txt", PRECOMPUTED))
    with pytest.raises(AlignmentError):
        align(sequences, corpus)
