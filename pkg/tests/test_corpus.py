import io
import json
import random

import pytest

from sumfactors.corpus import (
    Corpus,
    load_corpus,
    split_sentences,
    tokenize,
    write_corpus,
)
from sumfactors.errors import CorpusFormatError


def test_tokenize_splits_punctuation():
    assert tokenize("The cat, sat.") == ["the", "cat", ",", "sat", "."]


def test_tokenize_empty():
    assert tokenize("") == []


def test_tokenize_numbers_and_symbols():
    assert tokenize("5.5%") == ["5", ".", "5", "%"]
    assert tokenize("don't") == ["don", "'", "t"]


def test_tokenize_idempotent_on_joined_tokens():
    rng = random.Random(7)
    pieces = ["The cat sat!", "A 5.5% rise, they said.", "U.S. data (2020) -- fine."]
    for _ in range(50):
        text = " ".join(rng.choice(pieces) for _ in range(rng.randint(1, 4)))
        once = tokenize(text)
        assert tokenize(" ".join(once)) == once


def test_split_sentences_basic():
    assert split_sentences("The cat sat. It ran.") == ["The cat sat.", "It ran."]


def test_split_sentences_requires_uppercase_follower():
    assert split_sentences("The cat sat. it ran.") == ["The cat sat. it ran."]


def test_split_sentences_abbreviations():
    assert split_sentences("Mr. Smith arrived. He sat.") == ["Mr. Smith arrived.", "He sat."]
    assert split_sentences("See fig. 3 for details. Then stop.") == [
        "See fig. 3 for details.",
        "Then stop.",
    ]


def test_split_sentences_exclamation_question():
    assert split_sentences("Stop! Why? Because.") == ["Stop!", "Why?", "Because."]


def test_split_sentences_trailing_space():
    assert split_sentences("The end. ") == ["The end."]


def _write(tmp_path, lines, name="corpus.jsonl"):
    path = tmp_path / name
    path.write_text("\n".join(json.dumps(l) if isinstance(l, dict) else l for l in lines) + "\n")
    return path


def test_load_presegmented_record(tmp_path):
    path = _write(
        tmp_path,
        [{"id": "a", "split": "test", "sentences": ["The cat sat.", "It ran."], "summary": ["A cat."]}],
    )
    corpus = load_corpus(path, "c")
    doc = corpus.documents[0]
    assert doc.n_sentences == 2
    assert len(doc.summary) == 1
    assert doc.sentences[0] == ("the", "cat", "sat", ".")


def test_load_raw_text_record_segments(tmp_path):
    path = _write(
        tmp_path,
        [{"id": "b", "split": "train", "text": "The cat sat. It ran.", "summary": "A cat."}],
    )
    doc = load_corpus(path, "c").documents[0]
    assert doc.n_sentences == 2


def test_missing_summary_is_an_error(tmp_path):
    path = _write(tmp_path, [{"id": "a", "split": "test", "text": "Hi there."}])
    with pytest.raises(CorpusFormatError, match="line 1"):
        load_corpus(path, "c")


def test_duplicate_id_is_an_error(tmp_path):
    rec = {"id": "a", "split": "test", "sentences": ["Hi."], "summary": ["Hi."]}
    path = _write(tmp_path, [rec, rec])
    with pytest.raises(CorpusFormatError, match="line 2.*duplicate"):
        load_corpus(path, "c")


def test_invalid_json_names_line(tmp_path):
    path = _write(
        tmp_path,
        [{"id": "a", "split": "test", "sentences": ["Hi."], "summary": ["Hi."]}, "{nope"],
    )
    with pytest.raises(CorpusFormatError, match="line 2"):
        load_corpus(path, "c")


def test_bad_split_is_an_error(tmp_path):
    path = _write(tmp_path, [{"id": "a", "split": "dev", "sentences": ["Hi."], "summary": ["Hi."]}])
    with pytest.raises(CorpusFormatError, match="line 1.*split"):
        load_corpus(path, "c")


def test_empty_summary_skips_with_count(tmp_path):
    path = _write(
        tmp_path,
        [
            {"id": "a", "split": "test", "sentences": ["Hi."], "summary": []},
            {"id": "b", "split": "test", "sentences": ["Hi."], "summary": ["Hi."]},
            {"id": "c", "split": "test", "sentences": [], "summary": ["Hi."]},
        ],
    )
    corpus = load_corpus(path, "c")
    assert len(corpus) == 1
    assert corpus.skipped == 2


def test_extra_fields_tolerated(tmp_path):
    path = _write(
        tmp_path,
        [{"id": "a", "split": "test", "sentences": ["Hi."], "summary": ["Hi."], "tag": "x"}],
    )
    assert len(load_corpus(path, "c")) == 1


def test_iteration_order_and_counts(tmp_path):
    recs = [
        {"id": f"d{i}", "split": split, "sentences": ["Hi."], "summary": ["Hi."]}
        for i, split in enumerate(["test", "train", "train", "valid"])
    ]
    corpus = load_corpus(_write(tmp_path, recs), "c")
    assert [d.id for d in corpus] == ["d0", "d1", "d2", "d3"]
    assert corpus.split_counts == {"train": 2, "valid": 1, "test": 1}
    assert [d.id for d in corpus.split("train")] == ["d1", "d2"]


def test_reload_is_byte_identical(tmp_path):
    rng = random.Random(3)
    recs = [
        {
            "id": f"d{i}",
            "split": "test",
            "domain": rng.choice(["cnn", "dailymail"]),
            "text": "The cat sat. It ran fast. Good.",
            "summary": "A cat ran.",
        }
        for i in range(20)
    ]
    path = _write(tmp_path, recs)

    def dump(corpus: Corpus) -> str:
        buf = io.StringIO()
        write_corpus(corpus.documents, buf)
        return buf.getvalue()

    first = dump(load_corpus(path, "c"))
    second = dump(load_corpus(path, "c"))
    assert first == second
    # serialized form reloads to the same documents
    path2 = tmp_path / "again.jsonl"
    path2.write_text(first)
    assert dump(load_corpus(path2, "c")) == first
