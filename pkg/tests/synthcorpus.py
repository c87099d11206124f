"""Synthetic corpus builders shared by the test modules."""

from __future__ import annotations

import json
import random
from pathlib import Path

from sumfactors.corpus import Document


def make_doc(doc_id, sentences, summary, split="test", domain=None) -> Document:
    return Document(
        id=doc_id,
        split=split,
        sentences=tuple(tuple(s) for s in sentences),
        summary=tuple(tuple(s) for s in summary),
        domain=domain,
    )


def random_doc(
    rng: random.Random,
    doc_id: str,
    vocab: list[str],
    n_sentences: int = 8,
    sent_len: int = 8,
    n_summary: int = 2,
    split: str = "test",
    domain: str | None = None,
) -> Document:
    """Document whose summary copies random slices of its sentences."""
    sentences = [
        [rng.choice(vocab) for _ in range(rng.randint(max(2, sent_len - 3), sent_len + 3))]
        for _ in range(n_sentences)
    ]
    summary = []
    for _ in range(n_summary):
        src = rng.choice(sentences)
        start = rng.randrange(len(src))
        end = min(len(src), start + rng.randint(2, 6))
        piece = src[start:end]
        if rng.random() < 0.3:
            piece = piece + [rng.choice(vocab)]
        summary.append(piece)
    return make_doc(doc_id, sentences, summary, split=split, domain=domain)


def doc_record(doc: Document) -> dict:
    rec = {"id": doc.id, "split": doc.split}
    if doc.domain is not None:
        rec["domain"] = doc.domain
    rec["sentences"] = [" ".join(s) for s in doc.sentences]
    rec["summary"] = [" ".join(s) for s in doc.summary]
    return rec


def write_jsonl(path: Path, docs) -> Path:
    with Path(path).open("w", encoding="utf-8") as fh:
        for doc in docs:
            fh.write(json.dumps(doc_record(doc) if isinstance(doc, Document) else doc))
            fh.write("\n")
    return Path(path)


def letter_vocab(prefix: str, size: int, rng: random.Random | None = None) -> list[str]:
    """Distinct digit-free alphabetic tokens sharing a prefix."""
    letters = "abcdefghijklmnopqrstuvwxyz"
    out = []
    i = 0
    while len(out) < size:
        suffix = []
        j = i
        while True:
            suffix.append(letters[j % 26])
            j //= 26
            if j == 0:
                break
        out.append(prefix + "".join(suffix))
        i += 1
    return out


def regime_corpus(
    rng: random.Random,
    prefix: str,
    n_train: int,
    n_test: int,
    regime: str,
    n_sentences: int = 40,
) -> list[Document]:
    """Corpus with a private vocabulary and summaries copied from a fixed
    document region (head / middle / tail), so oracle labels concentrate
    in distinct positional bins per regime."""
    vocab = letter_vocab(prefix, 30)
    if regime == "head":
        region = (0, 1, 2)
    elif regime == "middle":
        region = (n_sentences // 2 - 1, n_sentences // 2, n_sentences // 2 + 1)
    elif regime == "tail":
        region = (n_sentences - 3, n_sentences - 2, n_sentences - 1)
    else:
        raise ValueError(regime)
    docs = []
    for i in range(n_train + n_test):
        split = "train" if i < n_train else "test"
        sentences = [
            [rng.choice(vocab) for _ in range(6)] for _ in range(n_sentences)
        ]
        summary = [list(sentences[j]) for j in region]
        docs.append(make_doc(f"{prefix}{i:04d}", sentences, summary, split=split))
    return docs
