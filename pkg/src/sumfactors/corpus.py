"""Corpus ingestion: line-delimited records, sentence segmentation, tokenization.

Input is UTF-8 JSONL, one object per line:

    {"id": "...", "split": "train|valid|test", "domain": "...",
     "sentences": ["..."] | "text": "...",
     "summary": ["..."] | "summary": "..."}

Pre-segmented records ("sentences") are tokenized only; raw-text records
are sentence-segmented first. All text is lowercased at tokenization time.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import IO, Iterable, Iterator

from .errors import CorpusFormatError

SPLITS = ("train", "valid", "test")

# Alphanumeric runs, or any single non-space symbol (underscore counts as a symbol).
_TOKEN_RE = re.compile(r"[^\W_]+|[^\w\s]|_")

# Candidate sentence boundary: terminal punctuation followed by whitespace.
_BOUNDARY_RE = re.compile(r"[.!?]\s+")

# A period directly after these words never ends a sentence.
_ABBREVIATIONS = frozenset(
    """
    mr mrs ms dr prof rev gen sen rep gov st jr sr vs etc e.g i.e cf al
    fig figs eq eqs no nos vol vols inc ltd co corp dept univ est approx
    jan feb mar apr jun jul aug sep sept oct nov dec
    u.s u.k u.n a.m p.m
    """.split()
)

_EDGE_PUNCT = "\"'()[]{}<>,;:`"


def tokenize(text: str) -> list[str]:
    """Lowercase and split into tokens; every punctuation character is its own token."""
    return _TOKEN_RE.findall(text.lower())


def _is_abbreviation(text: str, dot_idx: int) -> bool:
    j = dot_idx - 1
    while j >= 0 and not text[j].isspace():
        j -= 1
    word = text[j + 1 : dot_idx].strip(_EDGE_PUNCT).lower()
    return word in _ABBREVIATIONS


def split_sentences(text: str) -> list[str]:
    """Split raw text into sentences.

    A boundary is ". ", "! " or "? " whose next non-space character is an
    uppercase letter (or where only whitespace remains), except after a
    known abbreviation.
    """
    sentences: list[str] = []
    start = 0
    for m in _BOUNDARY_RE.finditer(text):
        end = m.end()
        if end < len(text) and not text[end].isupper():
            continue
        punct_idx = m.start()
        if text[punct_idx] == "." and _is_abbreviation(text, punct_idx):
            continue
        piece = text[start : punct_idx + 1].strip()
        if piece:
            sentences.append(piece)
        start = end
    tail = text[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences


@dataclass(frozen=True)
class Document:
    """One article/summary pair with immutable token sequences."""

    id: str
    split: str
    sentences: tuple[tuple[str, ...], ...]
    summary: tuple[tuple[str, ...], ...]
    domain: str | None = None

    @property
    def n_sentences(self) -> int:
        return len(self.sentences)

    def doc_tokens(self) -> list[str]:
        return [t for sent in self.sentences for t in sent]

    def summary_tokens(self) -> list[str]:
        return [t for sent in self.summary for t in sent]


@dataclass
class LoadStats:
    """Counters accumulated while reading a corpus file."""

    read: int = 0
    skipped: int = 0


def _require_str(obj: dict, key: str, lineno: int) -> str:
    value = obj.get(key)
    if not isinstance(value, str) or not value:
        raise CorpusFormatError(f"line {lineno}: field {key!r} missing or not a non-empty string")
    return value


def _sentence_list(value, key: str, lineno: int) -> list[str]:
    if not isinstance(value, list) or not all(isinstance(s, str) for s in value):
        raise CorpusFormatError(f"line {lineno}: field {key!r} must be an array of strings")
    return value


def _tokenized(raw_sentences: Iterable[str]) -> tuple[tuple[str, ...], ...]:
    out = []
    for raw in raw_sentences:
        tokens = tokenize(raw)
        if tokens:
            out.append(tuple(tokens))
    return tuple(out)


def parse_record(line: str, lineno: int) -> Document | None:
    """Parse one JSONL record into a Document.

    Returns None for records whose text or summary is empty (the caller
    counts these as skipped); raises CorpusFormatError for anything
    structurally wrong.
    """
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise CorpusFormatError(f"line {lineno}: invalid JSON ({exc.msg})") from exc
    if not isinstance(obj, dict):
        raise CorpusFormatError(f"line {lineno}: record is not a JSON object")

    doc_id = _require_str(obj, "id", lineno)
    split = _require_str(obj, "split", lineno)
    if split not in SPLITS:
        raise CorpusFormatError(f"line {lineno}: split {split!r} not one of {SPLITS}")
    domain = obj.get("domain")
    if domain is not None and not isinstance(domain, str):
        raise CorpusFormatError(f"line {lineno}: field 'domain' must be a string")

    if "sentences" in obj:
        raw_sentences = _sentence_list(obj["sentences"], "sentences", lineno)
    elif "text" in obj:
        text = obj["text"]
        if not isinstance(text, str):
            raise CorpusFormatError(f"line {lineno}: field 'text' must be a string")
        raw_sentences = split_sentences(text)
    else:
        raise CorpusFormatError(f"line {lineno}: record needs 'sentences' or 'text'")

    if "summary" not in obj:
        raise CorpusFormatError(f"line {lineno}: record needs 'summary'")
    summary_value = obj["summary"]
    if isinstance(summary_value, str):
        raw_summary = split_sentences(summary_value)
    else:
        raw_summary = _sentence_list(summary_value, "summary", lineno)

    sentences = _tokenized(raw_sentences)
    summary = _tokenized(raw_summary)
    if not sentences or not summary:
        return None
    return Document(id=doc_id, split=split, sentences=sentences, summary=summary, domain=domain)


def iter_corpus(path: str | Path, stats: LoadStats | None = None) -> Iterator[Document]:
    """Stream Documents from a JSONL file in file order.

    Memory stays bounded by one document plus the set of seen ids.
    Documents with empty text or summary are skipped and counted in
    `stats`; duplicate ids and malformed lines raise CorpusFormatError.
    """
    path = Path(path)
    if not path.is_file():
        raise CorpusFormatError(f"{path}: no such file")
    seen: set[str] = set()
    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            if stats is not None:
                stats.read += 1
            doc = parse_record(line, lineno)
            if doc is None:
                if stats is not None:
                    stats.skipped += 1
                continue
            if doc.id in seen:
                raise CorpusFormatError(f"line {lineno}: duplicate document id {doc.id!r}")
            seen.add(doc.id)
            yield doc


@dataclass(frozen=True)
class Corpus:
    """Immutable document collection; iteration order equals file order."""

    name: str
    documents: tuple[Document, ...]
    skipped: int = 0

    def __iter__(self) -> Iterator[Document]:
        return iter(self.documents)

    def __len__(self) -> int:
        return len(self.documents)

    @cached_property
    def by_id(self) -> dict[str, Document]:
        return {doc.id: doc for doc in self.documents}

    @cached_property
    def split_counts(self) -> dict[str, int]:
        counts = {split: 0 for split in SPLITS}
        for doc in self.documents:
            counts[doc.split] += 1
        return counts

    def split(self, name: str) -> tuple[Document, ...]:
        if name == "all":
            return self.documents
        if name not in SPLITS:
            raise ValueError(f"unknown split {name!r}")
        return tuple(doc for doc in self.documents if doc.split == name)


def load_corpus(path: str | Path, name: str) -> Corpus:
    """Load a whole corpus into memory (see iter_corpus for streaming)."""
    stats = LoadStats()
    documents = tuple(iter_corpus(path, stats))
    return Corpus(name=name, documents=documents, skipped=stats.skipped)


def record_dict(doc: Document) -> dict:
    """Canonical JSON-serializable record for a Document (tokens re-joined)."""
    rec: dict = {"id": doc.id, "split": doc.split}
    if doc.domain is not None:
        rec["domain"] = doc.domain
    rec["sentences"] = [" ".join(sent) for sent in doc.sentences]
    rec["summary"] = [" ".join(sent) for sent in doc.summary]
    return rec


def write_corpus(documents: Iterable[Document], fh: IO[str]) -> int:
    """Serialize documents as canonical JSONL; returns the record count."""
    n = 0
    for doc in documents:
        fh.write(json.dumps(record_dict(doc), ensure_ascii=False, separators=(",", ":")))
        fh.write("\n")
        n += 1
    return n
