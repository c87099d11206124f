"""Style factors: extractive fragments, density, compression, salience.

Fragments follow the greedy left-to-right matcher over the summary: at
each uncovered summary position, take the longest match starting there
against any document position (leftmost on ties) and advance past it;
unmatched tokens advance by one. Matching is case-insensitive on raw
tokens; no other normalization is applied.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .corpus import Document
from .metrics import lcs_length
from .textnorm import content_tokens


@dataclass(frozen=True)
class Fragment:
    doc_start: int
    summary_start: int
    length: int


@dataclass(frozen=True)
class StyleProfile:
    density: float
    compression: float


def extractive_fragments(
    doc_tokens: Sequence[str], summary_tokens: Sequence[str]
) -> list[Fragment]:
    doc = [t.lower() for t in doc_tokens]
    summary = [t.lower() for t in summary_tokens]
    positions: dict[str, list[int]] = {}
    for j, tok in enumerate(doc):
        positions.setdefault(tok, []).append(j)

    fragments: list[Fragment] = []
    n_doc = len(doc)
    n_sum = len(summary)
    i = 0
    while i < n_sum:
        best_len = 0
        best_j = -1
        for j in positions.get(summary[i], ()):
            length = 1
            while i + length < n_sum and j + length < n_doc and doc[j + length] == summary[i + length]:
                length += 1
            if length > best_len:
                best_len = length
                best_j = j
        if best_len:
            fragments.append(Fragment(doc_start=best_j, summary_start=i, length=best_len))
            i += best_len
        else:
            i += 1
    return fragments


def density(doc_tokens: Sequence[str], summary_tokens: Sequence[str]) -> float:
    """Mean squared fragment length per summary token."""
    if not summary_tokens:
        raise ValueError("density needs a non-empty summary")
    total = sum(f.length * f.length for f in extractive_fragments(doc_tokens, summary_tokens))
    return total / len(summary_tokens)


def compression(doc_tokens: Sequence[str], summary_tokens: Sequence[str]) -> float:
    """Document-to-summary token ratio."""
    if not summary_tokens:
        raise ValueError("compression needs a non-empty summary")
    return len(doc_tokens) / len(summary_tokens)


def style_profile(doc: Document) -> StyleProfile:
    doc_tokens = doc.doc_tokens()
    summary_tokens = doc.summary_tokens()
    return StyleProfile(
        density=density(doc_tokens, summary_tokens),
        compression=compression(doc_tokens, summary_tokens),
    )


def salience(
    sentence_tokens: Sequence[str],
    summary_tokens: Sequence[str],
    denominator: str = "content",
) -> float:
    """Share of a sentence devoted to summary information.

    LCS over content tokens (stopwords and punctuation removed on both
    sides) divided by the sentence's content-token count, or by its total
    token count with denominator="total". Zero content tokens yield 0.
    """
    if denominator not in ("content", "total"):
        raise ValueError("denominator must be 'content' or 'total'")
    sent = content_tokens(sentence_tokens)
    denom = len(sent) if denominator == "content" else len(sentence_tokens)
    if not sent or not denom:
        return 0.0
    return lcs_length(sent, content_tokens(summary_tokens)) / denom


def salience_concentration(
    sentences: Sequence[Sequence[str]],
    summary_tokens: Sequence[str],
    top_j: int,
    denominator: str = "content",
) -> tuple[tuple[float, ...], tuple[float, ...]]:
    """Top-j salience scores and each one's share of the per-document total.

    Ties go to the lower sentence index; a zero total maps every share to 0.
    """
    if top_j < 1:
        raise ValueError("top_j must be >= 1")
    scores = [salience(sent, summary_tokens, denominator) for sent in sentences]
    total = sum(scores)
    ranked = sorted(range(len(scores)), key=lambda i: (-scores[i], i))[:top_j]
    top_scores = tuple(scores[i] for i in ranked)
    shares = tuple((s / total if total > 0 else 0.0) for s in top_scores)
    return top_scores, shares
