"""Token normalization for pattern mining.

The pipeline drops stopwords and punctuation, masks every token that
contains a digit to "0", and lemmatizes the rest with a deterministic
rule set (no external tagger). Patterns are contiguous bigrams and
trigrams over normalized tokens.
"""

from __future__ import annotations

from collections import Counter
from importlib import resources
from typing import Iterable, Sequence

Pattern = tuple[str, ...]


def _load_stopwords() -> frozenset[str]:
    text = resources.files("sumfactors").joinpath("data/stopwords.txt").read_text("utf-8")
    return frozenset(text.split())


STOPWORDS: frozenset[str] = _load_stopwords()

_VOWELS = frozenset("aeiouy")
# Consonants that undouble after stripping -ing/-ed (running -> run), keeping -ll/-ss.
_UNDOUBLE = frozenset("bdgmnprt")

# Irregular forms plus identity guards for words the suffix rules would mangle.
_IRREGULAR = {
    "men": "man",
    "women": "woman",
    "children": "child",
    "feet": "foot",
    "teeth": "tooth",
    "mice": "mouse",
    "geese": "goose",
    "wives": "wife",
    "knives": "knife",
    "lives": "life",
    "leaves": "leaf",
    "halves": "half",
    "selves": "self",
    "shelves": "shelf",
    "thieves": "thief",
    "loaves": "loaf",
    "wolves": "wolf",
    "movies": "movie",
    "goes": "go",
    "died": "die",
    "news": "news",
    "series": "series",
    "species": "species",
}


def is_punctuation(token: str) -> bool:
    """True when the token has no alphanumeric character at all."""
    return not any(ch.isalnum() for ch in token)


def _has_vowel(s: str) -> bool:
    return any(ch in _VOWELS for ch in s)


def _undouble(stem: str) -> str:
    if len(stem) >= 3 and stem[-1] == stem[-2] and stem[-1] in _UNDOUBLE:
        return stem[:-1]
    return stem


def _lemma_step(tok: str) -> str:
    if tok in _IRREGULAR:
        return _IRREGULAR[tok]
    n = len(tok)
    if tok.endswith("ies") and n >= 5:
        return tok[:-3] + "y"
    if tok.endswith("ied") and n >= 5:
        return tok[:-3] + "y"
    if tok.endswith("sses"):
        return tok[:-2]
    if n >= 5 and tok.endswith(("ches", "shes", "xes", "zes", "oes")):
        return tok[:-2]
    if tok.endswith(("ss", "us", "is")):
        return tok
    if tok.endswith("s") and n >= 4:
        return tok[:-1]
    if tok.endswith("eed") and n >= 5:
        return tok[:-1] if _has_vowel(tok[:-3]) else tok
    if tok.endswith("ing") and n >= 5 and _has_vowel(tok[:-3]):
        return _undouble(tok[:-3])
    if tok.endswith("ed") and n >= 5 and _has_vowel(tok[:-2]):
        return _undouble(tok[:-2])
    return tok


def lemmatize(token: str) -> str:
    """Rule-based lemma; iterated to a fixpoint so lemmatize is idempotent."""
    prev = None
    cur = token
    while cur != prev:
        prev, cur = cur, _lemma_step(cur)
    return cur


def content_tokens(tokens: Sequence[str]) -> list[str]:
    """Stopword and punctuation removal only (no masking, no lemmatization)."""
    return [t for t in tokens if t not in STOPWORDS and not is_punctuation(t)]


def normalize_tokens(tokens: Sequence[str]) -> list[str]:
    """Normalize a token sequence for pattern mining.

    Order preserved; stopwords and punctuation dropped, digit-bearing
    tokens masked to "0", the rest lemmatized. Lemmas that land on a
    stopword are dropped too, which keeps the operation idempotent.
    """
    out: list[str] = []
    for tok in tokens:
        if tok in STOPWORDS or is_punctuation(tok):
            continue
        if any(ch.isdigit() for ch in tok):
            out.append("0")
            continue
        lemma = lemmatize(tok)
        if lemma in STOPWORDS:
            continue
        out.append(lemma)
    return out


def extract_patterns(tokens: Sequence[str]) -> Counter[Pattern]:
    """All contiguous bigrams and trigrams with multiplicity."""
    patterns: Counter[Pattern] = Counter()
    for n in (2, 3):
        for i in range(len(tokens) - n + 1):
            patterns[tuple(tokens[i : i + n])] += 1
    return patterns
