"""Constituent factors: positional bins and PCR, pattern tables and CCR.

Positional bins come from a threshold set {t0=0, t1, ..., tK=inf}: a
sentence index keeps its absolute value near the head and tail and is
rescaled by document length in between. PCR is -ln(KL) between two
smoothed bin distributions. Pattern tables score normalized bigrams and
trigrams of ground-truth sentences by relative frequency; CCR multiplies
the renormalized top-M scores of patterns shared by two tables.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from collections import Counter
from dataclasses import dataclass
from typing import IO, Iterable, Mapping, Sequence

from .baselines import LabelSet
from .corpus import Document
from .errors import DataError
from .textnorm import Pattern, extract_patterns, normalize_tokens


@dataclass(frozen=True)
class ThresholdSet:
    """Strictly increasing bin edges starting at 0 and ending at infinity."""

    values: tuple[float, ...]

    def __post_init__(self) -> None:
        v = self.values
        if len(v) < 2 or v[0] != 0 or not math.isinf(v[-1]):
            raise ValueError("thresholds must start at 0 and end at inf")
        if any(a >= b for a, b in zip(v, v[1:])):
            raise ValueError("thresholds must be strictly increasing")

    @property
    def k(self) -> int:
        return len(self.values) - 1


DEFAULT_THRESHOLDS = ThresholdSet((0.0, 3.0, 7.0, 15.0, 35.0, math.inf))


def pos_value(i: int, n: int, thresholds: ThresholdSet = DEFAULT_THRESHOLDS) -> int:
    """Positional bin (1..K) of sentence index i in a document of n sentences."""
    if not 0 <= i < n:
        raise ValueError(f"index {i} out of range for document of {n} sentences")
    t = thresholds.values
    t1 = t[1]
    t_last = t[-2]
    pos = float(i) if i < t1 or i >= t_last else (i / n) * t_last
    # bin k such that t[k-1] <= pos < t[k]
    return bisect_right(t, pos, 1, len(t) - 1)


@dataclass(frozen=True)
class PositionalDistribution:
    """Probability of each positional bin over a corpus's labeled sentences."""

    probabilities: tuple[float, ...]
    n_sent: int

    def __post_init__(self) -> None:
        if self.probabilities and abs(sum(self.probabilities) - 1.0) > 1e-9:
            raise ValueError("probabilities must sum to 1")


class PositionalCounter:
    """Streaming accumulator of positional-bin counts."""

    def __init__(self, thresholds: ThresholdSet = DEFAULT_THRESHOLDS) -> None:
        self.thresholds = thresholds
        self.counts = [0] * thresholds.k

    def add(self, n_sentences: int, selected: Iterable[int]) -> None:
        for i in selected:
            self.counts[pos_value(i, n_sentences, self.thresholds) - 1] += 1

    def distribution(self) -> PositionalDistribution:
        total = sum(self.counts)
        if total == 0:
            raise DataError("no labeled sentences to build a positional distribution")
        return PositionalDistribution(tuple(c / total for c in self.counts), total)


def positional_distribution(
    documents: Iterable[Document],
    labels: Mapping[str, LabelSet],
    thresholds: ThresholdSet = DEFAULT_THRESHOLDS,
) -> PositionalDistribution:
    """Bin distribution of all labeled sentence positions in `documents`."""
    counter = PositionalCounter(thresholds)
    for doc in documents:
        ls = labels.get(doc.id)
        if ls is not None:
            counter.add(doc.n_sentences, ls.selected)
    return counter.distribution()


def _smooth(probs: Sequence[float], epsilon: float) -> list[float]:
    if epsilon < 0:
        raise ValueError("epsilon must be >= 0")
    total = sum(probs) + epsilon * len(probs)
    return [(p + epsilon) / total for p in probs]


def kl_divergence(pa: Sequence[float], pb: Sequence[float]) -> float:
    """KL(pa || pb) with natural log; infinite where pb lacks mass pa has."""
    if len(pa) != len(pb):
        raise ValueError("distributions must have the same number of bins")
    total = 0.0
    for a, b in zip(pa, pb):
        if a > 0:
            if b == 0:
                return math.inf
            total += a * math.log(a / b)
    return total


def _probs(dist) -> Sequence[float]:
    return dist.probabilities if isinstance(dist, PositionalDistribution) else dist


def pcr(pa, pb, epsilon: float = 1e-4, cap: float = 20.0) -> float:
    """Positional coverage rate -ln(KL) between two bin distributions.

    Both inputs are smoothed by epsilon and renormalized; the result is
    clamped to `cap` once KL drops below e^-cap (identical inputs hit the
    cap exactly).
    """
    a = _smooth(_probs(pa), epsilon)
    b = _smooth(_probs(pb), epsilon)
    kl = kl_divergence(a, b)
    if math.isinf(kl):
        return -math.inf
    assert kl > -1e-12, "KL must be non-negative"
    kl = max(kl, 0.0)
    if kl <= math.exp(-cap):
        return cap
    return -math.log(kl)


@dataclass(frozen=True)
class PatternTable:
    """Relative-frequency scores of mined patterns plus the top-M subset."""

    scores: dict[Pattern, float]
    top: tuple[Pattern, ...]
    m: int

    def top_weights(self) -> dict[Pattern, float]:
        """Scores of the top-M patterns renormalized to sum to 1."""
        total = sum(self.scores[p] for p in self.top)
        return {p: self.scores[p] / total for p in self.top}


class PatternCounter:
    """Streaming accumulator of normalized pattern counts."""

    def __init__(self) -> None:
        self.counts: Counter[Pattern] = Counter()

    def add_sentence(self, tokens: Sequence[str]) -> None:
        self.counts.update(extract_patterns(normalize_tokens(tokens)))

    def build(self, m: int = 100) -> PatternTable:
        if m < 1:
            raise ValueError("m must be >= 1")
        total = sum(self.counts.values())
        if total == 0:
            raise DataError("no patterns extracted; cannot build a pattern table")
        scores = {p: c / total for p, c in self.counts.items()}
        ranked = sorted(scores.items(), key=lambda item: (-item[1], item[0]))
        top = tuple(p for p, _ in ranked[: min(m, len(ranked))])
        return PatternTable(scores=scores, top=top, m=m)


def pattern_table(sentences: Iterable[Sequence[str]], m: int = 100) -> PatternTable:
    """Pattern table over ground-truth sentences (normalization included)."""
    counter = PatternCounter()
    for sent in sentences:
        counter.add_sentence(sent)
    return counter.build(m)


def sentence_cvalue(tokens: Sequence[str], table: PatternTable) -> float:
    """Sum of table scores over all pattern occurrences in the sentence.

    Multiplicity counts, and the full table is consulted (not only the
    top-M subset); sentences without table patterns score 0.
    """
    total = 0.0
    for pat, count in extract_patterns(normalize_tokens(tokens)).items():
        score = table.scores.get(pat)
        if score:
            total += score * count
    return total


def ccr(ta: PatternTable, tb: PatternTable, scale: float = 100.0) -> float:
    """Content coverage rate between two pattern tables.

    Scores of patterns present in both top-M sets are renormalized within
    each top set, multiplied pairwise, summed, and scaled. Disjoint top
    sets give exactly 0.
    """
    wa = ta.top_weights()
    wb = tb.top_weights()
    shared = set(wa) & set(wb)
    return scale * sum(wa[p] * wb[p] for p in shared)


def write_pattern_table(table: PatternTable, fh: IO[str]) -> int:
    """TSV export: pattern tokens tab-joined, raw score, top-M flag.

    Rows are sorted by score descending, ties lexicographic; rows with
    flag 1 form the top-M subset.
    """
    top = set(table.top)
    rows = sorted(table.scores.items(), key=lambda item: (-item[1], item[0]))
    for pat, score in rows:
        flag = "1" if pat in top else "0"
        fh.write("\t".join((*pat, f"{score:.10g}", flag)))
        fh.write("\n")
    return len(rows)
