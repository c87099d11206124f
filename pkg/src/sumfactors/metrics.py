"""ROUGE-n, ROUGE-L and longest-common-subsequence primitives.

Scores operate on token sequences; no stemming or stopword handling
happens here (normalization is applied upstream where a measure calls
for it). Multi-sentence inputs must be concatenated by the caller.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence


@dataclass(frozen=True)
class RougeScore:
    recall: float
    precision: float
    f1: float

    @staticmethod
    def from_counts(matched: int, ref_total: int, cand_total: int) -> "RougeScore":
        recall = matched / ref_total if ref_total else 0.0
        precision = matched / cand_total if cand_total else 0.0
        f1 = 2 * matched / (ref_total + cand_total) if matched else 0.0
        return RougeScore(recall, precision, f1)


ZERO_SCORE = RougeScore(0.0, 0.0, 0.0)


def ngram_counts(tokens: Sequence[str], n: int) -> Counter[tuple[str, ...]]:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def rouge_n(candidate: Sequence[str], reference: Sequence[str], n: int) -> RougeScore:
    """N-gram overlap with clipped multiset intersection.

    recall = matches / |reference n-grams|, precision analogous over the
    candidate; an empty reference n-gram set yields the all-zero score.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    ref = ngram_counts(reference, n)
    ref_total = sum(ref.values())
    if ref_total == 0:
        return ZERO_SCORE
    cand = ngram_counts(candidate, n)
    matched = sum(min(count, ref[gram]) for gram, count in cand.items() if gram in ref)
    return RougeScore.from_counts(matched, ref_total, sum(cand.values()))


def lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    """Longest common subsequence length, O(|a|*|b|) time, O(min) space."""
    if len(b) > len(a):
        a, b = b, a
    if not b:
        return 0
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        append = cur.append
        best = 0
        for j, y in enumerate(b, 1):
            if x == y:
                best = prev[j - 1] + 1
            elif prev[j] > best:
                best = prev[j]
            append(best)
        prev = cur
    return prev[-1]


def rouge_l(candidate: Sequence[str], reference: Sequence[str]) -> RougeScore:
    """LCS-based score: recall = LCS/|reference|, precision = LCS/|candidate|."""
    if not reference:
        return ZERO_SCORE
    matched = lcs_length(candidate, reference)
    return RougeScore.from_counts(matched, len(reference), len(candidate))
