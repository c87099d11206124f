"""Greedy extractive oracle, Lead-k baseline, and label-set evaluation.

The oracle objective is the mean of ROUGE-1 and ROUGE-2 f1 of the
selected sentences against the reference summary, with bigrams counted
within sentences (never across sentence joins, matching standard ROUGE
behaviour on multi-sentence inputs). Selection stops when no remaining
sentence strictly improves the objective; ties go to the lowest index.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Iterator, Mapping, Sequence

from .corpus import Document
from .errors import LabelError
from .metrics import RougeScore, ngram_counts, rouge_l, rouge_n


@dataclass(frozen=True)
class LabelSet:
    """Selected sentence indices of one document, in selection order."""

    doc_id: str
    selected: tuple[int, ...]

    def validate(self, n_sentences: int) -> None:
        if len(set(self.selected)) != len(self.selected):
            raise LabelError(f"{self.doc_id}: duplicate sentence indices")
        for i in self.selected:
            if not 0 <= i < n_sentences:
                raise LabelError(f"{self.doc_id}: sentence index {i} out of range (n={n_sentences})")


def _f1(matched: int, ref_total: int, cand_total: int) -> float:
    denom = ref_total + cand_total
    return 2.0 * matched / denom if denom else 0.0


def greedy_oracle_trace(
    doc: Document, max_sentences: int | None = None
) -> tuple[LabelSet, tuple[float, ...]]:
    """Greedy oracle plus the objective value after each accepted step.

    Clipped match counts against the summary are maintained incrementally,
    so evaluating one candidate costs O(distinct n-grams of the sentence)
    and a full step O(n * |sentence|).
    """
    if max_sentences is not None and max_sentences < 1:
        raise ValueError("max_sentences must be >= 1")
    ref_uni: Counter = Counter(doc.summary_tokens())
    ref_bi: Counter = Counter()
    for sent in doc.summary:
        ref_bi.update(zip(sent, sent[1:]))
    ref_u = sum(ref_uni.values())
    ref_b = sum(ref_bi.values())

    sents = doc.sentences
    n = len(sents)
    uni = [Counter(s) for s in sents]
    bi = [Counter(zip(s, s[1:])) for s in sents]
    lens = [len(s) for s in sents]

    selected: set[int] = set()
    order: list[int] = []
    trace: list[float] = []
    cnt_u: dict = {}
    cnt_b: dict = {}
    matched_u = 0
    matched_b = 0
    total_u = 0
    total_b = 0
    objective = 0.0

    while max_sentences is None or len(order) < max_sentences:
        best_i = -1
        best_obj = objective
        best_du = 0
        best_db = 0
        for i in range(n):
            if i in selected or lens[i] == 0:
                continue
            du = 0
            for tok, c in uni[i].items():
                r = ref_uni.get(tok)
                if r:
                    cur = cnt_u.get(tok, 0)
                    du += min(cur + c, r) - min(cur, r)
            db = 0
            for g, c in bi[i].items():
                r = ref_bi.get(g)
                if r:
                    cur = cnt_b.get(g, 0)
                    db += min(cur + c, r) - min(cur, r)
            cand_obj = 0.5 * (
                _f1(matched_u + du, ref_u, total_u + lens[i])
                + _f1(matched_b + db, ref_b, total_b + lens[i] - 1)
            )
            if cand_obj > best_obj:
                best_obj = cand_obj
                best_i = i
                best_du = du
                best_db = db
        if best_i < 0:
            break
        for tok, c in uni[best_i].items():
            cnt_u[tok] = cnt_u.get(tok, 0) + c
        for g, c in bi[best_i].items():
            cnt_b[g] = cnt_b.get(g, 0) + c
        matched_u += best_du
        matched_b += best_db
        total_u += lens[best_i]
        total_b += lens[best_i] - 1
        selected.add(best_i)
        order.append(best_i)
        assert best_obj > objective
        objective = best_obj
        trace.append(objective)

    return LabelSet(doc.id, tuple(order)), tuple(trace)


def greedy_oracle(doc: Document, max_sentences: int | None = None) -> LabelSet:
    labels, _ = greedy_oracle_trace(doc, max_sentences)
    return labels


def selection_objective(doc: Document, selected: Iterable[int]) -> float:
    """Oracle objective of an arbitrary selection, from plain counting.

    ROUGE-1 over pooled tokens plus ROUGE-2 with bigrams counted within
    sentences on both sides, halved.
    """
    sel = sorted(set(selected))
    candidate = [t for i in sel for t in doc.sentences[i]]
    r1 = rouge_n(candidate, doc.summary_tokens(), 1).f1
    cand_bi: Counter = Counter()
    for i in sel:
        cand_bi.update(ngram_counts(doc.sentences[i], 2))
    ref_bi: Counter = Counter()
    for sent in doc.summary:
        ref_bi.update(ngram_counts(sent, 2))
    matched = sum(min(c, ref_bi[g]) for g, c in cand_bi.items() if g in ref_bi)
    r2 = RougeScore.from_counts(matched, sum(ref_bi.values()), sum(cand_bi.values())).f1
    return 0.5 * (r1 + r2)


def lead_k(doc: Document, k: int) -> LabelSet:
    """First min(k, n) sentence indices."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return LabelSet(doc.id, tuple(range(min(k, doc.n_sentences))))


def auto_k(labels: Iterable[LabelSet]) -> int:
    """round(mean oracle label count), half up, at least 1."""
    counts = [len(ls.selected) for ls in labels]
    if not counts:
        raise LabelError("auto_k needs at least one label set")
    mean = sum(counts) / len(counts)
    return max(1, int(mean + 0.5))


@dataclass(frozen=True)
class CorpusRouge:
    """Corpus-level ROUGE triple: per-document means of each component."""

    r1: RougeScore
    r2: RougeScore
    rl: RougeScore
    n_docs: int


class RougeAccumulator:
    """Streaming mean of per-document ROUGE-1/2/L triples."""

    def __init__(self) -> None:
        self.n = 0
        self._sums = [0.0] * 9

    def add_scores(self, r1: RougeScore, r2: RougeScore, rl: RougeScore) -> None:
        s = self._sums
        for base, sc in ((0, r1), (3, r2), (6, rl)):
            s[base] += sc.recall
            s[base + 1] += sc.precision
            s[base + 2] += sc.f1
        self.n += 1

    def add_components(self, components: Sequence[float]) -> None:
        """Add a flat (r1 r/p/f, r2 r/p/f, rl r/p/f) 9-tuple."""
        s = self._sums
        for i, v in enumerate(components):
            s[i] += v
        self.n += 1

    def add(self, doc: Document, selected: Sequence[int]) -> None:
        self.add_scores(*score_selection(doc, selected))

    def result(self) -> CorpusRouge:
        if self.n == 0:
            zero = RougeScore(0.0, 0.0, 0.0)
            return CorpusRouge(zero, zero, zero, 0)
        s = [v / self.n for v in self._sums]
        return CorpusRouge(
            RougeScore(*s[0:3]), RougeScore(*s[3:6]), RougeScore(*s[6:9]), self.n
        )


def score_selection(
    doc: Document, selected: Sequence[int]
) -> tuple[RougeScore, RougeScore, RougeScore]:
    """ROUGE-1/2/L of the index-ordered concatenation of selected sentences."""
    candidate = [t for i in sorted(set(selected)) for t in doc.sentences[i]]
    reference = doc.summary_tokens()
    return (
        rouge_n(candidate, reference, 1),
        rouge_n(candidate, reference, 2),
        rouge_l(candidate, reference),
    )


def evaluate_labels(
    documents: Iterable[Document], labels: Mapping[str, LabelSet]
) -> CorpusRouge:
    """Corpus ROUGE of a label mapping; every document needs an entry."""
    acc = RougeAccumulator()
    seen: set[str] = set()
    for doc in documents:
        ls = labels.get(doc.id)
        if ls is None:
            raise LabelError(f"no label set for document {doc.id!r}")
        ls.validate(doc.n_sentences)
        seen.add(doc.id)
        acc.add(doc, ls.selected)
    unknown = sorted(set(labels) - seen)
    if unknown:
        shown = ", ".join(unknown[:5])
        raise LabelError(f"labels reference unknown document ids: {shown}")
    return acc.result()


def write_labels(labels: Iterable[LabelSet], fh: IO[str]) -> int:
    """Emit label records {"id", "selected"} as JSONL; returns record count."""
    n = 0
    for ls in labels:
        fh.write(json.dumps({"id": ls.doc_id, "selected": list(ls.selected)}))
        fh.write("\n")
        n += 1
    return n


def iter_label_file(path: str | Path) -> Iterator[LabelSet]:
    path = Path(path)
    if not path.is_file():
        raise LabelError(f"{path}: no such file")
    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise LabelError(f"{path}: line {lineno}: invalid JSON ({exc.msg})") from exc
            if (
                not isinstance(obj, dict)
                or not isinstance(obj.get("id"), str)
                or not isinstance(obj.get("selected"), list)
                or not all(isinstance(i, int) and not isinstance(i, bool) for i in obj["selected"])
            ):
                raise LabelError(f"{path}: line {lineno}: expected {{\"id\": str, \"selected\": [int]}}")
            yield LabelSet(obj["id"], tuple(obj["selected"]))


def read_labels(path: str | Path) -> dict[str, LabelSet]:
    """Load a label file into a mapping; duplicate ids are an error."""
    out: dict[str, LabelSet] = {}
    for ls in iter_label_file(path):
        if ls.doc_id in out:
            raise LabelError(f"{path}: duplicate label id {ls.doc_id!r}")
        out[ls.doc_id] = ls
    return out
