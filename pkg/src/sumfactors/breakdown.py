"""Test-set breakdowns by style or constituent factors, plus tag emission.

Quantile binning sorts items ascending by factor value (ties by id) and
chunks them into equal-count bins, remainder to the lowest bins. The
positional factor uses its fixed threshold bins instead. Tag emission
writes the corpus back out with document-level "tag" and/or per-sentence
"sentence_tags" fields added.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from typing import IO, Iterable, Mapping, Sequence

from .baselines import LabelSet, score_selection
from .constituent import DEFAULT_THRESHOLDS, PatternTable, ThresholdSet, pos_value, sentence_cvalue
from .corpus import Document, record_dict
from .errors import DataError, LabelError
from .style import style_profile

STYLE_FACTORS = ("density", "compression")
TAG_SCHEMES = ("random", "domain", "pvalue", "cvalue", "pc")

Item = str | tuple[str, int]  # doc id, or (doc id, sentence index)


@dataclass(frozen=True)
class BinAssignment:
    factor: str
    granularity: str  # "document" | "sentence"
    labels: tuple[str, ...]
    assignment: dict[Item, str]

    def items_in(self, label: str) -> list[Item]:
        return sorted(item for item, lbl in self.assignment.items() if lbl == label)

    def restricted(self, doc_ids: set[str]) -> "BinAssignment":
        """Same bins, keeping only items of the given documents."""
        keep = {
            item: lbl
            for item, lbl in self.assignment.items()
            if (item if isinstance(item, str) else item[0]) in doc_ids
        }
        return BinAssignment(self.factor, self.granularity, self.labels, keep)


def _quantile_labels(n_bins: int) -> tuple[str, ...]:
    if n_bins == 3:
        return ("low", "medium", "high")
    return tuple(f"q{i}" for i in range(1, n_bins + 1))


def quantile_chunks(keyed_items: list[tuple], n_bins: int) -> list[list]:
    """Split (sortkey..., item) tuples into n_bins equal-count chunks.

    Sizes differ by at most one; the remainder goes to the lowest bins.
    """
    if n_bins < 1:
        raise ValueError("n_bins must be >= 1")
    if len(keyed_items) < n_bins:
        raise DataError(f"cannot split {len(keyed_items)} items into {n_bins} bins")
    ordered = [t[-1] for t in sorted(keyed_items, key=lambda t: t[:-1])]
    base, rem = divmod(len(ordered), n_bins)
    chunks = []
    start = 0
    for b in range(n_bins):
        size = base + (1 if b < rem else 0)
        chunks.append(ordered[start : start + size])
        start += size
    return chunks


def bin_by_style(
    documents: Iterable[Document], factor: str, n_bins: int = 3
) -> BinAssignment:
    """Equal-count bins of documents by density or compression (all splits merged)."""
    if factor not in STYLE_FACTORS:
        raise ValueError(f"factor must be one of {STYLE_FACTORS}")
    keyed = []
    for doc in documents:
        profile = style_profile(doc)
        value = profile.density if factor == "density" else profile.compression
        keyed.append((value, doc.id, doc.id))
    labels = _quantile_labels(n_bins)
    assignment: dict[Item, str] = {}
    for label, chunk in zip(labels, quantile_chunks(keyed, n_bins)):
        for doc_id in chunk:
            assignment[doc_id] = label
    return BinAssignment(factor, "document", labels, assignment)


def bin_by_cvalue(
    documents: Iterable[Document],
    labels: Mapping[str, LabelSet],
    table: PatternTable,
    n_bins: int = 5,
) -> BinAssignment:
    """Equal-count bins of ground-truth sentences by their pattern score."""
    keyed = []
    for doc in documents:
        ls = labels.get(doc.id)
        if ls is None:
            continue
        for i in ls.selected:
            score = sentence_cvalue(doc.sentences[i], table)
            keyed.append((score, doc.id, i, (doc.id, i)))
    if not keyed:
        raise DataError("no ground-truth sentences to bin")
    bin_labels = tuple(f"C{i}" for i in range(1, n_bins + 1))
    assignment: dict[Item, str] = {}
    for label, chunk in zip(bin_labels, quantile_chunks(keyed, n_bins)):
        for item in chunk:
            assignment[item] = label
    return BinAssignment("cvalue", "sentence", bin_labels, assignment)


def bin_by_pvalue(
    documents: Iterable[Document],
    labels: Mapping[str, LabelSet],
    thresholds: ThresholdSet = DEFAULT_THRESHOLDS,
) -> BinAssignment:
    """Threshold bins of ground-truth sentences by positional value.

    Unlike the quantile modes, bin sizes are whatever the thresholds give.
    """
    bin_labels = tuple(f"P{i}" for i in range(1, thresholds.k + 1))
    assignment: dict[Item, str] = {}
    for doc in documents:
        ls = labels.get(doc.id)
        if ls is None:
            continue
        for i in ls.selected:
            assignment[(doc.id, i)] = f"P{pos_value(i, doc.n_sentences, thresholds)}"
    if not assignment:
        raise DataError("no ground-truth sentences to bin")
    return BinAssignment("pvalue", "sentence", bin_labels, assignment)


@dataclass(frozen=True)
class BinRow:
    """Per-bin metrics; accuracy/f1 are fractions, ROUGE is percent scale."""

    label: str
    count: int
    accuracy: float | None = None
    f1: float | None = None
    rouge1: float | None = None
    rouge2: float | None = None
    rougel: float | None = None


@dataclass(frozen=True)
class BreakdownReport:
    factor: str
    granularity: str
    rows: tuple[BinRow, ...]


def _label_f1(predicted: set[int], reference: set[int]) -> float:
    if not predicted and not reference:
        return 1.0
    inter = len(predicted & reference)
    if inter == 0:
        return 0.0
    return 2 * inter / (len(predicted) + len(reference))


def breakdown_eval(
    predictions: Mapping[str, LabelSet],
    oracle: Mapping[str, LabelSet],
    bins: BinAssignment,
    documents: Mapping[str, Document],
    macro: bool = False,
) -> BreakdownReport:
    """Evaluate predictions per bin.

    Sentence bins: accuracy = share of ground-truth sentences in the bin
    that were also predicted (micro pooled; macro averages per document).
    Document bins: mean per-document label F1 against the oracle plus
    mean ROUGE of the predicted sentences against the summaries.
    """
    needed = {item if isinstance(item, str) else item[0] for item in bins.assignment}
    missing = sorted(d for d in needed if d not in predictions)
    if missing:
        shown = ", ".join(missing[:10])
        raise LabelError(f"missing predictions for {len(missing)} document(s): {shown}")

    rows = []
    for label in bins.labels:
        items = bins.items_in(label)
        if bins.granularity == "sentence":
            rows.append(_sentence_row(label, items, predictions, macro))
        else:
            rows.append(_document_row(label, items, predictions, oracle, documents))
    return BreakdownReport(bins.factor, bins.granularity, tuple(rows))


def _sentence_row(
    label: str, items: list[Item], predictions: Mapping[str, LabelSet], macro: bool
) -> BinRow:
    if not items:
        return BinRow(label=label, count=0)
    per_doc: dict[str, list[bool]] = {}
    hits = 0
    for doc_id, sent_idx in items:
        hit = sent_idx in predictions[doc_id].selected
        hits += hit
        per_doc.setdefault(doc_id, []).append(hit)
    if macro:
        accuracy = sum(sum(v) / len(v) for v in per_doc.values()) / len(per_doc)
    else:
        accuracy = hits / len(items)
    return BinRow(label=label, count=len(items), accuracy=accuracy)


def _document_row(
    label: str,
    items: list[Item],
    predictions: Mapping[str, LabelSet],
    oracle: Mapping[str, LabelSet],
    documents: Mapping[str, Document],
) -> BinRow:
    if not items:
        return BinRow(label=label, count=0)
    f1_sum = 0.0
    r1 = r2 = rl = 0.0
    for doc_id in items:
        doc = documents.get(doc_id)
        if doc is None:
            raise LabelError(f"binned document {doc_id!r} not found in corpus")
        pred = set(predictions[doc_id].selected)
        ref = set(oracle[doc_id].selected) if doc_id in oracle else set()
        f1_sum += _label_f1(pred, ref)
        s1, s2, sl = score_selection(doc, predictions[doc_id].selected)
        r1 += s1.f1
        r2 += s2.f1
        rl += sl.f1
    n = len(items)
    return BinRow(
        label=label,
        count=n,
        f1=f1_sum / n,
        rouge1=100.0 * r1 / n,
        rouge2=100.0 * r2 / n,
        rougel=100.0 * rl / n,
    )


def emit_tags(
    documents: Sequence[Document],
    scheme: str,
    fh: IO[str],
    n_tags: int = 2,
    seed: int = 0,
    table: PatternTable | None = None,
    thresholds: ThresholdSet = DEFAULT_THRESHOLDS,
) -> int:
    """Write the corpus as JSONL with tag fields added; returns record count.

    random/domain add a document-level "tag"; pvalue/cvalue/pc add
    per-sentence "sentence_tags". The cvalue quintiles are computed over
    the scored sentences of the documents being tagged, using the
    training pattern table passed in.
    """
    if scheme not in TAG_SCHEMES:
        raise ValueError(f"scheme must be one of {TAG_SCHEMES}")
    if scheme == "random" and n_tags < 1:
        raise ValueError("n_tags must be >= 1")
    if scheme in ("cvalue", "pc") and table is None:
        raise ValueError(f"scheme {scheme!r} needs a pattern table")

    cvalue_tag: dict[tuple[str, int], str] = {}
    if scheme in ("cvalue", "pc"):
        keyed = []
        for doc in documents:
            for i, sent in enumerate(doc.sentences):
                keyed.append((sentence_cvalue(sent, table), doc.id, i, (doc.id, i)))
        for q, chunk in enumerate(quantile_chunks(keyed, 5), 1):
            for item in chunk:
                cvalue_tag[item] = f"C{q}"

    rng = random.Random(seed)
    n = 0
    for doc in documents:
        rec = record_dict(doc)
        if scheme == "random":
            rec["tag"] = f"d{rng.randrange(n_tags)}"
        elif scheme == "domain":
            if doc.domain is None:
                raise DataError(f"document {doc.id!r} has no domain field")
            rec["tag"] = doc.domain
        else:
            tags = []
            for i in range(doc.n_sentences):
                parts = []
                if scheme in ("pvalue", "pc"):
                    parts.append(f"P{pos_value(i, doc.n_sentences, thresholds)}")
                if scheme in ("cvalue", "pc"):
                    parts.append(cvalue_tag[(doc.id, i)])
                tags.append("".join(parts))
            rec["sentence_tags"] = tags
        fh.write(json.dumps(rec, ensure_ascii=False, separators=(",", ":")))
        fh.write("\n")
        n += 1
    return n
