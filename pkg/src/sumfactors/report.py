"""Dataset statistics, cross-dataset shift matrices, and report emission.

Heavy scans stream the corpus file line by line; per-line work (parsing,
tokenization, oracle extraction, scoring) runs on worker processes with
results merged in file order, so outputs are byte-identical for any
worker count. Oracle labels are cached to label files keyed by the
corpus content hash.
"""

from __future__ import annotations

import hashlib
import json
import os
import statistics
import sys
from dataclasses import dataclass
from functools import partial
from pathlib import Path
from typing import IO, Iterable, Iterator

from .baselines import (
    CorpusRouge,
    LabelSet,
    RougeAccumulator,
    auto_k,
    greedy_oracle,
    read_labels,
    score_selection,
    write_labels,
)
from .breakdown import BreakdownReport
from .constituent import (
    DEFAULT_THRESHOLDS,
    PatternCounter,
    PatternTable,
    PositionalCounter,
    PositionalDistribution,
    ThresholdSet,
    ccr,
    pcr,
)
from .corpus import Document, parse_record
from .errors import CorpusFormatError, DataError
from .parallel import pmap_ordered
from .style import compression, density


def _iter_lines(path: Path) -> Iterator[tuple[int, str]]:
    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if line.strip():
                yield lineno, line


def _check_path(path: str | Path) -> Path:
    path = Path(path)
    if not path.is_file():
        raise CorpusFormatError(f"{path}: no such file")
    return path


def corpus_hash(path: str | Path) -> str:
    h = hashlib.sha256()
    with Path(path).open("rb") as fh:
        while chunk := fh.read(1 << 20):
            h.update(chunk)
    return h.hexdigest()[:24]


# ---------------------------------------------------------------------------
# Oracle labels with content-hash cache


def _oracle_line_worker(
    item: tuple[int, str], split: str, max_sentences: int | None
) -> tuple[str, tuple[int, ...] | None] | None:
    lineno, line = item
    doc = parse_record(line, lineno)
    if doc is None:
        return None
    if split != "all" and doc.split != split:
        return (doc.id, None)
    return (doc.id, greedy_oracle(doc, max_sentences).selected)


def oracle_labels(
    path: str | Path,
    split: str = "test",
    threads: int = 1,
    cache_dir: str | Path | None = None,
    max_sentences: int | None = None,
) -> dict[str, LabelSet]:
    """Greedy-oracle labels for every document of a split, cache-backed."""
    path = _check_path(path)
    cache_file = None
    if cache_dir is not None:
        suffix = f".m{max_sentences}" if max_sentences is not None else ""
        cache_file = Path(cache_dir) / f"{corpus_hash(path)}.{split}{suffix}.labels.jsonl"
        if cache_file.is_file():
            labels = read_labels(cache_file)
            if labels:
                return labels

    worker = partial(_oracle_line_worker, split=split, max_sentences=max_sentences)
    labels: dict[str, LabelSet] = {}
    seen: set[str] = set()
    for result in pmap_ordered(worker, _iter_lines(path), threads):
        if result is None:
            continue
        doc_id, selected = result
        if doc_id in seen:
            raise CorpusFormatError(f"{path}: duplicate document id {doc_id!r}")
        seen.add(doc_id)
        if selected is not None:
            labels[doc_id] = LabelSet(doc_id, selected)
    if not labels:
        raise DataError(f"{path}: no documents in split {split!r}")

    if cache_file is not None:
        cache_file.parent.mkdir(parents=True, exist_ok=True)
        tmp = cache_file.with_suffix(".tmp")
        with tmp.open("w", encoding="utf-8") as fh:
            write_labels(labels.values(), fh)
        os.replace(tmp, cache_file)
    return labels


# ---------------------------------------------------------------------------
# Dataset statistics (Lead-k / oracle bounds, style factor summary)


@dataclass(frozen=True)
class DatasetStats:
    """One summary row per corpus; ROUGE values are percent scale."""

    name: str
    n_train: int
    n_valid: int
    n_test: int
    n_skipped: int
    density_mean: float
    density_median: float
    compression_mean: float
    compression_median: float
    k: int
    lead_r1: float
    lead_r2: float
    lead_rl: float
    oracle_r1: float
    oracle_r2: float
    oracle_rl: float
    rouge_stat: str

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def _flat(scores) -> tuple[float, ...]:
    r1, r2, rl = scores
    return (
        r1.recall, r1.precision, r1.f1,
        r2.recall, r2.precision, r2.f1,
        rl.recall, rl.precision, rl.f1,
    )


def _stats_line_worker(
    item: tuple[int, str], labels: dict[str, tuple[int, ...]], k: int
) -> tuple[str, str, float, float, tuple[float, ...] | None, tuple[float, ...] | None] | None:
    lineno, line = item
    doc = parse_record(line, lineno)
    if doc is None:
        return None
    doc_tokens = doc.doc_tokens()
    summary_tokens = doc.summary_tokens()
    dens = density(doc_tokens, summary_tokens)
    comp = compression(doc_tokens, summary_tokens)
    oracle_scores = lead_scores = None
    if doc.split == "test":
        selected = labels.get(doc.id)
        if selected is None:
            raise DataError(f"line {lineno}: no oracle labels for test document {doc.id!r}")
        oracle_scores = _flat(score_selection(doc, selected))
        lead_scores = _flat(score_selection(doc, range(min(k, doc.n_sentences))))
    return (doc.id, doc.split, dens, comp, oracle_scores, lead_scores)


def _pick(acc: RougeAccumulator, stat: str) -> tuple[float, float, float]:
    result = acc.result()
    triple = (result.r1, result.r2, result.rl)
    if stat == "recall":
        return tuple(100.0 * s.recall for s in triple)
    return tuple(100.0 * s.f1 for s in triple)


def compute_stats(
    path: str | Path,
    name: str,
    threads: int = 1,
    cache_dir: str | Path | None = None,
    k: int | None = None,
    rouge_stat: str = "f1",
) -> DatasetStats:
    """Full statistics row for one corpus.

    Two streaming passes: one to extract (or load cached) oracle labels
    for the test split, one to accumulate style factors and ROUGE. Memory
    holds the label cache and one float per document per style factor.
    """
    if rouge_stat not in ("f1", "recall"):
        raise ValueError("rouge_stat must be 'f1' or 'recall'")
    path = _check_path(path)
    labels = oracle_labels(path, "test", threads, cache_dir)
    if k is None:
        k = auto_k(labels.values())

    selected_by_id = {doc_id: ls.selected for doc_id, ls in labels.items()}
    worker = partial(_stats_line_worker, labels=selected_by_id, k=k)
    counts = {"train": 0, "valid": 0, "test": 0}
    skipped = 0
    densities: list[float] = []
    compressions: list[float] = []
    oracle_acc = RougeAccumulator()
    lead_acc = RougeAccumulator()
    seen: set[str] = set()
    for result in pmap_ordered(worker, _iter_lines(path), threads):
        if result is None:
            skipped += 1
            continue
        doc_id, split, dens, comp, oracle_scores, lead_scores = result
        if doc_id in seen:
            raise CorpusFormatError(f"{path}: duplicate document id {doc_id!r}")
        seen.add(doc_id)
        counts[split] += 1
        densities.append(dens)
        compressions.append(comp)
        if oracle_scores is not None:
            oracle_acc.add_components(oracle_scores)
            lead_acc.add_components(lead_scores)

    lead = _pick(lead_acc, rouge_stat)
    oracle = _pick(oracle_acc, rouge_stat)
    return DatasetStats(
        name=name,
        n_train=counts["train"],
        n_valid=counts["valid"],
        n_test=counts["test"],
        n_skipped=skipped,
        density_mean=statistics.fmean(densities),
        density_median=statistics.median(densities),
        compression_mean=statistics.fmean(compressions),
        compression_median=statistics.median(compressions),
        k=k,
        lead_r1=lead[0], lead_r2=lead[1], lead_rl=lead[2],
        oracle_r1=oracle[0], oracle_r2=oracle[1], oracle_rl=oracle[2],
        rouge_stat=rouge_stat,
    )


# ---------------------------------------------------------------------------
# Cross-dataset shift matrices


@dataclass(frozen=True)
class ShiftMatrix:
    measure: str
    names: tuple[str, ...]
    values: tuple[tuple[float, ...], ...]

    def to_dict(self) -> dict:
        return {
            "measure": self.measure,
            "names": list(self.names),
            "values": [list(row) for row in self.values],
        }


def _matrix_line_worker(
    item: tuple[int, str],
    train_labels: dict[str, tuple[int, ...]],
    test_labels: dict[str, tuple[int, ...]],
) -> tuple[str, str, int, tuple[int, ...], dict] | None:
    lineno, line = item
    doc = parse_record(line, lineno)
    if doc is None or doc.split == "valid":
        return None
    selected = (train_labels if doc.split == "train" else test_labels).get(doc.id)
    if selected is None:
        return None
    counter = PatternCounter()
    for i in selected:
        counter.add_sentence(doc.sentences[i])
    return (doc.id, doc.split, doc.n_sentences, selected, dict(counter.counts))


@dataclass(frozen=True)
class CorpusSides:
    """Train- and test-side positional distributions and pattern tables."""

    name: str
    train_positions: PositionalDistribution
    test_positions: PositionalDistribution
    train_table: PatternTable
    test_table: PatternTable


def corpus_sides(
    path: str | Path,
    name: str,
    threads: int = 1,
    cache_dir: str | Path | None = None,
    thresholds: ThresholdSet = DEFAULT_THRESHOLDS,
    top_m: int = 100,
) -> CorpusSides:
    path = _check_path(path)
    try:
        train_labels = oracle_labels(path, "train", threads, cache_dir)
        test_labels = oracle_labels(path, "test", threads, cache_dir)
    except DataError as exc:
        raise DataError(f"corpus {name!r}: {exc}") from exc

    worker = partial(
        _matrix_line_worker,
        train_labels={d: ls.selected for d, ls in train_labels.items()},
        test_labels={d: ls.selected for d, ls in test_labels.items()},
    )
    positions = {"train": PositionalCounter(thresholds), "test": PositionalCounter(thresholds)}
    patterns = {"train": PatternCounter(), "test": PatternCounter()}
    for result in pmap_ordered(worker, _iter_lines(path), threads):
        if result is None:
            continue
        _, split, n_sentences, selected, pattern_counts = result
        positions[split].add(n_sentences, selected)
        patterns[split].counts.update(pattern_counts)
    try:
        return CorpusSides(
            name=name,
            train_positions=positions["train"].distribution(),
            test_positions=positions["test"].distribution(),
            train_table=patterns["train"].build(top_m),
            test_table=patterns["test"].build(top_m),
        )
    except DataError as exc:
        raise DataError(f"corpus {name!r}: {exc}") from exc


def compute_matrix(
    paths: Iterable[str | Path],
    names: Iterable[str],
    measure: str,
    threads: int = 1,
    cache_dir: str | Path | None = None,
    thresholds: ThresholdSet = DEFAULT_THRESHOLDS,
    top_m: int = 100,
    epsilon: float = 1e-4,
    cap: float = 20.0,
    scale: float = 100.0,
) -> ShiftMatrix:
    """Cross-dataset matrix: cell (i, j) compares train side i to test side j."""
    if measure not in ("pcr", "ccr"):
        raise ValueError("measure must be 'pcr' or 'ccr'")
    sides = [
        corpus_sides(p, n, threads, cache_dir, thresholds, top_m)
        for p, n in zip(paths, names)
    ]
    if len(sides) < 2:
        raise DataError("matrix needs at least two corpora")
    rows = []
    for a in sides:
        if measure == "pcr":
            row = tuple(pcr(a.train_positions, b.test_positions, epsilon, cap) for b in sides)
        else:
            row = tuple(ccr(a.train_table, b.test_table, scale) for b in sides)
        rows.append(row)
    return ShiftMatrix(measure, tuple(s.name for s in sides), tuple(rows))


# ---------------------------------------------------------------------------
# Emission


def emit(text: str, out: str | Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def stats_tsv(rows: Iterable[DatasetStats]) -> str:
    header = (
        "name\ttrain\tvalid\ttest\tdensity_mean\tdensity_median\t"
        "compression_mean\tcompression_median\tk\t"
        "lead_r1\tlead_r2\tlead_rl\toracle_r1\toracle_r2\toracle_rl\n"
    )
    lines = [header]
    for s in rows:
        lines.append(
            f"{s.name}\t{s.n_train}\t{s.n_valid}\t{s.n_test}\t"
            f"{s.density_mean:.2f}\t{s.density_median:.2f}\t"
            f"{s.compression_mean:.2f}\t{s.compression_median:.2f}\t{s.k}\t"
            f"{s.lead_r1:.2f}\t{s.lead_r2:.2f}\t{s.lead_rl:.2f}\t"
            f"{s.oracle_r1:.2f}\t{s.oracle_r2:.2f}\t{s.oracle_rl:.2f}\n"
        )
    return "".join(lines)


def stats_json(rows: Iterable[DatasetStats]) -> str:
    return json.dumps({"corpora": [s.to_dict() for s in rows]}, indent=2) + "\n"


def matrix_tsv(matrix: ShiftMatrix) -> str:
    lines = [matrix.measure + "\t" + "\t".join(matrix.names) + "\n"]
    for name, row in zip(matrix.names, matrix.values):
        lines.append(name + "\t" + "\t".join(f"{v:.4f}" for v in row) + "\n")
    return "".join(lines)


def matrix_json(matrix: ShiftMatrix) -> str:
    return json.dumps(matrix.to_dict(), indent=2) + "\n"


def rouge_tsv(result: CorpusRouge) -> str:
    lines = ["metric\trecall\tprecision\tf1\n"]
    for label, score in (("rouge-1", result.r1), ("rouge-2", result.r2), ("rouge-l", result.rl)):
        lines.append(
            f"{label}\t{100 * score.recall:.2f}\t{100 * score.precision:.2f}\t{100 * score.f1:.2f}\n"
        )
    return "".join(lines)


def rouge_json(result: CorpusRouge) -> str:
    payload = {
        "n_docs": result.n_docs,
        "rouge": {
            label: {
                "recall": 100 * score.recall,
                "precision": 100 * score.precision,
                "f1": 100 * score.f1,
            }
            for label, score in (("r1", result.r1), ("r2", result.r2), ("rl", result.rl))
        },
    }
    return json.dumps(payload, indent=2) + "\n"


def _cell(value: float | None, fmt: str) -> str:
    return "" if value is None else format(value, fmt)


def breakdown_tsv(report: BreakdownReport) -> str:
    lines = [f"# factor={report.factor}\tgranularity={report.granularity}\n"]
    lines.append("bin\tcount\taccuracy\tf1\tr1\tr2\trl\n")
    for row in report.rows:
        lines.append(
            f"{row.label}\t{row.count}\t{_cell(row.accuracy, '.4f')}\t{_cell(row.f1, '.4f')}\t"
            f"{_cell(row.rouge1, '.2f')}\t{_cell(row.rouge2, '.2f')}\t{_cell(row.rougel, '.2f')}\n"
        )
    return "".join(lines)


def breakdown_json(report: BreakdownReport) -> str:
    payload = {
        "factor": report.factor,
        "granularity": report.granularity,
        "rows": [dict(row.__dict__) for row in report.rows],
    }
    return json.dumps(payload, indent=2) + "\n"
