"""Command-line interface.

Subcommands: stats, oracle, leadk, rouge, matrix, breakdown, tag,
patterns. Exit status is 0 on success, 1 on usage errors, and 2 on data
errors. All outputs are deterministic for fixed inputs, flags, and seed,
regardless of --threads.
"""

from __future__ import annotations

import argparse
import io
import math
import sys
from pathlib import Path

from . import baselines, breakdown, constituent, report
from .corpus import load_corpus
from .errors import DataError


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage errors; the CLI contract wants 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _parse_thresholds(text: str) -> constituent.ThresholdSet:
    try:
        values = tuple(math.inf if part.strip() in ("inf", "Inf") else float(part) for part in text.split(","))
        return constituent.ThresholdSet(values)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=1, help="worker processes for corpus scans")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized operations")
    common.add_argument("--config", type=str, default=None, help="key=value file with flag defaults")
    common.add_argument("--out", type=str, default=None, help="output file (default: stdout)")
    common.add_argument("--format", choices=("tsv", "json"), default="tsv")
    common.add_argument("--cache-dir", type=str, default=".sumfactors_cache", help="oracle label cache directory")
    common.add_argument("--no-cache", action="store_true", help="disable the oracle label cache")
    return common


def build_parser() -> _Parser:
    common = _common_parser()
    parser = _Parser(prog="sumfactors", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", parents=[common], help="dataset statistics table")
    p.add_argument("paths", nargs="+", help="corpus JSONL files")
    p.add_argument("--names", type=str, default=None, help="comma-separated corpus names")
    p.add_argument("--k", type=int, default=None, help="Lead-k size (default: oracle average)")
    p.add_argument("--rouge-stat", choices=("f1", "recall"), default="f1")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("oracle", parents=[common], help="emit greedy-oracle label file")
    p.add_argument("--in", dest="path", required=True)
    p.add_argument("--split", choices=("train", "valid", "test", "all"), default="all")
    p.add_argument("--max-sentences", type=int, default=None)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("leadk", parents=[common], help="emit Lead-k label file")
    p.add_argument("--in", dest="path", required=True)
    p.add_argument("--split", choices=("train", "valid", "test", "all"), default="test")
    p.add_argument("--k", type=int, default=None, help="default: oracle average on the split")
    p.set_defaults(func=cmd_leadk)

    p = sub.add_parser("rouge", parents=[common], help="corpus ROUGE of a prediction label file")
    p.add_argument("--in", dest="path", required=True)
    p.add_argument("--pred", required=True, help="prediction label file")
    p.add_argument("--split", choices=("train", "valid", "test", "all"), default="all")
    p.set_defaults(func=cmd_rouge)

    p = sub.add_parser("matrix", parents=[common], help="cross-dataset PCR/CCR matrix")
    p.add_argument("paths", nargs="+", help="two or more corpus JSONL files")
    p.add_argument("--names", type=str, default=None)
    p.add_argument("--measure", choices=("pcr", "ccr"), required=True)
    p.add_argument("--top-m", type=int, default=100)
    p.add_argument("--epsilon", type=float, default=1e-4)
    p.add_argument("--cap", type=float, default=20.0)
    p.add_argument("--scale", type=float, default=100.0)
    p.add_argument("--thresholds", type=_parse_thresholds, default=constituent.DEFAULT_THRESHOLDS)
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("breakdown", parents=[common], help="per-bin evaluation of predictions")
    p.add_argument("--in", dest="path", required=True)
    p.add_argument("--pred", required=True)
    p.add_argument("--factor", choices=("density", "compression", "pvalue", "cvalue"), required=True)
    p.add_argument("--bins", type=int, default=None, help="default: 3 for style factors, 5 for cvalue")
    p.add_argument("--macro", action="store_true", help="average sentence accuracy per document")
    p.add_argument("--eval-split", choices=("train", "valid", "test", "all"), default="test")
    p.add_argument("--top-m", type=int, default=100)
    p.add_argument("--thresholds", type=_parse_thresholds, default=constituent.DEFAULT_THRESHOLDS)
    p.set_defaults(func=cmd_breakdown)

    p = sub.add_parser("tag", parents=[common], help="emit a tag-augmented corpus")
    p.add_argument("--in", dest="path", required=True)
    p.add_argument("--scheme", choices=breakdown.TAG_SCHEMES, required=True)
    p.add_argument("--tags", type=int, default=2, help="number of random pseudo-domain tags")
    p.add_argument("--top-m", type=int, default=100)
    p.add_argument("--thresholds", type=_parse_thresholds, default=constituent.DEFAULT_THRESHOLDS)
    p.set_defaults(func=cmd_tag)

    p = sub.add_parser("patterns", parents=[common], help="export a pattern table as TSV")
    p.add_argument("--in", dest="path", required=True)
    p.add_argument("--split", choices=("train", "valid", "test", "all"), default="train")
    p.add_argument("--top-m", type=int, default=100)
    p.set_defaults(func=cmd_patterns)

    return parser


def _load_config(path: str) -> dict[str, str]:
    p = Path(path)
    if not p.is_file():
        raise DataError(f"{path}: no such config file")
    values: dict[str, str] = {}
    for lineno, line in enumerate(p.read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise DataError(f"{path}: line {lineno}: expected key=value")
        key, _, value = line.partition("=")
        values[key.strip().replace("-", "_")] = value.strip()
    return values


_CONFIG_TYPES = {
    "threads": int,
    "seed": int,
    "top_m": int,
    "tags": int,
    "bins": int,
    "k": int,
    "epsilon": float,
    "cap": float,
    "scale": float,
    "format": str,
    "cache_dir": str,
    "out": str,
    "rouge_stat": str,
    "names": str,
    "split": str,
    "eval_split": str,
}


def _apply_config(parser: _Parser, argv: list[str]) -> None:
    path = None
    for i, arg in enumerate(argv):
        if arg == "--config" and i + 1 < len(argv):
            path = argv[i + 1]
        elif arg.startswith("--config="):
            path = arg.split("=", 1)[1]
    if path is None:
        return
    defaults = {}
    for key, raw in _load_config(path).items():
        if key not in _CONFIG_TYPES:
            parser.error(f"unknown config key {key!r}")
        try:
            defaults[key] = _CONFIG_TYPES[key](raw)
        except ValueError:
            parser.error(f"config key {key!r}: cannot parse value {raw!r}")
    parser.set_defaults(**defaults)


def _cache_dir(args) -> str | None:
    return None if args.no_cache else args.cache_dir


def _names(args) -> list[str]:
    if args.names:
        names = [n.strip() for n in args.names.split(",")]
        if len(names) != len(args.paths):
            raise DataError(f"--names lists {len(names)} names for {len(args.paths)} corpora")
        return names
    return [Path(p).stem for p in args.paths]


def _emit_labels(labels, out) -> None:
    buf = io.StringIO()
    baselines.write_labels(labels, buf)
    report.emit(buf.getvalue(), out)


def cmd_stats(args) -> int:
    rows = [
        report.compute_stats(
            path, name, threads=args.threads, cache_dir=_cache_dir(args), k=args.k,
            rouge_stat=args.rouge_stat,
        )
        for path, name in zip(args.paths, _names(args))
    ]
    text = report.stats_json(rows) if args.format == "json" else report.stats_tsv(rows)
    report.emit(text, args.out)
    return 0


def cmd_oracle(args) -> int:
    labels = report.oracle_labels(
        args.path, args.split, threads=args.threads, cache_dir=_cache_dir(args),
        max_sentences=args.max_sentences,
    )
    _emit_labels(labels.values(), args.out)
    return 0


def cmd_leadk(args) -> int:
    k = args.k
    if k is None:
        oracle = report.oracle_labels(args.path, args.split, args.threads, _cache_dir(args))
        k = baselines.auto_k(oracle.values())
    corpus = load_corpus(args.path, Path(args.path).stem)
    labels = [baselines.lead_k(doc, k) for doc in corpus.split(args.split)]
    if not labels:
        raise DataError(f"{args.path}: no documents in split {args.split!r}")
    _emit_labels(labels, args.out)
    return 0


def cmd_rouge(args) -> int:
    predictions = baselines.read_labels(args.pred)
    corpus = load_corpus(args.path, Path(args.path).stem)
    docs = corpus.split(args.split)
    if not docs:
        raise DataError(f"{args.path}: no documents in split {args.split!r}")
    result = baselines.evaluate_labels(docs, predictions)
    text = report.rouge_json(result) if args.format == "json" else report.rouge_tsv(result)
    report.emit(text, args.out)
    return 0


def cmd_matrix(args) -> int:
    if len(args.paths) < 2:
        raise DataError("matrix needs at least two corpora")
    matrix = report.compute_matrix(
        args.paths, _names(args), args.measure,
        threads=args.threads, cache_dir=_cache_dir(args), thresholds=args.thresholds,
        top_m=args.top_m, epsilon=args.epsilon, cap=args.cap, scale=args.scale,
    )
    text = report.matrix_json(matrix) if args.format == "json" else report.matrix_tsv(matrix)
    report.emit(text, args.out)
    return 0


def cmd_breakdown(args) -> int:
    corpus = load_corpus(args.path, Path(args.path).stem)
    predictions = baselines.read_labels(args.pred)
    eval_docs = corpus.split(args.eval_split)
    if not eval_docs:
        raise DataError(f"{args.path}: no documents in split {args.eval_split!r}")
    cache = _cache_dir(args)
    oracle = report.oracle_labels(args.path, args.eval_split, args.threads, cache)

    if args.factor in breakdown.STYLE_FACTORS:
        bins = breakdown.bin_by_style(corpus, args.factor, args.bins or 3)
        bins = bins.restricted({doc.id for doc in eval_docs})
    elif args.factor == "pvalue":
        bins = breakdown.bin_by_pvalue(eval_docs, oracle, args.thresholds)
    else:
        train_oracle = report.oracle_labels(args.path, "train", args.threads, cache)
        table = constituent.pattern_table(
            (doc.sentences[i] for doc in corpus.split("train") for i in train_oracle[doc.id].selected),
            args.top_m,
        )
        bins = breakdown.bin_by_cvalue(eval_docs, oracle, table, args.bins or 5)

    result = breakdown.breakdown_eval(predictions, oracle, bins, corpus.by_id, macro=args.macro)
    text = report.breakdown_json(result) if args.format == "json" else report.breakdown_tsv(result)
    report.emit(text, args.out)
    return 0


def cmd_tag(args) -> int:
    corpus = load_corpus(args.path, Path(args.path).stem)
    if not corpus.documents:
        raise DataError(f"{args.path}: empty corpus")
    table = None
    if args.scheme in ("cvalue", "pc"):
        train_oracle = report.oracle_labels(args.path, "train", args.threads, _cache_dir(args))
        table = constituent.pattern_table(
            (doc.sentences[i] for doc in corpus.split("train") for i in train_oracle[doc.id].selected),
            args.top_m,
        )
    buf = io.StringIO()
    breakdown.emit_tags(
        corpus.documents, args.scheme, buf,
        n_tags=args.tags, seed=args.seed, table=table, thresholds=args.thresholds,
    )
    report.emit(buf.getvalue(), args.out)
    return 0


def cmd_patterns(args) -> int:
    oracle = report.oracle_labels(args.path, args.split, args.threads, _cache_dir(args))
    corpus = load_corpus(args.path, Path(args.path).stem)
    table = constituent.pattern_table(
        (doc.sentences[i] for doc in corpus.split(args.split) for i in oracle[doc.id].selected),
        args.top_m,
    )
    buf = io.StringIO()
    constituent.write_pattern_table(table, buf)
    report.emit(buf.getvalue(), args.out)
    return 0


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
        args = parser.parse_args(argv)
        return args.func(args)
    except DataError as exc:
        print(f"sumfactors: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
