"""sumfactors: profiling of extractive-summarization corpora.

Quantifies where ground-truth sentences sit (positional bins, PCR),
what they contain (pattern tables, C-Value, CCR), and how copy-able
summaries are (density, compression, salience); builds greedy-oracle
and Lead-k baselines with a built-in ROUGE engine; breaks test sets
into difficulty bins and emits tag-augmented corpora.
"""

from .baselines import (
    CorpusRouge,
    LabelSet,
    auto_k,
    evaluate_labels,
    greedy_oracle,
    greedy_oracle_trace,
    lead_k,
    read_labels,
    write_labels,
)
from .breakdown import (
    BinAssignment,
    BreakdownReport,
    bin_by_cvalue,
    bin_by_pvalue,
    bin_by_style,
    breakdown_eval,
    emit_tags,
)
from .constituent import (
    DEFAULT_THRESHOLDS,
    PatternTable,
    PositionalDistribution,
    ThresholdSet,
    ccr,
    pattern_table,
    pcr,
    pos_value,
    positional_distribution,
    sentence_cvalue,
    write_pattern_table,
)
from .corpus import Corpus, Document, iter_corpus, load_corpus, split_sentences, tokenize, write_corpus
from .errors import CorpusFormatError, DataError, LabelError
from .metrics import RougeScore, lcs_length, rouge_l, rouge_n
from .report import DatasetStats, ShiftMatrix, compute_matrix, compute_stats, oracle_labels
from .style import (
    Fragment,
    StyleProfile,
    compression,
    density,
    extractive_fragments,
    salience,
    salience_concentration,
    style_profile,
)
from .textnorm import STOPWORDS, content_tokens, extract_patterns, lemmatize, normalize_tokens

__version__ = "0.1.0"
