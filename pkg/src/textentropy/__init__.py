"""Direct-counting entropy analysis of written text corpora."""

from .alphabet import AlphabetSpec, SymbolStreams, f0, normalize, read_streams
from .counting import (
    BlockSpec,
    FrequencyTable,
    count_chars,
    count_ngrams,
    count_nwords,
    count_sharded,
    equiprobability_onset,
    merge,
)
from .entropy import (
    EntropyReport,
    average_word_length,
    build_report,
    entropy_rate,
    f_series,
    gn,
    per_char,
    plogp,
    plugin_entropy,
    redundancy,
)
from .textgen import GeneratorModel, build_lexicon, compare_reports, generate, load_lexicon
from .zipf import RankSeries, export_loglog, loglog_slope, rank_series, zipf_constant

__version__ = "0.1.0"
