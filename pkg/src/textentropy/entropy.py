"""Plug-in entropy estimators and the derived per-character quantities.

All logarithms are base 2. Probabilities are maximum-likelihood estimates
(count / total) without smoothing, so undersampled block sizes show the
usual downward bias, including negative conditional entropies.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Mapping

import numpy as np

from .alphabet import AlphabetSpec, SymbolStreams
from .counting import (
    DISJOINT,
    WORD,
    FrequencyTable,
    count_chars,
    count_ngrams,
    count_nwords,
)
from .errors import (
    DomainError,
    EmptyCorpusError,
    InvariantViolation,
    MismatchError,
    MissingOrderError,
    TextEntropyError,
)


def plugin_entropy(table: FrequencyTable) -> float:
    """H = -sum p log2 p with p = count/total, summed with math.fsum."""
    if table.total < 1:
        raise EmptyCorpusError("cannot take the entropy of an empty table")
    counts = np.fromiter(table.counts.values(), dtype=np.float64, count=table.distinct)
    p = counts / table.total
    h = -math.fsum(p * np.log2(p))
    # a single symbol gives -0.0
    return h if h > 0.0 else 0.0


def gn(block_entropy: float, n: int) -> float:
    """Block entropy per unit, H_N / N."""
    if n < 1:
        raise DomainError(f"block size must be >= 1, got {n}")
    return block_entropy / n


def f_series(block_entropies: Mapping[int, float]) -> dict:
    """Conditional entropies F_1 = H_1 and F_N = H_N - H_{N-1}.

    ``block_entropies`` must cover 1..N without gaps.
    """
    orders = sorted(block_entropies)
    if not orders:
        raise MissingOrderError("no block entropies given")
    expected = list(range(1, len(orders) + 1))
    if orders != expected:
        missing = sorted(set(range(1, orders[-1] + 1)) - set(orders))
        raise MissingOrderError(f"block entropies must start at 1 with no gaps; missing {missing}")
    out = {1: block_entropies[1]}
    for n in orders[1:]:
        out[n] = block_entropies[n] - block_entropies[n - 1]
    return out


def average_word_length(word_table: FrequencyTable) -> float:
    """alpha = sum L_i p_i over the 1-word table."""
    if word_table.unit != WORD or word_table.n != 1:
        raise MismatchError(f"average word length needs a 1-word table, got {word_table.block}")
    if word_table.total < 1:
        raise EmptyCorpusError("word table is empty")
    return math.fsum(len(w) * c for w, c in word_table.counts.items()) / word_table.total


def per_char(h_symbol: float, k: int, alpha: float, include_space: bool = False) -> float:
    """Bits per character of a k-word block entropy.

    Without the space symbol the block spans ``k*alpha`` characters; with it,
    ``k*(alpha+1)``.
    """
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    if not alpha > 0:
        raise DomainError(f"average word length must be positive, got {alpha}")
    chars = k * (alpha + 1.0) if include_space else k * alpha
    return h_symbol / chars


def entropy_rate(h_3word: float, alpha: float) -> float:
    if not alpha > 0:
        raise DomainError(f"average word length must be positive, got {alpha}")
    return h_3word / (3.0 * (alpha + 1.0))


def redundancy(h_rate: float, distinct_chars: float) -> float:
    """1 - rate / log2(distinct characters), clamped to [0, 1]."""
    if distinct_chars < 2:
        raise DomainError(f"need at least 2 distinct characters, got {distinct_chars}")
    if h_rate < 0:
        raise DomainError(f"entropy rate must be nonnegative, got {h_rate}")
    r = 1.0 - h_rate / math.log2(distinct_chars)
    return min(1.0, max(0.0, r))


def plogp(p: float) -> float:
    """-p log2 p, with the limits 0 at p = 0 and p = 1."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"probability must lie in [0, 1], got {p}")
    if p == 0.0 or p == 1.0:
        return 0.0
    return -p * math.log2(p)


@dataclass(frozen=True)
class PlogpPoint:
    p: float
    value: float


def plogp_curve(points: int = 1001) -> list:
    return [PlogpPoint(float(p), plogp(float(p))) for p in np.linspace(0.0, 1.0, points)]


def plogp_maximum() -> PlogpPoint:
    """Closed-form maximum: d/dp(-p log2 p) = 0 at p = 1/e, value 1/(e ln 2)."""
    p = math.exp(-1.0)
    return PlogpPoint(p, plogp(p))


def _series(mapping: Mapping[int, float]) -> list:
    return [{"n": int(n), "value": float(mapping[n])} for n in sorted(mapping)]


def _unseries(items) -> dict:
    return {int(item["n"]): float(item["value"]) for item in items}


_SERIES_FIELDS = (
    "h_nword",
    "f_char_series",
    "f_word_series",
    "per_char_eq5",
    "per_char_eq8",
)


@dataclass
class EntropyReport:
    name: str
    word_count: int
    distinct_words: int
    char_count: int
    distinct_chars: int
    h_char: float
    h_digram: float
    h_trigram: float
    h_nword: dict
    f_char_series: dict
    f_word_series: dict
    per_char_eq5: dict
    per_char_eq8: dict
    alpha: float
    entropy_rate: float
    redundancy: float
    onset: int | None
    h_max_n: int
    n_max: int
    windowing: str
    alphabet: dict = field(default_factory=lambda: AlphabetSpec().as_dict())
    nword_totals: dict = field(default_factory=dict)
    flags: list = field(default_factory=list)

    def to_json_dict(self) -> dict:
        d = asdict(self)
        for name in _SERIES_FIELDS + ("nword_totals",):
            d[name] = _series(getattr(self, name))
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), ensure_ascii=False, indent=2)

    @classmethod
    def from_json_dict(cls, d: dict) -> "EntropyReport":
        d = dict(d)
        for name in _SERIES_FIELDS + ("nword_totals",):
            d[name] = _unseries(d.get(name, []))
        d["nword_totals"] = {n: int(v) for n, v in d["nword_totals"].items()}
        return cls(**d)

    @classmethod
    def from_json(cls, text: str) -> "EntropyReport":
        return cls.from_json_dict(json.loads(text))


def check_report(report: EntropyReport) -> None:
    """Raise InvariantViolation if the definitional identities do not hold."""
    def fail(msg):
        raise InvariantViolation(f"{report.name}: {msg}")

    for n, h in report.h_nword.items():
        if h < 0:
            fail(f"negative block entropy at n={n}")
        if report.per_char_eq5[n] != per_char(h, n, report.alpha, False):
            fail(f"per-character (no space) value at n={n} is inconsistent")
        if report.per_char_eq8[n] != per_char(h, n, report.alpha, True):
            fail(f"per-character (with space) value at n={n} is inconsistent")
    for label, blocks, series in (
        ("char", {1: report.h_char, 2: report.h_digram, 3: report.h_trigram}, report.f_char_series),
        ("word", report.h_nword, report.f_word_series),
    ):
        for n in series:
            if abs(math.fsum(series[k] for k in range(1, n + 1)) - blocks[n]) > 1e-9:
                fail(f"{label} conditional series does not telescope at n={n}")
    if report.entropy_rate != entropy_rate(report.h_nword[3], report.alpha):
        fail("entropy rate is inconsistent with the 3-word block entropy")


def build_report(
    streams: SymbolStreams,
    n_max: int = 18,
    windowing: str = DISJOINT,
    name: str = "corpus",
    spec: AlphabetSpec | None = None,
    f_word_max: int = 5,
) -> EntropyReport:
    """Run the full battery over one corpus.

    Block entropies are computed for n = 1..n_max word blocks; the word
    conditional series is reported up to ``f_word_max``.
    """
    if n_max < 3:
        raise DomainError(f"n_max must be >= 3 (the entropy rate needs 3-word blocks), got {n_max}")
    spec = spec or AlphabetSpec()
    stage = "character table"
    try:
        chars = count_chars(streams)
        h_char = plugin_entropy(chars)
        stage = "digram table"
        h_digram = plugin_entropy(count_ngrams(streams, 2))
        stage = "trigram table"
        h_trigram = plugin_entropy(count_ngrams(streams, 3))

        h_nword, totals = {}, {}
        onset = None
        alpha = distinct_words = None
        for n in range(1, n_max + 1):
            stage = f"{n}-word table"
            table = count_nwords(streams, n, windowing)
            if n == 1:
                alpha = average_word_length(table)
                distinct_words = table.distinct
            h_nword[n] = plugin_entropy(table)
            totals[n] = table.total
            if onset is None and table.max_count() == 1:
                onset = n
    except TextEntropyError as exc:
        exc.stage = stage
        exc.args = (f"{stage}: {exc}",)
        raise

    f_char = f_series({1: h_char, 2: h_digram, 3: h_trigram})
    f_word = f_series({n: h_nword[n] for n in range(1, min(f_word_max, n_max) + 1)})
    eq5 = {n: per_char(h, n, alpha, False) for n, h in h_nword.items()}
    eq8 = {n: per_char(h, n, alpha, True) for n, h in h_nword.items()}
    rate = entropy_rate(h_nword[3], alpha)
    h_max_n = max(h_nword, key=lambda n: (h_nword[n], -n))

    flags = []
    if windowing != DISJOINT:
        for n in range(1, n_max):
            if h_nword[n + 1] < h_nword[n]:
                where = "past onset" if onset is not None and n >= onset else "before onset"
                flags.append(f"block entropy decreases from n={n} to n={n + 1} ({where})")

    report = EntropyReport(
        name=name,
        word_count=len(streams.word_stream),
        distinct_words=distinct_words,
        char_count=chars.total,
        distinct_chars=chars.distinct,
        h_char=h_char,
        h_digram=h_digram,
        h_trigram=h_trigram,
        h_nword=h_nword,
        f_char_series=f_char,
        f_word_series=f_word,
        per_char_eq5=eq5,
        per_char_eq8=eq8,
        alpha=alpha,
        entropy_rate=rate,
        redundancy=redundancy(rate, chars.distinct) if chars.distinct >= 2 else 0.0,
        onset=onset,
        h_max_n=h_max_n,
        n_max=n_max,
        windowing=windowing,
        alphabet=spec.as_dict(),
        nword_totals=totals,
        flags=flags,
    )
    check_report(report)
    return report
