"""Frequency tables for characters, word-bridging n-grams and n-word blocks.

Tables carry their provenance (unit, n, windowing) so that only tables of
the same kind can be merged. Sharded counting splits a stream into chunks,
counts each chunk independently and lets the coordinator count the windows
that straddle chunk seams, so the merged result equals a single pass.
"""

from __future__ import annotations

import csv
import io
import json
from collections import Counter
from concurrent.futures import Executor
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .alphabet import WORD_SEPARATOR, SymbolStreams
from .errors import EmptyCorpusError, InsufficientDataError, MismatchError

CHAR = "char"
NGRAM = "ngram"
WORD = "word"

SLIDING = "sliding"
DISJOINT = "disjoint"
WINDOWINGS = (SLIDING, DISJOINT)


@dataclass(frozen=True)
class BlockSpec:
    unit: str
    n: int = 1
    windowing: str = SLIDING

    def __post_init__(self):
        if self.unit not in (CHAR, NGRAM, WORD):
            raise ValueError(f"unknown unit {self.unit!r}")
        if self.n < 1:
            raise ValueError(f"block size must be >= 1, got {self.n}")
        if self.windowing not in WINDOWINGS:
            raise ValueError(f"unknown windowing {self.windowing!r}")

    def step(self) -> int:
        return 1 if self.windowing == SLIDING else self.n


@dataclass(frozen=True)
class FrequencyTable:
    counts: Mapping[str, int]
    block: BlockSpec
    total: int = field(init=False)
    distinct: int = field(init=False)

    def __post_init__(self):
        counts = dict(self.counts)
        for key, c in counts.items():
            if not isinstance(c, int) or c < 1:
                raise ValueError(f"count for {key!r} must be a positive integer, got {c!r}")
        object.__setattr__(self, "counts", MappingProxyType(counts))
        object.__setattr__(self, "total", sum(counts.values()))
        object.__setattr__(self, "distinct", len(counts))

    @classmethod
    def empty(cls, block: BlockSpec) -> "FrequencyTable":
        return cls({}, block)

    @property
    def unit(self) -> str:
        return self.block.unit

    @property
    def n(self) -> int:
        return self.block.n

    @property
    def windowing(self) -> str:
        return self.block.windowing

    def max_count(self) -> int:
        return max(self.counts.values(), default=0)

    def __eq__(self, other):
        if not isinstance(other, FrequencyTable):
            return NotImplemented
        return self.block == other.block and dict(self.counts) == dict(other.counts)

    def __hash__(self):
        return hash((self.block, self.total, self.distinct))

    def to_json_dict(self) -> dict:
        return {
            "unit": self.unit,
            "n": self.n,
            "windowing": self.windowing,
            "total": self.total,
            "distinct": self.distinct,
            "counts": {k: self.counts[k] for k in sorted(self.counts)},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), ensure_ascii=False, indent=1)

    @classmethod
    def from_json_dict(cls, d: dict) -> "FrequencyTable":
        table = cls(d["counts"], BlockSpec(d["unit"], int(d["n"]), d["windowing"]))
        if table.total != d.get("total", table.total):
            raise ValueError("serialized total does not match counts")
        return table

    def to_csv(self) -> str:
        """``symbol,count`` rows, most frequent first, ties in symbol order."""
        buf = io.StringIO()
        writer = csv.writer(buf, quoting=csv.QUOTE_NONNUMERIC, lineterminator="\n")
        writer.writerow(["symbol", "count"])
        for key, c in sorted(self.counts.items(), key=lambda kv: (-kv[1], kv[0])):
            writer.writerow([display_key(key), c])
        return buf.getvalue()


def display_key(key: str) -> str:
    return key.replace(WORD_SEPARATOR, " ")


def join_words(words: Iterable[str]) -> str:
    return WORD_SEPARATOR.join(words)


def window_keys(seq: Sequence, n: int, step: int = 1, start: int = 0, stop: int | None = None):
    """Keys of the width-``n`` windows starting at ``start, start+step, ...``
    that fit entirely inside ``seq[start:stop]``."""
    stop = len(seq) if stop is None else stop
    if isinstance(seq, str):
        return (seq[i:i + n] for i in range(start, stop - n + 1, step))
    if n == 1:
        return iter(seq[start:stop:step])
    if step == 1:
        return map(join_words, zip(*(seq[start + k:stop] for k in range(n))))
    return (join_words(seq[i:i + n]) for i in range(start, stop - n + 1, step))


def count_chars(streams: SymbolStreams) -> FrequencyTable:
    if not streams.char_stream:
        raise EmptyCorpusError("character stream is empty")
    return FrequencyTable(Counter(streams.char_stream), BlockSpec(CHAR, 1))


def count_ngrams(streams: SymbolStreams, n: int, windowing: str = SLIDING) -> FrequencyTable:
    """Character n-grams over the word-bridging alphanumeric stream; case is kept."""
    block = BlockSpec(NGRAM, n, windowing)
    seq = streams.alnum_stream
    if len(seq) < n:
        raise InsufficientDataError(n, len(seq), "alphanumeric characters")
    return FrequencyTable(Counter(window_keys(seq, n, block.step())), block)


def count_nwords(streams: SymbolStreams, n: int, windowing: str = SLIDING) -> FrequencyTable:
    block = BlockSpec(WORD, n, windowing)
    seq = streams.word_stream
    if len(seq) < n:
        raise InsufficientDataError(n, len(seq), "words")
    return FrequencyTable(Counter(window_keys(seq, n, block.step())), block)


def merge(tables: Sequence[FrequencyTable]) -> FrequencyTable:
    """Pointwise sum of counts; all tables must share the same BlockSpec."""
    tables = list(tables)
    if not tables:
        raise ValueError("merge needs at least one table")
    block = tables[0].block
    total = Counter()
    for t in tables:
        if t.block != block:
            raise MismatchError(f"cannot merge {t.block} into {block}")
        total.update(t.counts)
    return FrequencyTable(total, block)


def shard_bounds(length: int, shards: int, align: int = 1) -> list:
    """Split ``range(length)`` into at most ``shards`` contiguous chunks.

    Boundaries are multiples of ``align`` so disjoint windows never straddle
    a seam.
    """
    shards = max(1, shards)
    bounds = [0]
    for j in range(1, shards):
        b = (length * j // shards) // align * align
        if b > bounds[-1]:
            bounds.append(b)
    if length > bounds[-1] or len(bounds) == 1:
        bounds.append(length)
    return list(zip(bounds[:-1], bounds[1:]))


def _count_chunk(seq, n, step, start, stop):
    return Counter(window_keys(seq, n, step, start, stop))


def _seam_windows(seq, n, step, chunks):
    """Windows that start inside a chunk but end past it (sliding only)."""
    seam = Counter()
    length = len(seq)
    for start, stop in chunks:
        first = max(start, stop - n + 1)
        for i in range(first, stop):
            if i + n <= length and (i - start) % step == 0 and i + n > stop:
                seam[seq[i:i + n] if isinstance(seq, str) else join_words(seq[i:i + n])] += 1
    return seam


def count_sharded(
    streams: SymbolStreams,
    block: BlockSpec,
    shards: int = 4,
    executor: Executor | None = None,
) -> FrequencyTable:
    """Count ``block`` over the relevant stream in ``shards`` independent chunks.

    Chunks are cut at word boundaries (word stream) or between characters
    (alphanumeric stream). Pass an executor to count chunks concurrently.
    """
    if block.unit == CHAR:
        seq = streams.char_stream
    elif block.unit == NGRAM:
        seq = streams.alnum_stream
    else:
        seq = streams.word_stream
    n, step = block.n, block.step()
    if len(seq) < n:
        raise InsufficientDataError(n, len(seq))
    chunks = shard_bounds(len(seq), shards, align=step)
    if executor is None:
        parts = [_count_chunk(seq, n, step, a, b) for a, b in chunks]
    else:
        futures = [executor.submit(_count_chunk, seq, n, step, a, b) for a, b in chunks]
        parts = [f.result() for f in futures]
    if step == 1:
        parts.append(_seam_windows(seq, n, step, chunks))
    return merge([FrequencyTable(p, block) for p in parts])


def equiprobability_onset(
    streams: SymbolStreams, n_max: int, windowing: str = SLIDING
) -> int | None:
    """Smallest n <= n_max at which no n-word block occurs more than once."""
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    for n in range(1, n_max + 1):
        if count_nwords(streams, n, windowing).max_count() == 1:
            return n
    return None
