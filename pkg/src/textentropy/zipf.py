"""Rank-frequency series, the 1-word Zipf constant and log-log slopes."""

from __future__ import annotations

import csv
import io
import math
import statistics
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .counting import FrequencyTable, display_key
from .errors import EmptyCorpusError, RankRangeError, UndefinedSlopeError, WriteError
from .fileio import atomic_write_text

DEFAULT_RANK_WINDOW = (2, 100)


@dataclass(frozen=True)
class RankSeries:
    """(rank, probability) points, most probable first.

    ``symbols`` and ``counts`` are empty for series built directly from
    probabilities.
    """

    ranks: tuple
    probabilities: tuple
    symbols: tuple = ()
    counts: tuple = ()
    unit: str | None = None
    n: int | None = None

    def __len__(self):
        return len(self.ranks)

    @property
    def points(self) -> list:
        return list(zip(self.ranks, self.probabilities))

    def probability(self, rank: int) -> float:
        return self.probabilities[rank - 1]

    @classmethod
    def from_probabilities(cls, probabilities, unit=None, n=None) -> "RankSeries":
        probs = tuple(float(p) for p in probabilities)
        if not probs:
            raise EmptyCorpusError("rank series needs at least one point")
        if any(b > a for a, b in zip(probs, probs[1:])):
            raise ValueError("probabilities must be non-increasing in rank")
        return cls(tuple(range(1, len(probs) + 1)), probs, unit=unit, n=n)


def rank_series(table: FrequencyTable) -> RankSeries:
    """Rank symbols by descending count; ties go to the lexicographically smaller symbol."""
    if table.total < 1:
        raise EmptyCorpusError("cannot rank an empty table")
    items = sorted(table.counts.items(), key=lambda kv: (-kv[1], kv[0]))
    total = table.total
    return RankSeries(
        ranks=tuple(range(1, len(items) + 1)),
        probabilities=tuple(c / total for _, c in items),
        symbols=tuple(k for k, _ in items),
        counts=tuple(c for _, c in items),
        unit=table.unit,
        n=table.n,
    )


def _window(series: RankSeries, rank_lo: int, rank_hi: int):
    if not 1 <= rank_lo <= rank_hi <= len(series):
        raise RankRangeError(
            f"rank window [{rank_lo}, {rank_hi}] outside series ranks [1, {len(series)}]"
        )
    ranks = np.arange(rank_lo, rank_hi + 1, dtype=np.float64)
    probs = np.asarray(series.probabilities[rank_lo - 1:rank_hi], dtype=np.float64)
    return ranks, probs


def zipf_constant(series: RankSeries, rank_lo: int = 2, rank_hi: int = 100) -> float:
    """Median of r * p(r) over ranks rank_lo..rank_hi inclusive.

    The median discards both the rank-1 outlier and tail noise, so it works
    as a smoothed estimate of c in p(r) ~ c / r.
    """
    ranks, probs = _window(series, rank_lo, rank_hi)
    return float(statistics.median((ranks * probs).tolist()))


def loglog_slope(series: RankSeries, rank_lo: int = 1, rank_hi: int | None = None) -> float:
    """Unweighted least-squares slope of log2 p against log2 r."""
    if rank_hi is None:
        rank_hi = len(series)
    ranks, probs = _window(series, rank_lo, rank_hi)
    if len(ranks) < 2 or np.all(probs == probs[0]):
        raise UndefinedSlopeError(
            f"slope undefined: ranks {rank_lo}..{rank_hi} hold fewer than 2 distinct probabilities"
        )
    x = np.log2(ranks)
    y = np.log2(probs)
    x = x - x.mean()
    return float(np.dot(x, y - y.mean()) / np.dot(x, x))


def export_loglog(series: RankSeries, path) -> tuple:
    """Write ``path`` (log2 rank, log2 probability) and a sibling CSV with raw values.

    Returns the two paths written.
    """
    if not path or not str(path).strip():
        raise WriteError(str(path), "empty path")
    path = Path(path)
    lines = [f"# log2_rank log2_probability unit={series.unit} n={series.n}"]
    for r, p in series.points:
        lines.append(f"{math.log2(r)!r} {math.log2(p)!r}")
    atomic_write_text(path, "\n".join(lines) + "\n")

    csv_path = path.with_suffix(".csv")
    rows = []
    for i, (r, p) in enumerate(series.points):
        count = series.counts[i] if series.counts else ""
        symbol = display_key(series.symbols[i]) if series.symbols else ""
        rows.append([r, count, repr(p), symbol])
    atomic_write_text(csv_path, _csv_text(["rank", "count", "probability", "symbol"], rows))
    return path, csv_path


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def read_loglog(path) -> RankSeries:
    """Parse a file written by :func:`export_loglog` back into a series."""
    probs = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            _, log_p = line.split()
            probs.append(2.0 ** float(log_p))
    return RankSeries.from_probabilities(probs)


def read_rank_csv(path) -> RankSeries:
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.DictReader(fh))
    counts = tuple(int(r["count"]) for r in rows if r["count"])
    return RankSeries(
        ranks=tuple(int(r["rank"]) for r in rows),
        probabilities=tuple(float(r["probability"]) for r in rows),
        symbols=tuple(r["symbol"] for r in rows),
        counts=counts,
    )

