"""CSV tables and corpus-weighted aggregates over EntropyReports.

Values are rounded only here, at emission. Weighted averages use the corpus
word counts as weights and are computed from the rounded per-corpus values,
so anyone re-deriving them from the CSV gets the same last digit.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .entropy import EntropyReport, redundancy
from .errors import MismatchError
from .fileio import atomic_write_text

WEIGHTED = "Weighted average"

TABLE_FILES = {
    "word_length": "table_word_length.csv",
    "char_entropy": "table_char_entropy.csv",
    "nword_entropy": "table_nword_entropy.csv",
    "per_char_eq5": "table_per_char_no_space.csv",
    "f_char": "table_f_char.csv",
    "per_char_eq8": "table_per_char_with_space.csv",
    "f_word": "table_f_word.csv",
    "entropy_rate": "table_entropy_rate.csv",
    "redundancy": "table_redundancy.csv",
}


def fmt(value: float, digits: int = 2) -> str:
    return f"{value:.{digits}f}"


def weighted_average(values: Sequence[float], weights: Sequence[float]) -> float:
    total = math.fsum(weights)
    if total <= 0:
        raise ValueError("weights must sum to a positive number")
    return math.fsum(v * w for v, w in zip(values, weights)) / total


@dataclass(frozen=True)
class AggregateRow:
    label: str
    values: dict
    weights: dict
    digits: int = 2

    @property
    def weighted_average(self) -> float:
        names = list(self.values)
        rounded = [float(fmt(self.values[k], self.digits)) for k in names]
        return weighted_average(rounded, [self.weights[k] for k in names])

    def cells(self) -> list:
        return [fmt(v, self.digits) for v in self.values.values()] + [
            fmt(self.weighted_average, self.digits)
        ]


def _csv(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _check_consistent(reports: Sequence[EntropyReport]) -> None:
    if not reports:
        raise ValueError("need at least one report")
    first = reports[0]
    for r in reports[1:]:
        if r.n_max != first.n_max:
            raise MismatchError(f"n_max differs: {first.name}={first.n_max}, {r.name}={r.n_max}")
        if r.windowing != first.windowing:
            raise MismatchError(f"windowing differs: {first.name}={first.windowing}, {r.name}={r.windowing}")
    names = [r.name for r in reports]
    if len(set(names)) != len(names):
        raise MismatchError(f"corpus names must be unique, got {names}")


def _row_table(reports, header, columns, digits=2):
    """Corpora as rows, one column per quantity, weighted average last."""
    weights = {r.name: r.word_count for r in reports}
    rows = [header]
    for r in reports:
        rows.append([r.name] + [fmt(get(r), digits) for get in columns])
    aggregates = [
        AggregateRow("", {r.name: get(r) for r in reports}, weights, digits) for get in columns
    ]
    rows.append([WEIGHTED] + [fmt(a.weighted_average, digits) for a in aggregates])
    return rows


def _column_table(reports, label, orders, get, digits=2, with_average=True):
    """n as rows, corpora as columns."""
    weights = {r.name: r.word_count for r in reports}
    header = [label] + [r.name for r in reports] + ([WEIGHTED] if with_average else [])
    rows = [header]
    for n in orders:
        agg = AggregateRow(str(n), {r.name: get(r, n) for r in reports}, weights, digits)
        cells = agg.cells() if with_average else agg.cells()[:-1]
        rows.append([n] + cells)
    return rows


def build_tables(reports: Sequence[EntropyReport]) -> dict:
    """Table name -> list of CSV rows."""
    reports = list(reports)
    _check_consistent(reports)
    orders = sorted(reports[0].h_nword)
    f_orders = sorted(reports[0].f_word_series)
    weights = {r.name: r.word_count for r in reports}

    word_length = [["Work", "Number of words", "Different words", "alpha"]]
    for r in reports:
        word_length.append([r.name, r.word_count, r.distinct_words, fmt(r.alpha)])
    alpha_avg = AggregateRow("alpha", {r.name: r.alpha for r in reports}, weights).weighted_average
    word_length.append([WEIGHTED, sum(weights.values()), "", fmt(alpha_avg)])

    rate_avg = AggregateRow("H_L", {r.name: r.entropy_rate for r in reports}, weights).weighted_average
    chars_avg = weighted_average([r.distinct_chars for r in reports], list(weights.values()))
    rate_rounded = float(fmt(rate_avg))
    redundancy_rows = [
        ["Quantity", "Value"],
        ["Weighted H_L (bits/char)", fmt(rate_rounded)],
        ["Weighted distinct characters", fmt(chars_avg)],
        ["Redundancy", fmt(redundancy(rate_rounded, chars_avg), 4) if chars_avg >= 2 else ""],
    ]

    return {
        "word_length": word_length,
        "char_entropy": _row_table(
            reports, ["Work", "H_char", "H_digram", "H_trigram"],
            [lambda r: r.h_char, lambda r: r.h_digram, lambda r: r.h_trigram],
        ),
        "nword_entropy": _column_table(reports, "H_n-word", orders, lambda r, n: r.h_nword[n]),
        "per_char_eq5": _column_table(reports, "H_char (H/(n*alpha))", orders, lambda r, n: r.per_char_eq5[n]),
        "f_char": _row_table(
            reports, ["Work", "F_2", "F_3"],
            [lambda r: r.f_char_series[2], lambda r: r.f_char_series[3]],
        ),
        "per_char_eq8": _column_table(
            reports, "H_char (H/(n*(alpha+1)))", orders, lambda r, n: r.per_char_eq8[n], digits=3
        ),
        "f_word": _column_table(
            reports, "F_nw", f_orders, lambda r, n: r.f_word_series[n], with_average=False
        ),
        "entropy_rate": _row_table(reports, ["Text", "H_L"], [lambda r: r.entropy_rate]),
        "redundancy": redundancy_rows,
    }


def emit_tables(reports: Sequence[EntropyReport], out_dir) -> list:
    """Write one CSV per table into ``out_dir``; returns the paths written."""
    tables = build_tables(reports)
    out_dir = Path(out_dir)
    written = []
    for key, rows in tables.items():
        written.append(atomic_write_text(out_dir / TABLE_FILES[key], _csv(rows)))
    return written


def emit_reports_json(reports: Sequence[EntropyReport], out_dir) -> list:
    out_dir = Path(out_dir)
    written = []
    for r in reports:
        written.append(atomic_write_text(out_dir / f"{safe_name(r.name)}.report.json", r.to_json() + "\n"))
    return written


def safe_name(name: str) -> str:
    return "".join(ch if ch.isalnum() or ch in "-_." else "_" for ch in name) or "corpus"


def aggregate_json(reports: Sequence[EntropyReport]) -> str:
    """Full-precision weighted averages (weights = word counts)."""
    reports = list(reports)
    _check_consistent(reports)
    w = [r.word_count for r in reports]
    out = {
        "corpora": [r.name for r in reports],
        "weights": w,
        "alpha": weighted_average([r.alpha for r in reports], w),
        "h_char": weighted_average([r.h_char for r in reports], w),
        "h_digram": weighted_average([r.h_digram for r in reports], w),
        "h_trigram": weighted_average([r.h_trigram for r in reports], w),
        "entropy_rate": weighted_average([r.entropy_rate for r in reports], w),
        "distinct_chars": weighted_average([r.distinct_chars for r in reports], w),
        "h_nword": [
            {"n": n, "value": weighted_average([r.h_nword[n] for r in reports], w)}
            for n in sorted(reports[0].h_nword)
        ],
    }
    return json.dumps(out, indent=2)
