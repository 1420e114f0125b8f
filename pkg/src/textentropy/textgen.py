"""First-order (independent-word) artificial text source.

Words are drawn independently from a lexicon by inverse-CDF sampling over
the cumulative probabilities. The generator is numpy's PCG64, seeded
explicitly, so a (lexicon, seed, k) triple always yields the same text.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from dataclasses import dataclass

import numpy as np

from .alphabet import is_word_char
from .counting import WORD, FrequencyTable
from .entropy import EntropyReport
from .errors import (
    DomainError,
    EmptyCorpusError,
    LexiconParseError,
    LexiconValidationError,
    MismatchError,
)
from .fileio import atomic_write_text

RNG_NAME = "numpy.random.PCG64"
DEFAULT_SEED = 20100101


@dataclass(frozen=True, eq=False)
class GeneratorModel:
    words: tuple
    probabilities: np.ndarray
    cumulative: np.ndarray
    seed: int = DEFAULT_SEED

    @classmethod
    def from_weights(cls, words, weights, seed: int = DEFAULT_SEED) -> "GeneratorModel":
        words = tuple(words)
        w = np.asarray(weights, dtype=np.float64)
        if not words:
            raise EmptyCorpusError("lexicon is empty")
        if len(words) != len(w):
            raise ValueError("words and weights differ in length")
        if len(set(words)) != len(words):
            raise LexiconValidationError("lexicon words must be distinct")
        for word in words:
            if not is_clean_word(word):
                raise LexiconValidationError(f"{word!r} is not a lowercase alphanumeric token")
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise LexiconValidationError("weights must be positive and finite")
        # descending probability, ties in word order
        order = sorted(range(len(words)), key=lambda i: (-w[i], words[i]))
        words = tuple(words[i] for i in order)
        w = w[order]
        probs = w / math.fsum(w)
        cumulative = np.cumsum(probs)
        cumulative /= cumulative[-1]
        return cls(words, probs, cumulative, int(seed))

    def __len__(self):
        return len(self.words)

    def entropy(self) -> float:
        p = self.probabilities
        return -math.fsum(p * np.log2(p))

    def average_word_length(self) -> float:
        return math.fsum(len(w) * p for w, p in zip(self.words, self.probabilities))

    def digest(self) -> str:
        h = hashlib.sha256()
        for w, p in zip(self.words, self.probabilities):
            h.update(f"{w}\t{float(p)!r}\n".encode("utf-8"))
        return h.hexdigest()


def is_clean_word(word: str) -> bool:
    return bool(word) and all(is_word_char(ch) for ch in word) and word == word.lower()


def build_lexicon(word_table: FrequencyTable, seed: int = DEFAULT_SEED, max_words: int | None = None) -> GeneratorModel:
    """Plug-in probabilities from a 1-word table, most frequent first.

    ``max_words`` keeps only the most frequent entries and renormalizes.
    """
    if word_table.unit != WORD or word_table.n != 1:
        raise MismatchError(f"a lexicon needs a 1-word table, got {word_table.block}")
    if word_table.total < 1:
        raise EmptyCorpusError("word table is empty")
    items = sorted(word_table.counts.items(), key=lambda kv: (-kv[1], kv[0]))
    if max_words is not None:
        items = items[:max_words]
    return GeneratorModel.from_weights([k for k, _ in items], [c for _, c in items], seed)


def _parse_number(text: str, lineno: int):
    text = text.strip()
    try:
        value = int(text)
    except ValueError:
        try:
            value = float(text)
        except ValueError:
            raise LexiconParseError(lineno, f"{text!r} is not a number") from None
    if not math.isfinite(value) or value <= 0:
        raise LexiconParseError(lineno, f"weight must be positive, got {text!r}")
    return value


def parse_lexicon(text: str, seed: int = DEFAULT_SEED) -> GeneratorModel:
    """Parse ``word,count`` or ``word,probability`` CSV text.

    An optional header row is skipped. Integer weights are counts; if any
    weight is fractional the column is read as probabilities, which must
    already sum to 1 within 1e-6.
    """
    words, weights = [], []
    fractional = False
    seen = {}
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 2:
            raise LexiconParseError(lineno, f"expected 2 fields, got {len(row)}")
        word, weight = row[0].strip(), row[1].strip()
        if lineno == 1 and word.lower() == "word" and weight.lower() in ("count", "probability"):
            continue
        if not is_clean_word(word):
            raise LexiconParseError(lineno, f"{word!r} is not a lowercase alphanumeric token")
        if word in seen:
            raise LexiconParseError(lineno, f"duplicate word {word!r} (first on line {seen[word]})")
        seen[word] = lineno
        value = _parse_number(weight, lineno)
        fractional = fractional or isinstance(value, float)
        words.append(word)
        weights.append(float(value))
    if not words:
        raise EmptyCorpusError("lexicon file has no entries")
    if fractional:
        total = math.fsum(weights)
        if abs(total - 1.0) > 1e-6:
            raise LexiconValidationError(f"probabilities sum to {total!r}, not 1")
    return GeneratorModel.from_weights(words, weights, seed)


def load_lexicon(path, seed: int = DEFAULT_SEED) -> GeneratorModel:
    with open(path, encoding="utf-8", newline="") as fh:
        return parse_lexicon(fh.read(), seed)


def save_lexicon(model: GeneratorModel, path) -> None:
    """Write ``word,probability`` rows at full float precision."""
    lines = ["word,probability"]
    lines += [f"{w},{float(p)!r}" for w, p in zip(model.words, model.probabilities)]
    atomic_write_text(path, "\n".join(lines) + "\n")


def generate_words(model: GeneratorModel, k_words: int, seed: int | None = None) -> list:
    if k_words < 1:
        raise DomainError(f"k_words must be >= 1, got {k_words}")
    rng = np.random.Generator(np.random.PCG64(model.seed if seed is None else seed))
    u = rng.random(k_words)
    idx = np.searchsorted(model.cumulative, u, side="right")
    np.minimum(idx, len(model.words) - 1, out=idx)
    words = model.words
    return [words[i] for i in idx.tolist()]


def generate(model: GeneratorModel, k_words: int, seed: int | None = None) -> str:
    """``k_words`` independent draws, single-space separated."""
    return " ".join(generate_words(model, k_words, seed))


def generation_metadata(model: GeneratorModel, k_words: int, seed: int | None = None) -> dict:
    return {
        "seed": model.seed if seed is None else seed,
        "k_words": k_words,
        "rng": RNG_NAME,
        "lexicon_size": len(model),
        "lexicon_digest": model.digest(),
    }


def write_generated(model: GeneratorModel, k_words: int, path, seed: int | None = None) -> dict:
    """Write generated text to ``path`` and a ``.meta.json`` sidecar next to it."""
    text = generate(model, k_words, seed)
    meta = generation_metadata(model, k_words, seed)
    atomic_write_text(path, text + "\n")
    atomic_write_text(f"{path}.meta.json", json.dumps(meta, indent=2) + "\n")
    return meta


@dataclass(frozen=True)
class Delta:
    natural: float
    artificial: float

    @property
    def absolute(self) -> float:
        return self.artificial - self.natural

    @property
    def relative(self) -> float:
        if self.natural == 0:
            return 0.0 if self.artificial == 0 else math.inf
        return self.absolute / abs(self.natural)


@dataclass(frozen=True)
class ReportComparison:
    natural: str
    artificial: str
    scalars: dict
    h_nword: dict

    def to_json_dict(self) -> dict:
        def row(d):
            return {"natural": d.natural, "artificial": d.artificial,
                    "absolute": d.absolute, "relative": d.relative}
        return {
            "natural": self.natural,
            "artificial": self.artificial,
            "scalars": {k: row(v) for k, v in self.scalars.items()},
            "h_nword": [{"n": n, **row(v)} for n, v in sorted(self.h_nword.items())],
        }


def compare_reports(natural: EntropyReport, artificial: EntropyReport) -> ReportComparison:
    if natural.alphabet != artificial.alphabet:
        raise MismatchError("reports were built with different alphabet settings")
    if natural.n_max != artificial.n_max or natural.windowing != artificial.windowing:
        raise MismatchError(
            f"reports differ in n_max/windowing: {natural.n_max}/{natural.windowing} "
            f"vs {artificial.n_max}/{artificial.windowing}"
        )
    scalars = {
        name: Delta(getattr(natural, name), getattr(artificial, name))
        for name in ("h_char", "h_digram", "h_trigram", "alpha")
    }
    h_nword = {n: Delta(natural.h_nword[n], artificial.h_nword[n]) for n in sorted(natural.h_nword)}
    return ReportComparison(natural.name, artificial.name, scalars, h_nword)
