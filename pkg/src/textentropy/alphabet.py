"""Text normalization into the three symbol streams every analysis works on.

``char_stream`` keeps case and punctuation, ``alnum_stream`` keeps only
letters and digits (so n-grams bridge word boundaries, ``LINDO DIA`` yields
``DOD``), and ``word_stream`` holds the lowercased alphanumeric tokens.
"""

from __future__ import annotations

import math
import re
import unicodedata
from dataclasses import dataclass
from pathlib import Path

from .errors import CorpusDecodeError, EmptyCorpusError, InvalidAlphabetError

SPANISH_LETTERS = frozenset("abcdefghijklmnopqrstuvwxyzñáéíóúü")
DIGITS = frozenset("0123456789")
# space first; the rest are the marks found in ordinary Spanish prose
SPACE_PUNCT = frozenset(" .,;:¡!¿?\"'()-«»—")

# must never survive normalization inside a token; used to join n-word keys
WORD_SEPARATOR = "\x1f"

_WHITESPACE_RUN = re.compile(r"\s+")


@dataclass(frozen=True)
class AlphabetSpec:
    letters: frozenset = SPANISH_LETTERS
    include_digits: bool = False
    case_sensitive: bool = False
    include_space_punct: bool = False

    def symbol_count(self) -> int:
        count = len(self.letters) * (2 if self.case_sensitive else 1)
        if self.include_digits:
            count += len(DIGITS)
        if self.include_space_punct:
            count += len(SPACE_PUNCT)
        return count

    def as_dict(self) -> dict:
        return {
            "letters": "".join(sorted(self.letters)),
            "include_digits": self.include_digits,
            "case_sensitive": self.case_sensitive,
            "include_space_punct": self.include_space_punct,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "AlphabetSpec":
        return cls(
            letters=frozenset(d.get("letters", "".join(sorted(SPANISH_LETTERS)))),
            include_digits=bool(d.get("include_digits", False)),
            case_sensitive=bool(d.get("case_sensitive", False)),
            include_space_punct=bool(d.get("include_space_punct", False)),
        )


_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}
_CONFIG_KEYS = ("case_sensitive", "include_digits", "include_space_punct")


def load_alphabet_config(path) -> AlphabetSpec:
    """Read ``key = value`` lines (``#`` comments allowed) into an AlphabetSpec."""
    values = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            key, sep, value = line.partition(":")
        key, value = key.strip(), value.strip().lower()
        if not sep or key not in _CONFIG_KEYS:
            raise InvalidAlphabetError(f"{path}:{lineno}: unknown setting {line!r}")
        if value in _TRUE:
            values[key] = True
        elif value in _FALSE:
            values[key] = False
        else:
            raise InvalidAlphabetError(f"{path}:{lineno}: expected a boolean, got {value!r}")
    return AlphabetSpec(**values)


def f0(spec) -> float:
    """Zero-order entropy bound: log2 of the alphabet size, in bits per symbol.

    ``spec`` is an AlphabetSpec or a plain symbol count.
    """
    size = spec if isinstance(spec, int) else spec.symbol_count()
    if size < 2:
        raise InvalidAlphabetError(f"alphabet needs at least 2 symbols, has {size}")
    return math.log2(size)


# [^\W_] is exactly str.isalnum(): letters and digits of any script
_WORD = re.compile(r"[^\W_]+")
_NON_WORD = re.compile(r"[\W_]+")


def is_word_char(ch: str) -> bool:
    return ch.isalnum()


@dataclass(frozen=True)
class SymbolStreams:
    char_stream: str
    alnum_stream: str
    word_stream: tuple


def decode_text(raw) -> str:
    if isinstance(raw, str):
        return raw
    try:
        return bytes(raw).decode("utf-8")
    except UnicodeDecodeError as exc:
        raise CorpusDecodeError(exc.start, exc.reason) from None


def clean_text(text: str) -> str:
    """NFC-compose, drop control/format characters and collapse whitespace."""
    text = unicodedata.normalize("NFC", text)
    # whitespace controls (\n, \t, \x1f...) are kept here and collapsed below
    text = "".join(
        ch for ch in text
        if ch.isspace() or unicodedata.category(ch) not in ("Cc", "Cf")
    )
    return _WHITESPACE_RUN.sub(" ", text).strip(" ")


def tokenize(text: str, case_sensitive: bool = False) -> list:
    """Words are maximal alphanumeric runs; hyphens and apostrophes split them."""
    words = _WORD.findall(text)
    if not case_sensitive:
        words = [w.lower() for w in words]
    return words


def normalize(raw_text, spec: AlphabetSpec | None = None) -> SymbolStreams:
    """Decode and normalize raw text into char, alphanumeric and word streams.

    ``raw_text`` may be bytes (decoded as strict UTF-8) or an already decoded
    string. Raises :class:`EmptyCorpusError` when nothing is left after
    normalization.
    """
    spec = spec or AlphabetSpec()
    char_stream = clean_text(decode_text(raw_text))
    if not char_stream:
        raise EmptyCorpusError("corpus is empty after normalization")
    alnum_stream = _NON_WORD.sub("", char_stream)
    words = tokenize(char_stream, spec.case_sensitive)
    return SymbolStreams(char_stream, alnum_stream, tuple(words))


def read_streams(path, spec: AlphabetSpec | None = None) -> SymbolStreams:
    with open(path, "rb") as fh:
        data = fh.read()
    return normalize(data, spec)
