"""Exception hierarchy shared by every analysis module."""


def _restore(cls, args, state):
    exc = cls.__new__(cls)
    exc.args = args
    exc.__dict__.update(state)
    return exc


class TextEntropyError(Exception):
    """Base class for all errors raised by textentropy."""

    # subclasses take structured constructor arguments; pickle by state so
    # errors survive the trip back from worker processes
    def __reduce__(self):
        return _restore, (self.__class__, self.args, self.__dict__)


class CorpusDecodeError(TextEntropyError, ValueError):
    def __init__(self, offset, reason=""):
        self.offset = offset
        msg = f"invalid UTF-8 at byte offset {offset}"
        if reason:
            msg += f" ({reason})"
        super().__init__(msg)


class EmptyCorpusError(TextEntropyError, ValueError):
    pass


class InvalidAlphabetError(TextEntropyError, ValueError):
    pass


class InsufficientDataError(TextEntropyError, ValueError):
    def __init__(self, n, available, unit="symbols"):
        self.n = n
        self.available = available
        super().__init__(
            f"need at least n={n} {unit} for a block of size {n}, got {available}"
        )


class MismatchError(TextEntropyError, ValueError):
    pass


class MissingOrderError(TextEntropyError, ValueError):
    pass


class DomainError(TextEntropyError, ValueError):
    pass


class RankRangeError(TextEntropyError, ValueError):
    pass


class UndefinedSlopeError(TextEntropyError, ValueError):
    pass


class LexiconParseError(TextEntropyError, ValueError):
    def __init__(self, line, message):
        self.line = line
        super().__init__(f"line {line}: {message}")


class LexiconValidationError(TextEntropyError, ValueError):
    pass


class WriteError(TextEntropyError, OSError):
    def __init__(self, path, reason):
        self.path = path
        super().__init__(f"cannot write {path!r}: {reason}")


class InvariantViolation(TextEntropyError, AssertionError):
    """An internal consistency check failed; indicates a bug, not bad input."""
