"""Error classes. The CLI reports ``type(err).__name__`` as the machine-readable class."""

from __future__ import annotations


class SoftPiError(Exception):
    """Base class for every error raised by this package."""


class ParseError(SoftPiError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col


class TypingError(SoftPiError):
    """A typing rule rejected a proof term; ``rule`` and ``channel`` locate the failure."""

    def __init__(self, message: str, rule: str | None = None, channel: str | None = None):
        where = ""
        if rule is not None:
            where = f" [rule {rule}" + (f", channel {channel}" if channel is not None else "") + "]"
        super().__init__(message + where)
        self.rule = rule
        self.channel = channel


class NameClash(TypingError):
    pass


class ContextMismatch(TypingError):
    pass


class TypeMismatch(TypingError):
    pass


class MultiplexorRequired(TypingError):
    pass


class AuxiliaryNonlinear(TypingError):
    pass


class DeclaredMismatch(TypingError):
    pass


class NotTypable(SoftPiError):
    pass


class RedexNotFound(SoftPiError):
    pass


class SearchExhausted(SoftPiError):
    pass


class Unterminated(SoftPiError):
    pass


class CorpusError(SoftPiError):
    pass
