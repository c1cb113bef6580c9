"""Tiny regex lexer and token cursor shared by the text parsers."""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def strip_comments(text: str) -> str:
    """Blank out lines whose first non-space character is '#', keeping line numbers."""
    return "\n".join("" if ln.lstrip().startswith("#") else ln for ln in text.split("\n"))


def tokenize(text: str, spec: list[tuple[str, str]]) -> list[Token]:
    """Split ``text`` into tokens; ``spec`` lists (kind, regex) in priority order."""
    pattern = re.compile("|".join(f"(?P<{kind}>{rx})" for kind, rx in spec))
    text = strip_comments(text)
    tokens: list[Token] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        ch = text[pos]
        if ch == "\n":
            line += 1
            line_start = pos + 1
            pos += 1
            continue
        if ch.isspace():
            pos += 1
            continue
        m = pattern.match(text, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"unexpected character {ch!r}", line, pos - line_start + 1)
        tokens.append(Token(m.lastgroup, m.group(), line, pos - line_start + 1))
        pos = m.end()
    tokens.append(Token("EOF", "", line, pos - line_start + 1))
    return tokens


class Cursor:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.i = 0

    def peek(self, offset: int = 0) -> Token:
        return self.tokens[min(self.i + offset, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.peek()
        self.i += 1
        return tok

    def at(self, text: str, offset: int = 0) -> bool:
        tok = self.peek(offset)
        return tok.text == text and tok.kind != "EOF"

    def error(self, message: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.peek()
        found = "end of input" if tok.kind == "EOF" else repr(tok.text)
        return ParseError(f"{message}, found {found}", tok.line, tok.col)

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self.error(f"expected {text!r}")
        return self.next()

    def expect_kind(self, kind: str, what: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise self.error(f"expected {what}")
        return self.next()

    def expect_end(self) -> None:
        if self.peek().kind != "EOF":
            raise self.error("expected end of input")
