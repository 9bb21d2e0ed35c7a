"""Tokenizer for MWO text.

Tokens are produced lazily so the parser reports the first problem in
source order, whether it is lexical or grammatical.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple

IDENT = "identifier"
STRING = "string"
INT = "integer"
PUNCT = "punctuation"
EOF = "end of input"

PUNCTUATION = frozenset(";,{}=|")
_ESCAPES = {'"': '"', "\\": "\\", "n": "\n"}


class SourcePosition(NamedTuple):
    """1-based line and column; columns count Unicode code points."""

    line: int
    column: int

    def __str__(self):
        return f"{self.line}:{self.column}"


class ParseError(Exception):
    def __init__(self, position: SourcePosition, expected: str, found: str):
        self.position = position
        self.expected = expected
        self.found = found
        super().__init__(f"{position}: expected {expected}, found {found}")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str  # raw source text
    value: object
    position: SourcePosition

    def describe(self) -> str:
        return EOF if self.kind == EOF else repr(self.text)


def _is_ident_start(ch: str) -> bool:
    return ch == "_" or ("a" <= ch <= "z") or ("A" <= ch <= "Z")


def _is_ident_char(ch: str) -> bool:
    return _is_ident_start(ch) or ch.isascii() and ch.isdigit() or ch == "-"


def tokenize(text: str) -> Iterator[Token]:
    """Yield tokens, ending with a single EOF token.

    ``\\r\\n`` counts as one line break. Raises ParseError on malformed input.
    """
    i = 0
    n = len(text)
    line, col = 1, 1

    while True:
        # whitespace and comments
        while i < n:
            ch = text[i]
            if ch == "\n":
                i += 1
                line, col = line + 1, 1
            elif ch == "\r" and i + 1 < n and text[i + 1] == "\n":
                i += 2
                line, col = line + 1, 1
            elif ch in " \t\r":
                i += 1
                col += 1
            elif ch == "#":
                while i < n and text[i] not in "\r\n":
                    i += 1
                    col += 1
                if i < n and text[i] == "\r" and not (i + 1 < n and text[i + 1] == "\n"):
                    i += 1
                    col += 1
            else:
                break

        pos = SourcePosition(line, col)
        if i >= n:
            yield Token(EOF, "", None, pos)
            return

        ch = text[i]
        start = i
        if ch in PUNCTUATION:
            i += 1
            yield Token(PUNCT, ch, ch, pos)
        elif _is_ident_start(ch):
            while i < n and _is_ident_char(text[i]):
                i += 1
            word = text[start:i]
            yield Token(IDENT, word, word, pos)
        elif ch.isascii() and ch.isdigit() or (
            ch == "-" and i + 1 < n and text[i + 1].isascii() and text[i + 1].isdigit()
        ):
            i += 1
            while i < n and text[i].isascii() and text[i].isdigit():
                i += 1
            if i < n and _is_ident_char(text[i]):
                raise ParseError(pos, "integer", repr(text[start : i + 1]))
            word = text[start:i]
            yield Token(INT, word, int(word), pos)
        elif ch == '"':
            i += 1
            chars = []
            while True:
                if i >= n or text[i] == "\n" or text[i:i + 2] == "\r\n":
                    raise ParseError(pos, "closing '\"'", "unterminated string")
                c = text[i]
                if c == '"':
                    i += 1
                    break
                if c == "\\":
                    esc = text[i + 1] if i + 1 < n else ""
                    if esc not in _ESCAPES:
                        bad = SourcePosition(line, col + (i - start))
                        raise ParseError(bad, "escape \\\" \\\\ or \\n", repr("\\" + esc))
                    chars.append(_ESCAPES[esc])
                    i += 2
                else:
                    chars.append(c)
                    i += 1
            yield Token(STRING, text[start:i], "".join(chars), pos)
        else:
            raise ParseError(pos, "a token", repr(ch))
        col += i - start


def quote(s: str) -> str:
    """Render ``s`` as an MWO string literal."""
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'
