"""Tokenizer for ``.btc`` source text.

Comments run from ``--`` to end of line. Keywords are reserved and never
lex as identifiers.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..diagnostics import Pos

KEYWORDS = frozenset(
    ["class", "instance", "data", "primitive", "let", "in", "forall", "where"]
)

# token kinds
LOWER = "lower"
UPPER = "upper"
KEYWORD = "keyword"
PUNCT = "punct"
EOF = "eof"

PUNCTUATION = ["::", "=>", "->", "(", ")", "{", "}", ",", ".", "=", "\\", ";"]


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: Pos


class LexError(Exception):
    def __init__(self, message: str, pos: Pos):
        super().__init__(message)
        self.message = message
        self.pos = pos


def _is_ident_start(ch: str) -> bool:
    return ch.isalpha() or ch == "_"


def _is_ident_char(ch: str) -> bool:
    return ch.isalnum() or ch in ("_", "'")


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in (" ", "\t", "\r"):
            i += 1
            col += 1
            continue
        if text.startswith("--", i):
            while i < n and text[i] != "\n":
                i += 1
            continue
        pos = Pos(line, col)
        if _is_ident_start(ch):
            j = i
            while j < n and _is_ident_char(text[j]):
                j += 1
            word = text[i:j]
            if word in KEYWORDS:
                tokens.append(Token(KEYWORD, word, pos))
            elif word[0].isupper():
                tokens.append(Token(UPPER, word, pos))
            else:
                tokens.append(Token(LOWER, word, pos))
            col += j - i
            i = j
            continue
        for punct in PUNCTUATION:
            if text.startswith(punct, i):
                tokens.append(Token(PUNCT, punct, pos))
                i += len(punct)
                col += len(punct)
                break
        else:
            raise LexError(f"unexpected character {ch!r}", pos)
    tokens.append(Token(EOF, "", Pos(line, col)))
    return tokens
