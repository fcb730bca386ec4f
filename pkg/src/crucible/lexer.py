"""Tokenizer for the Alloy-subset grammar."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ModelSyntaxError
from .source import Span

IDENT = "ident"
NUMBER = "number"
SYM = "sym"
EOF = "eof"

KEYWORDS = frozenset(
    {
        "sig", "abstract", "extends", "in", "pred", "fact", "assert",
        "run", "check", "for", "but", "one", "lone", "some", "no", "all",
        "set", "disj", "univ", "iden", "none", "and", "or", "not",
        "implies", "iff", "else", "let", "fun", "open", "module", "enum",
        "Int", "seq", "sum", "expect", "exactly",
    }
)

# Multi-character symbols first so maximal munch wins.
_SYMBOLS = [
    "<=>", "=>", "||", "&&", "++", "<:", ":>", "->", "!=",
    "{", "}", "(", ")", "[", "]", ":", ",", ".", "+", "-", "&",
    "=", "!", "~", "^", "*", "|", "#", "@", "<", ">",
]


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int

    @property
    def span(self) -> Span:
        return Span(self.line, self.column, len(self.text))


def tokenize(text: str) -> list[Token]:
    """Lex the whole input, raising ModelSyntaxError on stray characters."""
    tokens: list[Token] = []
    i = 0
    line = 1
    col = 1
    n = len(text)

    def bump(count: int) -> None:
        nonlocal i, line, col
        for _ in range(count):
            if i < n and text[i] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1

    while i < n:
        ch = text[i]
        if ch in " \t\r\n":
            bump(1)
            continue
        if text.startswith("//", i) or text.startswith("--", i):
            while i < n and text[i] != "\n":
                bump(1)
            continue
        if text.startswith("/*", i):
            start = Span(line, col, 2)
            bump(2)
            while i < n and not text.startswith("*/", i):
                bump(1)
            if i >= n:
                raise ModelSyntaxError(start, "unterminated block comment")
            bump(2)
            continue
        if ch.isalpha() or ch == "_":
            start_line, start_col = line, col
            j = i
            while j < n and (text[j].isalnum() or text[j] in "_'"):
                j += 1
            word = text[i:j]
            bump(j - i)
            tokens.append(Token(IDENT, word, start_line, start_col))
            continue
        if ch.isdigit():
            start_line, start_col = line, col
            j = i
            while j < n and text[j].isdigit():
                j += 1
            word = text[i:j]
            bump(j - i)
            tokens.append(Token(NUMBER, word, start_line, start_col))
            continue
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                tokens.append(Token(SYM, sym, line, col))
                bump(len(sym))
                break
        else:
            raise ModelSyntaxError(
                Span(line, col, 1), f"unexpected character {ch!r}"
            )
    tokens.append(Token(EOF, "", line, col))
    return tokens
