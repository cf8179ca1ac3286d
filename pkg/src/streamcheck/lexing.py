"""Tokenizer shared by the expression grammar and the model DSL."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import Diagnostic

IDENT = "IDENT"
INT = "INT"
REAL = "REAL"
PUNCT = "PUNCT"
EOF = "EOF"

_TWO_CHAR = ("->", ":=", "..", "==", "!=", "<=", ">=", "//")
_ONE_CHAR = "{}()[],:;.<>+-*/=!"


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    line: int
    column: int

    def __repr__(self) -> str:
        return f"Token({self.kind}, {self.value!r}, {self.line}:{self.column})"


def tokenize(text: str) -> tuple[list[Token], list[Diagnostic]]:
    """Lex arbitrary text; unknown bytes become diagnostics, never exceptions."""
    tokens: list[Token] = []
    diagnostics: list[Diagnostic] = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if text.startswith("//", i):
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token(IDENT, text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            # a '..' range operator must not be eaten as a decimal point
            if j < n and text[j] == "." and not text.startswith("..", j) and j + 1 < n and text[j + 1].isdigit():
                j += 1
                while j < n and text[j].isdigit():
                    j += 1
                if j < n and text[j] in "eE":
                    k = j + 1
                    if k < n and text[k] in "+-":
                        k += 1
                    if k < n and text[k].isdigit():
                        j = k
                        while j < n and text[j].isdigit():
                            j += 1
                tokens.append(Token(REAL, text[i:j], line, col))
            else:
                tokens.append(Token(INT, text[i:j], line, col))
            col += j - i
            i = j
            continue
        two = text[i:i + 2]
        if two in _TWO_CHAR and two != "//":
            tokens.append(Token(PUNCT, two, line, col))
            i += 2
            col += 2
            continue
        if ch in _ONE_CHAR:
            tokens.append(Token(PUNCT, ch, line, col))
            i += 1
            col += 1
            continue
        diagnostics.append(Diagnostic(line, col, f"unexpected character {ch!r}"))
        i += 1
        col += 1
    tokens.append(Token(EOF, "", line, col))
    return tokens, diagnostics


class Cursor:
    """A peek/advance view over a token list, for recursive-descent parsing."""

    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self, ahead: int = 0) -> Token:
        i = min(self.pos + ahead, len(self.tokens) - 1)
        return self.tokens[i]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != EOF:
            self.pos += 1
        return tok

    def at_punct(self, value: str) -> bool:
        t = self.peek()
        return t.kind == PUNCT and t.value == value

    def at_word(self, value: str) -> bool:
        t = self.peek()
        return t.kind == IDENT and t.value == value

    def take_punct(self, value: str) -> bool:
        if self.at_punct(value):
            self.advance()
            return True
        return False

    def take_word(self, value: str) -> bool:
        if self.at_word(value):
            self.advance()
            return True
        return False
