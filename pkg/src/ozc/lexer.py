"""Tokenizer for the textual Object-Z dialect.

Lexing never fails: characters that fit no token become ERROR tokens and
are left for the parser to diagnose. Whitespace (except newlines) and
`--` comments are skipped, but token offsets are exact, so the input can
be reconstructed from lexemes plus the skipped gaps.
"""

from __future__ import annotations

from .diagnostics import SourceSpan
from .tokens import KEYWORDS, OPWORDS, TYPENAMES, Decoration, Token, TokenKind

_PUNCT = {
    ":": TokenKind.COLON,
    ",": TokenKind.COMMA,
    ".": TokenKind.DOT,
    "(": TokenKind.LPAREN,
    ")": TokenKind.RPAREN,
    "{": TokenKind.LBRACE,
    "}": TokenKind.RBRACE,
    "+": TokenKind.PLUS,
    "-": TokenKind.MINUS,
    "*": TokenKind.STAR,
    ";": TokenKind.SEMI,
    "&": TokenKind.AMP,
}


def _is_ident_start(ch: str) -> bool:
    return ch.isalpha() or ch == "_"


def _is_ident_char(ch: str) -> bool:
    return ch.isalnum() or ch == "_"


class _Scanner:
    def __init__(self, text: str, file: str) -> None:
        self.text = text
        self.file = file
        self.pos = 0
        self.line = 1
        self.col = 1

    def at_end(self) -> bool:
        return self.pos >= len(self.text)

    def peek(self, ahead: int = 0) -> str:
        i = self.pos + ahead
        return self.text[i] if i < len(self.text) else ""

    def advance(self) -> str:
        ch = self.text[self.pos]
        self.pos += 1
        if ch == "\n":
            self.line += 1
            self.col = 1
        else:
            self.col += 1
        return ch

    def span_from(self, start_line: int, start_col: int, end_line: int, end_col: int) -> SourceSpan:
        return SourceSpan(self.file, start_line, start_col, end_line, end_col)


def tokenize(text: str, file: str = "<input>") -> list[Token]:
    """Tokenize dialect source into a flat token list (no EOF sentinel)."""
    sc = _Scanner(text, file)
    tokens: list[Token] = []

    def emit(kind: TokenKind, start: tuple[int, int, int], decoration: Decoration = Decoration.NONE) -> None:
        start_off, start_line, start_col = start
        lexeme = text[start_off : sc.pos]
        # End column is inclusive; a 1-char token starting at col 5 ends at col 5.
        if kind is TokenKind.NEWLINE:
            end_line, end_col = start_line, start_col
        else:
            end_line, end_col = sc.line, max(sc.col - 1, 1)
        tokens.append(
            Token(
                kind,
                lexeme,
                sc.span_from(start_line, start_col, end_line, end_col),
                decoration,
                offset=start_off,
                end_offset=sc.pos,
            )
        )

    while not sc.at_end():
        ch = sc.peek()

        if ch == "\n":
            start = (sc.pos, sc.line, sc.col)
            sc.advance()
            emit(TokenKind.NEWLINE, start)
            continue
        if ch in " \t\r":
            sc.advance()
            continue
        if ch == "-" and sc.peek(1) == "-":
            while not sc.at_end() and sc.peek() != "\n":
                sc.advance()
            continue

        start = (sc.pos, sc.line, sc.col)

        if _is_ident_start(ch):
            while not sc.at_end() and _is_ident_char(sc.peek()):
                sc.advance()
            decoration = Decoration.NONE
            if sc.peek() == "'":
                sc.advance()
                decoration = Decoration.PRIMED
            elif sc.peek() == "?":
                sc.advance()
                decoration = Decoration.INPUT
            elif sc.peek() == "!" and sc.peek(1) != "=":
                # `bal!` is an output-decorated name; `bal!=x` lexes as `bal != x`.
                sc.advance()
                decoration = Decoration.OUTPUT
            word = text[start[0] : sc.pos]
            base = word if decoration is Decoration.NONE else word[:-1]
            if decoration is Decoration.NONE and base in KEYWORDS:
                emit(TokenKind.KEYWORD, start)
            elif decoration is Decoration.NONE and base in OPWORDS:
                emit(TokenKind.OPWORD, start)
            elif decoration is Decoration.NONE and base in TYPENAMES:
                emit(TokenKind.TYPENAME, start)
            else:
                emit(TokenKind.IDENT, start, decoration)
            continue

        if ch.isdigit():
            while not sc.at_end() and sc.peek().isdigit():
                sc.advance()
            emit(TokenKind.INT, start)
            continue

        if ch == "[":
            sc.advance()
            if sc.peek() == "]":
                sc.advance()
                emit(TokenKind.BOX, start)
            else:
                emit(TokenKind.LBRACKET, start)
            continue
        if ch == "]":
            sc.advance()
            emit(TokenKind.RBRACKET, start)
            continue
        if ch == "|":
            sc.advance()
            if sc.peek() == "|":
                sc.advance()
                emit(TokenKind.PARALLEL, start)
            else:
                emit(TokenKind.ERROR, start)
            continue
        if ch == "=":
            sc.advance()
            emit(TokenKind.EQ, start)
            continue
        if ch == "!":
            sc.advance()
            if sc.peek() == "=":
                sc.advance()
                emit(TokenKind.NE, start)
            else:
                emit(TokenKind.ERROR, start)
            continue
        if ch == "<":
            sc.advance()
            if sc.peek() == "=":
                sc.advance()
                emit(TokenKind.LE, start)
            else:
                emit(TokenKind.LT, start)
            continue
        if ch == ">":
            sc.advance()
            if sc.peek() == "=":
                sc.advance()
                emit(TokenKind.GE, start)
            else:
                emit(TokenKind.GT, start)
            continue
        if ch in _PUNCT:
            sc.advance()
            emit(_PUNCT[ch], start)
            continue

        sc.advance()
        emit(TokenKind.ERROR, start)

    return tokens
