"""Token kinds and the token data structure for the Object-Z dialect."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum, auto

from .diagnostics import SourceSpan


class TokenKind(Enum):
    IDENT = auto()          # plain or decorated identifier (amount?, bal!, balance')
    TYPENAME = auto()       # NAT | INT | BOOL
    KEYWORD = auto()        # class visibility const axiom state secondary where init op delta end
    OPWORD = auto()         # in div mod and or not implies
    INT = auto()            # unsigned integer literal

    COLON = auto()          # :
    COMMA = auto()          # ,
    DOT = auto()            # .
    LPAREN = auto()         # (
    RPAREN = auto()         # )
    LBRACKET = auto()       # [
    RBRACKET = auto()       # ]
    LBRACE = auto()         # {
    RBRACE = auto()         # }

    EQ = auto()             # =
    NE = auto()             # !=
    LT = auto()             # <
    LE = auto()             # <=
    GT = auto()             # >
    GE = auto()             # >=
    PLUS = auto()           # +
    MINUS = auto()          # -
    STAR = auto()           # *

    BOX = auto()            # []  (nondeterministic choice)
    SEMI = auto()           # ;
    PARALLEL = auto()       # ||
    AMP = auto()            # &

    NEWLINE = auto()        # physical line break
    ERROR = auto()          # unknown character, surfaced for the parser to diagnose


class Decoration(Enum):
    NONE = auto()
    PRIMED = auto()         # balance'
    INPUT = auto()          # amount?
    OUTPUT = auto()         # bal!


KEYWORDS = frozenset(
    {"class", "visibility", "const", "axiom", "state", "secondary", "where", "init", "op", "delta", "end"}
)
OPWORDS = frozenset({"in", "div", "mod", "and", "or", "not", "implies"})
TYPENAMES = frozenset({"NAT", "INT", "BOOL"})


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    lexeme: str
    span: SourceSpan
    decoration: Decoration = Decoration.NONE
    # Byte offsets into the source, used by trivia-reconstruction checks.
    offset: int = field(default=0, compare=False)
    end_offset: int = field(default=0, compare=False)

    @property
    def base_name(self) -> str:
        """Identifier text with any ?/!/' decoration stripped."""
        if self.decoration is Decoration.NONE:
            return self.lexeme
        return self.lexeme[:-1]

    def is_keyword(self, word: str) -> bool:
        return self.kind is TokenKind.KEYWORD and self.lexeme == word

    def is_opword(self, word: str) -> bool:
        return self.kind is TokenKind.OPWORD and self.lexeme == word
