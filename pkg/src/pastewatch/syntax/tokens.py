"""Token model and lexer for the Java-subset grammar.

Whitespace and comments are attached to the following token as leading
trivia so the token stream round-trips the source byte-for-byte.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import ParseError

KEYWORDS = frozenset({
    "class", "if", "else", "for", "while", "do", "switch", "case", "default",
    "break", "continue", "return", "try", "catch", "finally", "throw", "new",
    "this", "super", "static", "final", "void", "int", "long", "double",
    "float", "boolean", "char", "byte", "short", "instanceof", "synchronized",
    "assert", "public", "private", "protected", "true", "false", "null",
})

PRIMITIVE_TYPES = frozenset({
    "int", "long", "double", "float", "boolean", "char", "byte", "short",
})

# Longest-match first.
OPERATORS = [
    "<<=", ">>=",
    "==", "!=", "<=", ">=", "&&", "||", "++", "--",
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<", ">>",
    "+", "-", "*", "/", "%", "=", "<", ">", "!", "&", "|", "^", "~",
    "?", ":", ".", ",", ";", "(", ")", "{", "}", "[", "]",
]

KW = "kw"
IDENT = "ident"
NUMBER = "number"
STRING = "string"
CHARLIT = "charlit"
OP = "op"
EOF = "eof"


@dataclass
class Token:
    kind: str
    text: str
    start: int  # byte offset of text (trivia excluded)
    end: int
    leading: str = ""  # whitespace/comments preceding this token
    line: int = 1  # 1-based line of token start

    def __repr__(self):
        return f"Token({self.kind}, {self.text!r}@{self.start})"


def tokenize(source: str) -> list[Token]:
    """Lex source into tokens ending with an EOF token that carries any
    trailing trivia. Raises ParseError on unknown characters or unterminated
    literals/comments."""
    tokens: list[Token] = []
    i = 0
    n = len(source)
    line = 1
    while True:
        trivia_start = i
        while i < n:
            c = source[i]
            if c in " \t\r\n":
                if c == "\n":
                    line += 1
                i += 1
            elif source.startswith("//", i):
                j = source.find("\n", i)
                i = n if j < 0 else j
            elif source.startswith("/*", i):
                j = source.find("*/", i + 2)
                if j < 0:
                    raise ParseError("unterminated block comment", i)
                line += source.count("\n", i, j + 2)
                i = j + 2
            else:
                break
        leading = source[trivia_start:i]
        if i >= n:
            tokens.append(Token(EOF, "", i, i, leading, line))
            return tokens
        start = i
        c = source[i]
        if c.isalpha() or c == "_" or c == "$":
            while i < n and (source[i].isalnum() or source[i] in "_$"):
                i += 1
            text = source[start:i]
            kind = KW if text in KEYWORDS else IDENT
            tokens.append(Token(kind, text, start, i, leading, line))
        elif c.isdigit() or (c == "." and i + 1 < n and source[i + 1].isdigit()):
            while i < n and (source[i].isalnum() or source[i] in "._"):
                i += 1
            tokens.append(Token(NUMBER, source[start:i], start, i, leading, line))
        elif c == '"':
            i += 1
            while i < n and source[i] != '"':
                if source[i] == "\\":
                    i += 1
                if i < n and source[i] == "\n":
                    raise ParseError("unterminated string literal", start)
                i += 1
            if i >= n:
                raise ParseError("unterminated string literal", start)
            i += 1
            tokens.append(Token(STRING, source[start:i], start, i, leading, line))
        elif c == "'":
            i += 1
            while i < n and source[i] != "'":
                if source[i] == "\\":
                    i += 1
                i += 1
            if i >= n:
                raise ParseError("unterminated char literal", start)
            i += 1
            tokens.append(Token(CHARLIT, source[start:i], start, i, leading, line))
        else:
            for op in OPERATORS:
                if source.startswith(op, i):
                    i += len(op)
                    tokens.append(Token(OP, op, start, i, leading, line))
                    break
            else:
                raise ParseError(f"unexpected character {c!r}", i)


def abstract_token(tok: Token) -> str:
    """Clone-detection abstraction: identifiers collapse to ID, literals to
    LIT, everything else keeps its text."""
    if tok.kind == IDENT:
        return "ID"
    if tok.kind in (NUMBER, STRING, CHARLIT):
        return "LIT"
    return tok.text
