"""Syntax core: lexer, parser, tree model, token bags, nesting profiles."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from ..errors import ParseError
from .nodes import (EXPRESSION_KINDS, STATEMENT_KINDS, Node, line_count,
                    node_lines, serialize_tokens)
from .parser import parse, parse_statements
from .tokens import (KEYWORDS, PRIMITIVE_TYPES, Token, abstract_token,
                     tokenize)

__all__ = [
    "parse", "parse_statements", "tokenize", "abstract_token",
    "Node", "Token", "SourceFile", "Fragment", "TokenBag",
    "token_bag", "nesting_profile", "method_statements",
    "STATEMENT_KINDS", "EXPRESSION_KINDS", "KEYWORDS", "PRIMITIVE_TYPES",
    "node_lines", "line_count", "serialize_tokens", "ParseError",
]


@dataclass(frozen=True)
class SourceFile:
    path: str
    content: str
    tree: Node

    @classmethod
    def from_text(cls, content: str, path: str = "<memory>") -> "SourceFile":
        return cls(path=path, content=content, tree=parse(content))

    def methods(self):
        for cls_node in self.tree.attrs["classes"]:
            for m in cls_node.attrs["methods"]:
                yield cls_node, m

    def serialize(self) -> str:
        toks = self.tree.tokens()
        eof = toks[-1]
        return serialize_tokens(toks[:-1], trailing=eof.leading)


@dataclass(frozen=True)
class Fragment:
    """A contiguous run of sibling statements inside one method body block."""
    file: SourceFile
    statements: tuple
    enclosing_method: Node

    def __post_init__(self):
        if not self.statements:
            raise ValueError("fragment must contain at least one statement")

    @property
    def span(self):
        return (self.statements[0].start, self.statements[-1].end)

    @property
    def text(self):
        s, e = self.span
        return self.file.content[s:e]

    def lines(self):
        """1-based inclusive (startLine, endLine) of the fragment."""
        first = node_lines(self.statements[0], self.file.content)
        last = node_lines(self.statements[-1], self.file.content)
        return (first.start, last.stop - 1)


@dataclass(frozen=True)
class TokenBag:
    entries: tuple  # sorted (token, multiplicity) pairs
    size: int

    @classmethod
    def from_counter(cls, counts: Counter) -> "TokenBag":
        return cls(entries=tuple(sorted(counts.items())),
                   size=sum(counts.values()))

    def counter(self) -> Counter:
        return Counter(dict(self.entries))

    def intersection_size(self, other: "TokenBag") -> int:
        a, b = self.counter(), other.counter()
        return sum(min(n, b[t]) for t, n in a.items())


def token_bag(nodes) -> TokenBag:
    """Abstracted token multiset of one node or a list of nodes."""
    if isinstance(nodes, Node):
        nodes = [nodes]
    counts = Counter()
    for node in nodes:
        for tok in node.tokens():
            counts[abstract_token(tok)] += 1
    return TokenBag.from_counter(counts)


def method_statements(method: Node):
    """All statement nodes of a method body, preorder, nested included."""
    return method.attrs["body"].statements()


def nesting_profile(method: Node, content: str):
    """(depth, line_count) per statement of the method, preorder."""
    return [(s.depth, line_count(s, content))
            for s in method_statements(method)]
